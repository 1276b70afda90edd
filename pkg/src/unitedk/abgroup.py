"""Finitely generated abelian groups in invariant-factor form.

A group is a tuple of orders ``d_1 | d_2 | ... | 0 ... 0`` where ``0`` stands
for an infinite cyclic summand.  Elements are integer coordinate vectors
relative to the canonical generators, reduced modulo the orders.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from math import prod
from typing import Iterator, Sequence

from .exactalg import IntMatrix, kernel_lattice, smith_normal_form, solve_integer


class HomomorphismError(ValueError):
    """A matrix does not define a homomorphism between the given groups."""


class GroupMismatchError(ValueError):
    """Groups that must agree (domain/codomain, ambient) do not."""


def _reduce(v: Sequence[int], orders: Sequence[int]) -> tuple[int, ...]:
    return tuple(x % d if d else x for x, d in zip(v, orders))


@dataclass(frozen=True)
class PresentedGroup:
    orders: tuple[int, ...] = ()

    def __post_init__(self):
        finite = [d for d in self.orders if d]
        if any(d < 2 for d in finite) or any(d < 0 for d in self.orders):
            raise ValueError(f"not in canonical form: {list(self.orders)}")
        if self.orders[len(finite):] != (0,) * (len(self.orders) - len(finite)):
            raise ValueError(f"free summands must come last: {list(self.orders)}")
        if any(b % a for a, b in zip(finite, finite[1:])):
            raise ValueError(f"orders do not form a divisibility chain: {list(self.orders)}")

    @property
    def ngens(self) -> int:
        return len(self.orders)

    @property
    def rank(self) -> int:
        return sum(1 for d in self.orders if d == 0)

    def is_finite(self) -> bool:
        return 0 not in self.orders

    def is_trivial(self) -> bool:
        return not self.orders

    def order(self) -> int | None:
        return prod(self.orders) if self.is_finite() else None

    def relation_matrix(self) -> IntMatrix:
        """Columns ``d_i e_i`` for the finite generators."""
        fin = [i for i, d in enumerate(self.orders) if d]
        return IntMatrix([[self.orders[j] if i == j else 0 for j in fin]
                          for i in range(self.ngens)], self.ngens, len(fin))

    def reduce(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.ngens:
            raise ValueError(f"element of length {len(v)} in a group with {self.ngens} generators")
        return _reduce(v, self.orders)

    def zero(self) -> tuple[int, ...]:
        return (0,) * self.ngens

    def generator(self, i: int) -> tuple[int, ...]:
        return tuple(int(i == j) for j in range(self.ngens))

    def __str__(self) -> str:
        if not self.orders:
            return "0"
        parts = []
        for d, grp in itertools.groupby(self.orders):
            n = len(list(grp))
            name = f"Z{d}" if d else "Z"
            parts.append(name if n == 1 else f"{name}^{n}")
        return " + ".join(parts)


TRIVIAL = PresentedGroup(())


@dataclass(frozen=True)
class CokernelPresentation:
    """``Z^k / R Z^r`` identified with a canonical group.

    ``to_canonical`` maps old coordinates to new ones; ``from_canonical`` maps
    new generators back to old coordinates.
    """

    group: PresentedGroup
    to_canonical: IntMatrix
    from_canonical: IntMatrix


def present_cokernel(relations: IntMatrix) -> CokernelPresentation:
    k = relations.rows
    snf = smith_normal_form(relations)
    diag = [snf.D[i, i] if i < relations.cols else 0 for i in range(k)]
    kept = [i for i, d in enumerate(diag) if d != 1]
    group = PresentedGroup(tuple(diag[i] for i in kept))
    return CokernelPresentation(group, snf.U.select_rows(kept),
                                snf.U.inverse().select_columns(kept))


def canonicalize(orders: Sequence[int]) -> PresentedGroup:
    """Invariant-factor form of ``Z_{d_1} + ... + Z_{d_k}`` (``0`` means ``Z``)."""
    if any(d < 0 for d in orders):
        raise ValueError(f"negative order in {list(orders)}")
    return present_cokernel(IntMatrix.diagonal(list(orders))).group


def groups_isomorphic(G: PresentedGroup, H: PresentedGroup) -> bool:
    return G.orders == H.orders


def direct_sum_presentation(orders: Sequence[int]) -> CokernelPresentation:
    """Canonical form of a (not necessarily canonical) list of cyclic orders."""
    return present_cokernel(IntMatrix.diagonal(list(orders)))


def check_well_defined(dom_orders: Sequence[int], cod_orders: Sequence[int],
                       matrix: IntMatrix) -> None:
    if matrix.shape != (len(cod_orders), len(dom_orders)):
        raise HomomorphismError(f"matrix has shape {matrix.shape}, expected "
                                f"{(len(cod_orders), len(dom_orders))}")
    for j, d in enumerate(dom_orders):
        if d == 0:
            continue
        for i, e in enumerate(cod_orders):
            x = d * matrix[i, j]
            if (e == 0 and x != 0) or (e and x % e):
                raise HomomorphismError(
                    f"ill-defined map: generator {j} has order {d}, but {d} * {matrix[i, j]} "
                    f"is nonzero in coordinate {i} (order {e if e else 'infinite'})")


@dataclass(frozen=True)
class GroupHom:
    domain: PresentedGroup
    codomain: PresentedGroup
    matrix: IntMatrix

    def __call__(self, x: Sequence[int]) -> tuple[int, ...]:
        return self.codomain.reduce(self.matrix.apply(x))

    def is_zero(self) -> bool:
        return self.matrix.is_zero()

    def _same_ends(self, other: GroupHom) -> None:
        if (self.domain, self.codomain) != (other.domain, other.codomain):
            raise GroupMismatchError(f"cannot combine {self.domain} -> {self.codomain} "
                                     f"with {other.domain} -> {other.codomain}")

    def __add__(self, other: GroupHom) -> GroupHom:
        self._same_ends(other)
        return _hom(self.domain, self.codomain, self.matrix + other.matrix)

    def __sub__(self, other: GroupHom) -> GroupHom:
        self._same_ends(other)
        return _hom(self.domain, self.codomain, self.matrix - other.matrix)

    def __neg__(self) -> GroupHom:
        return _hom(self.domain, self.codomain, -self.matrix)

    def __rmul__(self, k: int) -> GroupHom:
        return _hom(self.domain, self.codomain, k * self.matrix)

    def __matmul__(self, other: GroupHom) -> GroupHom:
        return compose(self, other)

    def is_injective(self) -> bool:
        return all(not any(col) for col in kernel(self).generators.columns())

    def is_surjective(self) -> bool:
        return subgroup_leq(Subgroup.whole(self.codomain), image(self))

    def is_isomorphism(self) -> bool:
        return self.is_injective() and self.is_surjective()

    def inverse(self) -> GroupHom:
        """Inverse of a bijective hom."""
        if not (self.is_injective() and self.is_surjective()):
            raise HomomorphismError("hom is not invertible")
        M = IntMatrix.hstack(self.matrix, self.codomain.relation_matrix())
        m = self.domain.ngens
        cols = []
        for i in range(self.codomain.ngens):
            z = solve_integer(M, self.codomain.generator(i))
            cols.append(z[:m])
        return _hom(self.codomain, self.domain, IntMatrix.from_columns(cols, m))


def _reduce_matrix(cod: PresentedGroup, matrix: IntMatrix) -> IntMatrix:
    return IntMatrix([[x % e if e else x for x in row]
                      for row, e in zip(matrix.tolist(), cod.orders)], matrix.rows, matrix.cols)


def _hom(domain: PresentedGroup, codomain: PresentedGroup, matrix: IntMatrix) -> GroupHom:
    return GroupHom(domain, codomain, _reduce_matrix(codomain, matrix))


def make_hom(domain: PresentedGroup, codomain: PresentedGroup, matrix) -> GroupHom:
    """Validated constructor; ``matrix`` is codomain-gens x domain-gens."""
    if not isinstance(matrix, IntMatrix):
        matrix = IntMatrix(matrix, codomain.ngens, domain.ngens)
    check_well_defined(domain.orders, codomain.orders, matrix)
    return _hom(domain, codomain, matrix)


def identity_hom(G: PresentedGroup) -> GroupHom:
    return GroupHom(G, G, IntMatrix.identity(G.ngens))


def zero_hom(G: PresentedGroup, H: PresentedGroup) -> GroupHom:
    return GroupHom(G, H, IntMatrix.zeros(H.ngens, G.ngens))


def compose(g: GroupHom, f: GroupHom) -> GroupHom:
    """``g o f``."""
    if f.codomain != g.domain:
        raise GroupMismatchError(f"cannot compose: {f.codomain} is not {g.domain}")
    return _hom(f.domain, g.codomain, g.matrix @ f.matrix)


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of ``ambient`` spanned by the columns of ``generators``.

    A sequence of element vectors is accepted in place of the matrix.
    """

    ambient: PresentedGroup
    generators: IntMatrix

    def __post_init__(self):
        if not isinstance(self.generators, IntMatrix):
            object.__setattr__(self, "generators", IntMatrix.from_columns(
                [tuple(g) for g in self.generators], self.ambient.ngens))
        if self.generators.rows != self.ambient.ngens:
            raise GroupMismatchError(f"generators have {self.generators.rows} coordinates, "
                                     f"{self.ambient} has {self.ambient.ngens}")

    @classmethod
    def whole(cls, G: PresentedGroup) -> Subgroup:
        return cls(G, IntMatrix.identity(G.ngens))

    @classmethod
    def trivial(cls, G: PresentedGroup) -> Subgroup:
        return cls(G, IntMatrix.zeros(G.ngens, 0))

    def contains(self, x: Sequence[int]) -> bool:
        basis = IntMatrix.hstack(self.generators, self.ambient.relation_matrix())
        return solve_integer(basis, list(x)) is not None

    def elements(self, bound: int = 4096) -> set[tuple[int, ...]]:
        """Brute-force closure of the generators (finite ambient only)."""
        G = self.ambient
        if not G.is_finite():
            raise ValueError("cannot enumerate a subgroup of an infinite group")
        seen = {G.zero()}
        frontier = [G.zero()]
        gens = [G.reduce(c) for c in self.generators.columns()]
        while frontier:
            x = frontier.pop()
            for g in gens:
                y = G.reduce([a + b for a, b in zip(x, g)])
                if y not in seen:
                    seen.add(y)
                    if len(seen) > bound:
                        raise ValueError(f"subgroup exceeds {bound} elements")
                    frontier.append(y)
        return seen


def kernel(f: GroupHom) -> Subgroup:
    """Generators of ``{x : f(x) = 0}`` from the integer kernel of ``[F | R]``."""
    m = f.domain.ngens
    K = kernel_lattice(IntMatrix.hstack(f.matrix, f.codomain.relation_matrix()))
    cols = [f.domain.reduce(col[:m]) for col in K.columns()]
    cols = [c for c in dict.fromkeys(cols) if any(c)]
    return Subgroup(f.domain, IntMatrix.from_columns(cols, m))


def image(f: GroupHom) -> Subgroup:
    return Subgroup(f.codomain, f.matrix)


def subgroup_leq(S: Subgroup, T: Subgroup) -> bool:
    if S.ambient != T.ambient:
        raise GroupMismatchError(f"subgroups of different groups {S.ambient} and {T.ambient}")
    basis = IntMatrix.hstack(T.generators, T.ambient.relation_matrix())
    return all(solve_integer(basis, col) is not None for col in S.generators.columns())


def subgroups_equal(S: Subgroup, T: Subgroup) -> bool:
    return subgroup_leq(S, T) and subgroup_leq(T, S)


class ExactnessVerdict(enum.Enum):
    EXACT = "exact"
    NOT_EXACT = "complex-not-exact"
    NOT_A_COMPLEX = "not-a-complex"


def exact_at(f: GroupHom, g: GroupHom) -> ExactnessVerdict:
    """Exactness of ``A --f--> B --g--> C`` at ``B``."""
    if f.codomain != g.domain:
        raise GroupMismatchError(f"cannot chain: {f.codomain} is not {g.domain}")
    im_f, ker_g = image(f), kernel(g)
    if not subgroup_leq(im_f, ker_g):
        return ExactnessVerdict.NOT_A_COMPLEX
    if not subgroup_leq(ker_g, im_f):
        return ExactnessVerdict.NOT_EXACT
    return ExactnessVerdict.EXACT


@dataclass(frozen=True)
class SubgroupPresentation:
    """A subgroup presented as a canonical group with its inclusion map."""

    group: PresentedGroup
    inclusion: GroupHom
    _solve_matrix: IntMatrix
    _to_canonical: IntMatrix

    def coordinates(self, x: Sequence[int]) -> tuple[int, ...]:
        """Coordinates of an ambient element ``x`` of the subgroup."""
        z = solve_integer(self._solve_matrix, list(x))
        if z is None:
            raise ValueError(f"{tuple(x)} is not in the subgroup")
        m = self._to_canonical.cols
        return self.group.reduce(self._to_canonical.apply(z[:m]))

    def corestrict(self, f: GroupHom) -> GroupHom:
        """``f`` viewed as a hom into the subgroup (its image must lie inside)."""
        cols = [self.coordinates(c) for c in f.matrix.columns()]
        return GroupHom(f.domain, self.group,
                        IntMatrix.from_columns(cols, self.group.ngens))


def present_subgroup(S: Subgroup) -> SubgroupPresentation:
    A = S.ambient
    m = S.generators.cols
    M = IntMatrix.hstack(S.generators, A.relation_matrix())
    K = kernel_lattice(M)
    among = K.select_rows(range(m))
    coker = present_cokernel(among)
    incl = _hom(coker.group, A, S.generators @ coker.from_canonical)
    return SubgroupPresentation(coker.group, incl, M, coker.to_canonical)


def subgroup_as_group(S: Subgroup) -> PresentedGroup:
    return present_subgroup(S).group


def subgroup_order(S: Subgroup) -> int | None:
    return subgroup_as_group(S).order()


def enumerate_elements(G: PresentedGroup, bound: int = 4096) -> Iterator[tuple[int, ...]]:
    """All elements of a finite group in lexicographic coordinate order."""
    if not G.is_finite():
        raise ValueError(f"{G} is infinite")
    if G.order() > bound:
        raise ValueError(f"{G} has {G.order()} elements, more than the bound {bound}")
    return itertools.product(*(range(d) for d in G.orders))

