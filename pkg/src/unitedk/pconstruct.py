"""Acyclic CRT-modules ``P(G, alpha)`` built from a group with involution."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .abgroup import (
    TRIVIAL,
    ExactnessVerdict,
    GroupHom,
    PresentedGroup,
    check_well_defined,
    direct_sum_presentation,
    exact_at,
    identity_hom,
    image,
    kernel,
    make_hom,
    present_subgroup,
    subgroup_leq,
    zero_hom,
)
from .crtmod import FAMILIES, PERIOD, CRTModule
from .exactalg import IntMatrix


class NotAnInvolutionError(ValueError):
    pass


class InadmissibleInvolutionError(ValueError):
    def __init__(self, failures: Sequence[str]):
        self.failures = list(failures)
        super().__init__("inadmissible involution: " + "; ".join(
            f"{f} fails" for f in self.failures))


@dataclass(frozen=True)
class InvolutiveGroup:
    G: PresentedGroup
    alpha: GroupHom

    def __post_init__(self):
        if self.alpha.domain != self.G or self.alpha.codomain != self.G:
            raise NotAnInvolutionError(f"alpha is not an endomorphism of {self.G}")
        if self.alpha @ self.alpha != identity_hom(self.G):
            raise NotAnInvolutionError("not an involution: alpha o alpha != 1")


def involutive_group(orders: Sequence[int], matrix) -> InvolutiveGroup:
    """Involution given on ``Z_{d_1} + ... + Z_{d_k}`` in any generator order.

    The matrix is taken relative to the listed generators and transported to
    the canonical presentation.
    """
    k = len(orders)
    if not isinstance(matrix, IntMatrix):
        matrix = IntMatrix(matrix, k, k)
    check_well_defined(orders, orders, matrix)
    pres = direct_sum_presentation(orders)
    moved = pres.to_canonical @ matrix @ pres.from_canonical
    return InvolutiveGroup(pres.group, make_hom(pres.group, pres.group, moved))


CONDITIONS = ("ker(1+alpha) = image(1-alpha)", "ker(1-alpha) = image(1+alpha)")


def admissibility_failures(I: InvolutiveGroup) -> list[str]:
    one = identity_hom(I.G)
    plus, minus = one + I.alpha, one - I.alpha
    failures = []
    for cond, (k, im) in zip(CONDITIONS, ((kernel(plus), image(minus)),
                                          (kernel(minus), image(plus)))):
        if not (subgroup_leq(k, im) and subgroup_leq(im, k)):
            failures.append(cond)
    return failures


def involution_admissible(I: InvolutiveGroup) -> bool:
    return not admissibility_failures(I)


@dataclass(frozen=True)
class EigenPart:
    """``G+`` or ``G-`` with its inclusion ``i`` and projection ``pi`` from ``G``."""

    group: PresentedGroup
    inclusion: GroupHom
    projection: GroupHom


def _short_exact(i: GroupHom, p: GroupHom) -> bool:
    return (exact_at(zero_hom(TRIVIAL, i.domain), i) is ExactnessVerdict.EXACT
            and exact_at(i, p) is ExactnessVerdict.EXACT
            and exact_at(p, zero_hom(p.codomain, TRIVIAL)) is ExactnessVerdict.EXACT)


def eigen_parts(I: InvolutiveGroup) -> tuple[EigenPart, EigenPart]:
    """``(G+, G-)``; checks both short exact sequences through ``G``."""
    failures = admissibility_failures(I)
    if failures:
        raise InadmissibleInvolutionError(failures)
    one = identity_hom(I.G)
    parts = []
    for fixed_by, proj_map in ((one - I.alpha, one + I.alpha), (one + I.alpha, one - I.alpha)):
        pres = present_subgroup(kernel(fixed_by))
        parts.append(EigenPart(pres.group, pres.inclusion, pres.corestrict(proj_map)))
    plus, minus = parts
    # 0 -> G+ -> G -> G- -> 0 and 0 -> G- -> G -> G+ -> 0
    if not (_short_exact(plus.inclusion, minus.projection)
            and _short_exact(minus.inclusion, plus.projection)):
        raise InadmissibleInvolutionError(["eigenspace sequences are not exact"])
    return plus, minus


def plus_part(I: InvolutiveGroup) -> EigenPart:
    return eigen_parts(I)[0]


def minus_part(I: InvolutiveGroup) -> EigenPart:
    return eigen_parts(I)[1]


# Columns are degrees 0..8; column 8 repeats column 0.
TABLE_GROUPS = {
    "O": ("G+", "0", "G-", "0", "G+", "0", "G-", "0", "G+"),
    "U": ("G", "0", "G", "0", "G", "0", "G", "0", "G"),
    "T": ("G+", "G-", "G-", "G+", "G+", "G-", "G-", "G+", "G+"),
}
TABLE_MAPS = {
    "etaO": ("0", "0", "0", "0", "0", "0", "0", "0", "0"),
    "c": ("i+", "0", "i-", "0", "i+", "0", "i-", "0", "i+"),
    "r": ("pi+", "0", "pi-", "0", "pi+", "0", "pi-", "0", "pi+"),
    "eps": ("1", "0", "1", "0", "1", "0", "1", "0", "1"),
    "zeta": ("i+", "0", "i-", "0", "i+", "0", "i-", "0", "i+"),
    "psiU": ("alpha", "0", "-alpha", "0", "alpha", "0", "-alpha", "0", "alpha"),
    "psiT": ("1", "-1", "1", "-1", "1", "-1", "1", "-1", "1"),
    "gamma": ("pi+", "0", "pi-", "0", "pi+", "0", "pi-", "0", "pi+"),
    "tau": ("0", "1", "0", "1", "0", "1", "0", "1", "0"),
    # not tabulated; identity is the minimal periodic completion
    "betaU": ("1", "1", "1", "1", "1", "1", "1", "1", "1"),
    "betaT": ("1", "1", "1", "1", "1", "1", "1", "1", "1"),
}


def build_p(I: InvolutiveGroup) -> CRTModule:
    plus, minus = eigen_parts(I)
    groups = {"G": I.G, "G+": plus.group, "G-": minus.group, "0": TRIVIAL}
    named = {
        "i+": plus.inclusion, "i-": minus.inclusion,
        "pi+": plus.projection, "pi-": minus.projection,
        "alpha": I.alpha, "-alpha": -I.alpha,
    }
    for row in (*TABLE_GROUPS.values(), *TABLE_MAPS.values()):
        assert row[PERIOD] == row[0], "degree 8 must repeat degree 0"

    def group(part: str, n: int) -> PresentedGroup:
        return groups[TABLE_GROUPS[part][n % PERIOD]]

    homs: dict[str, list[GroupHom]] = {}
    for name, row in TABLE_MAPS.items():
        src, dst, sh = FAMILIES[name]
        homs[name] = []
        for n in range(PERIOD):
            dom, cod = group(src, n), group(dst, n + sh)
            sym = row[n]
            if sym == "0":
                h = zero_hom(dom, cod)
            elif sym in ("1", "-1"):
                assert dom == cod, f"{name}_{n}: identity between {dom} and {cod}"
                h = identity_hom(dom) if sym == "1" else -identity_hom(dom)
            else:
                h = named[sym]
                assert (h.domain, h.codomain) == (dom, cod), f"{name}_{n} = {sym} misplaced"
            homs[name].append(h)
    # forced by xi = r betaU^2 c
    homs["xi"] = [homs["r"][(n + 4) % PERIOD] @ homs["betaU"][(n + 2) % PERIOD]
                  @ homs["betaU"][n] @ homs["c"][n] for n in range(PERIOD)]
    return CRTModule(
        tuple(group("O", n) for n in range(PERIOD)),
        tuple(group("U", n) for n in range(PERIOD)),
        tuple(group("T", n) for n in range(PERIOD)),
        {name: tuple(h.matrix for h in homs[name]) for name in FAMILIES},
    )


BUILTIN_EXAMPLES = {
    "G-alpha": ((2, 2, 2, 2), [[0, 1, 0, 0], [1, 0, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]]),
    # generator order (Z4, Z2, Z2)
    "H-beta": ((4, 2, 2), [[1, 0, 2], [1, 1, 0], [0, 0, 1]]),
}


def builtin_example(name: str) -> InvolutiveGroup:
    try:
        orders, matrix = BUILTIN_EXAMPLES[name]
    except KeyError:
        raise ValueError(f"unknown example {name!r}; choose from "
                         f"{', '.join(BUILTIN_EXAMPLES)}") from None
    return involutive_group(orders, matrix)


def sign_involution(orders: Sequence[int], sign: int) -> InvolutiveGroup:
    """``alpha = sign * 1`` on the given group."""
    k = len(orders)
    return involutive_group(orders, IntMatrix.identity(k) * sign)

