"""CRT-modules: data model, relation verifier, acyclicity checker.

All three parts are stored with a uniform period of 8.  Each stored map
family is a tuple of eight matrices indexed by the degree of the *domain*.
``betaO`` is the identity under mod-8 indexing; ``etaT``, ``omega`` and the
inverses of ``betaU``/``betaT`` are computed on demand, never stored.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

from .abgroup import (
    TRIVIAL,
    ExactnessVerdict,
    GroupHom,
    HomomorphismError,
    PresentedGroup,
    canonicalize,
    check_well_defined,
    direct_sum_presentation,
    exact_at,
    identity_hom,
    make_hom,
)
from .exactalg import IntMatrix

PARTS = ("O", "U", "T")
PERIOD = 8

# name -> (domain part, codomain part, degree shift)
FAMILIES: dict[str, tuple[str, str, int]] = {
    "etaO": ("O", "O", 1),
    "xi": ("O", "O", 4),
    "betaU": ("U", "U", 2),
    "betaT": ("T", "T", 4),
    "c": ("O", "U", 0),
    "r": ("U", "O", 0),
    "eps": ("O", "T", 0),
    "zeta": ("T", "U", 0),
    "psiU": ("U", "U", 0),
    "psiT": ("T", "T", 0),
    "gamma": ("U", "T", -1),
    "tau": ("T", "O", 1),
}
FAMILY_NAMES = tuple(FAMILIES)

DERIVED: dict[str, tuple[str, str, int]] = {
    "betaO": ("O", "O", 8),
    "betaUinv": ("U", "U", -2),
    "betaTinv": ("T", "T", -4),
    "etaT": ("T", "T", 1),
    "omega": ("T", "T", 3),
}
SIGNATURES = {**FAMILIES, **DERIVED}


class CompositionError(ValueError):
    """A word of maps does not compose (part or degree mismatch)."""


@dataclass(frozen=True, eq=False)
class CRTModule:
    O: tuple[PresentedGroup, ...]
    U: tuple[PresentedGroup, ...]
    T: tuple[PresentedGroup, ...]
    maps: Mapping[str, tuple[IntMatrix, ...]]
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        for part in PARTS:
            groups = tuple(getattr(self, part))
            if len(groups) != PERIOD:
                raise ValueError(f"part {part} has {len(groups)} degrees, expected {PERIOD}")
            object.__setattr__(self, part, groups)
        names = set(self.maps)
        if names != set(FAMILY_NAMES):
            missing = sorted(set(FAMILY_NAMES) - names)
            extra = sorted(names - set(FAMILY_NAMES))
            raise ValueError(f"map families: missing {missing}, unexpected {extra}")
        frozen = {}
        for name in FAMILY_NAMES:
            mats = tuple(self.maps[name])
            if len(mats) != PERIOD:
                raise ValueError(f"family {name} has {len(mats)} degrees, expected {PERIOD}")
            frozen[name] = mats
        object.__setattr__(self, "maps", MappingProxyType(frozen))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CRTModule):
            return NotImplemented
        return (self.O, self.U, self.T) == (other.O, other.U, other.T) and \
            dict(self.maps) == dict(other.maps)

    def group(self, part: str, n: int) -> PresentedGroup:
        return getattr(self, part)[n % PERIOD]

    def matrix(self, name: str, n: int) -> IntMatrix:
        return self.maps[name][n % PERIOD]

    def hom(self, name: str, n: int) -> GroupHom:
        """The map ``name`` with domain in degree ``n`` (stored or derived)."""
        key = (name, n % PERIOD)
        if key in self._cache:
            return self._cache[key]
        src, dst, shift = SIGNATURES[name]
        if name in FAMILIES:
            h = make_hom(self.group(src, n), self.group(dst, n + shift), self.matrix(name, n))
        elif name == "betaO":
            h = identity_hom(self.group("O", n))
        elif name == "betaUinv":
            h = self.hom("betaU", n - 2).inverse()
        elif name == "betaTinv":
            h = self.hom("betaT", n - 4).inverse()
        elif name == "etaT":
            h = self.hom("gamma", n + 2) @ self.hom("betaU", n) @ self.hom("zeta", n)
        elif name == "omega":
            h = self.hom("betaT", n - 1) @ self.hom("gamma", n) @ self.hom("zeta", n)
        else:
            raise KeyError(name)
        self._cache[key] = h
        return h

    def replace(self, name: str, n: int, matrix: IntMatrix) -> CRTModule:
        """Copy with one stored matrix swapped out."""
        maps = dict(self.maps)
        mats = list(maps[name])
        mats[n % PERIOD] = matrix
        maps[name] = tuple(mats)
        return CRTModule(self.O, self.U, self.T, maps)

    def replace_family(self, name: str, matrices: Sequence[IntMatrix]) -> CRTModule:
        maps = dict(self.maps)
        maps[name] = tuple(matrices)
        return CRTModule(self.O, self.U, self.T, maps)


def zero_module() -> CRTModule:
    groups = (TRIVIAL,) * PERIOD
    return CRTModule(groups, groups, groups,
                     {name: (IntMatrix.zeros(0, 0),) * PERIOD for name in FAMILY_NAMES})


# -- expressions over map words ------------------------------------------------

Term = tuple[int, tuple[str, ...]]

_TOKEN = re.compile(r"[+-]|\d+|[A-Za-z]+")


def parse_expr(text: str) -> tuple[Term, ...]:
    """``"1 + psiU"``, ``"-betaU psiU"``, ``"2 tau betaT"``; ``"0"`` is the empty sum.

    Words are written in composition order: ``"r c"`` means ``r o c``.
    """
    tokens = _TOKEN.findall(text)
    terms: list[Term] = []
    sign, coef, word = 1, None, []

    def flush():
        if coef is None and not word:
            return
        k = 1 if coef is None else coef
        if k:
            terms.append((sign * k, tuple(word)))

    for tok in tokens:
        if tok in "+-":
            flush()
            sign, coef, word = (1 if tok == "+" else -1), None, []
        elif tok.isdigit():
            if word or coef is not None:
                raise ValueError(f"misplaced coefficient in {text!r}")
            coef = int(tok)
        else:
            if tok not in SIGNATURES:
                raise ValueError(f"unknown map {tok!r} in {text!r}")
            word.append(tok)
    flush()
    return tuple(terms)


def _evaluate(M: CRTModule, terms: Sequence[Term], part: str, n: int):
    total, end = None, None
    for coef, word in terms:
        h = identity_hom(M.group(part, n))
        cur, deg = part, n
        for name in reversed(word):
            src, dst, shift = SIGNATURES[name]
            if src != cur:
                raise CompositionError(f"{name} starts in {src}, word is in {cur}")
            h = M.hom(name, deg) @ h
            cur, deg = dst, deg + shift
        if end is not None and end != (cur, deg % PERIOD):
            raise CompositionError(f"terms end in {end} and {(cur, deg % PERIOD)}")
        end = (cur, deg % PERIOD)
        h = coef * h
        total = h if total is None else total + h
    return total, end


def evaluate(M: CRTModule, terms: Sequence[Term], part: str, n: int) -> GroupHom | None:
    """Value of a linear combination of words on ``M^part_n``; ``None`` for the empty sum."""
    return _evaluate(M, terms, part, n)[0]


def _homs_equal(a: GroupHom | None, b: GroupHom | None) -> bool:
    if a is None and b is None:
        return True
    if a is None:
        return b.is_zero()
    if b is None:
        return a.is_zero()
    return a.matrix == b.matrix


@dataclass(frozen=True)
class Relation:
    rid: str
    part: str
    lhs: str
    rhs: str

    @property
    def text(self) -> str:
        return f"{self.lhs} = {self.rhs}"


# Identities among the structure maps; ``part`` is where the domain lives.
RELATIONS: tuple[Relation, ...] = (
    Relation("R1", "O", "r c", "2"),
    Relation("R2", "U", "c r", "1 + psiU"),
    Relation("R3", "U", "r", "tau gamma"),
    Relation("R4", "O", "c", "zeta eps"),
    Relation("R5", "U", "psiU psiU", "1"),
    Relation("R6", "T", "psiT psiT", "1"),
    Relation("R7", "O", "psiT eps", "eps"),
    Relation("R8", "U", "zeta gamma", "0"),
    Relation("R9", "T", "zeta", "psiU zeta"),
    Relation("R10", "U", "psiU betaU", "-betaU psiU"),
    Relation("R11", "T", "psiT betaT", "betaT psiT"),
    Relation("R12", "O", "eps betaO", "betaT betaT eps"),
    Relation("R13", "T", "zeta betaT", "betaU betaU zeta"),
    Relation("R14", "U", "gamma betaU betaU", "betaT gamma"),
    Relation("R15", "T", "tau betaT betaT", "betaO tau"),
    Relation("R16", "U", "gamma", "gamma psiU"),
    Relation("R17", "O", "etaO", "tau eps"),
    Relation("R18", "T", "etaT", "gamma betaU zeta"),
    Relation("R19", "O", "xi", "r betaU betaU c"),
    Relation("R20", "T", "omega", "betaT gamma zeta"),
    Relation("R21", "T", "betaT eps tau", "eps tau betaT + etaT betaT"),
    Relation("R22", "T", "eps r zeta", "1 + psiT"),
    Relation("R23", "T", "gamma c tau", "1 - psiT"),
    Relation("R24", "T", "tau", "-tau psiT"),
    Relation("R25", "O", "tau betaT eps", "0"),
    Relation("R26", "O", "eps xi", "2 betaT eps"),
    Relation("R27", "T", "xi tau", "2 tau betaT"),
)

# Consequences of the coefficient rings and KO-linearity, checked in strict mode.
STRICT_RELATIONS: tuple[Relation, ...] = (
    Relation("S1", "O", "2 etaO", "0"),
    Relation("S2", "O", "etaO etaO etaO", "0"),
    Relation("S3", "O", "xi etaO", "0"),
    Relation("S4", "O", "etaO xi", "0"),
    Relation("S5", "T", "2 etaT", "0"),
    Relation("S6", "T", "etaT etaT", "0"),
    Relation("S7", "T", "omega omega", "0"),
    Relation("S8", "O", "c etaO", "0"),
    Relation("S9", "U", "etaO r", "0"),
    Relation("S10", "O", "c xi", "2 betaU betaU c"),
    Relation("S11", "U", "xi r", "2 r betaU betaU"),
    Relation("S12", "O", "eps etaO", "etaT eps"),
    Relation("S13", "T", "etaO tau", "tau etaT"),
    Relation("S14", "T", "zeta etaT", "0"),
    Relation("S15", "U", "etaT gamma", "0"),
)


@dataclass(frozen=True)
class ExactnessNode:
    """``f`` from ``f_part`` in degree ``n + f_offset``, then ``g`` out of the node."""

    sequence: str
    label: str
    f_part: str
    f_offset: int
    f: str
    g_part: str
    g_offset: int
    g: str

    def node_name(self, n: int) -> str:
        return self.label.replace("{deg}", str((n + self.g_offset) % PERIOD))


ACYCLICITY_NODES: tuple[ExactnessNode, ...] = (
    ExactnessNode("A", "T_{deg}: im gamma = ker zeta", "U", 1, "gamma", "T", 0, "zeta"),
    ExactnessNode("A", "U_{deg}: im zeta = ker(1-psiU)", "T", 0, "zeta", "U", 0, "1 - psiU"),
    ExactnessNode("A", "U_{deg}: im(1-psiU) = ker gamma", "U", 0, "1 - psiU", "U", 0, "gamma"),
    ExactnessNode("B", "O_{deg}: im etaO = ker c", "O", 0, "etaO", "O", 1, "c"),
    ExactnessNode("B", "U_{deg}: im c = ker(r betaU^-1)", "O", 1, "c", "U", 1, "r betaUinv"),
    ExactnessNode("B", "O_{deg}: im(r betaU^-1) = ker etaO", "U", 1, "r betaUinv",
                  "O", -1, "etaO"),
    ExactnessNode("C", "O_{deg}: im etaO^2 = ker eps", "O", 0, "etaO etaO", "O", 2, "eps"),
    ExactnessNode("C", "T_{deg}: im eps = ker(tau betaT^-1)", "O", 2, "eps",
                  "T", 2, "tau betaTinv"),
    ExactnessNode("C", "O_{deg}: im(tau betaT^-1) = ker etaO^2", "T", 2, "tau betaTinv",
                  "O", -1, "etaO etaO"),
)

_PARSED: dict[str, tuple[Term, ...]] = {}


def _terms(text: str) -> tuple[Term, ...]:
    if text not in _PARSED:
        _PARSED[text] = parse_expr(text)
    return _PARSED[text]


# -- reports -------------------------------------------------------------------

@dataclass(frozen=True)
class StructureViolation:
    kind: str  # "shape" | "ill-defined" | "not-invertible"
    family: str
    degree: int
    message: str


@dataclass(frozen=True)
class RelationViolation:
    relation: str
    degree: int
    text: str
    lhs: list[list[int]]
    rhs: list[list[int]]


@dataclass(frozen=True)
class ExactnessViolation:
    sequence: str
    degree: int
    node: str
    verdict: ExactnessVerdict


@dataclass
class ViolationReport:
    structure: list[StructureViolation] = field(default_factory=list)
    relations: list[RelationViolation] = field(default_factory=list)
    exactness: list[ExactnessViolation] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.structure) + len(self.relations) + len(self.exactness)

    @property
    def passed(self) -> bool:
        return len(self) == 0

    def extend(self, other: ViolationReport) -> ViolationReport:
        self.structure.extend(other.structure)
        self.relations.extend(other.relations)
        self.exactness.extend(other.exactness)
        return self

    def relation_ids(self) -> set[str]:
        return {v.relation for v in self.relations}

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "structure": [vars(v) for v in self.structure],
            "relations": [vars(v) for v in self.relations],
            "exactness": [{"sequence": v.sequence, "degree": v.degree, "node": v.node,
                           "verdict": v.verdict.value} for v in self.exactness],
        }

    def format_text(self) -> str:
        lines = []
        for v in self.structure:
            lines.append(f"structure {v.kind}: {v.family}[{v.degree}]: {v.message}")
        for v in self.relations:
            lines.append(f"relation {v.relation} at degree {v.degree}: {v.text}")
            lines.append(f"  lhs = {v.lhs}")
            lines.append(f"  rhs = {v.rhs}")
        for v in self.exactness:
            lines.append(f"sequence {v.sequence} n={v.degree} at {v.node}: {v.verdict.value}")
        return "\n".join(lines)


def validate_structure(M: CRTModule) -> ViolationReport:
    report = ViolationReport()
    for name in FAMILY_NAMES:
        src, dst, shift = FAMILIES[name]
        for n in range(PERIOD):
            dom, cod = M.group(src, n), M.group(dst, n + shift)
            mat = M.matrix(name, n)
            if mat.shape != (cod.ngens, dom.ngens):
                report.structure.append(StructureViolation(
                    "shape", name, n,
                    f"matrix is {mat.rows}x{mat.cols}, {dom} -> {cod} needs "
                    f"{cod.ngens}x{dom.ngens}"))
                continue
            try:
                check_well_defined(dom.orders, cod.orders, mat)
            except HomomorphismError as exc:
                report.structure.append(StructureViolation("ill-defined", name, n, str(exc)))
                continue
            if name in ("betaU", "betaT") and not M.hom(name, n).is_isomorphism():
                report.structure.append(StructureViolation(
                    "not-invertible", name, n, f"{dom} -> {cod} is not an isomorphism"))
    return report


def _check(M: CRTModule, rel: Relation, n: int) -> RelationViolation | None:
    lhs, lend = _evaluate(M, _terms(rel.lhs), rel.part, n)
    rhs, rend = _evaluate(M, _terms(rel.rhs), rel.part, n)
    if lend and rend and lend != rend:
        raise CompositionError(f"{rel.rid}: sides end in {lend} and {rend}")
    if _homs_equal(lhs, rhs):
        return None
    ref = lhs if lhs is not None else rhs
    zero = IntMatrix.zeros(ref.codomain.ngens, ref.domain.ngens).tolist()
    return RelationViolation(rel.rid, n, rel.text,
                             lhs.matrix.tolist() if lhs is not None else zero,
                             rhs.matrix.tolist() if rhs is not None else zero)


def check_crt_relations(M: CRTModule, strict: bool = False) -> ViolationReport:
    report = validate_structure(M)
    if not report.passed:
        return report
    rels = RELATIONS + (STRICT_RELATIONS if strict else ())
    for rel in rels:
        for n in range(PERIOD):
            v = _check(M, rel, n)
            if v is not None:
                report.relations.append(v)
    return report


def check_acyclicity(M: CRTModule) -> ViolationReport:
    report = validate_structure(M)
    if not report.passed:
        return report
    for node in ACYCLICITY_NODES:
        for n in range(PERIOD):
            f, fend = _evaluate(M, _terms(node.f), node.f_part, n + node.f_offset)
            g = evaluate(M, _terms(node.g), node.g_part, n + node.g_offset)
            if fend and fend != (node.g_part, (n + node.g_offset) % PERIOD):
                raise CompositionError(f"sequence {node.sequence}: {node.f} ends in {fend}")
            verdict = exact_at(f, g)
            if verdict is not ExactnessVerdict.EXACT:
                report.exactness.append(
                    ExactnessViolation(node.sequence, n, node.node_name(n), verdict))
    return report


def verify(M: CRTModule, strict: bool = True) -> ViolationReport:
    """Structure, relations and acyclicity in one report."""
    report = validate_structure(M)
    if not report.passed:
        return report
    report.extend(check_crt_relations(M, strict))
    report.extend(check_acyclicity(M))
    return report


# -- constructions -------------------------------------------------------------

def shift(M: CRTModule, i: int) -> CRTModule:
    """Degree shift: the result has ``O_n = M.O_{n-i}`` and likewise everywhere."""
    idx = [(n - i) % PERIOD for n in range(PERIOD)]
    return CRTModule(*(tuple(getattr(M, p)[k] for k in idx) for p in PARTS),
                     {name: tuple(M.maps[name][k] for k in idx) for name in FAMILY_NAMES})


def direct_sum(M: CRTModule, N: CRTModule) -> CRTModule:
    slots = {}
    for p in PARTS:
        for n in range(PERIOD):
            slots[p, n] = direct_sum_presentation(M.group(p, n).orders + N.group(p, n).orders)
    maps = {}
    for name, (src, dst, sh) in FAMILIES.items():
        mats = []
        for n in range(PERIOD):
            a, b = slots[src, n], slots[dst, (n + sh) % PERIOD]
            block = IntMatrix.block_diagonal(M.matrix(name, n), N.matrix(name, n))
            mat = b.to_canonical @ block @ a.from_canonical
            mats.append(make_hom(a.group, b.group, mat).matrix)
        maps[name] = tuple(mats)
    return CRTModule(*(tuple(slots[p, n].group for n in range(PERIOD)) for p in PARTS), maps)


@dataclass(frozen=True)
class Fingerprint:
    O: tuple[tuple[int, ...], ...]
    U: tuple[tuple[int, ...], ...]
    T: tuple[tuple[int, ...], ...]

    def part(self, p: str) -> tuple[tuple[int, ...], ...]:
        return getattr(self, p)

    def to_dict(self) -> dict:
        return {p: [list(s) for s in self.part(p)] for p in PARTS}

    def format_table(self) -> str:
        width = max(5, *(len(_slot_text(s)) for p in PARTS for s in self.part(p)))
        head = "part | " + " | ".join(f"{n:^{width}}" for n in range(PERIOD))
        lines = [head.rstrip(), "-" * len(head.rstrip())]
        for p in PARTS:
            lines.append((f"{p:<4} | " + " | ".join(f"{_slot_text(s):^{width}}"
                                                     for s in self.part(p))).rstrip())
        return "\n".join(lines)


def _slot_text(orders: Sequence[int]) -> str:
    return ",".join(str(d) for d in orders) if orders else "0"


def fingerprint(M: CRTModule) -> Fingerprint:
    return Fingerprint(*(tuple(g.orders for g in getattr(M, p)) for p in PARTS))


def merge_fingerprints(a: Fingerprint, b: Fingerprint) -> Fingerprint:
    """Fingerprint of a direct sum, computed slotwise from the two summands."""
    return Fingerprint(*(tuple(canonicalize(x + y).orders for x, y in zip(a.part(p), b.part(p)))
                         for p in PARTS))


@dataclass(frozen=True)
class PartComparison:
    part: str
    differing: tuple[int, ...]
    left: tuple[tuple[int, ...], ...]
    right: tuple[tuple[int, ...], ...]

    @property
    def agree(self) -> bool:
        return not self.differing

    @property
    def first_difference(self) -> tuple[int, tuple[int, ...], tuple[int, ...]] | None:
        if self.agree:
            return None
        n = self.differing[0]
        return n, self.left[n], self.right[n]


@dataclass(frozen=True)
class ComparisonVerdict:
    parts: tuple[PartComparison, ...]

    @property
    def distinguishable(self) -> bool:
        return any(not pc.agree for pc in self.parts)

    def part(self, p: str) -> PartComparison:
        return next(pc for pc in self.parts if pc.part == p)

    @property
    def summary(self) -> str:
        if self.distinguishable:
            return "CRT-distinguishable"
        return "not distinguished by fingerprint"

    def format_text(self) -> str:
        lines = []
        for pc in self.parts:
            if pc.agree:
                lines.append(f"{pc.part}: degreewise isomorphic in all {PERIOD} degrees")
            else:
                n, a, b = pc.first_difference
                lines.append(f"{pc.part}: first difference at degree {n}: "
                             f"{_slot_text(a)} vs {_slot_text(b)}")
        lines.append(f"verdict: {self.summary}")
        if not self.distinguishable:
            lines.append("note: equal fingerprints are necessary, not sufficient, "
                         "for CRT-isomorphism")
        return "\n".join(lines)


def compare(M: CRTModule, N: CRTModule) -> ComparisonVerdict:
    fa, fb = fingerprint(M), fingerprint(N)
    parts = []
    for p in PARTS:
        a, b = fa.part(p), fb.part(p)
        parts.append(PartComparison(p, tuple(n for n in range(PERIOD) if a[n] != b[n]), a, b))
    return ComparisonVerdict(tuple(parts))
