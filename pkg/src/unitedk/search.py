"""Hunt for pairs ``P(G, alpha)``, ``P(H, beta)`` with equal real parts.

Every finite abelian group up to the order bound is scanned, every involution
of it is enumerated, and each admissible one is classified by the isomorphism
types of its fixed and anti-fixed parts.  Modules are then bucketed by the
fingerprint of their O-part; a bucket is reported when its members still
differ in the chosen part.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ._kernels import default_backend, involution_census
from .crtmod import Fingerprint, _slot_text, fingerprint, verify
from .pconstruct import build_p, eigen_parts, involutive_group

MAX_ORDER = 64
PART_FILTERS = ("U", "T", "any")


def _chains(n: int, unit: int = 1):
    # invariant-factor chains d_1 | d_2 | ... with product n, each d_i a multiple of unit
    if n == 1:
        yield ()
        return
    for d in range(unit, n + 1, unit):
        if d == 1:
            continue
        if n % d == 0:
            for tail in _chains(n // d, d):
                yield (d, *tail)


def abelian_groups(max_order: int) -> list[tuple[int, ...]]:
    """Invariant-factor forms of all abelian groups of order ``1..max_order``."""
    out = []
    for n in range(1, max_order + 1):
        out.extend(sorted(_chains(n)))
    return out


@dataclass(frozen=True)
class InvolutionClass:
    group: tuple[int, ...]
    plus: tuple[int, ...]
    minus: tuple[int, ...]
    count: int
    example: tuple[tuple[int, ...], ...]
    fingerprint: Fingerprint
    verified: bool

    def to_dict(self) -> dict:
        return {"group": list(self.group), "plus": list(self.plus), "minus": list(self.minus),
                "involutions": self.count, "example": [list(r) for r in self.example],
                "fingerprint": self.fingerprint.to_dict(), "verified": self.verified}


@dataclass(frozen=True)
class Bucket:
    real_part: tuple[tuple[int, ...], ...]
    members: tuple[InvolutionClass, ...]

    def to_dict(self) -> dict:
        return {"O": [list(s) for s in self.real_part],
                "members": [m.to_dict() for m in self.members]}


@dataclass
class SearchResult:
    max_order: int
    part: str
    groups: int = 0
    involutions: int = 0
    classes: list[InvolutionClass] = field(default_factory=list)
    buckets: list[Bucket] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"max_order": self.max_order, "part": self.part, "groups": self.groups,
                "involutions": self.involutions, "admissible_classes": len(self.classes),
                "buckets": [b.to_dict() for b in self.buckets]}

    def format_text(self) -> str:
        lines = [f"search up to order {self.max_order}, distinguishing part {self.part}",
                 f"groups scanned: {self.groups}",
                 f"involutions scanned: {self.involutions}",
                 f"admissible classes: {len(self.classes)}",
                 f"buckets: {len(self.buckets)}"]
        for k, b in enumerate(self.buckets, 1):
            lines.append("")
            lines.append(f"bucket {k}: O = " + " | ".join(_slot_text(s) for s in b.real_part))
            for m in b.members:
                mat = ";".join(",".join(str(x) for x in row) for row in m.example)
                lines.append(f"  G = {_slot_text(m.group)}  G+ = {_slot_text(m.plus)}  "
                             f"G- = {_slot_text(m.minus)}  alpha = [{mat}]  "
                             f"({m.count} involutions, verified: {'yes' if m.verified else 'no'})")
                lines.append("    U = " + " | ".join(_slot_text(s) for s in m.fingerprint.U))
                lines.append("    T = " + " | ".join(_slot_text(s) for s in m.fingerprint.T))
        return "\n".join(lines) + "\n"


def _classify(orders: tuple[int, ...], backend: str):
    census = involution_census(orders, backend)
    first: dict[tuple, int] = {}
    counts: dict[tuple, int] = {}
    for i in range(len(census)):
        if not census.admissible[i]:
            continue
        key = (census.hist_plus[i].tobytes(), census.hist_minus[i].tobytes())
        if key not in first:
            first[key] = i
        counts[key] = counts.get(key, 0) + 1
    out = []
    for key in sorted(first, key=first.get):
        matrix = census.matrix(first[key])
        I = involutive_group(orders, matrix)
        plus, minus = eigen_parts(I)
        M = build_p(I)
        out.append(InvolutionClass(
            orders, plus.group.orders, minus.group.orders, counts[key],
            tuple(tuple(r) for r in matrix), fingerprint(M), verify(M).passed))
    return len(census), out


def _distinct(values: list) -> bool:
    return len(set(values)) >= 2


def search(max_order: int, part: str = "U", backend: str | None = None) -> SearchResult:
    if not 1 <= max_order <= MAX_ORDER:
        raise ValueError(f"max order must lie in 1..{MAX_ORDER}, got {max_order}")
    if part not in PART_FILTERS:
        raise ValueError(f"part must be one of {', '.join(PART_FILTERS)}")
    backend = backend or default_backend()
    result = SearchResult(max_order, part)
    for orders in abelian_groups(max_order):
        scanned, classes = _classify(orders, backend)
        result.groups += 1
        result.involutions += scanned
        result.classes.extend(classes)
    buckets: dict[tuple, list[InvolutionClass]] = {}
    for c in result.classes:
        buckets.setdefault(c.fingerprint.O, []).append(c)
    for real, members in buckets.items():
        us = [m.fingerprint.U for m in members]
        ts = [m.fingerprint.T for m in members]
        hit = {"U": _distinct(us), "T": _distinct(ts), "any": _distinct(list(zip(us, ts)))}
        if hit[part]:
            result.buckets.append(Bucket(real, tuple(members)))
    return result
