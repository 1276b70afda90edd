"""Brute-force kernels behind the involution search.

Groups here are small (at most 64 elements), so elements are plain indices in
mixed radix and the group law is a lookup table.  Two interchangeable paths
compute the same census:

* ``numba``: explicit loops compiled with ``numba.njit``;
* ``numpy``: the same depth-first enumeration with each extension step
  vectorized.

Set ``UNITEDK_DISABLE_NUMBA=1`` to force the numpy path.  Results are
identical either way; only speed differs.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from math import prod

import numpy as np

try:
    import numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None

DISABLE_ENV = "UNITEDK_DISABLE_NUMBA"


def numba_enabled() -> bool:
    flag = os.environ.get(DISABLE_ENV, "").strip().lower()
    return numba is not None and flag in ("", "0", "false", "no")


def default_backend() -> str:
    return "numba" if numba_enabled() else "numpy"


@dataclass(frozen=True)
class ElementTables:
    orders: tuple[int, ...]
    digits: np.ndarray    # (n, k) coordinates of each element
    add: np.ndarray       # (n, n) index of x + y
    neg: np.ndarray       # (n,) index of -x
    order: np.ndarray     # (n,) order of each element
    gens: np.ndarray      # (k,) index of each canonical generator
    divisors: np.ndarray  # divisors of the exponent, ascending
    divpos: np.ndarray    # element order -> position in ``divisors``

    @property
    def size(self) -> int:
        return self.digits.shape[0]


def element_tables(orders) -> ElementTables:
    orders = tuple(int(d) for d in orders)
    if any(d <= 0 for d in orders):
        raise ValueError("element tables need a finite group")
    k = len(orders)
    n = prod(orders)
    radix = np.array(orders, dtype=np.int64).reshape(1, k) if k else np.ones((1, 0), np.int64)
    strides = np.array([prod(orders[i + 1:]) for i in range(k)], dtype=np.int64)
    idx = np.arange(n, dtype=np.int64)
    digits = (idx[:, None] // strides[None, :]) % radix if k else np.zeros((n, 0), np.int64)

    def index(d):
        return (d * strides).sum(axis=-1)

    add = index((digits[:, None, :] + digits[None, :, :]) % radix[None])
    neg = index((-digits) % radix)
    if k:
        part = radix // np.gcd(digits, radix)
        order = np.lcm.reduce(part, axis=1)
    else:
        order = np.ones(1, dtype=np.int64)
    exponent = int(np.lcm.reduce(order))
    divisors = np.array([d for d in range(1, exponent + 1) if exponent % d == 0], np.int64)
    divpos = np.full(exponent + 1, -1, np.int64)
    divpos[divisors] = np.arange(len(divisors))
    return ElementTables(orders, digits, add.astype(np.int64), neg.astype(np.int64),
                         order.astype(np.int64), strides.copy(), divisors, divpos)


# -- loop kernels (compiled by numba when enabled) ------------------------------

def _extend_loops(add, table, new, e, v, order):
    # Extend alpha from the stable subgroup S to S + <e> + <v>, with
    # alpha(e) = v and alpha(v) = e; fail if the extension is not well defined.
    n = table.shape[0]
    for x in range(n):
        new[x] = table[x]
    oe = order[e]
    for s in range(n):
        if table[s] < 0:
            continue
        xa = s
        ya = table[s]
        for _a in range(oe):
            x = xa
            y = ya
            for _b in range(oe):
                cur = new[x]
                if cur < 0:
                    new[x] = y
                elif cur != y:
                    return False
                x = add[x, v]
                y = add[y, e]
            xa = add[xa, e]
            ya = add[ya, v]
    return True


def _profile_loops(add, neg, order, divpos, table, hist_plus, hist_minus):
    n = table.shape[0]
    fixed = np.zeros(n, np.bool_)
    anti = np.zeros(n, np.bool_)
    im_plus = np.zeros(n, np.bool_)
    im_minus = np.zeros(n, np.bool_)
    for x in range(n):
        ax = table[x]
        if ax == x:
            fixed[x] = True
            hist_plus[divpos[order[x]]] += 1
        if ax == neg[x]:
            anti[x] = True
            hist_minus[divpos[order[x]]] += 1
        im_plus[add[x, ax]] = True
        im_minus[add[x, neg[ax]]] = True
    for x in range(n):
        # ker(1+alpha) = im(1-alpha) and ker(1-alpha) = im(1+alpha)
        if anti[x] != im_minus[x] or fixed[x] != im_plus[x]:
            return False
    return True


def _census_loops(add, neg, order, gens, divpos, ndiv, record, images, admissible,
                  hist_plus, hist_minus):
    n = add.shape[0]
    k = gens.shape[0]
    tables = np.full((k + 2, n), -1, np.int64)
    tables[0, 0] = 0
    cand = np.zeros(k + 2, np.int64)
    target = np.full(k + 2, -2, np.int64)
    count = 0
    level = 0
    while level >= 0:
        if target[level] == -2:
            j = -1
            for t in range(k):
                if tables[level, gens[t]] < 0:
                    j = t
                    break
            if j < 0:
                if record:
                    for t in range(k):
                        images[count, t] = tables[level, gens[t]]
                    admissible[count] = _profile_loops(add, neg, order, divpos, tables[level],
                                                       hist_plus[count], hist_minus[count])
                count += 1
                level -= 1
                continue
            target[level] = gens[j]
            cand[level] = 0
        e = target[level]
        advanced = False
        while cand[level] < n:
            v = cand[level]
            cand[level] += 1
            if order[v] != order[e]:
                continue
            if _extend_loops(add, tables[level], tables[level + 1], e, v, order):
                target[level + 1] = -2
                level += 1
                advanced = True
                break
        if not advanced:
            target[level] = -2
            level -= 1
    return count


_compiled = {}


def _numba_census():
    if "census" not in _compiled:
        jit = numba.njit(cache=True, nogil=True)
        ext = jit(_extend_loops)
        prof = jit(_profile_loops)
        g = dict(_census_loops.__globals__, _extend_loops=ext, _profile_loops=prof)
        fn = type(_census_loops)(_census_loops.__code__, g, "_census_loops")
        _compiled["census"] = jit(fn)
    return _compiled["census"]


# -- numpy path ------------------------------------------------------------------

def _multiples(tab: ElementTables) -> list[np.ndarray]:
    out = []
    for x in range(tab.size):
        m = np.zeros(tab.order[x], np.int64)
        for a in range(1, len(m)):
            m[a] = tab.add[m[a - 1], x]
        out.append(m)
    return out


def _extend_numpy(add, table, mult_e, mult_v):
    S = np.flatnonzero(table >= 0)
    aS = table[S]
    X = add[add[S[:, None, None], mult_e[None, :, None]], mult_v[None, None, :]].ravel()
    Y = add[add[aS[:, None, None], mult_v[None, :, None]], mult_e[None, None, :]].ravel()
    known = table[X]
    if np.any((known >= 0) & (known != Y)):
        return None
    new = table.copy()
    new[X] = Y
    if np.any(new[X] != Y):
        return None
    return new


def _census_numpy(tab: ElementTables):
    n, gens = tab.size, [int(g) for g in tab.gens]
    mult = _multiples(tab)
    order = tab.order
    leaves = []
    root = np.full(n, -1, np.int64)
    root[0] = 0
    stack = [(root, None, 0)]
    # explicit stack of (table, target generator, next candidate)
    while stack:
        table, e, v0 = stack.pop()
        if e is None:
            e = next((g for g in gens if table[g] < 0), None)
            if e is None:
                leaves.append(table)
                continue
        for v in range(v0, n):
            if order[v] != order[e]:
                continue
            new = _extend_numpy(tab.add, table, mult[e], mult[v])
            if new is not None:
                stack.append((table, e, v + 1))
                stack.append((new, None, 0))
                break
    tables = np.array(leaves, dtype=np.int64).reshape(len(leaves), n)
    return tables


def _profile_numpy(tab: ElementTables, tables: np.ndarray):
    N, n = tables.shape
    ar = np.broadcast_to(np.arange(n), (N, n))
    rows = np.broadcast_to(np.arange(N)[:, None], (N, n))
    fixed = tables == ar
    anti = tables == tab.neg[ar]
    im_plus = np.zeros((N, n), bool)
    im_minus = np.zeros((N, n), bool)
    im_plus[rows, tab.add[ar, tables]] = True
    im_minus[rows, tab.add[ar, tab.neg[tables]]] = True
    admissible = np.all(anti == im_minus, axis=1) & np.all(fixed == im_plus, axis=1)
    ndiv = len(tab.divisors)
    pos = np.broadcast_to(tab.divpos[tab.order], (N, n))
    hist_plus = np.zeros((N, ndiv), np.int64)
    hist_minus = np.zeros((N, ndiv), np.int64)
    np.add.at(hist_plus, (rows[fixed], pos[fixed]), 1)
    np.add.at(hist_minus, (rows[anti], pos[anti]), 1)
    return admissible, hist_plus, hist_minus


# -- public entry point ------------------------------------------------------------

@dataclass(frozen=True)
class InvolutionCensus:
    """Every involution of a finite group, in depth-first enumeration order.

    ``images[i, j]`` is the element index of ``alpha_i(e_j)``; the histograms
    count fixed and negated elements by element order, which pins down the
    isomorphism types of ``G+`` and ``G-``.
    """

    tables: ElementTables
    images: np.ndarray
    admissible: np.ndarray
    hist_plus: np.ndarray
    hist_minus: np.ndarray

    def __len__(self) -> int:
        return self.images.shape[0]

    def matrix(self, i: int) -> list[list[int]]:
        cols = self.tables.digits[self.images[i]]  # (k, k): row j = alpha(e_j)
        return cols.T.tolist()


def involution_census(orders, backend: str | None = None) -> InvolutionCensus:
    tab = element_tables(orders)
    backend = backend or default_backend()
    k, ndiv = len(tab.gens), len(tab.divisors)
    if backend == "numba":
        if numba is None:
            raise RuntimeError("numba is not installed")
        fn = _numba_census()
        dummy_i = np.zeros((0, k), np.int64)
        dummy_b = np.zeros(0, np.bool_)
        dummy_h = np.zeros((0, ndiv), np.int64)
        count = fn(tab.add, tab.neg, tab.order, tab.gens, tab.divpos, ndiv, False,
                   dummy_i, dummy_b, dummy_h, dummy_h)
        images = np.zeros((count, k), np.int64)
        admissible = np.zeros(count, np.bool_)
        hp = np.zeros((count, ndiv), np.int64)
        hm = np.zeros((count, ndiv), np.int64)
        fn(tab.add, tab.neg, tab.order, tab.gens, tab.divpos, ndiv, True,
           images, admissible, hp, hm)
        return InvolutionCensus(tab, images, admissible, hp, hm)
    if backend == "numpy":
        tables = _census_numpy(tab)
        admissible, hp, hm = _profile_numpy(tab, tables)
        images = tables[:, tab.gens] if k else np.zeros((len(tables), 0), np.int64)
        return InvolutionCensus(tab, images, admissible, hp, hm)
    raise ValueError(f"unknown backend {backend!r}")
