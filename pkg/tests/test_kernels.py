import numpy as np
import pytest

from unitedk import _kernels
from unitedk._kernels import element_tables, involution_census
from unitedk.pconstruct import admissibility_failures, eigen_parts, involutive_group
from test_pconstruct import all_involutions

BACKENDS = ["numpy"] + (["numba"] if _kernels.numba is not None else [])
SMALL = [(), (2,), (3,), (2, 2), (4,), (2, 4), (3, 3), (2, 2, 2), (8,), (2, 6), (4, 4),
         (2, 2, 4), (2, 2, 2, 2)]


def test_element_tables():
    t = element_tables((2, 4))
    assert t.size == 8
    assert t.digits[t.add[3, 6]].tolist() == [(0 + 1) % 2, (3 + 2) % 4]
    assert sorted(t.order.tolist()) == [1, 2, 2, 2, 4, 4, 4, 4]
    assert all(t.add[x, t.neg[x]] == 0 for x in range(t.size))
    assert t.divisors.tolist() == [1, 2, 4]


def test_infinite_groups_rejected():
    with pytest.raises(ValueError):
        element_tables((0,))


@pytest.mark.parametrize("backend", BACKENDS)
@pytest.mark.parametrize("orders", SMALL)
def test_census_matches_brute_force(orders, backend):
    c = involution_census(orders, backend)
    expected = sorted(map(str, all_involutions(orders))) if len(orders) < 4 else None
    got = [c.matrix(i) for i in range(len(c))]
    assert len({str(m) for m in got}) == len(got)
    if expected is not None:
        assert sorted(map(str, got)) == expected
    for i, rows in enumerate(got):
        I = involutive_group(orders, rows)
        assert bool(c.admissible[i]) == (admissibility_failures(I) == [])
        if c.admissible[i]:
            plus, minus = eigen_parts(I)
            assert int(c.hist_plus[i].sum()) == plus.group.order()
            assert int(c.hist_minus[i].sum()) == minus.group.order()


def test_known_counts_over_f2():
    # involutions in GL(n, 2), identity included
    counts = [len(involution_census((2,) * n, "numpy")) for n in range(1, 5)]
    assert counts == [1, 4, 22, 316]


@pytest.mark.skipif(len(BACKENDS) < 2, reason="numba not installed")
@pytest.mark.parametrize("orders", [(2, 2, 2, 2), (2, 2, 8), (4, 8), (2, 2, 2, 4), (3, 9)])
def test_backends_agree(orders):
    a = involution_census(orders, "numpy")
    b = involution_census(orders, "numba")
    for field in ("images", "admissible", "hist_plus", "hist_minus"):
        assert np.array_equal(getattr(a, field), getattr(b, field))


def test_env_flag_selects_numpy(monkeypatch):
    monkeypatch.setenv(_kernels.DISABLE_ENV, "1")
    assert _kernels.default_backend() == "numpy"
    monkeypatch.setenv(_kernels.DISABLE_ENV, "0")
    expected = "numba" if _kernels.numba is not None else "numpy"
    assert _kernels.default_backend() == expected


def test_unknown_backend():
    with pytest.raises(ValueError):
        involution_census((2,), "fortran")
