import itertools
from fractions import Fraction

import numpy as np
import pytest

from genmvp import kernels
from genmvp import tree_laplace as tl


def addresses(q, R):
    yield ()
    for m in range(1, R + 1):
        for first in range(q + 1):
            for rest in itertools.product(range(q), repeat=m - 1):
                yield (first,) + rest


def neighbours(a, q):
    if not a:
        return [(b,) for b in range(q + 1)]
    return [a[:-1]] + [a + (c,) for c in range(q)]


def brute_laplacian(values, q, R):
    """Dict-based oracle: mean over neighbours minus value."""
    return {a: sum(values[b] for b in neighbours(a, q)) / (q + 1) - values[a]
            for a in addresses(q, R - 1)}


def test_vertex_count_and_layout():
    for q, R in [(2, 3), (3, 4), (5, 2)]:
        assert tl.vertex_count(q, R) == len(list(addresses(q, R)))
        for i, a in enumerate(addresses(q, R)):
            # address_index returns (level, local)
            level, local = tl.address_index(a, q)
            assert tl.kernels.level_offsets(q, R)[level] + local == i
            assert tl.index_address(level, local, q) == a


@pytest.mark.parametrize("q,R,seed", [(2, 5, 1), (3, 4, 2), (4, 3, 3)])
def test_laplacian_matches_brute_force(q, R, seed):
    f = tl.make_random(q, R, seed)
    values = dict(f.items())
    oracle = brute_laplacian(values, q, R)
    got = dict(tl.tree_laplacian(f).items())
    assert got == oracle


def test_radial_laplacian_matches_dense():
    f = tl.make_radial(3, 6, [Fraction(1, 3 ** m) + m for m in range(7)])
    assert dict(tl.tree_laplacian(f).items()) == dict(tl.tree_laplacian(f.dense()).items())


def test_chi_laplacian_examples():
    lap = tl.tree_laplacian(tl.make_chi(2, 3))
    assert lap[()] == -1
    assert lap[(1,)] == Fraction(1, 3)
    assert lap[(0, 1)] == 0


def test_chi_powers_on_horocycles():
    q = 3
    chi = tl.make_chi(q, 12)
    for n in range(1, 7):
        tower = tl.laplacian_tower(chi, n)
        for i in range(n):
            assert tl.horocycle_avg(tower[i], n) == 0
        assert tl.horocycle_avg(tower[n], n) == Fraction(1, (q + 1) ** n)


@pytest.mark.parametrize("q", [2, 3])
def test_busemann_harmonic(q):
    for end in [(0,), (q,), (1, 1)]:
        assert tl.tree_laplacian(tl.make_busemann(q, 5, end)).is_zero()


def test_random_is_not_harmonic():
    assert not tl.is_harmonic(tl.make_random(2, 3, 0))


def test_horocycle_avg_brute_force():
    f = tl.make_random(2, 4, 1)
    cone = [a for a in addresses(2, 2) if len(a) == 2 and a[0] != 2]
    assert tl.horocycle_avg(f, 2) == sum(f[a] for a in cone) / 4
    assert tl.horocycle_avg(f, 0) == f[()]


def test_horocycle_range():
    f = tl.make_chi(2, 3)
    with pytest.raises(IndexError):
        tl.horocycle_avg(f, 4)


def test_cone_identity_small():
    assert tl.cone_identity_check(tl.make_random(3, 6, 7), 3).ok
    assert tl.cone_identity_check(tl.make_chi(2, 4), 2).ok


def test_cone_identity_detects_wrong_coefficient(monkeypatch):
    # the identity holds for every f, so corrupt a_{n,1} instead of the data
    f = tl.make_random(2, 6, 3)
    real = tl.coeff
    monkeypatch.setattr(tl, "coeff", lambda n, k, q: real(n, k, q) + (k == 1))
    rep = tl.cone_identity_check(f, 3)
    assert not rep.ok and rep.residual


def test_linearity():
    f, g = tl.make_random(2, 6, 1), tl.make_random(2, 6, 2)
    h = f + g.scale(Fraction(-3, 7))
    for n in range(4):
        assert tl.horocycle_avg(h, n) == tl.horocycle_avg(f, n) - Fraction(3, 7) * tl.horocycle_avg(g, n)
    assert dict(tl.tree_laplacian(h).items()) == dict(
        (tl.tree_laplacian(f) - tl.tree_laplacian(g).scale(Fraction(3, 7))).items())


def test_json_round_trip():
    f = tl.make_random(2, 3, 5)
    g = tl.from_json(f.to_json())
    assert g.q == 2 and g.radius == 3
    assert dict(g.items()) == dict(f.items())


def test_from_values_requires_all_vertices():
    with pytest.raises(ValueError):
        tl.from_values(2, 1, {(): 1})


def test_memory_budget():
    with pytest.raises(MemoryError):
        tl.make_random(3, 16, 0)
    # radial storage is exempt
    assert tl.make_chi(3, 16).radius == 16


def test_address_strings():
    assert tl.parse_address("") == ()
    assert tl.parse_address("2.0.1") == (2, 0, 1)
    assert tl.format_address((2, 0, 1)) == "2.0.1"


@pytest.mark.skipif(kernels.BACKEND != "cython", reason="compiled kernels not built")
@pytest.mark.parametrize("q,R", [(2, 10), (3, 7), (5, 4)])
def test_backends_agree(q, R):
    f = tl.make_random(q, R, 11)
    a = kernels.laplacian_step(f.num, q, R, backend="cython")
    b = kernels.laplacian_step(f.num, q, R, backend="python")
    assert np.array_equal(a, b)
    for n in range(R + 1):
        assert kernels.branch_sums(f.num, q, R, n, "cython") == kernels.branch_sums(f.num, q, R, n, "python")


@pytest.mark.parametrize("backend", ["python", "cython"])
def test_overflow_falls_back_to_python_ints(backend):
    if backend == "cython" and kernels.BACKEND != "cython":
        pytest.skip("compiled kernels not built")
    q, R = 2, 3
    big = np.iinfo(np.int64).max // 2
    num = np.full(tl.vertex_count(q, R), big, dtype=np.int64)
    num[0] = -big
    out = kernels.laplacian_step(num, q, R, backend=backend)
    exact = [int(x) for x in kernels._kernels_py.laplacian_step(num.astype(object), q, R)]
    assert [int(x) for x in out] == exact
    assert exact[0] == 3 * big + 3 * big  # children sum minus (q+1)(-big)


def test_block_sum_overflow():
    big = np.iinfo(np.int64).max
    num = np.array([0, big, big, big], dtype=np.int64)
    assert kernels.branch_sums(num, 2, 1, 1) == [big, big, big]
    assert kernels.exact_sum(np.array([big, big, -5], dtype=np.int64)) == 2 * big - 5


def test_large_values_stay_exact():
    f = tl.make_busemann(2, 40 // 2)  # q^{2R} still fits int64
    assert tl.is_harmonic(f)


def test_stabilization():
    vals = [Fraction(3, 2) - Fraction(1, 2 ** n) for n in range(1, 7)]
    assert tl.stabilization(vals)["limit"] == Fraction(3, 2)
    assert tl.stabilization([Fraction(1)] * 4)["stable"]
