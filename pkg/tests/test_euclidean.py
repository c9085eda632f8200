import random
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from genmvp import euclidean_mvp as em
from genmvp.polynomials import MultiPoly, RadialPoly, format_poly, parse_poly, random_multipoly


def to_sympy(f: MultiPoly):
    xs = sp.symbols(f"x1:{f.dim + 1}")
    expr = sum(sp.Rational(c.numerator, c.denominator) * sp.prod([x ** e for x, e in zip(xs, exps)])
               for exps, c in f.terms.items())
    return sp.sympify(expr), xs


def from_sympy(expr, xs) -> MultiPoly:
    poly = sp.Poly(sp.expand(expr), *xs)
    return MultiPoly(len(xs), {m: Fraction(str(c)) for m, c in poly.terms()})


@pytest.mark.parametrize("seed", range(10))
def test_laplacian_matches_sympy(seed):
    rng = random.Random(seed)
    d = rng.randint(1, 4)
    f = random_multipoly(d, 6, rng)
    expr, xs = to_sympy(f)
    oracle = sum(sp.diff(expr, x, 2) for x in xs)
    if oracle == 0:
        assert em.laplacian(f).is_zero()
    else:
        assert em.laplacian(f) == from_sympy(oracle, xs)


@pytest.mark.parametrize("exps", [(2, 0, 0), (2, 2, 0), (4, 0, 0), (2, 2, 2), (1, 1, 0), (6, 2, 0)])
def test_sphere_moments_monte_carlo(exps):
    # 10^7 uniform points on S^2; tolerance 5 standard errors
    rng = np.random.default_rng(12345)
    total, sq, n = 0.0, 0.0, 0
    for _ in range(10):
        pts = rng.standard_normal((1_000_000, 3))
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
        vals = np.prod(pts ** np.array(exps), axis=1)
        total += vals.sum()
        sq += (vals ** 2).sum()
        n += len(vals)
    mean = total / n
    se = np.sqrt(sq / n - mean ** 2) / np.sqrt(n)
    exact = float(em.sphere_avg_monomial(exps, 3))
    assert abs(mean - exact) <= 5 * se + 1e-12


def test_sphere_moment_values():
    assert em.sphere_avg_monomial((2, 0, 0), 3) == Fraction(1, 3)
    assert em.sphere_avg_monomial((2, 2, 0), 3) == Fraction(1, 15)
    assert em.sphere_avg_monomial((1, 0), 2) == 0
    # d = 1: the "sphere" is {-1, 1}
    assert em.sphere_avg_monomial((4,), 1) == 1


@pytest.mark.parametrize("d,n", [(d, n) for d in (1, 2, 3, 5) for n in (0, 1, 2, 3, 5, 8) if n >= d - 1])
def test_radial_delta_matches_sympy(d, n):
    x = sp.symbols("x")
    g = x ** n
    oracle = sp.expand(sp.diff(x ** (d - 1) * sp.diff(sp.cancel(g / x ** (d - 1)), x), x))
    got = em.radial_delta(RadialPoly.monomial(n), d)
    expected = RadialPoly.from_dict({k[0]: Fraction(str(c)) for k, c in sp.Poly(oracle, x).terms()}) \
        if oracle != 0 else RadialPoly()
    assert got == expected


def test_radial_delta_example_x3_d2():
    assert em.radial_delta(RadialPoly.monomial(3), 2) == RadialPoly.monomial(1, 4)


def test_radial_delta_rejects_non_divisible():
    with pytest.raises(ValueError):
        em.radial_delta(RadialPoly.monomial(0), 3)


@pytest.mark.parametrize("d", range(1, 7))
def test_annihilation(d):
    assert em.annihilation_check(0, d).ok
    assert all(em.annihilation_check(k, d).ok for k in range(1, 11))


def test_mvp_on_harmonic_and_nonharmonic():
    f = parse_poly("x1^2 - x2^2", 2)
    assert em.mvp_check(f).ok
    g = parse_poly("x1^4 x2^2 + 3/7 * x3^2", 3)
    assert em.mvp_check(g).ok
    assert em.commuting_check(g, n=2).ok


def test_mvp_detects_wrong_alpha():
    # without the alpha correction the plain sphere average of |x|^2 is r^2, not 0
    f = parse_poly("x1^2 + x2^2", 2)
    assert em.sphere_avg(f) == RadialPoly.monomial(2)
    assert em.operator_profile(f) == RadialPoly()


def test_parse_format_round_trip():
    f = parse_poly("1/2 * x1^2 x2 - 3 * x3 + 7", 3)
    assert parse_poly(format_poly(f), 3) == f
    assert f.value_at_origin() == 7


def test_parse_errors():
    with pytest.raises(ValueError):
        parse_poly("x1^^2")
    with pytest.raises(ValueError):
        parse_poly("x3", 2)
