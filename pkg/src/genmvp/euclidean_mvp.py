"""Laplacian calculus on polynomials, exact sphere averages and the radial operator.

All sphere integrals are volume-normalized averages, so the pi factors in
``Vol(S^{d-1}(r))`` never appear and every check is an exact identity over
the rationals.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from genmvp.polynomials import MultiPoly, RadialPoly, RadialProfile
from genmvp.reports import Report
from genmvp.series_kernel import alpha_coeffs, eigen_product_check  # noqa: F401


def laplacian(f: MultiPoly) -> MultiPoly:
    out = MultiPoly(f.dim)
    for i in range(f.dim):
        out = out + f.diff(i, 2)
    return out


def laplacian_power(f: MultiPoly, i: int) -> MultiPoly:
    if i < 0:
        raise ValueError("power must be nonnegative")
    for _ in range(i):
        if f.is_zero():
            break
        f = laplacian(f)
    return f


def laplacian_tower(f: MultiPoly) -> list[MultiPoly]:
    """``[f, Lf, L^2 f, ...]`` up to the last nonzero power."""
    tower = [f]
    while not tower[-1].is_zero() and tower[-1].degree() >= 2:
        tower.append(laplacian(tower[-1]))
    return tower


def _double_factorial(n: int) -> int:
    out = 1
    while n > 1:
        out *= n
        n -= 2
    return out


def sphere_avg_monomial(exps: Sequence[int], d: int) -> Fraction:
    """Average of ``prod x_i^e_i`` over ``S^{d-1}(r)`` divided by ``r^|e|``.

    For d = 1 the "sphere" is the two-point set ``{-r, r}``.
    """
    if len(exps) != d:
        raise ValueError(f"exponent vector of length {len(exps)} for dimension {d}")
    if any(e % 2 for e in exps):
        return Fraction(0)
    m = sum(exps) // 2
    num = 1
    for e in exps:
        num *= _double_factorial(e - 1)
    den = 1
    for j in range(m):
        den *= d + 2 * j
    return Fraction(num, den)


def sphere_avg(f: MultiPoly) -> RadialProfile:
    out: dict[int, Fraction] = {}
    for e, c in f.terms.items():
        rho = sphere_avg_monomial(e, f.dim)
        if rho:
            n = sum(e)
            out[n] = out.get(n, 0) + c * rho
    return RadialPoly.from_dict(out)


def radial_delta(g: RadialPoly, d: int) -> RadialPoly:
    """``d/dx ( x^{d-1} d/dx ( g / x^{d-1} ) )``; ``g`` must be divisible by ``x^{d-1}``."""
    if d < 1:
        raise ValueError("dimension must be positive")
    if not g.is_zero() and g.shift < d - 1:
        raise ValueError(f"g is not divisible by x^{d - 1}")
    inner = g.shifted(-(d - 1)).derivative()
    return inner.shifted(d - 1).derivative()


def radial_delta_power(g: RadialPoly, d: int, i: int) -> RadialPoly:
    for _ in range(i):
        if g.is_zero():
            break
        g = radial_delta(g, d)
    return g


def radial_operator(g: RadialPoly, d: int, N: int) -> RadialPoly:
    """``sum_{i<=N} alpha_{i,d} x^{2i} (radial_delta)^i g``."""
    alpha = alpha_coeffs(d, N).coeffs
    out = RadialPoly()
    term = g
    for i in range(N + 1):
        if term.is_zero():
            break
        out = out + term.shifted(2 * i).scale(alpha[i])
        term = radial_delta(term, d)
    return out


def annihilation_check(k: int, d: int, N: int = 32) -> Report:
    params = {"k": k, "d": d, "N": N}
    if N < k:
        raise ValueError("need N >= k alpha terms")
    result = radial_operator(RadialPoly.monomial(2 * k + d - 1), d, N)
    expected = RadialPoly.monomial(d - 1) if k == 0 else RadialPoly()
    diff = result - expected
    return Report(
        "annihilation", params, diff.is_zero(),
        None if diff.is_zero() else str(diff), {"result": str(result)},
    )


def sphere_integral_profile(f: MultiPoly) -> RadialPoly:
    """``x^{d-1}`` times the sphere average: the sphere integral up to ``Vol(S^{d-1}(1))``."""
    return sphere_avg(f).shifted(f.dim - 1)


def commuting_check(f: MultiPoly, d: int | None = None, n: int = 1) -> Report:
    d = f.dim if d is None else d
    if d != f.dim:
        raise ValueError("dimension mismatch")
    params = {"d": d, "n": n, "f": str(f)}
    lhs = sphere_integral_profile(laplacian_power(f, n))
    rhs = radial_delta_power(sphere_integral_profile(f), d, n)
    diff = lhs - rhs
    return Report("commuting", params, diff.is_zero(), None if diff.is_zero() else str(diff))


def operator_profile(f: MultiPoly) -> RadialProfile:
    """Sphere average at radius r of ``sum_i alpha_{i,d} r^{2i} L^i f``, as a polynomial in r."""
    tower = laplacian_tower(f)
    alpha = alpha_coeffs(f.dim, max(len(tower) - 1, 0)).coeffs
    out = RadialPoly()
    for i, g in enumerate(tower):
        out = out + sphere_avg(g).shifted(2 * i).scale(alpha[i])
    return out


def mvp_check(f: MultiPoly, d: int | None = None) -> Report:
    d = f.dim if d is None else d
    if d != f.dim:
        raise ValueError("dimension mismatch")
    profile = operator_profile(f)
    diff = profile - RadialPoly.from_dict({0: f.value_at_origin()})
    bad = [n for n, _ in diff.terms]
    return Report(
        "mvp", {"d": d, "f": str(f)}, diff.is_zero(),
        None if diff.is_zero() else str(diff),
        {"offending_powers": bad, "profile": str(profile)},
    )
