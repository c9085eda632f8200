"""Exact coefficient families for the Euclidean mean value operator.

The Bessel generating function at imaginary argument is handled in the
Gamma-normalized form ``b_k = 1 / (4^k k! (d/2)_k)`` so that every
coefficient is rational.  The operator coefficients ``alpha_{i,d}`` are the
formal reciprocal of that series.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from genmvp.reports import Report

DEFAULT_ORDER = 32


@dataclass(frozen=True)
class EvenSeries:
    """Truncated series ``sum_i coeffs[i] * x^(2i)`` with rational coefficients."""

    dim: int
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(Fraction(c) for c in self.coeffs))
        if not self.coeffs:
            raise ValueError("an EvenSeries needs at least the constant term")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, i: int) -> Fraction:
        return self.coeffs[i]

    def __len__(self) -> int:
        return len(self.coeffs)

    def evaluate(self, t: float) -> float:
        t2 = t * t
        return math.fsum(float(c) * t2 ** i for i, c in enumerate(self.coeffs))

    def records(self) -> list[dict]:
        return [
            {"d": self.dim, "i": i, "num": str(c.numerator), "den": str(c.denominator)}
            for i, c in enumerate(self.coeffs)
        ]


def pochhammer(a, k: int) -> Fraction:
    """Rising factorial ``a (a+1) ... (a+k-1)``; the empty product is 1."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    a = Fraction(a)
    out = Fraction(1)
    for j in range(k):
        out *= a + j
    return out


def _check_dim(d: int) -> None:
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")


def beta_norm_coeffs(d: int, N: int = DEFAULT_ORDER) -> EvenSeries:
    _check_dim(d)
    if N < 0:
        raise ValueError("truncation order must be nonnegative")
    half = Fraction(d, 2)
    coeffs = [Fraction(1)]
    # b_k / b_{k-1} = 1 / (4 k (d/2 + k - 1))
    for k in range(1, N + 1):
        coeffs.append(coeffs[-1] / (4 * k * (half + k - 1)))
    return EvenSeries(d, tuple(coeffs))


def invert_series(s: EvenSeries) -> EvenSeries:
    """Formal reciprocal of a series with unit constant term."""
    if s.coeffs[0] == 0:
        raise ZeroDivisionError("series with vanishing constant term is not invertible")
    if s.coeffs[0] != 1:
        raise ValueError("invert_series expects a unit constant term")
    c = s.coeffs
    t = [Fraction(1)]
    for k in range(1, len(c)):
        t.append(-sum(c[i] * t[k - i] for i in range(1, k + 1)))
    return EvenSeries(s.dim, tuple(t))


def alpha_coeffs(d: int, N: int = DEFAULT_ORDER) -> EvenSeries:
    return invert_series(beta_norm_coeffs(d, N))


def convolution_check(d: int, N: int = DEFAULT_ORDER,
                      alpha: Sequence[Fraction] | None = None) -> Report:
    """Check ``sum_{i<=k} alpha_i b_{k-i} = [k == 0]`` exactly for k <= N.

    ``alpha`` may be supplied to check a foreign (or tampered) table.
    """
    b = beta_norm_coeffs(d, N).coeffs
    a = alpha_coeffs(d, N).coeffs if alpha is None else tuple(Fraction(x) for x in alpha)
    if len(a) < N + 1:
        raise ValueError("alpha table shorter than requested order")
    violations = []
    for k in range(N + 1):
        acc = sum(a[i] * b[k - i] for i in range(k + 1))
        target = 1 if k == 0 else 0
        if acc != target:
            violations.append({"k": k, "residual": str(acc - target)})
    return Report(
        "convolution",
        {"d": d, "N": N},
        not violations,
        violations[0]["residual"] if violations else None,
        {"violations": violations},
    )


def bessel_tail_bound(d: int, t: float, N: int) -> float:
    """Upper bound on the omitted tail of the normalized Bessel series."""
    t2 = t * t
    if t2 >= 4 * N:
        return math.inf
    b_next = beta_norm_coeffs(d, N + 1).coeffs[-1]
    return float(b_next) * t2 ** (N + 1) / (1 - t2 / (4 * N))


def normalized_bessel_value(d: int, t: float, N: int = 40) -> float:
    """Floating value of ``sum_k b_k t^(2k)``.

    Raises ``ValueError`` when ``N`` terms leave a tail above 1e-14.
    """
    _check_dim(d)
    if t == 0:
        return 1.0
    if N < 1 or bessel_tail_bound(d, t, N) >= 1e-14:
        raise ValueError(f"order N={N} too small for t={t} (tail bound not met)")
    return beta_norm_coeffs(d, N).evaluate(t)


def eigen_product_check(d: int, t: float, N: int = 40, tol: float = 1e-10) -> Report:
    """Numeric check that ``Lambda_d(t) * sum_{i<=N} alpha_i t^(2i)`` is 1.

    This is the sphere mean of the operator applied to ``exp(<a, x>)`` with
    ``|a| = t`` and unit radius, divided by the center value.  Outside the
    convergence radius of the alpha series the partial sums blow up; the
    report records this as ``diverging``.
    """
    params = {"d": d, "t": t, "N": N, "tol": tol}
    if t == 0:
        return Report("eigen_product", params, True, "0", {"product": 1.0})
    # enough Bessel terms that the Bessel factor is accurate to machine precision
    m = max(N, 20)
    while bessel_tail_bound(d, t, m) >= 1e-17:
        m *= 2
    lam = normalized_bessel_value(d, t, m)
    alpha = alpha_coeffs(d, N)
    t2 = t * t
    terms = [float(c) * t2 ** i for i, c in enumerate(alpha.coeffs)]
    partial = math.fsum(terms)
    residual = abs(lam * partial - 1.0)
    # partial-sum growth: magnitude of the trailing terms compared with the head
    tail = max(abs(x) for x in terms[-4:])
    diverging = tail > 1e-3 * max(1.0, abs(partial)) or residual > 1.0
    return Report(
        "eigen_product",
        params,
        residual <= tol,
        repr(residual),
        {"product": lam * partial, "last_terms_max": tail, "diverging": diverging},
    )
