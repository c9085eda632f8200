"""Tree coefficients a_{n,k} from the decomposition of D_n over the S_k basis.

With ``D_n = x^n + q^n x^{-n}`` and ``S_k = ((x-1)(x-q))^k / ((q+1)^k x^k)``
every ``D_n`` has a unique expansion ``D_n = sum_{k<=|n|} a_{n,k} S_k``.
Three routes produce the same numbers:

* triangular elimination of the Laurent polynomial (``decompose_D``),
* the three-term recurrence propagated from rows 0 and 1 (``recurrence_table``),
* the closed form ``(q+1)^k (gamma_k(n) + q^n gamma_k(-n))`` with ``gamma_k``
  solved from a (k+1)x(k+1) linear system (``closed_form_a``).

``gamma_0`` is taken as the constant 1, since elimination forces
``a_{n,0} = 1 + q^n`` (in particular ``a_{0,0} = D_0 = 2``); the raw linear
system at k = 0 would give 1/2.
"""
from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping

from genmvp.linalg import SingularSystemError, solve_exact
from genmvp.reports import Report


def _check_q(q: int) -> None:
    if not isinstance(q, int) or q < 2:
        raise ValueError(f"q must be an integer >= 2, got {q!r}")


class LaurentPoly:
    """Finitely supported map exponent -> rational coefficient."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[int, object] | None = None):
        self.terms: dict[int, Fraction] = {}
        for n, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                self.terms[int(n)] = c

    @classmethod
    def monomial(cls, n: int, c=1) -> "LaurentPoly":
        return cls({n: c})

    def coeff(self, n: int) -> Fraction:
        return self.terms.get(n, Fraction(0))

    def is_zero(self) -> bool:
        return not self.terms

    def support(self) -> list[int]:
        return sorted(self.terms)

    def top(self) -> int:
        return max(self.terms)

    def bottom(self) -> int:
        return min(self.terms)

    def __add__(self, other: "LaurentPoly") -> "LaurentPoly":
        out = dict(self.terms)
        for n, c in other.terms.items():
            out[n] = out.get(n, 0) + c
        return LaurentPoly(out)

    def __neg__(self) -> "LaurentPoly":
        return LaurentPoly({n: -c for n, c in self.terms.items()})

    def __sub__(self, other: "LaurentPoly") -> "LaurentPoly":
        return self + (-other)

    def __mul__(self, other) -> "LaurentPoly":
        if not isinstance(other, LaurentPoly):
            c = Fraction(other)
            return LaurentPoly({n: c * v for n, v in self.terms.items()})
        out: dict[int, Fraction] = {}
        for n1, c1 in self.terms.items():
            for n2, c2 in other.terms.items():
                out[n1 + n2] = out.get(n1 + n2, 0) + c1 * c2
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __truediv__(self, c) -> "LaurentPoly":
        return self * (1 / Fraction(c))

    def __pow__(self, k: int) -> "LaurentPoly":
        out = LaurentPoly({0: 1})
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.terms == other.terms
        return NotImplemented

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        return sum((c * x ** n for n, c in self.terms.items()), Fraction(0))

    def __repr__(self):
        body = ", ".join(f"{n}: {c}" for n, c in sorted(self.terms.items()))
        return f"LaurentPoly({{{body}}})"


def make_D(n: int, q: int) -> LaurentPoly:
    _check_q(q)
    return LaurentPoly({n: 1}) + LaurentPoly({-n: Fraction(q) ** n})


@lru_cache(maxsize=None)
def _S(n: int, q: int) -> LaurentPoly:
    if n == 0:
        return LaurentPoly({0: 1})
    s1 = LaurentPoly({1: Fraction(1, q + 1), 0: -1, -1: Fraction(q, q + 1)})
    return _S(n - 1, q) * s1


def make_S(n: int, q: int) -> LaurentPoly:
    _check_q(q)
    if n < 0:
        raise ValueError("S_n is defined for n >= 0")
    return _S(n, q)


class DecompositionError(ArithmeticError):
    pass


def decompose_laurent(p: LaurentPoly, q: int) -> list[Fraction]:
    """Coefficients of ``p`` in the S basis, by stripping the top exponent.

    The leading term of ``S_i`` is ``x^i / (q+1)^i``.  A nonzero remainder
    means ``p`` is not in the span of the S basis.
    """
    _check_q(q)
    if p.is_zero():
        return [Fraction(0)]
    top = p.top()
    if top < 0:
        raise DecompositionError("no nonnegative exponent to eliminate")
    coeffs = [Fraction(0)] * (top + 1)
    rest = p
    while not rest.is_zero():
        m = rest.top()
        if m < 0:
            raise DecompositionError(f"nonzero remainder {rest!r}")
        a = rest.coeff(m) * (q + 1) ** m
        coeffs[m] = a
        rest = rest - make_S(m, q) * a
    return coeffs


@lru_cache(maxsize=None)
def _row(n: int, q: int) -> tuple[Fraction, ...]:
    if n < 0:
        scale = Fraction(1, q ** (-n))
        return tuple(a * scale for a in _row(-n, q))
    coeffs = decompose_laurent(make_D(n, q), q)
    if len(coeffs) != n + 1:
        raise DecompositionError(f"row {n} has unexpected length {len(coeffs)}")
    return tuple(coeffs)


def decompose_D(n: int, q: int) -> list[Fraction]:
    """``[a_{n,0}, ..., a_{n,|n|}]``; negative rows use ``D_{-n} = D_n / q^n``."""
    _check_q(q)
    return list(_row(n, q))


def coeff(n: int, k: int, q: int) -> Fraction:
    """``a_{n,k}`` from the decomposition, zero outside ``0 <= k <= |n|``."""
    if k < 0 or k > abs(n):
        return Fraction(0)
    return _row(n, q)[k]


@dataclass(frozen=True)
class CoeffTable:
    q: int
    N: int
    rows: dict[int, tuple[Fraction, ...]]

    def __getitem__(self, nk: tuple[int, int]) -> Fraction:
        n, k = nk
        row = self.rows[n]
        return row[k] if 0 <= k < len(row) else Fraction(0)

    def records(self) -> list[dict]:
        return [
            {"q": self.q, "n": n, "k": k, "num": str(a.numerator), "den": str(a.denominator)}
            for n in sorted(self.rows)
            for k, a in enumerate(self.rows[n])
        ]

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=["q", "n", "k", "num", "den"], lineterminator="\n")
        w.writeheader()
        w.writerows(self.records())
        return buf.getvalue()


def coeff_table(q: int, N: int, negative: bool = True) -> CoeffTable:
    lo = -N if negative else 0
    return CoeffTable(q, N, {n: _row(n, q) for n in range(lo, N + 1)})


def recurrence_table(q: int, N: int) -> dict[int, list[Fraction]]:
    """Rows 0..N from the recurrence a_{n+1,i} = (q+1)(a_{n,i-1} + a_{n,i}) - q a_{n-1,i}.

    Only rows 0 and 1 are taken from the decomposition.
    """
    _check_q(q)
    rows = {0: decompose_D(0, q), 1: decompose_D(1, q)}

    def get(n, i):
        r = rows[n]
        return r[i] if 0 <= i < len(r) else Fraction(0)

    for n in range(1, N):
        rows[n + 1] = [
            (q + 1) * (get(n, i - 1) + get(n, i)) - q * get(n - 1, i)
            for i in range(n + 2)
        ]
    return {n: rows[n] for n in range(N + 1)}


def recurrence_check(n: int, i: int, q: int) -> Report:
    """Both recurrences obtained by collecting S_i coefficients of S_1 D_n."""
    params = {"n": n, "i": i, "q": q}
    bad = []
    if i >= 1:
        lhs = coeff(n, i - 1, q)
        rhs = (coeff(n + 1, i, q) - (q + 1) * coeff(n, i, q) + q * coeff(n - 1, i, q)) / (q + 1)
        if lhs != rhs:
            bad.append(str(lhs - rhs))
    zero = coeff(n + 1, 0, q) - (q + 1) * coeff(n, 0, q) + q * coeff(n - 1, 0, q)
    if zero != 0:
        bad.append(str(zero))
    return Report("recurrence", params, not bad, bad[0] if bad else None)


def recursion_identity_check(n: int, q: int) -> Report:
    """``S_1 D_n == (D_{n+1} - (q+1) D_n + q D_{n-1}) / (q+1)`` as Laurent polynomials."""
    lhs = make_S(1, q) * make_D(n, q)
    rhs = (make_D(n + 1, q) - make_D(n, q) * (q + 1) + make_D(n - 1, q) * q) / (q + 1)
    diff = lhs - rhs
    return Report("recursion_identity", {"n": n, "q": q}, diff.is_zero(),
                  None if diff.is_zero() else repr(diff))


def reconstruction_check(n: int, q: int) -> Report:
    total = LaurentPoly()
    for k, a in enumerate(decompose_D(n, q)):
        total = total + make_S(k, q) * a
    diff = total - make_D(n, q)
    return Report("reconstruction", {"n": n, "q": q}, diff.is_zero(),
                  None if diff.is_zero() else repr(diff))


def linear_form(m: int, column: int, n: int, q: int, reverse: bool = False) -> Fraction:
    """``sum_j c_{j,m} a_{n+j,column}`` with ``c_{j,m}`` the coefficients of ``S_m``.

    ``reverse`` pairs ``c_{j,m}`` with ``a_{n-j,column}`` instead.
    """
    S = make_S(m, q)
    sign = -1 if reverse else 1
    return sum((c * coeff(n + sign * j, column, q) for j, c in S.terms.items()), Fraction(0))


def calibrate_linear_form(q: int, kmax: int = 4, nrange: Iterable[int] = range(-6, 7)) -> dict:
    """Brute-force which contraction of S-coefficients annihilates column k.

    Tries the form index ``m`` in ``{k, k+1}`` and both pairing orientations
    over every ``n`` in ``nrange``.  Overall scalings by powers of ``q+1`` do
    not affect whether a contraction vanishes, so they are not enumerated.
    """
    nrange = list(nrange)
    found: dict[str, list[int]] = {}
    for offset in (0, 1):
        for reverse in (False, True):
            ks = [
                k for k in range(kmax + 1)
                if (k + offset) >= 1
                and all(linear_form(k + offset, k, n, q, reverse) == 0 for n in nrange)
            ]
            found[f"m=k+{offset},{'reversed' if reverse else 'forward'}"] = ks
    return found


def linear_form_check(k: int, n: int, q: int) -> Report:
    """Column k is annihilated by the S_{k+1} contraction over the window n-k-1..n+k+1.

    The contraction with S_k itself (window width 2k+1) is reported as
    ``same_index_value`` for comparison; it does not vanish in general.
    """
    params = {"k": k, "n": n, "q": q}
    value = linear_form(k + 1, k, n, q)
    same = linear_form(k, k, n, q) if k >= 1 else None
    return Report(
        "linear_form", params, value == 0, None if value == 0 else str(value),
        {"same_index_value": None if same is None else str(same)},
    )


@dataclass(frozen=True)
class GammaPoly:
    """``gamma_k(n) = sum_j c_{k,j} n^j``; ``coeffs`` ordered ``c_{k,k} .. c_{k,0}``."""

    k: int
    q: int
    coeffs: tuple[Fraction, ...]
    det: Fraction | None = None

    def __call__(self, n) -> Fraction:
        acc = Fraction(0)
        for c in self.coeffs:
            acc = acc * n + c
        return acc

    def degree(self) -> int:
        for i, c in enumerate(self.coeffs):
            if c:
                return len(self.coeffs) - 1 - i
        return -1

    def to_dict(self) -> dict:
        return {"k": self.k, "q": self.q, "coeffs": [str(c) for c in self.coeffs]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())


def gamma_system(k: int, q: int) -> tuple[list[list[int]], list[int]]:
    """The (k+1)x(k+1) system for ``c_{k,k}..c_{k,0}``.

    Row 0 is ``2 gamma(0) = 0``; row j is ``gamma(j) + q^j gamma(-j)`` with
    right side 0 for j < k and 1 for j = k.  For k = 0 the single row reads
    ``2 c_{0,0} = 1``.
    """
    rows = [[0] * k + [2]]
    for j in range(1, k + 1):
        rows.append([j ** m * (1 + (-1) ** m * q ** j) for m in range(k, -1, -1)])
    rhs = [0] * k + [1]
    return rows, rhs


@lru_cache(maxsize=None)
def solve_gamma(k: int, q: int) -> GammaPoly:
    _check_q(q)
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return GammaPoly(0, q, (Fraction(1),), None)
    A, b = gamma_system(k, q)
    try:
        x, det = solve_exact(A, b)
    except SingularSystemError as exc:
        raise SingularSystemError(f"gamma system singular for k={k}, q={q}") from exc
    return GammaPoly(k, q, tuple(x), det)


def closed_form_a(n: int, k: int, q: int) -> Fraction:
    g = solve_gamma(k, q)
    return (q + 1) ** k * (g(n) + Fraction(q) ** n * g(-n))


class FitError(ArithmeticError):
    pass


def _poly_eval(asc: tuple[Fraction, ...], n) -> Fraction:
    return sum((c * Fraction(n) ** j for j, c in enumerate(asc)), Fraction(0))


def fit_P(k: int, q: int, N: int | None = None) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Fit ``a_{n,k} = P(n) + q^n Phat(n)`` with ``deg P, deg Phat <= k``.

    Uses rows ``n = k .. k+N-1`` from the decomposition: the first 2k+2 rows
    determine the fit and the rest must be matched exactly.  Coefficients are
    returned in ascending degree order.
    """
    if N is None:
        N = 2 * k + 4
    if N < 2 * k + 3:
        raise ValueError("need N >= 2k+3 sample rows")
    ns = list(range(k, k + N))
    m = 2 * k + 2
    A = [[Fraction(n) ** j for j in range(k + 1)] + [Fraction(q) ** n * n ** j for j in range(k + 1)]
         for n in ns[:m]]
    b = [coeff(n, k, q) for n in ns[:m]]
    x, _ = solve_exact(A, b)
    P, Ph = tuple(x[: k + 1]), tuple(x[k + 1:])
    for n in ns[m:]:
        if _poly_eval(P, n) + Fraction(q) ** n * _poly_eval(Ph, n) != coeff(n, k, q):
            raise FitError(f"fit for k={k} fails at n={n}")
    return P, Ph


def fit_check(k: int, q: int, N: int | None = None) -> Report:
    params = {"k": k, "q": q}
    try:
        P, Ph = fit_P(k, q, N)
    except FitError as exc:
        return Report("fit_P", params, False, str(exc))
    problems = []
    if any(Ph[j] * (-1) ** j != P[j] for j in range(k + 1)):
        problems.append("Phat(-n) != P(n)")
    diagonal = (q + 1) ** k if k > 0 else 2
    if _poly_eval(P, k) + Fraction(q) ** k * _poly_eval(P, -k) != diagonal:
        problems.append(f"P(k) + q^k P(-k) != {diagonal}")
    if k == 0 and _poly_eval(P, 1) != 1:
        problems.append("P_0(1) != 1")
    if k > 0 and P[0] != 0:
        problems.append("P(0) != 0")
    gamma = solve_gamma(k, q)
    if tuple(reversed(gamma.coeffs)) != tuple(c / (q + 1) ** k for c in P):
        problems.append("P != (q+1)^k gamma_k")
    return Report("fit_P", params, not problems, "; ".join(problems) or None,
                  {"P": [str(c) for c in P], "P_hat": [str(c) for c in Ph]})


def triple_agreement(q: int, N: int = 10) -> Report:
    rec = recurrence_table(q, N)
    bad = []
    for n in range(N + 1):
        for k in range(n + 1):
            a = coeff(n, k, q)
            if not (a == rec[n][k] == closed_form_a(n, k, q)):
                bad.append({"n": n, "k": k, "decomposition": str(a),
                            "recurrence": str(rec[n][k]), "closed_form": str(closed_form_a(n, k, q))})
    return Report("triple_agreement", {"q": q, "N": N}, not bad,
                  None if not bad else json.dumps(bad[0]), {"mismatches": bad})


def structural_check(q: int, N: int = 10) -> Report:
    """Diagonal, reflection, and gamma-degree identities for 0 <= k <= n <= N.

    The diagonal ``a_{n,n} = (q+1)^n`` holds for n >= 1; at n = 0 the entry is
    ``D_0 = 2``.
    """
    bad = []
    if coeff(0, 0, q) != 2:
        bad.append("a_{0,0} != 2")
    for n in range(N + 1):
        if n >= 1 and coeff(n, n, q) != (q + 1) ** n:
            bad.append(f"a_{{{n},{n}}} != (q+1)^{n}")
        for k in range(n + 1):
            if coeff(n, k, q) != q ** n * coeff(-n, k, q):
                bad.append(f"a_{{{n},{k}}} != q^{n} a_{{-{n},{k}}}")
    for k in range(1, N + 1):
        g = solve_gamma(k, q)
        if g.degree() > k:
            bad.append(f"deg gamma_{k} > {k}")
        if g(0) != 0:
            bad.append(f"gamma_{k}(0) != 0")
        if not g.det:
            bad.append(f"gamma system {k} singular")
    return Report("structural", {"q": q, "N": N}, not bad, bad[0] if bad else None,
                  {"failures": bad})
