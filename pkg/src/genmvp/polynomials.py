"""Exact multivariate and radial polynomials over the rationals."""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

Exponents = tuple[int, ...]


def _clean(terms: Mapping) -> dict:
    return {k: Fraction(v) for k, v in terms.items() if v != 0}


class MultiPoly:
    """Polynomial in ``dim`` variables; ``terms`` maps exponent tuples to coefficients."""

    __slots__ = ("dim", "terms")

    def __init__(self, dim: int, terms: Mapping[Exponents, object] | None = None):
        if dim < 1:
            raise ValueError("dimension must be positive")
        self.dim = dim
        self.terms: dict[Exponents, Fraction] = {}
        for e, c in (terms or {}).items():
            e = tuple(int(x) for x in e)
            if len(e) != dim:
                raise ValueError(f"exponent vector {e} does not have length {dim}")
            if any(x < 0 for x in e):
                raise ValueError(f"negative exponent in {e}")
            c = Fraction(c)
            if c:
                self.terms[e] = self.terms.get(e, Fraction(0)) + c
        self.terms = _clean(self.terms)

    @classmethod
    def constant(cls, dim: int, c) -> "MultiPoly":
        return cls(dim, {(0,) * dim: c})

    @classmethod
    def monomial(cls, exps: Iterable[int], c=1) -> "MultiPoly":
        e = tuple(exps)
        return cls(len(e), {e: c})

    @classmethod
    def variable(cls, dim: int, i: int) -> "MultiPoly":
        e = [0] * dim
        e[i] = 1
        return cls(dim, {tuple(e): 1})

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def value_at_origin(self) -> Fraction:
        return self.terms.get((0,) * self.dim, Fraction(0))

    def __call__(self, *point) -> Fraction:
        if len(point) != self.dim:
            raise ValueError("wrong number of coordinates")
        total = Fraction(0)
        for e, c in self.terms.items():
            m = c
            for x, k in zip(point, e):
                m *= Fraction(x) ** k
            total += m
        return total

    def _check(self, other: "MultiPoly") -> None:
        if other.dim != self.dim:
            raise ValueError("dimension mismatch")

    def __add__(self, other):
        if not isinstance(other, MultiPoly):
            other = MultiPoly.constant(self.dim, other)
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return MultiPoly(self.dim, out)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly(self.dim, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other if isinstance(other, MultiPoly) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            c = Fraction(other)
            return MultiPoly(self.dim, {e: c * v for e, v in self.terms.items()})
        self._check(other)
        out: dict[Exponents, Fraction] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, 0) + c1 * c2
        return MultiPoly(self.dim, out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.dim == other.dim and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.dim, frozenset(self.terms.items())))

    def diff(self, i: int, times: int = 1) -> "MultiPoly":
        out: dict[Exponents, Fraction] = {}
        for e, c in self.terms.items():
            k = e[i]
            if k < times:
                continue
            factor = 1
            for j in range(times):
                factor *= k - j
            ne = e[:i] + (k - times,) + e[i + 1:]
            out[ne] = out.get(ne, 0) + c * factor
        return MultiPoly(self.dim, out)

    def __repr__(self):
        return f"MultiPoly({self.dim}, {format_poly(self)!r})"

    def __str__(self):
        return format_poly(self)


def format_poly(f: MultiPoly) -> str:
    if f.is_zero():
        return "0"
    parts = []
    for e in sorted(f.terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
        c = f.terms[e]
        mono = " ".join(
            f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" for i, k in enumerate(e) if k
        )
        parts.append(f"{c} * {mono}" if mono else str(c))
    return " + ".join(parts)


_VAR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def parse_poly(text: str, dim: int | None = None) -> MultiPoly:
    """Parse ``c * x1^a x2^b + ...``; coefficients are integers or ``p/q``.

    A ``-`` between terms is accepted as shorthand for adding a negated term.
    """
    src = text.strip()
    if not src:
        raise ValueError("empty polynomial")
    src = re.sub(r"(?<=[\w)])\s*-", "+-", src)
    parsed: list[tuple[Fraction, dict[int, int]]] = []
    for raw in src.split("+"):
        term = raw.strip()
        if not term:
            raise ValueError(f"empty term in {text!r}")
        sign = 1
        while term.startswith("-"):
            sign = -sign
            term = term[1:].strip()
        if "*" in term:
            coef_s, mono_s = (s.strip() for s in term.split("*", 1))
        elif term[0] == "x":
            coef_s, mono_s = "1", term
        else:
            coef_s, mono_s = term, ""
        try:
            coef = Fraction(coef_s) * sign
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"bad coefficient {coef_s!r}") from exc
        powers: dict[int, int] = {}
        for factor in mono_s.replace("*", " ").split():
            m = _VAR.match(factor)
            if not m or int(m.group(1)) < 1:
                raise ValueError(f"bad factor {factor!r}")
            idx = int(m.group(1)) - 1
            powers[idx] = powers.get(idx, 0) + int(m.group(2) or 1)
        parsed.append((coef, powers))
    need = max((max(p, default=-1) for _, p in parsed), default=-1) + 1
    if dim is None:
        dim = max(need, 1)
    elif need > dim:
        raise ValueError(f"variable x{need} exceeds dimension {dim}")
    terms: dict[Exponents, Fraction] = {}
    for coef, powers in parsed:
        e = tuple(powers.get(i, 0) for i in range(dim))
        terms[e] = terms.get(e, 0) + coef
    return MultiPoly(dim, terms)


def random_multipoly(dim: int, degree: int, rng: random.Random,
                     n_terms: int | None = None) -> MultiPoly:
    """Random polynomial of total degree <= ``degree`` with small rational coefficients."""
    if n_terms is None:
        n_terms = rng.randint(1, 8)
    terms: dict[Exponents, Fraction] = {}
    for _ in range(n_terms):
        total = rng.randint(0, degree)
        # random composition of total into dim parts
        cuts = sorted(rng.randint(0, total) for _ in range(dim - 1))
        e = tuple(b - a for a, b in zip([0] + cuts, cuts + [total]))
        c = Fraction(rng.randint(-9, 9), rng.randint(1, 6))
        terms[e] = terms.get(e, 0) + c
    return MultiPoly(dim, terms)


@dataclass(frozen=True)
class RadialPoly:
    """Univariate polynomial in ``x`` stored sparsely; value ``sum c_n x^n``.

    ``shift`` and ``coeffs`` give the canonical ``x^shift * poly(x)`` view with
    ``poly(0) != 0`` (or the zero polynomial).
    """

    terms: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def from_dict(cls, terms: Mapping[int, object]) -> "RadialPoly":
        items = []
        for n, c in terms.items():
            if int(n) < 0:
                raise ValueError("negative power in RadialPoly")
            c = Fraction(c)
            if c:
                items.append((int(n), c))
        return cls(tuple(sorted(items)))

    @classmethod
    def monomial(cls, n: int, c=1) -> "RadialPoly":
        return cls.from_dict({n: c})

    def as_dict(self) -> dict[int, Fraction]:
        return dict(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def shift(self) -> int:
        return self.terms[0][0] if self.terms else 0

    @property
    def coeffs(self) -> tuple[Fraction, ...]:
        if not self.terms:
            return ()
        s = self.shift
        top = self.terms[-1][0]
        d = self.as_dict()
        return tuple(d.get(s + j, Fraction(0)) for j in range(top - s + 1))

    def coeff(self, n: int) -> Fraction:
        return self.as_dict().get(n, Fraction(0))

    def __add__(self, other: "RadialPoly") -> "RadialPoly":
        out = self.as_dict()
        for n, c in other.terms:
            out[n] = out.get(n, 0) + c
        return RadialPoly.from_dict(out)

    def __sub__(self, other: "RadialPoly") -> "RadialPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "RadialPoly":
        c = Fraction(c)
        return RadialPoly.from_dict({n: c * v for n, v in self.terms})

    def shifted(self, k: int) -> "RadialPoly":
        """Multiply by ``x^k``; negative ``k`` requires exact divisibility."""
        if self.terms and self.shift + k < 0:
            raise ValueError(f"x^{-k} does not divide the polynomial")
        return RadialPoly(tuple((n + k, c) for n, c in self.terms))

    def derivative(self) -> "RadialPoly":
        return RadialPoly.from_dict({n - 1: n * c for n, c in self.terms if n})

    def __call__(self, x) -> Fraction:
        x = Fraction(x)
        return sum((c * x ** n for n, c in self.terms), Fraction(0))

    def __str__(self):
        if not self.terms:
            return "0"
        return " + ".join(f"{c}*x^{n}" if n else str(c) for n, c in reversed(self.terms))


# The sphere-average profile in r uses the same univariate representation.
RadialProfile = RadialPoly
