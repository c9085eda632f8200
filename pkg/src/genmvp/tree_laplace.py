"""Functions on balls of the homogeneous tree T_q and the horocyclic sums.

A ball of radius R around the base vertex v is stored level by level.  The
first step of an address picks one of the q+1 neighbours of v; index q is
the marked neighbour w, so the cone C^{v-w} is everything whose address does
not start with q.  Later steps pick one of q children.

Values are exact: integer numerators (int64 when they fit, Python ints
otherwise) over one common positive denominator.  Functions that depend only
on the distance to v may be stored radially, one value per level, which
lets chi/constant/radial examples run on radii far beyond the dense budget.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping, Sequence

import numpy as np

from genmvp import kernels
from genmvp.laurent_coeffs import closed_form_a, coeff
from genmvp.reports import Report

VERTEX_BUDGET = 10_000_000
RANDOM_DENOMINATOR = math.lcm(*range(1, 21))
INT64_MAX = np.iinfo(np.int64).max

Address = tuple[int, ...]


def vertex_count(q: int, R: int) -> int:
    return 1 + (q + 1) * (q ** R - 1) // (q - 1)


def _check_tree(q: int, R: int, dense: bool = True) -> None:
    if not isinstance(q, int) or q < 2:
        raise ValueError(f"q must be an integer >= 2, got {q!r}")
    if R < 0:
        raise ValueError("radius must be nonnegative")
    if dense and vertex_count(q, R) > VERTEX_BUDGET:
        raise MemoryError(
            f"ball of radius {R} for q={q} has {vertex_count(q, R)} vertices "
            f"(budget {VERTEX_BUDGET})"
        )


def address_index(address: Sequence[int], q: int) -> tuple[int, int]:
    """(level, local index) of an address."""
    local = 0
    for i, b in enumerate(address):
        hi = q + 1 if i == 0 else q
        if not 0 <= b < hi:
            raise ValueError(f"invalid branch {b} at step {i} of {tuple(address)}")
        local = local * q + b if i else b
    return len(address), local


def index_address(level: int, local: int, q: int) -> Address:
    path = []
    for _ in range(level - 1):
        local, b = divmod(local, q)
        path.append(b)
    if level:
        path.append(local)
    return tuple(reversed(path))


def parse_address(text: str) -> Address:
    text = text.strip()
    return tuple(int(x) for x in text.split(".")) if text else ()


def format_address(address: Sequence[int]) -> str:
    return ".".join(str(b) for b in address)


def _as_array(values: Sequence[int]) -> np.ndarray:
    big = max((abs(v) for v in values), default=0)
    return np.array(values, dtype=np.int64 if big <= INT64_MAX else object)


@dataclass(frozen=True, eq=False)
class TreeFn:
    """Exact function on the ball of radius ``radius`` in T_q.

    ``num[i] / den`` is the value at flat index i (dense), or at every vertex
    of level i (``radial``).
    """

    q: int
    radius: int
    num: np.ndarray
    den: int
    tag: str = "explicit"
    radial: bool = False
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        expected = self.radius + 1 if self.radial else vertex_count(self.q, self.radius)
        if len(self.num) != expected:
            raise ValueError(f"expected {expected} numerators, got {len(self.num)}")
        if self.den <= 0:
            raise ValueError("denominator must be positive")

    @property
    def vertex_count(self) -> int:
        return vertex_count(self.q, self.radius)

    @property
    def offsets(self) -> list[int]:
        return kernels.level_offsets(self.q, self.radius)

    def value(self, address: Sequence[int]) -> Fraction:
        level, local = address_index(address, self.q)
        if level > self.radius:
            raise IndexError(f"address {tuple(address)} lies outside radius {self.radius}")
        raw = self.num[level] if self.radial else self.num[self.offsets[level] + local]
        return Fraction(int(raw), self.den)

    def __getitem__(self, address: Sequence[int]) -> Fraction:
        return self.value(address)

    def items(self, max_level: int | None = None) -> Iterable[tuple[Address, Fraction]]:
        top = self.radius if max_level is None else min(max_level, self.radius)
        offs = self.offsets
        for m in range(top + 1):
            for j in range(offs[m + 1] - offs[m]):
                raw = self.num[m] if self.radial else self.num[offs[m] + j]
                yield index_address(m, j, self.q), Fraction(int(raw), self.den)

    def dense(self) -> "TreeFn":
        if not self.radial:
            return self
        _check_tree(self.q, self.radius)
        offs = self.offsets
        counts = np.diff(offs)
        return TreeFn(self.q, self.radius, np.repeat(self.num, counts), self.den, self.tag)

    def restrict(self, radius: int) -> "TreeFn":
        if radius > self.radius:
            raise ValueError("cannot extend a ball function")
        if self.radial:
            return TreeFn(self.q, radius, self.num[: radius + 1].copy(), self.den, self.tag, True)
        end = vertex_count(self.q, radius)
        return TreeFn(self.q, radius, self.num[:end].copy(), self.den, self.tag)

    def is_zero(self) -> bool:
        return not bool(np.any(self.num != 0))

    def _aligned(self, other: "TreeFn"):
        if self.q != other.q:
            raise ValueError("trees with different q")
        R = min(self.radius, other.radius)
        a, b = self.restrict(R), other.restrict(R)
        if a.radial != b.radial:
            a, b = a.dense(), b.dense()
        den = math.lcm(a.den, b.den)
        return a, b, den, a.radial

    def __add__(self, other: "TreeFn") -> "TreeFn":
        a, b, den, radial = self._aligned(other)
        na = _scaled(a.num, den // a.den)
        nb = _scaled(b.num, den // b.den)
        return TreeFn(self.q, a.radius, _checked_add(na, nb), den, "combination", radial)

    def scale(self, c) -> "TreeFn":
        c = Fraction(c)
        num = _scaled(self.num, c.numerator)
        den = self.den * c.denominator
        return TreeFn(self.q, self.radius, num, den, self.tag, self.radial)

    def __sub__(self, other: "TreeFn") -> "TreeFn":
        return self + other.scale(-1)

    def to_dict(self) -> dict:
        return {
            "q": self.q,
            "radius": self.radius,
            "values": {format_address(a): str(v) for a, v in self.items()},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)


def _scaled(num: np.ndarray, c: int) -> np.ndarray:
    if c == 1:
        return num
    if num.dtype != object:
        big = int(np.abs(num).max()) if num.size else 0
        if big == 0:
            return num.copy()
        if big * abs(c) <= INT64_MAX:
            return num * np.int64(c)
        num = num.astype(object)
    return num * c


def _checked_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype != object and b.dtype != object:
        big = max(int(np.abs(a).max()), int(np.abs(b).max())) if a.size else 0
        if 2 * big <= INT64_MAX:
            return a + b
    return a.astype(object) + b.astype(object)


def from_values(q: int, radius: int, values: Mapping[Sequence[int], object],
                tag: str = "explicit") -> TreeFn:
    """Dense TreeFn from a complete address -> value map."""
    _check_tree(q, radius)
    total = vertex_count(q, radius)
    fracs: list[Fraction | None] = [None] * total
    offs = kernels.level_offsets(q, radius)
    for addr, v in values.items():
        level, local = address_index(tuple(addr), q)
        if level > radius:
            raise ValueError(f"address {tuple(addr)} outside radius {radius}")
        fracs[offs[level] + local] = Fraction(v)
    missing = [i for i, v in enumerate(fracs) if v is None]
    if missing:
        i = missing[0]
        level = next(m for m in range(radius + 1) if offs[m] <= i < offs[m + 1])
        raise ValueError(f"missing value for address {index_address(level, i - offs[level], q)}")
    den = reduce(math.lcm, (f.denominator for f in fracs), 1)
    return TreeFn(q, radius, _as_array([f.numerator * (den // f.denominator) for f in fracs]),
                  den, tag)


def from_json(text: str) -> TreeFn:
    data = json.loads(text)
    values = {parse_address(k): Fraction(v) for k, v in data["values"].items()}
    return from_values(int(data["q"]), int(data["radius"]), values, "explicit")


def make_radial(q: int, R: int, level_values: Sequence, tag: str = "radial") -> TreeFn:
    _check_tree(q, R, dense=False)
    if len(level_values) != R + 1:
        raise ValueError("need one value per level 0..R")
    fr = [Fraction(v) for v in level_values]
    den = reduce(math.lcm, (f.denominator for f in fr), 1)
    return TreeFn(q, R, _as_array([f.numerator * (den // f.denominator) for f in fr]), den,
                  tag, radial=True)


def make_chi(q: int, R: int) -> TreeFn:
    return make_radial(q, R, [1] + [0] * R, "chi")


def make_constant(c, q: int, R: int) -> TreeFn:
    return make_radial(q, R, [c] * (R + 1), "constant")


def make_random(q: int, R: int, seed: int) -> TreeFn:
    """Values ``p/r`` with p uniform in [-100, 100] and r uniform in [1, 20]."""
    _check_tree(q, R)
    rng = np.random.default_rng(seed)
    n = vertex_count(q, R)
    p = rng.integers(-100, 101, size=n, dtype=np.int64)
    r = rng.integers(1, 21, size=n, dtype=np.int64)
    num = p * (RANDOM_DENOMINATOR // r)
    return TreeFn(q, R, num, RANDOM_DENOMINATOR, f"random({seed})")


def make_busemann(q: int, R: int, end: Sequence[int] = (0,)) -> TreeFn:
    """Harmonic ``h(u) = q^{-b(u)}`` for the end through the ray starting with ``end``.

    The ray continues with branch 0 after the given prefix.  ``b`` is the
    Busemann function normalized to ``b(v) = 0``: for a vertex at distance m
    sharing c steps with the ray, ``b = m - 2c``.
    """
    _check_tree(q, R)
    end = tuple(end)
    if not end:
        raise ValueError("end prefix must contain at least one step")
    address_index(end, q)
    ray = (end + (0,) * R)[:R]
    ray_local = [address_index(ray[:m], q)[1] for m in range(R + 1)]
    offs = kernels.level_offsets(q, R)
    use_int = q ** (2 * R) <= INT64_MAX
    parts = []
    for m in range(R + 1):
        local = np.arange(offs[m + 1] - offs[m], dtype=np.int64)
        shared = np.zeros_like(local)
        match = np.ones(local.shape, dtype=bool)
        for lvl in range(1, m + 1):
            match &= (local // q ** (m - lvl)) == ray_local[lvl]
            shared += match
        expo = R + 2 * shared - m
        if use_int:
            parts.append(np.power(np.int64(q), expo))
        else:
            parts.append(np.array([q ** int(e) for e in expo], dtype=object))
    num = np.concatenate(parts) if use_int else np.concatenate(parts).astype(object)
    return TreeFn(q, R, num, q ** R, f"busemann({format_address(end)})")


def tree_laplacian(f: TreeFn) -> TreeFn:
    """``mean over neighbours - value``, on the ball of radius ``f.radius - 1``."""
    if f.radius < 1:
        raise ValueError("tree_laplacian needs radius >= 1")
    q = f.q
    if f.radial:
        v = [int(x) for x in f.num]
        out = [(q + 1) * (v[1] - v[0])]
        out += [v[m - 1] + q * v[m + 1] - (q + 1) * v[m] for m in range(1, f.radius)]
        g = reduce(math.gcd, out, f.den * (q + 1))
        return TreeFn(q, f.radius - 1, _as_array([x // g for x in out]), f.den * (q + 1) // g,
                      f"laplacian({f.tag})", True)
    num = kernels.laplacian_step(f.num, q, f.radius)
    return TreeFn(q, f.radius - 1, num, f.den * (q + 1), f"laplacian({f.tag})")


def laplacian_tower(f: TreeFn, K: int) -> list[TreeFn]:
    """``[f, Lf, ..., L^K f]`` (cached on ``f``)."""
    tower = f._cache.setdefault("tower", [f])
    while len(tower) <= K:
        tower.append(tree_laplacian(tower[-1]))
    return tower[: K + 1]


def laplacian_power(f: TreeFn, k: int) -> TreeFn:
    return laplacian_tower(f, k)[k]


def _branch_sums(f: TreeFn, n: int) -> list[int]:
    if f.radial:
        if n == 0:
            return [int(f.num[0])]
        return [int(f.num[n]) * f.q ** (n - 1)] * (f.q + 1)
    return kernels.branch_sums(f.num, f.q, f.radius, n)


def horocycle_sum(f: TreeFn, n: int, cone: int | None = None) -> Fraction:
    """Exact sum of ``f`` over the level-n vertices of the cone avoiding branch ``cone``.

    ``cone=None`` means the whole sphere S_n(v).
    """
    if not 0 <= n <= f.radius:
        raise IndexError(f"horocycle {n} outside radius {f.radius}")
    sums = _branch_sums(f, n)
    if n == 0:
        total = sums[0]
    elif cone is None:
        total = sum(sums)
    else:
        if not 0 <= cone <= f.q:
            raise ValueError("cone direction must be in 0..q")
        total = sum(s for b, s in enumerate(sums) if b != cone)
    return Fraction(total, f.den)


def horocycle_avg(f: TreeFn, n: int, cone: int | None = None) -> Fraction:
    """``f(C_n) = q^{-n} sum over C^{v-w}_n``; ``w`` is branch ``cone`` (default q)."""
    cone = f.q if cone is None else cone
    return horocycle_sum(f, n, cone) / f.q ** n


@dataclass
class PartialSumSeq:
    kind: str
    entries: list[tuple[int, Fraction]]

    def values(self) -> list[Fraction]:
        return [v for _, v in self.entries]

    def to_jsonl(self) -> str:
        return "".join(
            json.dumps({"kind": self.kind, "n": n, "num": str(v.numerator),
                        "den": str(v.denominator)}) + "\n"
            for n, v in self.entries
        )

    def diagnostics(self, window: int = 3) -> dict:
        return stabilization(self.values(), window)


def stabilization(values: Sequence[Fraction], window: int = 3) -> dict:
    """Limit diagnostic for a sequence of exact values.

    If the last ``window`` entries coincide, that value is the limit.
    Otherwise the Aitken estimate from the last three entries is reported
    (exact for sequences ``A + B r^n``) together with the successive
    difference ratios.
    """
    out: dict = {"stable": False, "limit": None, "ratios": []}
    if not values:
        return out
    tail = list(values[-window:])
    diffs = [b - a for a, b in zip(values, values[1:])]
    out["ratios"] = [str(d2 / d1) if d1 else None for d1, d2 in zip(diffs, diffs[1:])]
    if len(tail) == window and all(x == tail[0] for x in tail):
        out["stable"] = True
        out["limit"] = tail[0]
        return out
    if len(values) >= 3:
        a, b, c = values[-3:]
        den = c - 2 * b + a
        if den:
            out["limit"] = c - (c - b) ** 2 / den
    return out


def _need_radius(f: TreeFn, r: int) -> None:
    if f.radius < r:
        raise ValueError(f"need ball radius >= {r}, have {f.radius}")


def cone_identity_check(f: TreeFn, n: int, cone: int | None = None) -> Report:
    """``f(v) + q^n f(C_{2n}) == sum_{k<=n} a_{n,k} (L^k f)(C_n)`` exactly."""
    _need_radius(f, 2 * n)
    q = f.q
    lhs = f.value(()) + q ** n * horocycle_avg(f, 2 * n, cone)
    tower = laplacian_tower(f, n)
    rhs = sum((coeff(n, k, q) * horocycle_avg(tower[k], n, cone) for k in range(n + 1)),
              Fraction(0))
    diff = lhs - rhs
    return Report("cone_identity", {"q": q, "n": n, "f": f.tag, "cone": q if cone is None else cone},
                  diff == 0, None if diff == 0 else str(diff),
                  {"lhs": str(lhs), "rhs": str(rhs)})


def _partial_entry(f: TreeFn, n: int, cone: int | None) -> Fraction:
    q = f.q
    tower = laplacian_tower(f, n)
    return sum((closed_form_a(n, i, q) * horocycle_avg(tower[i], n, cone) for i in range(n + 1)),
               Fraction(0))


def horocyclic_partial_sums(f: TreeFn, N: int, cone: int | None = None) -> PartialSumSeq:
    """Entries ``sum_{i<=n} (q+1)^i (gamma_i(n) + q^n gamma_i(-n)) (L^i f)(C_n)``, n = 1..N."""
    _need_radius(f, 2 * N)
    return PartialSumSeq("cone", [(n, _partial_entry(f, n, cone)) for n in range(1, N + 1)])


def horosummability_seq(f: TreeFn, N: int, cone: int | None = None) -> PartialSumSeq:
    """Entries ``q^n f(C_{2n})``, n = 1..N; they tend to 0 iff f is horosummable."""
    _need_radius(f, 2 * N)
    return PartialSumSeq(
        "horosummability",
        [(n, f.q ** n * horocycle_avg(f, 2 * n, cone)) for n in range(1, N + 1)],
    )


def full_boundary_partial_sums(f: TreeFn, N: int) -> PartialSumSeq:
    """Entries ``q/(q+1) sum_{i<=n} a_{n,i} q^{-n} sum_{u in S_n(v)} (L^i f)(u)``."""
    _need_radius(f, 2 * N)
    q = f.q
    entries = []
    for n in range(1, N + 1):
        tower = laplacian_tower(f, n)
        s = sum((closed_form_a(n, i, q) * horocycle_sum(tower[i], n) for i in range(n + 1)),
                Fraction(0))
        entries.append((n, Fraction(q, q + 1) * s / q ** n))
    return PartialSumSeq("full-boundary", entries)


def full_boundary_check(f: TreeFn, N: int) -> Report:
    """Full-boundary entries against the q+1 cone partial sums.

    Every vertex of S_n(v) lies in exactly q of the q+1 cones at v, so the
    full entry equals ``q/(q+1) * (1/q) * sum over cones``.
    """
    q = f.q
    full = full_boundary_partial_sums(f, N)
    bad = []
    for n, value in full.entries:
        cones = sum((_partial_entry(f, n, c) for c in range(q + 1)), Fraction(0))
        expected = Fraction(q, q + 1) * cones / q
        if value != expected:
            bad.append({"n": n, "full": str(value), "from_cones": str(expected)})
    return Report("full_boundary", {"q": q, "N": N, "f": f.tag}, not bad,
                  None if not bad else json.dumps(bad[0]),
                  {"entries": [str(v) for v in full.values()]})


def is_harmonic(h: TreeFn) -> bool:
    return tree_laplacian(h).is_zero()


def holom_check(h: TreeFn, N: int, tol: float = 1e-10, cone: int | None = None) -> Report:
    """Two-stage horocyclic evaluation of a harmonic function.

    ``A_n = h(C_n)`` estimates ``A``; the second stage is the horocyclic
    integral of ``q^n (h - A)``, i.e. ``B_n = q^n (h(C_n) - A)``.  Also
    asserts ``h(v) + q^n h(C_{2n}) = (1 + q^n) h(C_n)`` for every n <= N.
    """
    if not is_harmonic(h):
        raise ValueError("holom_check needs a harmonic function")
    _need_radius(h, 2 * N)
    q = h.q
    center = h.value(())
    A_seq = [horocycle_avg(h, n, cone) for n in range(1, N + 1)]
    diag = stabilization(A_seq)
    identity_bad = [
        n for n in range(N + 1)
        if center + q ** n * horocycle_avg(h, 2 * n, cone) != (1 + q ** n) * horocycle_avg(h, n, cone)
    ]
    details = {"A_n": [str(a) for a in A_seq], "identity_failures": identity_bad,
               "stable": diag["stable"]}
    if diag["limit"] is None:
        return Report("holom", {"q": q, "N": N, "f": h.tag}, False, "inner sequence has no limit estimate",
                      details)
    A = diag["limit"]
    totals = [A + q ** n * (a - A) for n, a in enumerate(A_seq, start=1)]
    details.update({"A": str(A), "A_plus_B_n": [str(t) for t in totals]})
    residual = totals[-1] - center
    ok = not identity_bad and (residual == 0 or abs(float(residual)) <= tol)
    return Report("holom", {"q": q, "N": N, "f": h.tag, "tol": tol}, ok, str(residual), details)
