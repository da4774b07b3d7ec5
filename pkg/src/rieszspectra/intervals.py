"""Exact interval-set arithmetic on [0,1) and the fiber-counting partitions.

Endpoints are kept as an exact rational plus an optional high-precision
irrational summand, so that orderings of values like {N*a} can be decided
robustly.  A comparison that cannot be decided at working precision raises
AmbiguousEndpoint instead of guessing.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath

from .errors import AmbiguousEndpoint, InvalidInput
from .precision import ambiguity_threshold, frac_to_mpf, hp, workprec


def _sign(x) -> int:
    return (x > 0) - (x < 0)


class Endpoint:
    """A real number split as exact rational part + optional irrational part.

    The irrational part is stored as an exact rational coefficient times an
    mpf base created at working precision, so that rational rescalings (the
    bread and butter of cell folding) are exact and values reached along
    different arithmetic paths still compare structurally.  Only the mixing
    of two different irrational bases rounds (at working precision).
    """

    __slots__ = ("rational", "irr_base", "irr_coeff")

    def __init__(self, rational=0, irrational=None):
        self.rational = Fraction(rational)
        base = None
        if irrational is not None:
            with workprec():
                base = mpmath.mpf(irrational)
            if base == 0:
                base = None
        self.irr_base = base
        self.irr_coeff = Fraction(1)

    @classmethod
    def _build(cls, rational: Fraction, base, coeff: Fraction) -> "Endpoint":
        e = cls.__new__(cls)
        e.rational = rational
        if base is None or coeff == 0:
            e.irr_base = None
            e.irr_coeff = Fraction(1)
        else:
            e.irr_base = base
            e.irr_coeff = coeff
        return e

    # -- conversions --------------------------------------------------

    @classmethod
    def coerce(cls, x) -> "Endpoint":
        if isinstance(x, Endpoint):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(x)
        if isinstance(x, float):
            return cls(Fraction(x))
        if isinstance(x, mpmath.mpf):
            return cls(0, x)
        if isinstance(x, str):
            return cls(0, hp(x))
        raise TypeError(f"cannot interpret {x!r} as an endpoint")

    def mpf(self) -> mpmath.mpf:
        with workprec():
            val = frac_to_mpf(self.rational)
            if self.irr_base is not None:
                c = self.irr_coeff
                val = val + self.irr_base * c.numerator / c.denominator
            return val

    def __float__(self) -> float:
        return float(self.mpf())

    @property
    def is_rational(self) -> bool:
        return self.irr_base is None

    def _same_irrational(self, other: "Endpoint") -> bool:
        if self.irr_base is None and other.irr_base is None:
            return True
        return (
            self.irr_base is not None
            and other.irr_base is not None
            and self.irr_coeff == other.irr_coeff
            and self.irr_base == other.irr_base
        )

    # -- comparisons ---------------------------------------------------

    def _cmp(self, other) -> int:
        other = Endpoint.coerce(other)
        if self._same_irrational(other):
            return _sign(self.rational - other.rational)
        with workprec():
            d = (self - other).mpf()
            if abs(d) < ambiguity_threshold():
                raise AmbiguousEndpoint(
                    f"comparison of {self!r} and {other!r} is below the "
                    f"working-precision threshold (|diff| ~ {mpmath.nstr(abs(d), 5)})"
                )
            return _sign(d)

    def __eq__(self, other):
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    # -- arithmetic ----------------------------------------------------

    def __add__(self, other):
        other = Endpoint.coerce(other)
        rat = self.rational + other.rational
        if other.irr_base is None:
            return Endpoint._build(rat, self.irr_base, self.irr_coeff)
        if self.irr_base is None:
            return Endpoint._build(rat, other.irr_base, other.irr_coeff)
        if self.irr_base == other.irr_base:
            return Endpoint._build(rat, self.irr_base, self.irr_coeff + other.irr_coeff)
        with workprec():
            c1, c2 = self.irr_coeff, other.irr_coeff
            mixed = (
                self.irr_base * c1.numerator / c1.denominator
                + other.irr_base * c2.numerator / c2.denominator
            )
        if mixed == 0:
            mixed = None
        return Endpoint._build(rat, mixed, Fraction(1))

    __radd__ = __add__

    def __neg__(self):
        return Endpoint._build(-self.rational, self.irr_base, -self.irr_coeff)

    def __sub__(self, other):
        return self + (-Endpoint.coerce(other))

    def __rsub__(self, other):
        return Endpoint.coerce(other) - self

    def __mul__(self, q):
        q = Fraction(q)
        return Endpoint._build(self.rational * q, self.irr_base, self.irr_coeff * q)

    __rmul__ = __mul__

    def floor(self) -> int:
        if self.irr_base is None:
            return math.floor(self.rational)
        with workprec():
            x = self.mpf()
            nearest = mpmath.nint(x)
            if abs(x - nearest) < ambiguity_threshold():
                raise AmbiguousEndpoint(
                    f"floor of {self!r} is within the precision threshold of an integer"
                )
            return int(mpmath.floor(x))

    def ceil(self) -> int:
        return -((-self).floor())

    def frac(self) -> "Endpoint":
        """Fractional part, keeping the irrational summand intact."""
        f = self.floor()
        return Endpoint._build(self.rational - f, self.irr_base, self.irr_coeff)

    def round_half_up(self) -> int:
        return (self + Fraction(1, 2)).floor()

    # -- serialization ------------------------------------------------

    def to_json(self) -> dict:
        rat = f"{self.rational.numerator}/{self.rational.denominator}"
        irr = None
        if self.irr_base is not None:
            with workprec():
                digits = int(mpmath.mp.dps)
                c = self.irr_coeff
                val = self.irr_base * c.numerator / c.denominator
                irr = mpmath.nstr(val, digits, strip_zeros=False)
        return {"rat": rat, "irr": irr}

    @classmethod
    def from_json(cls, obj: dict) -> "Endpoint":
        rat = Fraction(obj.get("rat", "0"))
        irr = obj.get("irr")
        return cls(rat, hp(irr) if irr is not None else None)

    def __repr__(self):
        if self.irr_base is None:
            return f"Endpoint({self.rational})"
        return (
            f"Endpoint({self.rational} + {self.irr_coeff}*"
            f"{mpmath.nstr(self.irr_base, 20)})"
        )


_ZERO = Endpoint(0)


def frac(x):
    """Fractional part x - floor(x) in [0,1); preserves the input kind."""
    if isinstance(x, Endpoint):
        return x.frac()
    if isinstance(x, (int, Fraction)):
        return Fraction(x) - math.floor(Fraction(x))
    if isinstance(x, mpmath.mpf):
        return Endpoint.coerce(x).frac().mpf()
    if isinstance(x, float):
        if not math.isfinite(x):
            raise InvalidInput("frac requires a finite input")
        return x - math.floor(x)
    raise TypeError(f"unsupported type for frac: {type(x)!r}")


def _cmp_key(e: Endpoint):
    return functools.cmp_to_key(Endpoint._cmp)(e)


class IntervalSet:
    """Finite union of half-open intervals [left, right), normalized.

    Normalization sorts the pieces, drops empty ones, and merges adjacent
    or overlapping pieces, so the stored representation is the canonical
    disjoint sorted form.
    """

    __slots__ = ("pieces",)

    def __init__(self, pairs: Iterable = ()):
        cleaned = []
        for left, right in pairs:
            left = Endpoint.coerce(left)
            right = Endpoint.coerce(right)
            c = left._cmp(right)
            if c == 0:
                continue  # [x, x) is empty by convention
            if c > 0:
                raise InvalidInput(f"interval with left > right: [{left!r}, {right!r})")
            cleaned.append((left, right))
        cleaned.sort(key=lambda p: _cmp_key(p[0]))
        merged: list = []
        for left, right in cleaned:
            if merged and merged[-1][1] >= left:
                if merged[-1][1] < right:
                    merged[-1] = (merged[-1][0], right)
            else:
                merged.append((left, right))
        self.pieces = tuple(merged)

    # -- constructors --------------------------------------------------

    @classmethod
    def empty(cls) -> "IntervalSet":
        return cls(())

    @classmethod
    def unit(cls) -> "IntervalSet":
        return cls([(0, 1)])

    @classmethod
    def from_floats(cls, pairs: Sequence) -> "IntervalSet":
        return cls([(Fraction(a), Fraction(b)) for a, b in pairs])

    # -- basic queries ---------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    def measure(self) -> Endpoint:
        total = Endpoint(0)
        for left, right in self.pieces:
            total = total + (right - left)
        return total

    def measure_mpf(self) -> mpmath.mpf:
        return self.measure().mpf()

    def __float__(self):
        return float(self.measure_mpf())

    def contains(self, x) -> bool:
        x = Endpoint.coerce(x)
        for left, right in self.pieces:
            if left <= x and x < right:
                return True
        return False

    def __eq__(self, other):
        if not isinstance(other, IntervalSet):
            return NotImplemented
        if len(self.pieces) != len(other.pieces):
            return False
        return all(
            l1 == l2 and r1 == r2
            for (l1, r1), (l2, r2) in zip(self.pieces, other.pieces)
        )

    def __repr__(self):
        if not self.pieces:
            return "IntervalSet(empty)"
        parts = ", ".join(
            f"[{float(l):.6g},{float(r):.6g})" for l, r in self.pieces
        )
        return f"IntervalSet({parts})"

    # -- set algebra (sweep-line merges) --------------------------------

    def _combine(self, other: "IntervalSet", keep) -> "IntervalSet":
        events = []
        for left, right in self.pieces:
            events.append((left, 0, +1))
            events.append((right, 0, -1))
        for left, right in other.pieces:
            events.append((left, 1, +1))
            events.append((right, 1, -1))
        if not events:
            return IntervalSet.empty()
        events.sort(key=lambda ev: _cmp_key(ev[0]))
        out = []
        depth = [0, 0]
        prev = None
        i = 0
        while i < len(events):
            point = events[i][0]
            if prev is not None and keep(depth[0] > 0, depth[1] > 0):
                out.append((prev, point))
            while i < len(events) and events[i][0]._cmp(point) == 0:
                depth[events[i][1]] += events[i][2]
                i += 1
            prev = point
        return IntervalSet(out)

    def union(self, other: "IntervalSet") -> "IntervalSet":
        return self._combine(other, lambda a, b: a or b)

    def intersect(self, other: "IntervalSet") -> "IntervalSet":
        return self._combine(other, lambda a, b: a and b)

    def difference(self, other: "IntervalSet") -> "IntervalSet":
        return self._combine(other, lambda a, b: a and not b)

    def symmetric_difference(self, other: "IntervalSet") -> "IntervalSet":
        return self._combine(other, lambda a, b: a != b)

    def complement(self, lo=0, hi=1) -> "IntervalSet":
        return IntervalSet([(lo, hi)]).difference(self)

    def shift(self, by) -> "IntervalSet":
        by = Endpoint.coerce(by)
        return IntervalSet([(l + by, r + by) for l, r in self.pieces])

    def scale(self, c) -> "IntervalSet":
        c = Fraction(c)
        if c <= 0:
            raise InvalidInput("scale factor must be positive")
        return IntervalSet([(l * c, r * c) for l, r in self.pieces])

    # -- serialization ------------------------------------------------

    def to_json(self) -> dict:
        return {
            "intervals": [
                {"left": l.to_json(), "right": r.to_json()} for l, r in self.pieces
            ]
        }

    @classmethod
    def from_json(cls, obj: dict) -> "IntervalSet":
        return cls(
            [
                (Endpoint.from_json(item["left"]), Endpoint.from_json(item["right"]))
                for item in obj["intervals"]
            ]
        )


def _check_subset_of_unit(S: IntervalSet) -> None:
    if S.is_empty:
        return
    if S.pieces[0][0] < 0 or S.pieces[-1][1] > 1:
        raise InvalidInput("set must be contained in [0,1)")


def fold_pattern(N: int, S: IntervalSet):
    """Partition [0, 1/N) into maximal pieces with a constant hit pattern.

    Returns a list of (left, right, ks) triples covering [0, 1/N), where ks
    is the sorted tuple of offsets k such that t + k/N lies in S for every t
    in [left, right).
    """
    if N < 1:
        raise InvalidInput("N must be a positive integer")
    _check_subset_of_unit(S)
    cell = Fraction(1, N)
    events = []
    for k in range(N):
        lo = Endpoint(k * cell)
        hi = Endpoint((k + 1) * cell)
        piece = S.intersect(IntervalSet([(lo, hi)])).shift(-k * cell)
        for left, right in piece.pieces:
            events.append((left, k, +1))
            events.append((right, k, -1))
    events.append((Endpoint(0), -1, 0))
    events.append((Endpoint(cell), -1, 0))
    events.sort(key=lambda ev: _cmp_key(ev[0]))
    out = []
    active: set = set()
    prev = None
    i = 0
    while i < len(events):
        point = events[i][0]
        if prev is not None and prev._cmp(point) < 0:
            out.append((prev, point, tuple(sorted(active))))
        while i < len(events) and events[i][0]._cmp(point) == 0:
            _, k, delta = events[i]
            if delta > 0:
                active.add(k)
            elif delta < 0:
                active.discard(k)
            i += 1
        prev = point
    return out


def fold_counts(N: int, S: IntervalSet):
    """Step function t -> #{k : t + k/N in S} on [0, 1/N).

    Returned as a list of (left, right, count) pieces partitioning [0, 1/N),
    with equal-count neighbors merged.
    """
    pattern = fold_pattern(N, S)
    out = []
    for left, right, ks in pattern:
        count = len(ks)
        if out and out[-1][2] == count:
            out[-1] = (out[-1][0], right, count)
        else:
            out.append((left, right, count))
    return out


def a_geq(N: int, S: IntervalSet, n: int) -> IntervalSet:
    """The subset of [0, 1/N) whose fiber meets S at least n times."""
    if not 1 <= n <= N:
        raise InvalidInput(f"level n={n} outside 1..{N}")
    return IntervalSet(
        (left, right) for left, right, ks in fold_pattern(N, S) if len(ks) >= n
    )


def a_geq_all(N: int, S: IntervalSet) -> list[IntervalSet]:
    """All N nested fiber-count sets from a single folding pass."""
    pattern = fold_pattern(N, S)
    return [
        IntervalSet((l, r) for l, r, ks in pattern if len(ks) >= n)
        for n in range(1, N + 1)
    ]


def a_exact(N: int, S: IntervalSet, n: int) -> IntervalSet:
    """The subset of [0, 1/N) whose fiber meets S exactly n times."""
    if not 0 <= n <= N:
        raise InvalidInput(f"level n={n} outside 0..{N}")
    return IntervalSet(
        (left, right) for left, right, ks in fold_pattern(N, S) if len(ks) == n
    )


def b_exact(N: int, S: IntervalSet, n: int) -> IntervalSet:
    """The points of S whose fiber meets S exactly n times."""
    if not 1 <= n <= N:
        raise InvalidInput(f"level n={n} outside 1..{N}")
    cell = Fraction(1, N)
    pairs = []
    for left, right, ks in fold_pattern(N, S):
        if len(ks) != n:
            continue
        for k in ks:
            pairs.append((left + k * cell, right + k * cell))
    return IntervalSet(pairs)


def grid_separation_ok(N: int, endpoints: Sequence) -> bool:
    """True iff every gap between consecutive members of {0, endpoints.., 1}
    contains some k/N as an interior point."""
    if N < 1:
        raise InvalidInput("N must be a positive integer")
    pts = [Endpoint(0)]
    for e in endpoints:
        pts.append(Endpoint.coerce(e))
    pts.append(Endpoint(1))
    for p, q in zip(pts, pts[1:]):
        if not p < q:
            raise InvalidInput("endpoints must be strictly increasing in (0,1)")
    for p, q in zip(pts, pts[1:]):
        k_lo = (p * N).floor() + 1
        # k_lo/N is the smallest grid point strictly above p
        if Endpoint(k_lo) >= q * N:
            return False
    return True
