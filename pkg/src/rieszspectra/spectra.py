"""Frequency sets as unions of arithmetic cosets with optional density filters.

A Spectrum is scale * (union of coset terms).  A term with the "all" filter
is the full coset modulus*Z + offset; a term with a density filter keeps the
rounded subsequence {modulus*(round(n/beta) + phase) + offset}, the
single-interval generator used throughout the constructions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .errors import (
    AmbiguousEndpoint,
    DegenerateBeta,
    IncompatibleShift,
    InvalidInput,
    OverlappingTerms,
)
from .intervals import Endpoint
from .precision import ambiguity_threshold, workprec

DEFAULT_BETA_FLOOR = Fraction(1, 64)


@dataclass(frozen=True)
class AvdoninFilter:
    """Rounded-subsequence filter: keeps round_half_up(n/beta) + phase."""

    beta: Endpoint
    phase: int = 0

    def elements_in(self, lo: Fraction, hi: Fraction) -> list[int]:
        """All filtered values r + phase with r in the rounded image and
        r + phase in [lo, hi]."""
        beta = self.beta
        r_lo = lo - self.phase
        r_hi = hi - self.phase
        out = []
        if beta.is_rational:
            bq = beta.rational
            n_lo = math.ceil(bq * (Fraction(r_lo) - Fraction(1, 2)))
            n_hi = math.floor(bq * (Fraction(r_hi) + Fraction(1, 2)))
            for n in range(n_lo - 2, n_hi + 3):
                r = Fraction(n, 1) / bq + Fraction(1, 2)
                r = math.floor(r)
                if r_lo <= r <= r_hi:
                    out.append(r + self.phase)
        else:
            with workprec():
                bm = beta.mpf()
                lo_m = mpmath.mpf(r_lo.numerator) / r_lo.denominator
                hi_m = mpmath.mpf(r_hi.numerator) / r_hi.denominator
                half = mpmath.mpf("0.5")
                n_lo = int(mpmath.floor(bm * (lo_m - half))) - 2
                n_hi = int(mpmath.ceil(bm * (hi_m + half))) + 2
            for n in range(n_lo, n_hi + 1):
                r = _round_ratio_half_up(n, beta)
                if r_lo <= r <= r_hi:
                    out.append(r + self.phase)
        # rounded image is strictly increasing, dedupe defensively
        return sorted(set(out))

    def to_json(self) -> dict:
        with workprec():
            digits = int(mpmath.mp.dps)
            beta_str = mpmath.nstr(self.beta.mpf(), digits, strip_zeros=False)
        return {"avdonin": {"beta": beta_str, "phase": self.phase}}


def _round_ratio_half_up(n: int, beta: Endpoint) -> int:
    """round_half_up(n / beta) with an ambiguity guard at working precision."""
    with workprec():
        shifted = mpmath.mpf(n) / beta.mpf() + mpmath.mpf("0.5")
        if abs(shifted - mpmath.nint(shifted)) < ambiguity_threshold():
            raise AmbiguousEndpoint(
                f"rounding of {n}/beta is a tie at working precision"
            )
        return int(mpmath.floor(shifted))


@dataclass(frozen=True)
class CosetTerm:
    """scale-free integer component: modulus*Z + offset, optionally filtered."""

    modulus: int
    offset: int
    filter: Optional[AvdoninFilter] = None

    def __post_init__(self):
        if self.modulus < 1:
            raise InvalidInput("modulus must be positive")
        if not 0 <= self.offset < self.modulus:
            raise InvalidInput("offset must lie in 0..modulus-1")

    def integers_in(self, lo: Fraction, hi: Fraction) -> list[int]:
        M, j = self.modulus, self.offset
        k_lo = Fraction(lo - j, M)
        k_hi = Fraction(hi - j, M)
        if self.filter is None:
            return [
                M * k + j
                for k in range(math.ceil(k_lo), math.floor(k_hi) + 1)
            ]
        return [M * r + j for r in self.filter.elements_in(k_lo, k_hi)]

    def to_json(self) -> dict:
        filt = "all" if self.filter is None else self.filter.to_json()
        return {"modulus": self.modulus, "offset": self.offset, "filter": filt}

    @classmethod
    def from_json(cls, obj: dict) -> "CosetTerm":
        filt = obj.get("filter", "all")
        if filt == "all" or filt is None:
            parsed = None
        else:
            av = filt["avdonin"]
            parsed = AvdoninFilter(
                beta=Endpoint.coerce(str(av["beta"])), phase=int(av.get("phase", 0))
            )
        return cls(modulus=int(obj["modulus"]), offset=int(obj["offset"]), filter=parsed)


def _term_sort_key(t: CosetTerm):
    return (t.modulus, t.offset, t.filter is not None)


@dataclass(frozen=True)
class Spectrum:
    """scale * (union of coset terms); immutable."""

    scale: Fraction = Fraction(1)
    terms: tuple[CosetTerm, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.scale <= 0:
            raise InvalidInput("scale must be positive")
        object.__setattr__(self, "scale", Fraction(self.scale))
        object.__setattr__(self, "terms", tuple(self.terms))

    @property
    def is_empty(self) -> bool:
        return not self.terms

    # -- enumeration ---------------------------------------------------

    def enumerate_integers(self, lo, hi) -> list[int]:
        """All underlying integers m with lo <= m <= hi, ascending.

        Raises OverlappingTerms if two terms generate the same integer.
        """
        lo = Fraction(lo)
        hi = Fraction(hi)
        out: list[int] = []
        for term in self.terms:
            out.extend(term.integers_in(lo, hi))
        out.sort()
        for u, v in zip(out, out[1:]):
            if u == v:
                raise OverlappingTerms(f"duplicate frequency {u} inside window")
        return out

    def enumerate(self, T) -> list[Fraction]:
        """Frequencies scale*m inside [-T, T], ascending."""
        T = Fraction(T)
        if T < 0:
            raise InvalidInput("window must be nonnegative")
        bound = T / self.scale
        ms = self.enumerate_integers(-bound, bound)
        return [self.scale * m for m in ms]

    # -- transformations -------------------------------------------------

    def shift(self, a) -> "Spectrum":
        """Translate by a; a must be a multiple of the scale."""
        a = Fraction(a)
        s = a / self.scale
        if s.denominator != 1:
            raise IncompatibleShift(f"shift {a} is not a multiple of scale {self.scale}")
        s = int(s)
        new_terms = []
        for t in self.terms:
            raw = t.offset + s
            off = raw % t.modulus
            carry = (raw - off) // t.modulus
            filt = t.filter
            if filt is not None and carry:
                filt = AvdoninFilter(beta=filt.beta, phase=filt.phase + carry)
            elif filt is None:
                filt = None
            new_terms.append(CosetTerm(t.modulus, off, filt))
        return Spectrum(self.scale, tuple(new_terms))

    def dilate(self, c) -> "Spectrum":
        """Multiply every frequency by the positive rational c."""
        c = Fraction(c)
        if c <= 0:
            raise InvalidInput("dilation factor must be positive")
        return Spectrum(self.scale * c, self.terms)

    def scale_integers(self, factor: int) -> "Spectrum":
        """Multiply the underlying integer set by a positive integer, keeping
        the scale; maps a subset of Z onto a subset of factor*Z exactly."""
        if factor < 1:
            raise InvalidInput("factor must be a positive integer")
        new_terms = tuple(
            CosetTerm(t.modulus * factor, t.offset * factor, t.filter)
            for t in self.terms
        )
        return Spectrum(self.scale, new_terms)

    def union(self, other: "Spectrum") -> "Spectrum":
        if self.scale != other.scale:
            raise InvalidInput("can only union spectra with equal scale")
        return Spectrum(self.scale, self.terms + other.terms)

    def sorted_terms(self) -> "Spectrum":
        return Spectrum(self.scale, tuple(sorted(self.terms, key=_term_sort_key)))

    # -- bookkeeping -----------------------------------------------------

    def density(self):
        """Limiting count density #(spectrum in [-T,T]) / (2T).

        Exact Fraction when every term is a full coset, float otherwise.
        """
        exact = Fraction(0)
        inexact = 0.0
        has_inexact = False
        for t in self.terms:
            if t.filter is None:
                exact += Fraction(1, t.modulus)
            else:
                has_inexact = True
                inexact += float(t.filter.beta.mpf()) / t.modulus
        if has_inexact:
            return (float(exact) + inexact) / float(self.scale)
        return exact / self.scale

    def subset_of_lattice(self, N: int, window: int = 2048) -> bool:
        """True iff every enumerated integer in [-window, window] is = 0 mod N."""
        if self.scale != 1:
            return False
        structural = all(
            t.modulus % N == 0 and t.offset % N == 0 for t in self.terms
        )
        if structural:
            return True
        return all(m % N == 0 for m in self.enumerate_integers(-window, window))

    # -- serialization ---------------------------------------------------

    def to_json(self) -> dict:
        return {
            "scale": f"{self.scale.numerator}/{self.scale.denominator}",
            "terms": [t.to_json() for t in self.terms],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Spectrum":
        return cls(
            scale=Fraction(obj["scale"]),
            terms=tuple(CosetTerm.from_json(t) for t in obj.get("terms", ())),
        )


def integer_lattice(modulus: int = 1, offset: int = 0) -> Spectrum:
    """The coset modulus*Z + offset as a scale-1 spectrum."""
    return Spectrum(Fraction(1), (CosetTerm(modulus, offset % modulus),))


def empty_spectrum() -> Spectrum:
    return Spectrum(Fraction(1), ())


def avdonin_interval_spectrum(beta, beta_floor=DEFAULT_BETA_FLOOR) -> Spectrum:
    """Integer spectrum {round_half_up(n/beta)} of density beta in (0,1);
    the single-interval generator."""
    beta = Endpoint.coerce(beta)
    if not (Endpoint(0) < beta and beta < Endpoint(1)):
        raise InvalidInput("beta must lie strictly inside (0,1)")
    if beta < Endpoint(Fraction(beta_floor)):
        raise DegenerateBeta(
            f"beta={float(beta):.6g} below floor {float(Fraction(beta_floor)):.6g}"
        )
    return Spectrum(Fraction(1), (CosetTerm(1, 0, AvdoninFilter(beta=beta)),))


def rational_grid_spectrum(q: int, cells: Sequence[int]) -> Spectrum:
    """Spectrum union(qZ + n, n=1..m) for a union of m cells of the 1/q grid."""
    if q < 1:
        raise InvalidInput("q must be a positive integer")
    cells = list(cells)
    if not cells:
        raise InvalidInput("need at least one cell")
    if len(set(cells)) != len(cells):
        raise InvalidInput("cells must be distinct")
    if any(not 0 <= k < q for k in cells):
        raise InvalidInput("cells must lie in 0..q-1")
    m = len(cells)
    terms = tuple(CosetTerm(q, n % q) for n in range(1, m + 1))
    return Spectrum(Fraction(1), terms).sorted_terms()
