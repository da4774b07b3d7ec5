"""Level-spectrum combination and the two main constructions.

combine_level_spectra assembles a spectrum for S out of spectra for the
nested fiber-count sets by shifting level n by n (consecutive shifts);
combine_level_spectra_permuted allows arbitrary distinct shifts when N is
prime.  construct_hierarchy builds the full hierarchical family for a union
of intervals with rationally independent endpoints; complement_integer_
spectrum extends the integer spectrum of [0,1) across extra intervals in
[1,N) by frequencies from (1/N)Z \\ Z.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .arith import PrimeSearchResult, ordering_primes, rational_relation_probe
from .errors import (
    ConstructionError,
    DegenerateCoverage,
    EmptySubset,
    IndependenceSuspect,
    InvalidInput,
    LevelNotInNZ,
    NotFound,
    NotPermutation,
    NotPrime,
    UnsupportedASet,
)
from .intervals import Endpoint, IntervalSet, a_geq_all
from .minors import _is_prime
from .spectra import (
    Spectrum,
    avdonin_interval_spectrum,
    empty_spectrum,
    integer_lattice,
    rational_grid_spectrum,
)

DEFAULT_CHECK_WINDOW = 2048


def _require_level_in_lattice(N: int, level: Spectrum, n: int, window: int) -> None:
    if level.is_empty:
        return
    if not level.subset_of_lattice(N, window):
        raise LevelNotInNZ(f"level {n} spectrum is not contained in {N}Z")


def combine_level_spectra(
    N: int,
    levels: Sequence[Spectrum],
    base_shift: int = 1,
    *,
    check_window: int = DEFAULT_CHECK_WINDOW,
) -> Spectrum:
    """Union of (level_n + n - 1 + base_shift) over n = 1..N.

    Levels must be subsets of N*Z; the shifted levels then occupy distinct
    residues mod N, so the union is automatically disjoint.
    """
    if len(levels) != N:
        raise InvalidInput(f"need exactly {N} level spectra")
    if base_shift not in (0, 1):
        raise InvalidInput("base_shift must be 0 or 1")
    terms = []
    for n, level in enumerate(levels, start=1):
        _require_level_in_lattice(N, level, n, check_window)
        if level.is_empty:
            continue
        shifted = level.shift(n - 1 + base_shift)
        terms.extend(shifted.terms)
    result = Spectrum(Fraction(1), tuple(terms))
    result.enumerate_integers(-check_window, check_window)  # raises on overlap
    return result


def combine_level_spectra_permuted(
    N: int,
    levels: Sequence[Spectrum],
    shifts: Sequence[int],
    *,
    check_window: int = DEFAULT_CHECK_WINDOW,
) -> Spectrum:
    """Union of (level_n + shifts[n-1]) for an arbitrary permutation of 1..N;
    valid as a basis combination only for prime N."""
    if not _is_prime(N):
        raise NotPrime(f"{N} is not prime")
    if len(levels) != N:
        raise InvalidInput(f"need exactly {N} level spectra")
    if sorted(shifts) != list(range(1, N + 1)):
        raise NotPermutation("shifts must be a permutation of 1..N")
    terms = []
    for n, level in enumerate(levels, start=1):
        _require_level_in_lattice(N, level, n, check_window)
        if level.is_empty:
            continue
        shifted = level.shift(shifts[n - 1])
        terms.extend(shifted.terms)
    result = Spectrum(Fraction(1), tuple(terms))
    result.enumerate_integers(-check_window, check_window)
    return result


@dataclass(frozen=True)
class HierarchyPlan:
    """Complete bookkeeping of the hierarchical construction."""

    N: int
    a: tuple[Endpoint, ...]
    b: tuple[Endpoint, ...]
    S: IntervalSet
    a_sets: tuple[IntervalSet, ...]          # fiber-count sets, levels 1..N
    level_spectra: tuple[Spectrum, ...]      # subsets of N*Z, levels 1..N
    level_interval: tuple[Optional[int], ...]  # 1-based owning interval per level
    K_ell: tuple[int, ...]
    K: int
    lambda_ell: tuple[Spectrum, ...]
    witness: PrimeSearchResult

    @property
    def L(self) -> int:
        return len(self.a)

    def level_blocks(self) -> list[range]:
        """Full-cell level indices owned by each interval, in block order."""
        blocks = []
        start = 1
        for K_l in self.K_ell:
            blocks.append(range(start, start + K_l))
            start += K_l
        return blocks

    def full_union(self) -> Spectrum:
        out = Spectrum(Fraction(1), ())
        for lam in self.lambda_ell:
            out = out.union(lam)
        return out

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "a": [e.to_json() for e in self.a],
            "b": [e.to_json() for e in self.b],
            "set": self.S.to_json(),
            "a_sets": [s.to_json() for s in self.a_sets],
            "level_spectra": [s.to_json() for s in self.level_spectra],
            "level_interval": list(self.level_interval),
            "K_ell": list(self.K_ell),
            "K": self.K,
            "lambda_ell": [s.to_json() for s in self.lambda_ell],
            "witness": self.witness.to_json(),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "HierarchyPlan":
        return cls(
            N=int(obj["N"]),
            a=tuple(Endpoint.from_json(e) for e in obj["a"]),
            b=tuple(Endpoint.from_json(e) for e in obj["b"]),
            S=IntervalSet.from_json(obj["set"]),
            a_sets=tuple(IntervalSet.from_json(s) for s in obj["a_sets"]),
            level_spectra=tuple(Spectrum.from_json(s) for s in obj["level_spectra"]),
            level_interval=tuple(
                None if v is None else int(v) for v in obj["level_interval"]
            ),
            K_ell=tuple(int(k) for k in obj["K_ell"]),
            K=int(obj["K"]),
            lambda_ell=tuple(Spectrum.from_json(s) for s in obj["lambda_ell"]),
            witness=PrimeSearchResult(
                N=int(obj["witness"]["N"]),
                candidates_scanned=int(obj["witness"]["candidates_scanned"]),
                ordering_witness=tuple(obj["witness"]["ordering_witness"]),
            ),
        )


def _validate_interval_chain(a: Sequence, b: Sequence):
    a = [Endpoint.coerce(x) for x in a]
    b = [Endpoint.coerce(x) for x in b]
    if len(a) != len(b) or not a:
        raise InvalidInput("need equally many left and right endpoints")
    prev = Endpoint(0)
    for x, y in zip(a, b):
        if not (prev < x and x < y):
            raise InvalidInput("endpoints must satisfy 0 < a_1 < b_1 < ... < b_L < 1")
        prev = y
    if not b[-1] < Endpoint(1):
        raise InvalidInput("endpoints must satisfy 0 < a_1 < b_1 < ... < b_L < 1")
    return a, b


def construct_hierarchy(
    a: Sequence,
    b: Sequence,
    prime_limit: int,
    *,
    prime_index: int = 0,
    probe_max_coeff: int = 10,
    check_window: int = DEFAULT_CHECK_WINDOW,
) -> HierarchyPlan:
    """Build the hierarchical spectra for intervals [a_l, b_l) in (0,1).

    Scans for the smallest admissible prime (or the prime_index-th one),
    derives the nested fiber-count pattern, assigns full-cell levels to
    intervals in contiguous blocks, and attaches a rounded-subsequence
    generator to each interval's fractional level.
    """
    a, b = _validate_interval_chain(a, b)
    relation = rational_relation_probe(list(a) + list(b), probe_max_coeff)
    if relation is not None:
        raise IndependenceSuspect(relation)
    successes = 0
    found_any = False
    for witness in ordering_primes(a, b, prime_limit, skip_relation_probe=True):
        found_any = True
        plan = _build_plan(witness, a, b, check_window)
        if successes == prime_index:
            return plan
        successes += 1
    if found_any:
        raise NotFound(prime_limit, "admissible primes found but not enough of them")
    raise NotFound(prime_limit)


def construct_hierarchy_with_prime(
    a: Sequence,
    b: Sequence,
    N: int,
    *,
    check_window: int = DEFAULT_CHECK_WINDOW,
) -> HierarchyPlan:
    """Expert path: build the plan for an explicitly chosen prime N.

    Skips the ordering scan, so the fiber-count pattern may be degenerate;
    raises DegenerateCoverage when an interval contributes no full cell.
    """
    a, b = _validate_interval_chain(a, b)
    if not _is_prime(N):
        raise NotPrime(f"{N} is not prime")
    chain = [(x * N).frac() for x in a] + [(y * N).frac() for y in reversed(b)]
    witness = PrimeSearchResult(
        N=N, candidates_scanned=0, ordering_witness=tuple(float(w) for w in chain)
    )
    return _build_plan(witness, a, b, check_window)


def _build_plan(
    witness: PrimeSearchResult,
    a: Sequence[Endpoint],
    b: Sequence[Endpoint],
    check_window: int,
) -> HierarchyPlan:
    N = witness.N
    L = len(a)
    cell = Fraction(1, N)
    S = IntervalSet(zip(a, b))
    full_cell = IntervalSet([(0, cell)])

    a_sets = tuple(a_geq_all(N, S))
    K = 0
    while K < N and a_sets[K] == full_cell:
        K += 1

    # per-interval full-cell counts: interior cells plus the one cell's worth
    # contributed jointly by the two boundary fragments
    K_ell = []
    for x, y in zip(a, b):
        interior = (y * N).floor() - (x * N).ceil()
        if interior < 0:
            raise DegenerateCoverage(
                f"interval [{float(x):.6g},{float(y):.6g}) spans no grid point at N={N}"
            )
        K_ell.append(interior + 1)
    if sum(K_ell) != K:
        raise DegenerateCoverage(
            f"full-cell count mismatch at N={N}: pattern gives {K}, intervals give {sum(K_ell)}"
        )
    if K + L > N:
        raise ConstructionError("level pattern exceeds N levels")

    # fractional levels K+1..K+L must be the nested boundary pieces
    betas = []
    for ell in range(1, L + 1):
        fa = (a[ell - 1] * N).frac()
        fb = (b[ell - 1] * N).frac()
        expected = IntervalSet([(fa * cell, fb * cell)])
        if a_sets[K + ell - 1] != expected:
            raise ConstructionError(
                f"level {K + ell} does not match the boundary piece of interval {ell}"
            )
        betas.append(fb - fa)
    for n in range(K + L, N):
        if not a_sets[n].is_empty:
            raise ConstructionError(f"level {n + 1} should be empty")

    level_spectra: list[Spectrum] = []
    level_interval: list[Optional[int]] = []
    blocks = []
    start = 1
    for K_l in K_ell:
        blocks.append(range(start, start + K_l))
        start += K_l
    owner_of_level = {}
    for ell, block in enumerate(blocks, start=1):
        for n in block:
            owner_of_level[n] = ell
    for n in range(1, N + 1):
        if n <= K:
            level_spectra.append(integer_lattice(N, 0))
            level_interval.append(owner_of_level[n])
        elif n <= K + L:
            ell = n - K
            gen = avdonin_interval_spectrum(betas[ell - 1]).scale_integers(N)
            level_spectra.append(gen)
            level_interval.append(ell)
        else:
            level_spectra.append(empty_spectrum())
            level_interval.append(None)

    lambda_ell = []
    for ell in range(1, L + 1):
        lam = Spectrum(Fraction(1), ())
        for n in blocks[ell - 1]:
            lam = lam.union(level_spectra[n - 1].shift(n))
        lam = lam.union(level_spectra[K + ell - 1].shift(K + ell))
        lambda_ell.append(lam.sorted_terms())

    plan = HierarchyPlan(
        N=N,
        a=tuple(a),
        b=tuple(b),
        S=S,
        a_sets=a_sets,
        level_spectra=tuple(level_spectra),
        level_interval=tuple(level_interval),
        K_ell=tuple(K_ell),
        K=K,
        lambda_ell=tuple(lambda_ell),
        witness=witness,
    )
    _validate_plan(plan, check_window)
    return plan


def _validate_plan(plan: HierarchyPlan, check_window: int) -> None:
    # disjoint union of the per-interval spectra equals the shifted levels
    merged = plan.full_union().enumerate_integers(-check_window, check_window)
    by_levels = combine_level_spectra(
        plan.N, plan.level_spectra, base_shift=1, check_window=check_window
    ).enumerate_integers(-check_window, check_window)
    if merged != by_levels:
        raise ConstructionError("per-interval union disagrees with the level union")
    # each interval's spectrum must carry exactly that interval's density
    for lam, (x, y) in zip(plan.lambda_ell, zip(plan.a, plan.b)):
        dens = lam.density()
        target = float((y - x).mpf())
        if abs(float(dens) - target) > 1e-30 + 1e-12 * abs(target):
            raise ConstructionError(
                f"density {float(dens)} of an interval spectrum is off target {target}"
            )


@dataclass(frozen=True)
class SubsetPlan:
    """Reordered level sets certifying a sub-union of the hierarchy."""

    J: tuple[int, ...]
    K_J: int
    omega: tuple[Spectrum, ...]   # shifted level sets, in certification order
    shifts: tuple[int, ...]       # shift factor attached to each omega entry

    def union(self) -> Spectrum:
        out = Spectrum(Fraction(1), ())
        for om in self.omega:
            out = out.union(om)
        return out.sorted_terms()

    def to_json(self) -> dict:
        return {
            "J": list(self.J),
            "K_J": self.K_J,
            "omega": [s.to_json() for s in self.omega],
            "shifts": list(self.shifts),
        }


def subset_spectrum(
    plan: HierarchyPlan,
    J: Sequence[int],
    *,
    check_window: int = DEFAULT_CHECK_WINDOW,
) -> SubsetPlan:
    """Certification-ordered level sets for the sub-union over J.

    Validates, against independently recomputed fiber-count sets of S^J,
    that the n-th reordered set is a spectrum candidate for the n-th level
    set, and that the attached shifts are distinct mod N (which is what the
    prime-permuted combination needs).
    """
    J = sorted(set(int(ell) for ell in J))
    if not J:
        raise EmptySubset("J must be nonempty")
    if any(not 1 <= ell <= plan.L for ell in J):
        raise InvalidInput(f"J must be a subset of 1..{plan.L}")
    N = plan.N
    cell = Fraction(1, N)
    blocks = plan.level_blocks()
    K_J = sum(plan.K_ell[ell - 1] for ell in J)

    omega: list[Spectrum] = []
    shifts: list[int] = []
    unshifted: list[Spectrum] = []
    for ell in J:
        for n in blocks[ell - 1]:
            omega.append(integer_lattice(N, 0).shift(n))
            unshifted.append(integer_lattice(N, 0))
            shifts.append(n)
    for ell in J:
        n = plan.K + ell
        omega.append(plan.level_spectra[n - 1].shift(n))
        unshifted.append(plan.level_spectra[n - 1])
        shifts.append(n)

    if len(set(s % N for s in shifts)) != len(shifts):
        raise ConstructionError("omega shifts collide mod N")

    # independent recomputation of the fiber-count sets of the sub-union
    S_J = IntervalSet((plan.a[ell - 1], plan.b[ell - 1]) for ell in J)
    M = len(J)
    full_cell = IntervalSet([(0, cell)])
    levels_J = a_geq_all(N, S_J)
    for n in range(1, N + 1):
        target = levels_J[n - 1]
        if n <= K_J:
            if target != full_cell:
                raise ConstructionError(f"sub-union level {n} is not the full cell")
        elif n <= K_J + M:
            ell = J[n - K_J - 1]
            fa = (plan.a[ell - 1] * N).frac()
            fb = (plan.b[ell - 1] * N).frac()
            if target != IntervalSet([(fa * cell, fb * cell)]):
                raise ConstructionError(
                    f"sub-union level {n} does not match interval {ell}'s boundary piece"
                )
        else:
            if not target.is_empty:
                raise ConstructionError(f"sub-union level {n} should be empty")
    for n, spec in enumerate(unshifted, start=1):
        if n <= K_J:
            continue
        # fractional levels must carry the generator of the right density
        target = levels_J[n - 1]
        dens = spec.density()
        goal = float(target.measure_mpf())
        if abs(float(dens) - goal) > 1e-12:
            raise ConstructionError("omega ordering does not match the level sets")

    sp = SubsetPlan(J=tuple(J), K_J=K_J, omega=tuple(omega), shifts=tuple(shifts))
    mine = sp.union().enumerate_integers(-check_window, check_window)
    theirs: list[int] = []
    for ell in J:
        theirs.extend(
            plan.lambda_ell[ell - 1].enumerate_integers(-check_window, check_window)
        )
    if mine != sorted(theirs):
        raise ConstructionError("omega union disagrees with the per-interval union")
    return sp


@dataclass(frozen=True)
class ComplementResult:
    """Output of the integer-spectrum complementation."""

    N: int
    M: int
    lambda_prime: Spectrum           # scale 1/N, disjoint from Z
    level_spectra: tuple[Spectrum, ...]  # subsets of N*Z per level, pre-dilation
    S: IntervalSet                   # the scaled working set (V / N)

    def full_spectrum(self) -> Spectrum:
        """Z union lambda_prime, as one scale-1/N spectrum."""
        zterm = integer_lattice(self.N, 0).dilate(Fraction(1, self.N))
        return zterm.union(self.lambda_prime).sorted_terms()

    def to_json(self) -> dict:
        return {
            "N": self.N,
            "M": self.M,
            "lambda_prime": self.lambda_prime.to_json(),
            "level_spectra": [s.to_json() for s in self.level_spectra],
            "set": self.S.to_json(),
        }


def _level_spectrum_for(
    N: int,
    level_set: IntervalSet,
    prime_limit_inner: int,
    check_window: int,
    max_grid: int,
) -> Spectrum:
    """A subset of N*Z certifying one nonfull fiber-count level."""
    W = level_set.scale(N)  # inside [0,1)
    pieces = W.pieces
    if len(pieces) == 1:
        beta = pieces[0][1] - pieces[0][0]
        return avdonin_interval_spectrum(beta).scale_integers(N)
    if (
        len(pieces) == 2
        and pieces[0][0] == Endpoint(0)
        and pieces[1][1] == Endpoint(1)
    ):
        # wrap-around pair: treat as one interval modulo the cell period
        beta = (pieces[0][1] - pieces[0][0]) + (pieces[1][1] - pieces[1][0])
        return avdonin_interval_spectrum(beta).scale_integers(N)
    if all(l.is_rational and r.is_rational for l, r in pieces):
        q = 1
        for l, r in pieces:
            q = math.lcm(q, l.rational.denominator, r.rational.denominator)
        if q <= max_grid:
            cells = [
                k
                for k in range(q)
                if W.contains(Endpoint(Fraction(2 * k + 1, 2 * q)))
            ]
            covered = IntervalSet(
                (Fraction(k, q), Fraction(k + 1, q)) for k in cells
            )
            if covered == W:
                return rational_grid_spectrum(q, cells).scale_integers(N)
    # multi-interval with independent interior endpoints: recurse once
    lefts = [l for l, _ in pieces]
    rights = [r for _, r in pieces]
    if lefts[0] > Endpoint(0) and rights[-1] < Endpoint(1):
        try:
            inner = construct_hierarchy(lefts, rights, prime_limit_inner,
                                        check_window=check_window)
        except (IndependenceSuspect, NotFound) as exc:
            raise UnsupportedASet(
                f"level set {W!r} is neither grid-aligned nor independent-constructible"
            ) from exc
        return inner.full_union().scale_integers(N)
    raise UnsupportedASet(f"level set {W!r} is outside the supported regimes")


def complement_integer_spectrum(
    N: int,
    a: Sequence,
    b: Sequence,
    *,
    prime_limit_inner: int = 10**6,
    check_window: int = DEFAULT_CHECK_WINDOW,
    max_grid: int = 4096,
) -> ComplementResult:
    """Complement the integer spectrum of [0,1) across intervals in [1,N].

    Returns frequencies in (1/N)Z disjoint from Z whose exponentials span
    the extra intervals and, jointly with the integer exponentials, the
    whole union.
    """
    if N < 1:
        raise InvalidInput("N must be a positive integer")
    a = [Endpoint.coerce(x) for x in a]
    b = [Endpoint.coerce(y) for y in b]
    if len(a) != len(b) or not a:
        raise InvalidInput("need equally many left and right endpoints")
    prev = Endpoint(1)
    for x, y in zip(a, b):
        if not (prev <= x and x < y):
            raise InvalidInput("endpoints must satisfy 1 <= a_1 < b_1 < ... <= N")
        prev = y
    if not b[-1] <= Endpoint(N):
        raise InvalidInput("endpoints must satisfy 1 <= a_1 < b_1 < ... <= N")

    cell = Fraction(1, N)
    inv = Fraction(1, N)
    pairs = [(Endpoint(0), Endpoint(1))] + list(zip(a, b))
    S = IntervalSet((l * inv, r * inv) for l, r in pairs)

    a_sets = a_geq_all(N, S)
    full_cell = IntervalSet([(0, cell)])
    M = 0
    while M < N and a_sets[M] == full_cell:
        M += 1
    if M < 1:
        raise ConstructionError("the unit interval must fill the first level")

    level_spectra: list[Spectrum] = []
    for n in range(1, N + 1):
        if n <= M:
            level_spectra.append(integer_lattice(N, 0))
        elif a_sets[n - 1].is_empty:
            level_spectra.append(empty_spectrum())
        else:
            level_spectra.append(
                _level_spectrum_for(
                    N, a_sets[n - 1], prime_limit_inner, check_window, max_grid
                )
            )

    total = combine_level_spectra(
        N, level_spectra, base_shift=0, check_window=check_window
    )
    lam_prime_terms = tuple(
        t for t in total.terms if t.offset % N != 0
    )
    if len(lam_prime_terms) != len(total.terms) - 1:
        raise ConstructionError("expected exactly one integer-lattice component")
    lam_prime = Spectrum(Fraction(1), lam_prime_terms).dilate(inv).sorted_terms()

    for freq in lam_prime.enumerate(check_window // N):
        if freq.denominator == 1:
            raise ConstructionError("complement spectrum intersects Z")

    return ComplementResult(
        N=N, M=M, lambda_prime=lam_prime, level_spectra=tuple(level_spectra), S=S
    )
