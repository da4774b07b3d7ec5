"""Level combination and both end-to-end constructions."""

from fractions import Fraction

import pytest

import rieszspectra as rs
from rieszspectra import (
    CosetTerm,
    DegenerateCoverage,
    EmptySubset,
    Endpoint,
    IndependenceSuspect,
    IntervalSet,
    InvalidInput,
    LevelNotInNZ,
    NotPermutation,
    NotPrime,
    Spectrum,
    UnsupportedASet,
    combine_level_spectra,
    combine_level_spectra_permuted,
    complement_integer_spectrum,
    construct_hierarchy,
    construct_hierarchy_with_prime,
    empty_spectrum,
    integer_lattice,
    subset_spectrum,
)
from rieszspectra.precision import hp_sqrt


def F(n, d=1):
    return Fraction(n, d)


# -- combination ---------------------------------------------------------

def test_combine_consecutive_shifts():
    lat3 = integer_lattice(3, 0)
    out = combine_level_spectra(3, [lat3, lat3, empty_spectrum()], base_shift=1)
    assert out.sorted_terms().terms == (CosetTerm(3, 1), CosetTerm(3, 2))


def test_combine_single_level_zero_shift():
    out = combine_level_spectra(1, [integer_lattice(1, 0)], base_shift=0)
    assert out.enumerate(3) == [-3, -2, -1, 0, 1, 2, 3]


def test_combine_fills_all_residues():
    lat2 = integer_lattice(2, 0)
    out = combine_level_spectra(2, [lat2, lat2], base_shift=1)
    assert out.enumerate(4) == list(range(-4, 5))


def test_combine_rejects_bad_level():
    with pytest.raises(LevelNotInNZ):
        combine_level_spectra(2, [integer_lattice(1, 0), integer_lattice(2, 0)])


def test_permuted_identity_matches_consecutive():
    lat5 = integer_lattice(5, 0)
    levels = [lat5, lat5, empty_spectrum(), empty_spectrum(), empty_spectrum()]
    base = combine_level_spectra(5, levels, base_shift=1)
    perm = combine_level_spectra_permuted(5, levels, [1, 2, 3, 4, 5])
    assert base.enumerate_integers(-50, 50) == perm.enumerate_integers(-50, 50)


def test_permuted_shifts():
    lat5 = integer_lattice(5, 0)
    levels = [lat5, lat5, empty_spectrum(), empty_spectrum(), empty_spectrum()]
    out = combine_level_spectra_permuted(5, levels, [3, 1, 2, 4, 5])
    assert out.sorted_terms().terms == (CosetTerm(5, 1), CosetTerm(5, 3))


def test_permuted_requires_prime_and_permutation():
    lat4 = integer_lattice(4, 0)
    with pytest.raises(NotPrime):
        combine_level_spectra_permuted(4, [lat4] * 4, [1, 2, 3, 4])
    lat5 = integer_lattice(5, 0)
    with pytest.raises(NotPermutation):
        combine_level_spectra_permuted(5, [lat5] * 5, [1, 1, 2, 3, 4])


# -- hierarchy construction ------------------------------------------------

def test_hierarchy_l1_structure(plan_l1):
    plan = plan_l1
    assert plan.N == 5
    assert plan.K == 1
    assert plan.K_ell == (1,)
    lam = plan.lambda_ell[0].sorted_terms()
    assert lam.terms[0] == CosetTerm(5, 1)
    assert lam.terms[1].modulus == 5 and lam.terms[1].offset == 2
    assert lam.terms[1].filter is not None
    beta = lam.terms[1].filter.beta
    expect = ((plan.b[0] * 5).frac() - (plan.a[0] * 5).frac())
    assert abs(float(beta) - float(expect)) < 1e-50


def test_hierarchy_l1_level_pattern(plan_l1):
    plan = plan_l1
    cell = IntervalSet([(0, F(1, 5))])
    assert plan.a_sets[0] == cell
    fa = (plan.a[0] * 5).frac() * F(1, 5)
    fb = (plan.b[0] * 5).frac() * F(1, 5)
    assert plan.a_sets[1] == IntervalSet([(fa, fb)])
    for n in range(2, 5):
        assert plan.a_sets[n].is_empty
    assert plan.level_interval == (1, 1, None, None, None)


def test_hierarchy_union_no_duplicates(plan_l1):
    merged = plan_l1.full_union().enumerate_integers(-2048, 2048)
    assert len(merged) == len(set(merged))


def test_hierarchy_residue_coherence(plan_l1):
    # level n shifted by n occupies residue n mod N; the reordered sets
    # likewise follow their attached shifts
    plan = plan_l1
    N = plan.N
    for n, level in enumerate(plan.level_spectra, start=1):
        if level.is_empty:
            continue
        for m in level.shift(n).enumerate_integers(-200, 200):
            assert m % N == n % N
    sp = rs.subset_spectrum(plan, [1])
    for omega_n, s in zip(sp.omega, sp.shifts):
        for m in omega_n.enumerate_integers(-200, 200):
            assert m % N == s % N


def test_hierarchy_density_identity(plan_l1):
    lam = plan_l1.lambda_ell[0]
    target = float((plan_l1.b[0] - plan_l1.a[0]).mpf())
    assert abs(float(lam.density()) - target) < 1e-12


def test_hierarchy_rejects_rational_endpoints():
    with pytest.raises(IndependenceSuspect):
        construct_hierarchy([F(1, 4)], [F(3, 4)], 1000)


def test_hierarchy_rejects_bad_order():
    with pytest.raises(InvalidInput):
        construct_hierarchy([F(3, 4)], [F(1, 4)], 100)


def test_hierarchy_degenerate_coverage_with_forced_prime():
    # [0.414.., 0.466..) contains no multiple of 1/3, so the forced prime
    # N=3 leaves the interval without a full cell
    a = Endpoint(0, hp_sqrt(2)) - 1
    b = a + Endpoint(0, hp_sqrt(3)) * F(3, 100)
    with pytest.raises(DegenerateCoverage):
        construct_hierarchy_with_prime([a], [b], 3)


def test_hierarchy_prime_index_picks_later_prime():
    a = Endpoint(0, hp_sqrt(2)) - 1
    b = Endpoint(0, hp_sqrt(3)) - 1
    plan0 = rs.construct_hierarchy([a], [b], 200, prime_index=0)
    plan1 = rs.construct_hierarchy([a], [b], 200, prime_index=1)
    assert plan1.N > plan0.N


def test_hierarchy_json_roundtrip(plan_l1):
    back = rs.HierarchyPlan.from_json(plan_l1.to_json())
    assert back.N == plan_l1.N
    assert back.K_ell == plan_l1.K_ell
    w = 512
    assert back.full_union().enumerate_integers(-w, w) == \
        plan_l1.full_union().enumerate_integers(-w, w)
    # the parsed plan supports the sub-union validation path end to end
    sp = subset_spectrum(back, [1], check_window=512)
    assert sp.K_J == back.K_ell[0]


# -- sub-union certification ------------------------------------------------

def test_subset_full_reproduces_union(plan_l2):
    sp = subset_spectrum(plan_l2, [1, 2])
    w = 1024
    assert sp.union().enumerate_integers(-w, w) == \
        plan_l2.full_union().enumerate_integers(-w, w)
    assert sp.K_J == plan_l2.K


def test_subset_singleton_block_order(plan_l2):
    plan = plan_l2
    sp = subset_spectrum(plan, [2])
    assert sp.K_J == plan.K_ell[1]
    # block cosets first (shifted by their level index), then the tail term
    assert sp.shifts == tuple(plan.level_blocks()[1]) + (plan.K + 2,)
    w = 1024
    assert sp.union().enumerate_integers(-w, w) == \
        plan.lambda_ell[1].enumerate_integers(-w, w)


def test_subset_empty_raises(plan_l2):
    with pytest.raises(EmptySubset):
        subset_spectrum(plan_l2, [])


def test_subset_out_of_range(plan_l2):
    with pytest.raises(InvalidInput):
        subset_spectrum(plan_l2, [3])


# -- complementation ---------------------------------------------------------

def test_complement_grid_case():
    res = complement_integer_spectrum(2, [1], [2])
    assert res.M == 2
    assert res.lambda_prime.scale == F(1, 2)
    assert res.lambda_prime.sorted_terms().terms == (CosetTerm(2, 1),)
    assert res.lambda_prime.enumerate(3) == [
        F(-5, 2), F(-3, 2), F(-1, 2), F(1, 2), F(3, 2), F(5, 2),
    ]


def test_complement_irrational_case():
    b = Endpoint(1) + Endpoint(0, hp_sqrt(2)) * F(1, 2)
    res = complement_integer_spectrum(2, [Endpoint(1)], [b])
    assert res.M == 1
    terms = res.lambda_prime.sorted_terms().terms
    assert len(terms) == 1
    t = terms[0]
    assert (t.modulus, t.offset) == (2, 1)
    assert t.filter is not None
    assert abs(float(t.filter.beta) - float(hp_sqrt(2)) / 2) < 1e-50
    # disjoint from the integers on a window
    assert all(f.denominator == 2 for f in res.lambda_prime.enumerate(300))


def test_complement_wraparound_case():
    a = Endpoint(1) + Endpoint(0, hp_sqrt(2)) * F(11, 20)
    b = Endpoint(2) + Endpoint(0, hp_sqrt(3)) * F(1, 5)
    res = complement_integer_spectrum(3, [a], [b])
    assert res.M == 1
    t = res.lambda_prime.sorted_terms().terms[0]
    assert t.filter is not None
    # wrapped piece has combined width 1 + {b} - {a}, here exactly b - a
    assert abs(t.filter.beta.mpf() - (b - a).mpf()) < 1e-50


def test_complement_two_interval_grid_path():
    res = complement_integer_spectrum(
        2, [F(1), F(3, 2)], [F(5, 4), F(7, 4)]
    )
    assert res.M == 1
    # second level set is [0,1/8) u [1/4,3/8); its spectrum comes from the
    # rational grid generator, dilated into 2Z
    lvl2 = res.level_spectra[1].sorted_terms()
    assert lvl2.terms == (CosetTerm(8, 2), CosetTerm(8, 4))
    assert all(f.denominator == 2 for f in res.lambda_prime.enumerate(100))


def test_complement_unsupported_level_set():
    # second-level set mixes an endpoint at 0 with irrational interior ones:
    # neither grid-aligned nor inner-hierarchy constructible
    a1 = Endpoint(1)
    b1 = Endpoint(1) + Endpoint(0, hp_sqrt(2)) * F(1, 4)
    a2 = Endpoint(F(3, 2))
    b2 = Endpoint(F(3, 2)) + Endpoint(0, hp_sqrt(3)) * F(1, 8)
    with pytest.raises(UnsupportedASet):
        complement_integer_spectrum(2, [a1, a2], [b1, b2])


def test_complement_validation():
    with pytest.raises(InvalidInput):
        complement_integer_spectrum(2, [F(1, 2)], [F(3, 2)])  # a_1 < 1
    with pytest.raises(InvalidInput):
        complement_integer_spectrum(2, [1], [3])  # b_L > N


def test_complement_full_spectrum_contains_integers():
    res = complement_integer_spectrum(2, [1], [2])
    full = res.full_spectrum()
    freqs = full.enumerate(3)
    assert F(0) in freqs and F(1) in freqs and F(1, 2) in freqs
