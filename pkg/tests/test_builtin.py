"""The three shipped models against every published count and probability.

The undetected-site tables are literal data; these tests re-derive each table
from the triad structure and check the full set of stated numbers, so a wrong
entry cannot survive.
"""

import itertools
from fractions import Fraction

import pytest

from ghzlocal import (
    XY_SITES,
    DDistribution,
    MeasurementContext,
    PartitionElement,
    Triad,
    census,
    detection_probability,
    m_specification,
    mspec_occurrences,
    partition_classes,
    reproduce_section4,
)
from ghzlocal.builtin import (
    M1_SINGLE_UNDETECTED,
    M2_UNDETECTED_PAIRS,
    M3_UNDETECTED,
    builtin_model,
)


def ctx(*labels: str) -> MeasurementContext:
    return MeasurementContext.from_labels(*labels)


def xy_complement(sites):
    return tuple(s for s in XY_SITES if s not in sites)


def same_triad_pairs():
    return {frozenset(pair) for t in Triad for pair in itertools.combinations(t.sites, 2)}


# --------------------------------------------------------------------------- table derivations


def test_m3_table_matches_triad_structure():
    for element, labels in M3_UNDETECTED.items():
        mask = {lb for lb in labels}
        if element.is_starred:
            (satisfied,) = element.satisfied
            expected = {s.label for s in xy_complement(satisfied.sites)}
        else:
            (violated,) = element.violated
            expected = {s.label for s in violated.sites}
        assert mask == expected, element


def test_m1_table_masks_the_violated_triad():
    for element, labels in M1_SINGLE_UNDETECTED.items():
        (violated,) = element.violated
        assert set(labels) == {s.label for s in violated.sites}, element


def test_m2_table_matches_pair_rule():
    shared = same_triad_pairs()
    for element, pairs in M2_UNDETECTED_PAIRS.items():
        got = {frozenset(p) for p in pairs}
        if element.is_starred:
            (satisfied,) = element.satisfied
            complement = xy_complement(satisfied.sites)
            expected = {
                frozenset((a.label, b.label))
                for a, b in itertools.combinations(complement, 2)
            }
        else:
            (violated,) = element.violated
            violated_labels = {s.label for s in violated.sites}
            expected = {
                frozenset((a.label, b.label))
                for a, b in itertools.combinations(XY_SITES, 2)
                if frozenset((a, b)) in shared
                and ({a.label, b.label} & violated_labels)
            }
            assert len(expected) == 9, element
        assert got == expected, element


# --------------------------------------------------------------------------- structural facts


def test_m3_failure_counts_and_z_flags(m3):
    for _, family in m3.assignment:
        assert len(family) == 1
        assert family[0].undetected_count == 3
        assert all(family[0].flags[i] == "D" for i in (2, 5, 8))


def test_m1_failure_counts(m1):
    for state, family in m1.assignment:
        counts = sorted(dd.undetected_count for dd in family)
        if family[0] == DDistribution.all_undetected():
            assert counts == [9]
        else:
            assert counts == [1, 1, 1]
            assert all(all(dd.flags[i] == "D" for i in (2, 5, 8)) for dd in family)


def test_m2_failure_counts_and_z_flags(m2):
    for _, family in m2.assignment:
        assert len(family) in (3, 9)
        for dd in family:
            assert dd.undetected_count == 2
            assert all(dd.flags[i] == "D" for i in (2, 5, 8))


def test_m1_distinct_single_failure_ddists(m1):
    singles = {
        dd for _, family in m1.assignment for dd in family if dd.undetected_count == 1
    }
    assert len(singles) == 6
    assert {dd.undetected_sites[0].label for dd in singles} == {
        "x1", "y1", "x2", "y2", "x3", "y3"
    }


# --------------------------------------------------------------------------- published numbers


def test_m3_census_and_i0_mspec_forms(m3):
    assert census(m3) == (8, 96, 48)
    i0_specs = {
        m_specification(s, m3.family(s)[0]).values
        for s in partition_classes()[PartitionElement.I0]
    }
    expected = set()
    for i1, j2, k in itertools.product((1, -1), repeat=3):
        j3 = i1 * j2
        expected.add((i1, 0, k, 0, j2, k, 0, j3, k))
    assert i0_specs == expected
    assert len(i0_specs) == 8


def test_m3_triple_detection_happens_exactly_on_the_starred_class(m3):
    for triad, element in [
        (Triad.I, PartitionElement.I0),
        (Triad.II, PartitionElement.II0),
        (Triad.III, PartitionElement.III0),
        (Triad.IV, PartitionElement.IV0),
    ]:
        detecting = {
            state
            for state, family in m3.assignment
            if all(family[0].detects(s) for s in triad.sites)
        }
        assert detecting == set(partition_classes()[element])


def test_m3_detection_probabilities(m3):
    for n in (1, 2, 3):
        assert detection_probability(m3, ctx(f"z{n}")) == 1
        assert detection_probability(m3, ctx(f"x{n}")) == Fraction(1, 2)
        assert detection_probability(m3, ctx(f"y{n}")) == Fraction(1, 2)


def test_m3_detection_factorizes_like_independent_flags(m3):
    # with a unique d-distribution per state the site flags are independent
    assert detection_probability(m3, ctx("x1", "y2")) == Fraction(1, 4)
    assert detection_probability(m3, ctx("x1", "z2")) == Fraction(1, 2)
    assert detection_probability(m3, ctx("x1", "y2", "y3")) == Fraction(1, 8)


def test_m1_restricted_detection_footnote_numbers(m1):
    el = PartitionElement.I_II_III
    cases = [
        (("x1",), Fraction(2, 3)),
        (("y1",), Fraction(1)),
        (("x1", "y2"), Fraction(2, 3)),
        (("x1", "x2"), Fraction(1, 3)),
        (("x1", "x2", "x3"), Fraction(0)),
        (("x1", "y2", "x3"), Fraction(1, 3)),
        (("x1", "y2", "y3"), Fraction(2, 3)),
    ]
    for labels, expected in cases:
        assert detection_probability(m1, ctx(*labels), restrict=el) == expected, labels


def test_m1_overall_detection(m1):
    for n in (1, 2, 3):
        assert detection_probability(m1, ctx(f"x{n}")) == Fraction(5, 12)
        assert detection_probability(m1, ctx(f"y{n}")) == Fraction(5, 12)
        assert detection_probability(m1, ctx(f"z{n}")) == Fraction(1, 2)


def test_m1_mspec_masses(m1):
    occurrences = mspec_occurrences(m1)
    detectable = {
        spec: Fraction(count, 128 * 3)
        for spec, count in occurrences.items()
        if not spec.is_all_zero
    }
    assert len(detectable) == 96
    assert set(detectable.values()) == {Fraction(1, 192)}
    all_zero = [spec for spec in occurrences if spec.is_all_zero]
    assert len(all_zero) == 1
    assert Fraction(occurrences[all_zero[0]], 128) == Fraction(1, 2)


def test_m2_census_and_multiplicity(m2):
    counts = census(m2)
    assert counts.m_specifications == 192
    assert counts.combinations == 96
    assert counts.d_distributions == 12
    assert set(mspec_occurrences(m2).values()) == {4}


def test_m2_family_sizes_by_class(m2):
    for element, states in partition_classes().items():
        expected = 3 if element.is_starred else 9
        for state in states:
            assert len(m2.family(state)) == expected


# --------------------------------------------------------------------------- reproduction


@pytest.mark.parametrize("selector", ["M3", "M1", "M2"])
def test_reproduction_reports_pass(selector):
    report = reproduce_section4(selector)
    failed = [c for c in report.checks if not c.passed]
    assert report.passed, failed


def test_unknown_selector_raises():
    with pytest.raises(KeyError):
        builtin_model("M9")
    with pytest.raises(KeyError):
        reproduce_section4("M9")
