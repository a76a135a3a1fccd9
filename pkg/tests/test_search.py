"""Model search: membership, uniqueness, impossibility, determinism, soundness."""

import pytest

from ghzlocal import (
    ExpectedCounts,
    SearchSpec,
    UnboundedSearchError,
    search_models,
    verify_ac,
    verify_counts,
    verify_dm,
)
from ghzlocal.search import feasible_masks
from ghzlocal.state_space import PartitionElement


M3_SHAPE = SearchSpec(failure_count=3, ddists_per_state=(1, 1), limit=4)
M1_SHAPE = SearchSpec(
    failure_count=1, star_elements_all_undetected=True, ddists_per_state=(3, 3), limit=4
)
ONE_FAILURE_EVERYWHERE = SearchSpec(failure_count=1, limit=4)


def test_spec_must_be_bounded():
    with pytest.raises(UnboundedSearchError):
        SearchSpec().validate()
    with pytest.raises(UnboundedSearchError):
        SearchSpec(failure_count=2, per_element_uniformity=False).validate()
    SearchSpec(failure_count=2).validate()


def test_spec_rejects_bad_ranges():
    with pytest.raises(ValueError):
        SearchSpec(failure_count=2, ddists_per_state=(0, 2)).validate()
    with pytest.raises(ValueError):
        SearchSpec(failure_count=2, ddists_per_state=(3, 1)).validate()
    with pytest.raises(ValueError):
        SearchSpec(failure_count=12).validate()


def test_m3_shaped_search_emits_m3(m3):
    models = list(search_models(M3_SHAPE))
    assert len(models) == 4
    # maximal-coverage candidate ordering makes the canonical model stream first
    assert models[0].assignment == m3.assignment
    assert any(m.assignment == m3.assignment for m in models)


def test_m1_shaped_search_finds_exactly_m1(m1):
    models = list(search_models(M1_SHAPE))
    assert len(models) == 1
    assert models[0].assignment == m1.assignment


def test_one_failure_everywhere_is_impossible():
    assert list(search_models(ONE_FAILURE_EVERYWHERE)) == []


def test_one_failure_infeasibility_is_structural():
    # a single undetected site touches at most two triads, a starred class
    # violates three
    for element in PartitionElement:
        masks = feasible_masks(element, ONE_FAILURE_EVERYWHERE)
        if element.is_starred:
            assert masks == []
        else:
            (violated,) = element.violated
            assert {m[0] for m in masks} == set(violated.sites)


def test_search_is_deterministic():
    first = [m.assignment for m in search_models(M3_SHAPE)]
    second = [m.assignment for m in search_models(M3_SHAPE)]
    assert first == second


def test_search_respects_limit():
    assert len(list(search_models(SearchSpec(failure_count=3, ddists_per_state=(1, 1), limit=2)))) == 2
    assert list(search_models(SearchSpec(failure_count=3, ddists_per_state=(1, 1), limit=0))) == []


def test_emitted_models_are_sound():
    for spec in (M3_SHAPE, M1_SHAPE):
        for model in search_models(spec):
            assert verify_ac(model).passed
            assert verify_dm(model).passed


def test_two_failure_search_contains_m2_masks(m2):
    # the shipped two-failure model sits inside its search space: every one of
    # its per-class families is drawn from the DM-feasible candidates
    spec = SearchSpec(failure_count=2)
    families = m2.element_families()
    for element, family in families.items():
        candidates = {
            frozenset(mask) for mask in feasible_masks(element, spec)
        }
        for dd in family:
            assert frozenset(dd.undetected_sites) in candidates


def test_feasible_masks_ordering_prefers_redundant_coverage():
    spec = SearchSpec(failure_count=3)
    masks = feasible_masks(PartitionElement.I0, spec)
    assert len(masks) == 17
    # the unique mask covering each violated triad twice comes first
    assert {s.label for s in masks[0]} == {"y1", "x2", "x3"}
    masks_triple = feasible_masks(PartitionElement.I_II_III, spec)
    assert len(masks_triple) == 19
    assert {s.label for s in masks_triple[0]} == {"x1", "x2", "x3"}


def test_verify_counts(m3, m2):
    assert verify_counts(m2, ExpectedCounts(m_specifications=192, combinations=96)).passed
    assert verify_counts(m3, ExpectedCounts(m_specifications=96, combinations=48)).passed
    report = verify_counts(m3, ExpectedCounts(m_specifications=128, combinations=48))
    assert not report.passed
    (failure,) = report.failures
    assert failure.quantity == "m_specifications"
    assert failure.expected == 128 and failure.actual == 96
