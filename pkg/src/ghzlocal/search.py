"""Exhaustive, lazily streamed search for models satisfying the family constraints.

The search assigns one family of undetected-site masks per partition class
(states inside a class are interchangeable under the uniform weights), prunes
masks that fail detection masking for the class's violated triads, and keeps
only candidates that pass the exact adequacy check.  Candidate masks are
ordered by how redundantly they cover the violated triads (ties broken
lexicographically), so maximal-coverage models stream first and bounded
prefixes are meaningful; identical specs always produce identical streams.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Optional

from .models import (
    CensusRecord,
    CountFailure,
    DDistribution,
    Model,
    VerificationReport,
    census,
    satisfies_ac,
    verify_dm,
)
from .state_space import SITES, XY_SITES, PartitionElement, Site


class UnboundedSearchError(ValueError):
    """The constraint profile does not bound the search space."""


@dataclass(frozen=True)
class SearchSpec:
    """Declarative constraint profile for the model search.

    ``failure_count`` fixes the exact number of U-flags per d-distribution and
    is required: without it the family space per class is too large to walk.
    ``ddists_per_state`` restricts the family size per state (a (lo, hi)
    range); ``star_elements_all_undetected`` gives the single-triad classes
    the all-undetected escape instead of searched masks; ``limit`` caps the
    number of emitted models.
    """

    failure_count: Optional[int] = None
    z_always_detected: bool = True
    per_element_uniformity: bool = True
    ddists_per_state: Optional[tuple[int, int]] = None
    star_elements_all_undetected: bool = False
    limit: Optional[int] = None

    def validate(self) -> None:
        if self.failure_count is None:
            raise UnboundedSearchError(
                "search spec is unbounded: failure_count must be set"
            )
        if not 0 <= self.failure_count <= 9:
            raise ValueError(f"failure_count out of range: {self.failure_count}")
        if not self.per_element_uniformity:
            raise UnboundedSearchError(
                "search spec is unbounded: only per-element-uniform search is supported"
            )
        if self.ddists_per_state is not None:
            lo, hi = self.ddists_per_state
            if lo < 1 or hi < lo:
                raise ValueError(f"bad ddists_per_state range: {self.ddists_per_state}")
        if self.limit is not None and self.limit < 0:
            raise ValueError(f"bad limit: {self.limit}")


def _coverage(mask: tuple[Site, ...], element: PartitionElement) -> int:
    """How many (site, violated triad) incidences the mask realizes."""
    return sum(1 for site in mask for triad in element.violated if site in triad.sites)


def feasible_masks(element: PartitionElement, spec: SearchSpec) -> list[tuple[Site, ...]]:
    """Undetected-site masks compatible with detection masking for the class.

    Exactly ``failure_count`` sites, each violated triad hit at least once;
    ordered by descending violated-triad coverage, then by site labels.
    """
    pool = XY_SITES if spec.z_always_detected else SITES
    masks = []
    for mask in itertools.combinations(pool, spec.failure_count or 0):
        if all(any(s in triad.sites for s in mask) for triad in element.violated):
            masks.append(mask)
    masks.sort(key=lambda m: (-_coverage(m, element), tuple(s.label for s in m)))
    return masks


def _families(
    element: PartitionElement, spec: SearchSpec
) -> Iterator[tuple[DDistribution, ...]]:
    if spec.star_elements_all_undetected and element.is_starred:
        yield (DDistribution.all_undetected(),)
        return
    candidates = [DDistribution.with_undetected(m) for m in feasible_masks(element, spec)]
    lo, hi = spec.ddists_per_state or (1, len(candidates))
    for size in range(max(1, lo), min(hi, len(candidates)) + 1):
        yield from itertools.combinations(candidates, size)


def search_models(spec: SearchSpec) -> Iterator[Model]:
    """Stream every model matching the profile, in canonical order, up to the limit.

    Detection masking holds by construction of the candidate masks; each
    candidate is still put through the exact adequacy check before emission.
    An exhausted stream with no emissions means the profile is unsatisfiable.
    """
    spec.validate()
    if spec.limit == 0:
        return
    elements = list(PartitionElement)
    # Probe feasibility up front so an unsatisfiable class cannot hide behind
    # a combinatorially large prefix of satisfiable ones.
    for element in elements:
        if next(_families(element, spec), None) is None:
            return

    emitted = 0

    def assign(index: int, chosen: dict[PartitionElement, tuple[DDistribution, ...]]):
        nonlocal emitted
        if index == len(elements):
            model = Model.from_element_families(f"model-{emitted + 1:04d}", chosen)
            if verify_dm(model).passed and satisfies_ac(model):
                emitted += 1
                yield model
            return
        element = elements[index]
        for family in _families(element, spec):
            chosen[element] = family
            yield from assign(index + 1, chosen)
            if spec.limit is not None and emitted >= spec.limit:
                return
        chosen.pop(element, None)

    yield from assign(0, {})


@dataclass(frozen=True)
class ExpectedCounts:
    """Expected census values; None fields are not checked."""

    d_distributions: Optional[int] = None
    m_specifications: Optional[int] = None
    combinations: Optional[int] = None


def verify_counts(model: Model, expected: ExpectedCounts) -> VerificationReport:
    """Exact comparison of a model's census against expected counts."""
    actual = census(model)
    failures = []
    for quantity in CensusRecord._fields:
        want = getattr(expected, quantity)
        got = getattr(actual, quantity)
        if want is not None and want != got:
            failures.append(CountFailure(quantity, want, got))
    return VerificationReport("counts", tuple(failures))
