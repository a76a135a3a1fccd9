"""Sites, microstates, triads, and the partition of the GHZ-compatible state space.

The hidden variable of every model is a microstate: one sign per (axis,
particle) site, nine sites in all.  The GHZ preparation restricts the
admissible microstates to those whose three z-values agree, leaving 2^7 = 128
states.  Four distinguished three-site measurements (the triads) each impose
a product-sign constraint; the constraints cannot all hold at once, and the
satisfaction pattern partitions the 128 states into 8 classes of 16.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache


class Axis(Enum):
    """Spin measurement axis. Canonical order is X < Y < Z."""

    X = "x"
    Y = "y"
    Z = "z"


AXES: tuple[Axis, ...] = (Axis.X, Axis.Y, Axis.Z)
PARTICLES: tuple[int, ...] = (1, 2, 3)

_SIGNS = (+1, -1)  # +1 sorts before -1 in every canonical enumeration


@dataclass(frozen=True)
class Site:
    """One (axis, particle) slot of the nine-site layout."""

    axis: Axis
    particle: int

    def __post_init__(self) -> None:
        if self.particle not in PARTICLES:
            raise ValueError(f"particle must be 1, 2 or 3, got {self.particle!r}")

    @property
    def label(self) -> str:
        return f"{self.axis.value}{self.particle}"

    @property
    def index(self) -> int:
        """Position in the canonical site order (particle-major, axis-minor)."""
        return SITE_INDEX[self]

    @classmethod
    def from_label(cls, label: str) -> "Site":
        if len(label) != 2 or label[0] not in "xyz" or label[1] not in "123":
            raise ValueError(f"bad site label {label!r}, expected e.g. 'x1'")
        return cls(Axis(label[0]), int(label[1]))


# Canonical site order, fixed for all serialization:
# x1, y1, z1, x2, y2, z2, x3, y3, z3.
SITES: tuple[Site, ...] = tuple(
    Site(axis, particle) for particle in PARTICLES for axis in AXES
)
SITE_INDEX: dict[Site, int] = {site: i for i, site in enumerate(SITES)}

# The six x/y sites in canonical order; combinations are defined on these.
XY_SITES: tuple[Site, ...] = tuple(s for s in SITES if s.axis is not Axis.Z)
Z_SITES: tuple[Site, ...] = tuple(s for s in SITES if s.axis is Axis.Z)


@dataclass(frozen=True)
class MicroState:
    """A 9-tuple of signs, one per site, in canonical site order.

    States with unequal z-values are representable (the full sign space is
    occasionally useful for sanity checks) but only GHZ-compatible states,
    those with equal z-values, take part in any model-level operation.
    """

    values: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.values) != 9:
            raise ValueError(f"microstate needs 9 values, got {len(self.values)}")
        if any(v not in (-1, +1) for v in self.values):
            raise ValueError(f"microstate values must be +/-1: {self.values!r}")

    def value(self, site: Site) -> int:
        return self.values[SITE_INDEX[site]]

    @property
    def is_ghz_compatible(self) -> bool:
        k1, k2, k3 = (self.values[s.index] for s in Z_SITES)
        return k1 == k2 == k3

    @property
    def label(self) -> str:
        groups = [self.values[i : i + 3] for i in (0, 3, 6)]
        return "(" + ";".join(",".join(f"{v:+d}" for v in g) for g in groups) + ")"

    def __repr__(self) -> str:  # compact, the default spells out the tuple
        return f"MicroState{self.label}"


class Triad(Enum):
    """One of the four compatible three-site measurements with a forced product sign."""

    I = "I"
    II = "II"
    III = "III"
    IV = "IV"

    @property
    def sites(self) -> tuple[Site, Site, Site]:
        return _TRIAD_SITES[self]

    @property
    def required_sign(self) -> int:
        return -1 if self is Triad.IV else +1

    @property
    def context(self) -> "MeasurementContext":
        return MeasurementContext(self.sites)


def _site(label: str) -> Site:
    return Site.from_label(label)


_TRIAD_SITES: dict[Triad, tuple[Site, Site, Site]] = {
    Triad.I: (_site("x1"), _site("y2"), _site("y3")),
    Triad.II: (_site("y1"), _site("x2"), _site("y3")),
    Triad.III: (_site("y1"), _site("y2"), _site("x3")),
    Triad.IV: (_site("x1"), _site("x2"), _site("x3")),
}


class PartitionElement(Enum):
    """Class of a GHZ-compatible state by the set of triad constraints it satisfies.

    A state satisfies either exactly one triad (the starred classes I0..IV0)
    or exactly three (the triple intersections); each class holds 16 states.
    """

    I0 = "I0"
    II0 = "II0"
    III0 = "III0"
    IV0 = "IV0"
    I_II_III = "I&II&III"
    I_II_IV = "I&II&IV"
    I_III_IV = "I&III&IV"
    II_III_IV = "II&III&IV"

    @property
    def satisfied(self) -> frozenset[Triad]:
        return _ELEMENT_SATISFIED[self]

    @property
    def violated(self) -> tuple[Triad, ...]:
        return tuple(t for t in Triad if t not in self.satisfied)

    @property
    def is_starred(self) -> bool:
        """True for the classes satisfying a single triad (I0, II0, III0, IV0)."""
        return len(self.satisfied) == 1


_ELEMENT_SATISFIED: dict[PartitionElement, frozenset[Triad]] = {
    PartitionElement.I0: frozenset({Triad.I}),
    PartitionElement.II0: frozenset({Triad.II}),
    PartitionElement.III0: frozenset({Triad.III}),
    PartitionElement.IV0: frozenset({Triad.IV}),
    PartitionElement.I_II_III: frozenset({Triad.I, Triad.II, Triad.III}),
    PartitionElement.I_II_IV: frozenset({Triad.I, Triad.II, Triad.IV}),
    PartitionElement.I_III_IV: frozenset({Triad.I, Triad.III, Triad.IV}),
    PartitionElement.II_III_IV: frozenset({Triad.II, Triad.III, Triad.IV}),
}
_SATISFIED_TO_ELEMENT: dict[frozenset[Triad], PartitionElement] = {
    sat: el for el, sat in _ELEMENT_SATISFIED.items()
}


@dataclass(frozen=True)
class MeasurementContext:
    """A compatible selection of observables: at most one axis per particle.

    Sites are kept in canonical order; construction rejects a selection that
    puts two observables on the same particle.
    """

    sites: tuple[Site, ...]

    def __post_init__(self) -> None:
        sites = tuple(sorted(self.sites, key=lambda s: SITE_INDEX[s]))
        if not 1 <= len(sites) <= 3:
            raise ValueError(f"context needs 1..3 sites, got {len(sites)}")
        particles = [s.particle for s in sites]
        if len(set(particles)) != len(particles):
            raise ValueError(f"two observables on one particle: {self.label_of(sites)}")
        object.__setattr__(self, "sites", sites)

    @staticmethod
    def label_of(sites: tuple[Site, ...]) -> str:
        return ",".join(s.label for s in sites)

    @property
    def label(self) -> str:
        return self.label_of(self.sites)

    @property
    def selection(self) -> dict[int, Axis]:
        return {s.particle: s.axis for s in self.sites}

    @classmethod
    def from_labels(cls, *labels: str) -> "MeasurementContext":
        return cls(tuple(Site.from_label(lb) for lb in labels))

    def __repr__(self) -> str:
        return f"MeasurementContext({self.label})"


@lru_cache(maxsize=1)
def _ghz_microstates() -> tuple[MicroState, ...]:
    # Lexicographic on the full 9-tuple with +1 < -1; the shared z-value sits
    # at position 3 of the nesting so duplicates at z2, z3 keep the order.
    states = []
    for i1, j1, k, i2, j2, i3, j3 in itertools.product(_SIGNS, repeat=7):
        states.append(MicroState((i1, j1, k, i2, j2, k, i3, j3, k)))
    return tuple(states)


def enumerate_ghz_microstates() -> list[MicroState]:
    """All 128 GHZ-compatible microstates in canonical (lexicographic) order."""
    return list(_ghz_microstates())


def triad_product(state: MicroState, triad: Triad) -> int:
    """Product of the state's values on the triad's three sites."""
    a, b, c = triad.sites
    return state.values[a.index] * state.values[b.index] * state.values[c.index]


def satisfies(state: MicroState, triad: Triad) -> bool:
    """Whether the state's triad product equals the triad's required sign."""
    return triad_product(state, triad) == triad.required_sign


def satisfied_triads(state: MicroState) -> frozenset[Triad]:
    return frozenset(t for t in Triad if satisfies(state, t))


def classify(state: MicroState) -> PartitionElement:
    """Partition class of a GHZ-compatible state.

    Raises ValueError for states with unequal z-values: those never occur
    under the GHZ preparation and carry no class.
    """
    if not state.is_ghz_compatible:
        raise ValueError(f"state {state.label} is not GHZ-compatible")
    return _SATISFIED_TO_ELEMENT[satisfied_triads(state)]


@lru_cache(maxsize=1)
def partition_classes() -> dict[PartitionElement, tuple[MicroState, ...]]:
    """The 8 partition classes, each a canonical-order tuple of 16 states."""
    classes: dict[PartitionElement, list[MicroState]] = {el: [] for el in PartitionElement}
    for state in _ghz_microstates():
        classes[classify(state)].append(state)
    return {el: tuple(states) for el, states in classes.items()}


def enumerate_contexts() -> list[MeasurementContext]:
    """All 63 compatible contexts: 9 singles, 27 pairs, 27 triples.

    Canonical order: by context size, then by particle subset, then by the
    axis assignment in X < Y < Z order.
    """
    contexts = []
    for size in (1, 2, 3):
        for particles in itertools.combinations(PARTICLES, size):
            for axes in itertools.product(AXES, repeat=size):
                sites = tuple(Site(a, p) for a, p in zip(axes, particles))
                contexts.append(MeasurementContext(sites))
    return contexts
