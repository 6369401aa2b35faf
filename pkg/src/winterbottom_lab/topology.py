"""Connectivity analysis and the grounding transformation.

A configuration splits into maximal bonding-graph components; at substrate
period q > 1 those components group further into almost-connected clusters,
chained by gaps of Euclidean length at most q. The two-stage transformation
implemented here first drops every substrate-detached component straight
down until it bonds (sliding sideways along the bottom row when it lands
between anchor sites), then gathers the grounded clusters leftward in
q-multiples of the lattice vector. Neither stage ever breaks an existing
bond, so the potential energy cannot increase.

Selection rules the underlying procedure leaves ambiguous are pinned here:
the detached component nearest the substrate moves first (exact arithmetic
in Q[sqrt(3)], ties by lexicographically smallest site), and the gathering
stage always moves the cluster with the second-leftmost substrate anchor.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import cmp_to_key
from typing import Iterable

from .energy import Configuration
from .errors import ConfigError, TransformOrderError
from .lattice import (
    NEIGHBOR_OFFSETS,
    ModelParams,
    Site,
    film_distance_squared,
    has_substrate_bond,
)

__all__ = [
    "ComponentDecomposition",
    "connected_components",
    "is_almost_connected",
    "transform_t1",
    "transform_t2",
    "transform",
    "wetting_configuration",
    "largest_component_fraction",
    "diameter",
]


@dataclass(frozen=True)
class ComponentDecomposition:
    """Bonding-graph components and their almost-connected grouping."""

    components: tuple[Configuration, ...]
    almost_components: tuple[tuple[Configuration, ...], ...]


def _component_sets(sites: Iterable[Site]) -> list[frozenset[Site]]:
    """Maximal bonded subsets, ordered by their lexicographically least site."""
    pool = set(sites)
    seen: set[Site] = set()
    out = []
    for start in sorted(pool):
        if start in seen:
            continue
        group = {start}
        seen.add(start)
        queue = deque([start])
        while queue:
            s = queue.popleft()
            for d1, d2 in NEIGHBOR_OFFSETS:
                nb = Site(s.k1 + d1, s.k2 + d2)
                if nb in pool and nb not in seen:
                    seen.add(nb)
                    group.add(nb)
                    queue.append(nb)
        out.append(frozenset(group))
    return out


def _min_dist_sq(a: Iterable[Site], b: Iterable[Site]) -> int:
    best = None
    bl = list(b)
    for s in a:
        for t in bl:
            d = film_distance_squared(s, t)
            if best is None or d < best:
                best = d
    if best is None:
        raise ValueError("empty component")
    return best


def _almost_group_indices(comps: list[frozenset[Site]], q: int) -> list[list[int]]:
    """Group component indices by chains of gaps of length at most q."""
    parent = list(range(len(comps)))

    def find(i: int) -> int:
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    qq = q * q
    for i in range(len(comps)):
        for j in range(i + 1, len(comps)):
            if _min_dist_sq(comps[i], comps[j]) <= qq:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(len(comps)):
        groups.setdefault(find(i), []).append(i)
    return sorted(groups.values(), key=lambda g: g[0])


def connected_components(
    cfg: Configuration, params: ModelParams
) -> ComponentDecomposition:
    comps = _component_sets(cfg.sites)
    groups = _almost_group_indices(comps, params.q)
    as_cfg = [Configuration(c) for c in comps]
    return ComponentDecomposition(
        components=tuple(as_cfg),
        almost_components=tuple(tuple(as_cfg[i] for i in g) for g in groups),
    )


def is_almost_connected(cfg: Configuration, params: ModelParams) -> bool:
    comps = _component_sets(cfg.sites)
    return len(_almost_group_indices(comps, params.q)) == 1


def _sqrt3_sign(a: Fraction, b: Fraction) -> int:
    """Sign of a + b*sqrt(3) for rational a, b."""
    if a >= 0 and b >= 0:
        return 1 if a or b else 0
    if a <= 0 and b <= 0:
        return -1
    lhs, rhs = a * a, 3 * b * b
    if a > 0:
        return 1 if lhs > rhs else -1 if lhs < rhs else 0
    return 1 if rhs > lhs else -1 if rhs < lhs else 0


def _substrate_gap_sq(s: Site, params: ModelParams) -> tuple[Fraction, Fraction]:
    """Squared distance from a film site to the substrate row, as A + B*sqrt(3)."""
    x = Fraction(2 * s.k1 + s.k2, 2)
    e = params.e_s
    j = math.floor(x / e)
    h2 = min((x - j * e) ** 2, (x - (j + 1) * e) ** 2)
    return h2 + e * e + Fraction(3 * s.k2 * s.k2, 4), e * s.k2


def _gap_cmp(g1: tuple[Fraction, Fraction], g2: tuple[Fraction, Fraction]) -> int:
    return _sqrt3_sign(g1[0] - g2[0], g1[1] - g2[1])


def _bonded_to(group: set[Site], rest: set[Site], params: ModelParams) -> bool:
    for s in group:
        if has_substrate_bond(s, params):
            return True
        for d1, d2 in NEIGHBOR_OFFSETS:
            if Site(s.k1 + d1, s.k2 + d2) in rest:
                return True
    return False


def transform_t1(cfg: Configuration, params: ModelParams) -> Configuration:
    """Ground every substrate-detached component without breaking a bond.

    Components are processed nearest-to-substrate first and translated one
    step down at a time; a component that reaches the bottom row between
    anchor sites slides left until its own substrate bond activates. An
    atom can never land on an occupied site because the bond to that site
    would have stopped the motion one step earlier.
    """
    sites = set(cfg.sites)
    while True:
        comps = _component_sets(sites)
        detached = [
            c for c in comps if not any(has_substrate_bond(s, params) for s in c)
        ]
        if not detached:
            return Configuration(sites)
        gaps = {
            c: min((_substrate_gap_sq(s, params) for s in c), key=cmp_to_key(_gap_cmp))
            for c in detached
        }
        lowest = min(gaps.values(), key=cmp_to_key(_gap_cmp))
        target = min(
            (c for c in detached if _gap_cmp(gaps[c], lowest) == 0),
            key=lambda c: min(c),
        )
        rest = sites - target
        group = set(target)
        while not _bonded_to(group, rest, params):
            if min(s.k2 for s in group) == 0:
                for _ in range(params.q):
                    group = {Site(s.k1 - 1, s.k2) for s in group}
                    if _bonded_to(group, rest, params):
                        break
                else:
                    raise AssertionError("bottom-row slide failed to bond")
                break
            group = {Site(s.k1, s.k2 - 1) for s in group}
        sites = rest | group


def transform_t2(cfg: Configuration, params: ModelParams) -> Configuration:
    """Gather grounded clusters leftward until the whole is almost-connected.

    Raises TransformOrderError when some component has no substrate bond;
    transform_t1 establishes that precondition.
    """
    sites = set(cfg.sites)
    q = params.q
    while True:
        comps = _component_sets(sites)
        for c in comps:
            if not any(has_substrate_bond(s, params) for s in c):
                raise TransformOrderError(
                    "every component must hold a substrate bond before gathering; "
                    "apply transform_t1 first"
                )
        groups = [
            frozenset().union(*(comps[i] for i in g))
            for g in _almost_group_indices(comps, q)
        ]
        if len(groups) == 1:
            return Configuration(sites)

        def anchor(g: frozenset[Site]) -> tuple[int, Site]:
            return min(s.k1 for s in g if has_substrate_bond(s, params)), min(g)

        groups.sort(key=anchor)
        target = set(groups[1])
        rest = sites - target
        while _min_dist_sq(target, rest) > q * q:
            target = {Site(s.k1 - q, s.k2) for s in target}
        sites = rest | target


def transform(cfg: Configuration, params: ModelParams) -> Configuration:
    """Grounding followed by gathering; energy never increases."""
    return transform_t2(transform_t1(cfg, params), params)


def wetting_configuration(n: int, params: ModelParams) -> Configuration:
    """The spread monolayer: a bonded row at q=1, every q-th anchor site else."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ConfigError(f"atom count must be a positive integer, got {n!r}")
    step = 1 if params.q == 1 else params.q
    return Configuration([(i * step, 0) for i in range(n)])


def largest_component_fraction(cfg: Configuration) -> float:
    comps = _component_sets(cfg.sites)
    return max(len(c) for c in comps) / cfg.n


def diameter(cfg: Configuration) -> float:
    """Largest Euclidean distance between two atoms."""
    pts = cfg.sorted_sites
    best = 0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = film_distance_squared(pts[i], pts[j])
            if d > best:
                best = d
    return math.sqrt(best)
