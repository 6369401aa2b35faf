"""Auxiliary hexagon geometry behind the surface-energy decomposition.

Every atom owns the closed Voronoi hexagon of its lattice site (circumradius
1/sqrt(3), vertices up and down). The union of occupied hexagons is traced
combinatorially into oriented loops; dropping every other vertex straightens
the oscillating boundary into unit-length chords. The rescaled atomistic
energy then splits exactly into 2 c_F times the straightened length minus
c_S times the grounded length captured by the substrate anchor strips.

Hexagon vertices are kept in integer coordinates (a, j) meaning the point
(a/2, e_S + j*sqrt(3)/6); all identity-critical arithmetic stays in integers
and Fractions, floats appear only on the way out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .continuum import Polygon, surface_tension_gamma
from .errors import ConfigError
from .energy import Configuration
from .lattice import ModelParams, Site, position

__all__ = [
    "PolyLoopSet",
    "voronoi_cell",
    "build_hn",
    "straighten_to_hn_prime",
    "adhesion_length",
    "anisotropic_perimeter",
    "decomposition_energy",
    "symmetric_difference_area",
]

# Vertex offsets from a cell's doubled center (a, j) = (2 k1 + k2, 3 k2),
# counterclockwise starting at polar angle 30 degrees. Parity alternates:
# j mod 3 == 1 on the even sublattice, == 2 on the odd one.
_VERTEX_OFFSETS = ((1, 1), (0, 2), (-1, 1), (-1, -1), (0, -2), (1, -1))

# Neighbour displacement across the hexagon edge joining vertex k to k+1.
_EDGE_NEIGHBOR = ((0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1), (1, 0))

_SQRT3 = math.sqrt(3)


def _require_count(n) -> int:
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ConfigError(f"atom count must be a positive integer, got {n!r}")
    return n


@dataclass(frozen=True)
class PolyLoopSet:
    """Oriented loops of hexagon vertices: outer ones ccw, holes cw.

    Vertices are exact integer pairs (a, j); n and e_s fix the embedding
    x = a/(2 sqrt(n)), y = (e_S + j sqrt(3)/6)/sqrt(n).
    """

    loops: tuple[tuple[tuple[int, int], ...], ...]
    n: int
    e_s: Fraction

    @property
    def scale(self) -> float:
        return 1.0 / math.sqrt(self.n)

    def vertex_xy(self, v: tuple[int, int]) -> tuple[float, float]:
        a, j = v
        inv = self.scale
        return a / 2 * inv, (float(self.e_s) + j * _SQRT3 / 6) * inv

    def loops_xy(self) -> list[list[tuple[float, float]]]:
        return [[self.vertex_xy(v) for v in loop] for loop in self.loops]

    def total_length(self) -> float:
        """H^1 measure of all loops, in the rescaled frame."""
        total = 0.0
        for loop in self.loops_xy():
            total += sum(
                math.dist(loop[i], loop[(i + 1) % len(loop)])
                for i in range(len(loop))
            )
        return total

    def _loop_area_int(self, loop) -> int:
        # Doubled shoelace in (a, j) integer coordinates; the embedded
        # signed area is this integer times sqrt(3)/24/n.
        out = 0
        for i in range(len(loop)):
            a1, j1 = loop[i]
            a2, j2 = loop[(i + 1) % len(loop)]
            out += a1 * j2 - a2 * j1
        return out

    def signed_area(self) -> float:
        """Enclosed area (holes negative), in the rescaled frame."""
        return sum(self._loop_area_int(l) for l in self.loops) * _SQRT3 / 24 / self.n


def voronoi_cell(s, n: int, params: ModelParams):
    """The six scaled vertices of an atom's hexagon, ccw from 30 degrees."""
    _require_count(n)
    cx, cy = position(Site(*s), params)
    inv = 1.0 / math.sqrt(n)
    r = 1.0 / _SQRT3
    return tuple(
        (
            (cx + r * math.cos(math.radians(30 + 60 * k))) * inv,
            (cy + r * math.sin(math.radians(30 + 60 * k))) * inv,
        )
        for k in range(6)
    )


def _cell_vertices(s: Site):
    a, j = 2 * s.k1 + s.k2, 3 * s.k2
    return tuple((a + da, j + dj) for da, dj in _VERTEX_OFFSETS)


def build_hn(cfg: Configuration, params: ModelParams, n: int | None = None) -> PolyLoopSet:
    """Trace the boundary of the union of occupied hexagons.

    Walks directed hexagon edges that face an unoccupied cell, keeping the
    occupied side on the left; around any hexagon vertex at most one such
    edge leaves, so following successors yields simple loops.
    """
    n = cfg.n if n is None else _require_count(n)
    occupied = cfg.sites
    succ: dict[tuple[int, int], tuple[int, int]] = {}
    for s in occupied:
        verts = _cell_vertices(s)
        for k in range(6):
            d1, d2 = _EDGE_NEIGHBOR[k]
            if Site(s.k1 + d1, s.k2 + d2) not in occupied:
                start = verts[k]
                assert start not in succ, "union boundary is not a manifold"
                succ[start] = verts[(k + 1) % 6]
    loops = []
    seen = set()
    for start in sorted(succ):
        if start in seen:
            continue
        loop = [start]
        seen.add(start)
        cur = succ[start]
        while cur != start:
            loop.append(cur)
            seen.add(cur)
            cur = succ[cur]
        loops.append(tuple(loop))
    return PolyLoopSet(loops=tuple(loops), n=n, e_s=params.e_s)


def straighten_to_hn_prime(hn: PolyLoopSet) -> PolyLoopSet:
    """Keep only odd-sublattice vertices, joining them by unit chords."""
    return PolyLoopSet(
        loops=tuple(
            tuple(v for v in loop if v[1] % 3 == 2) for loop in hn.loops
        ),
        n=hn.n,
        e_s=hn.e_s,
    )


def _adhesion_abscissa(hnp: PolyLoopSet, q: int) -> Fraction:
    """Exact unscaled length of bottom chords inside the anchor strips.

    Bottom chords are the horizontal segments at j = -1; anchor strips are
    the width-1 intervals centered on the substrate-bondable abscissae kq.
    Everything is rational: lengths are halves of integer overlaps.
    """
    total = Fraction(0)
    for loop in hnp.loops:
        m = len(loop)
        for i in range(m):
            a1, j1 = loop[i]
            a2, j2 = loop[(i + 1) % m]
            if j1 != -1 or j2 != -1:
                continue
            lo, hi = min(a1, a2), max(a1, a2)
            k_lo = math.ceil(Fraction(lo - 1, 2 * q))
            k_hi = math.floor(Fraction(hi + 1, 2 * q))
            for k in range(k_lo, k_hi + 1):
                overlap = min(hi, 2 * k * q + 1) - max(lo, 2 * k * q - 1)
                if overlap > 0:
                    total += Fraction(overlap, 2)
    return total


def adhesion_length(hnp: PolyLoopSet, params: ModelParams, n: int | None = None) -> float:
    """Scaled length of the straightened boundary resting on anchor strips."""
    n = hnp.n if n is None else _require_count(n)
    return float(_adhesion_abscissa(hnp, params.q)) / math.sqrt(n)


def anisotropic_perimeter(loops: PolyLoopSet, params: ModelParams) -> float:
    """Surface tension integrated over the loops' outward normals."""
    inv = loops.scale
    total = 0.0
    for loop in loops.loops:
        m = len(loop)
        for i in range(m):
            a1, j1 = loop[i]
            a2, j2 = loop[(i + 1) % m]
            dx = (a2 - a1) / 2 * inv
            dy = (j2 - j1) * _SQRT3 / 6 * inv
            total += surface_tension_gamma((dy, -dx), params)
    return total


def _chord_count(hnp: PolyLoopSet) -> int:
    count = 0
    for loop in hnp.loops:
        m = len(loop)
        for i in range(m):
            a1, j1 = loop[i]
            a2, j2 = loop[(i + 1) % m]
            assert 3 * (a2 - a1) ** 2 + (j2 - j1) ** 2 == 12, "chord is not unit"
            count += 1
    return count


def decomposition_energy(cfg: Configuration, params: ModelParams, n: int | None = None) -> float:
    """Geometric form of the rescaled energy.

    2 c_F times the straightened boundary length minus c_S times the
    adhesion length; agrees with rescaled_energy exactly, since chords have
    unit length and both sides reduce to the same rational numerator.
    """
    n = cfg.n if n is None else _require_count(n)
    hnp = straighten_to_hn_prime(build_hn(cfg, params, n))
    value = 2 * params.c_F * _chord_count(hnp) - params.c_S * _adhesion_abscissa(
        hnp, params.q
    )
    return float(value) / math.sqrt(n)


def _loopset_as_shapely(obj: PolyLoopSet):
    from shapely.geometry import Polygon as ShapelyPolygon

    ranked = sorted(
        (loop for loop in obj.loops),
        key=lambda l: abs(obj._loop_area_int(l)),
        reverse=True,
    )
    geom = None
    for loop in ranked:
        piece = ShapelyPolygon([obj.vertex_xy(v) for v in loop])
        if obj._loop_area_int(loop) > 0:
            geom = piece if geom is None else geom.union(piece)
        else:
            geom = piece.difference(piece) if geom is None else geom.difference(piece)
    return geom


def symmetric_difference_area(a, b) -> float:
    """|A delta B| for loop sets and polygons, via polygon booleans."""
    ga = _loopset_as_shapely(a) if isinstance(a, PolyLoopSet) else a.as_shapely()
    gb = _loopset_as_shapely(b) if isinstance(b, PolyLoopSet) else b.as_shapely()
    return float(ga.symmetric_difference(gb).area)
