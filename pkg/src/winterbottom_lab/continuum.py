"""Continuum drop energies: anisotropic tension, Wulff and Winterbottom shapes.

The surface tension is the pi/3-periodic, 1-homogeneous function whose
minima 2c_F sit at normal angles 30 + 60k degrees; its Wulff shape is the
regular hexagon with inradius 2c_F, flat top up. A substrate with relative
adhesivity sigma = 2c_F - c_S/q clips that hexagon from below at height
-sigma, producing the Winterbottom shape.

Polygons here are plain float loops. Drop shapes rest on y = 0 and meet
the substrate along their y = 0 edges; free-standing shapes (the centered
Wulff hexagon) may dip below zero, so the constructor does not constrain
the sign of y.
"""

from __future__ import annotations

import math

from shapely.geometry import Polygon as _ShapelyPolygon

from .errors import ConfigError, InvalidPolygon, RegimeError
from .lattice import ModelParams, Regime

ContinuumParams = ModelParams

__all__ = [
    "ContinuumParams",
    "Polygon",
    "surface_tension_gamma",
    "adhesivity_sigma",
    "wulff_shape",
    "winterbottom_shape",
    "continuum_energy",
    "continuum_energy_shifted",
    "scale_to_mass",
]

_CONTACT_TOL = 1e-12


def surface_tension_gamma(nu, params: ModelParams) -> float:
    """Surface tension of an interface with (not necessarily unit) normal nu.

    The angle is reduced modulo pi/3 into [0, pi/3) after subtracting the
    vertical reference direction, then fed to the closed form
    2 c_F (cos(phi) + sin(phi)/sqrt(3)); 1-homogeneity supplies the |nu|
    factor.
    """
    x, y = float(nu[0]), float(nu[1])
    r = math.hypot(x, y)
    if r == 0.0:
        raise ConfigError("surface tension needs a nonzero direction")
    phi = (math.atan2(y, x) - math.pi / 2) % (math.pi / 3)
    return 2.0 * float(params.c_F) * (math.cos(phi) + math.sin(phi) / math.sqrt(3)) * r


def adhesivity_sigma(params: ModelParams) -> float:
    return float(params.sigma)


class Polygon:
    """Simple polygon stored as a counterclockwise open loop of floats.

    Clockwise input is reversed on construction; degenerate or
    self-intersecting input raises InvalidPolygon.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices):
        pts = [(float(x), float(y)) for x, y in vertices]
        if len(pts) >= 2 and pts[0] == pts[-1]:
            pts.pop()
        if len(pts) < 3:
            raise InvalidPolygon("a polygon needs at least 3 distinct vertices")
        twice_area = 0.0
        for i, (x1, y1) in enumerate(pts):
            x2, y2 = pts[(i + 1) % len(pts)]
            twice_area += x1 * y2 - x2 * y1
        if twice_area == 0.0:
            raise InvalidPolygon("zero-area polygon")
        if twice_area < 0.0:
            pts.reverse()
        if not _ShapelyPolygon(pts).is_valid:
            raise InvalidPolygon("self-intersecting or degenerate polygon")
        object.__setattr__(self, "vertices", tuple(pts))

    def __setattr__(self, name, value):
        raise AttributeError("Polygon is immutable")

    def __repr__(self):
        return f"Polygon({len(self.vertices)} vertices, area={self.area:.6g})"

    def __len__(self):
        return len(self.vertices)

    def edges(self):
        """Directed edges (p, q) walking the loop counterclockwise."""
        pts = self.vertices
        return [(pts[i], pts[(i + 1) % len(pts)]) for i in range(len(pts))]

    @property
    def area(self) -> float:
        total = 0.0
        for (x1, y1), (x2, y2) in self.edges():
            total += x1 * y2 - x2 * y1
        return 0.5 * total

    @property
    def perimeter(self) -> float:
        return sum(math.dist(p, q) for p, q in self.edges())

    def _length_at_height(self, h: float) -> float:
        return sum(
            math.dist(p, q)
            for p, q in self.edges()
            if abs(p[1] - h) <= _CONTACT_TOL and abs(q[1] - h) <= _CONTACT_TOL
        )

    @property
    def contact_length(self) -> float:
        """Total length of edges lying on the substrate line y = 0."""
        return self._length_at_height(0.0)

    def translate(self, dx: float, dy: float) -> "Polygon":
        return Polygon([(x + dx, y + dy) for x, y in self.vertices])

    def as_shapely(self) -> _ShapelyPolygon:
        return _ShapelyPolygon(self.vertices)


def _energy_with_contact(poly: Polygon, params: ModelParams, height: float) -> float:
    sigma = float(params.sigma)
    total = 0.0
    for p, q in poly.edges():
        length = math.dist(p, q)
        if abs(p[1] - height) <= _CONTACT_TOL and abs(q[1] - height) <= _CONTACT_TOL:
            total += sigma * length
        else:
            # ccw loop: outward normal is the edge direction rotated -90 deg
            total += surface_tension_gamma((q[1] - p[1], p[0] - q[0]), params)
    return total


def continuum_energy(poly: Polygon, params: ModelParams) -> float:
    """Anisotropic perimeter plus sigma times the length touching y = 0."""
    return _energy_with_contact(poly, params, 0.0)


def continuum_energy_shifted(poly: Polygon, params: ModelParams, n: int) -> float:
    """Same energy with the contact line raised to e_S/sqrt(n)."""
    if not isinstance(n, int) or isinstance(n, bool) or n < 1:
        raise ConfigError(f"atom count must be a positive integer, got {n!r}")
    return _energy_with_contact(poly, params, float(params.e_s) / math.sqrt(n))


def wulff_shape(params: ModelParams) -> Polygon:
    """Free-standing equilibrium hexagon, centered at the origin.

    Intersection of the six half-planes x . nu_k <= 2 c_F over the facet
    normals nu_k at angles 30 + 60k degrees; adjacent facet planes meet at
    radius (2 c_F)/cos(30 deg) in the directions 60k degrees.
    """
    r = 4.0 * float(params.c_F) / math.sqrt(3)
    return Polygon(
        [
            (r * math.cos(k * math.pi / 3), r * math.sin(k * math.pi / 3))
            for k in range(6)
        ]
    )


def _clip_at_floor(pts, floor):
    out = []
    m = len(pts)
    for i in range(m):
        p, q = pts[i], pts[(i + 1) % m]
        p_in = p[1] >= floor - _CONTACT_TOL
        q_in = q[1] >= floor - _CONTACT_TOL
        if p_in:
            out.append(p)
        if p_in != q_in:
            t = (floor - p[1]) / (q[1] - p[1])
            out.append((p[0] + t * (q[0] - p[0]), floor))
    dedup = [pt for i, pt in enumerate(out) if math.dist(pt, out[i - 1]) > _CONTACT_TOL]
    return dedup


def winterbottom_shape(params: ModelParams, mass: float | None = None) -> Polygon:
    """Wulff hexagon clipped from below at -sigma, grounded and normalized.

    The result rests its flat base on y = 0 and is rescaled to the given
    area (default 1/rho = sqrt(3)/2, the mass of the empirical measures).
    Raises RegimeError in the wetting regime, where the minimizer spreads
    and no drop shape exists.
    """
    if params.regime is Regime.WETTING:
        raise RegimeError(
            "continuum drop shape is defined only in the dewetting regime"
        )
    if mass is None:
        mass = math.sqrt(3) / 2
    sigma = float(params.sigma)
    clipped = _clip_at_floor(wulff_shape(params).vertices, -sigma)
    floor = min(y for _, y in clipped)
    grounded = [(x, 0.0 if abs(y - floor) <= _CONTACT_TOL else y - floor) for x, y in clipped]
    return scale_to_mass(Polygon(grounded), mass)


def scale_to_mass(poly: Polygon, mass: float) -> Polygon:
    """Homothety fixing the substrate line that rescales the area to mass."""
    if not mass > 0:
        raise ConfigError(f"target area must be positive, got {mass!r}")
    lam = math.sqrt(mass / poly.area)
    return Polygon([(lam * x, lam * y) for x, y in poly.vertices])
