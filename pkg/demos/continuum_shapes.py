"""Continuum limits: surface tension, Wulff hexagons, Winterbottom truncation.

The lattice model coarse-grains to an anisotropic perimeter functional whose
free minimizer is a regular hexagon. Substrate adhesion replaces the bottom
of that hexagon with a flat contact facet; how much gets cut off depends on
the effective adhesion strength sigma = 2 c_F - c_S / q.
"""

import math
from fractions import Fraction

from winterbottom_lab import (
    ModelParams,
    Polygon,
    RegimeError,
    continuum_energy,
    scale_to_mass,
    surface_tension_gamma,
    winterbottom_shape,
    wulff_shape,
)


def main():
    params = ModelParams(c_F=1, c_S=2)

    print("surface tension of boundary normals (minima at the facet normals):")
    for deg in (30, 60, 90):
        nu = (math.cos(math.radians(deg)), math.sin(math.radians(deg)))
        print(f"  gamma(normal at {deg} deg) = {surface_tension_gamma(nu, params):.6f}")

    hexagon = wulff_shape(params)
    print(f"\nfree Wulff shape: {len(hexagon.vertices)} vertices, area {hexagon.area:.6f}")

    print("\nWinterbottom shapes of unit mass as adhesion strengthens:")
    for c_s in (1, 2, 3, Fraction(39, 10)):
        p = ModelParams(c_F=1, c_S=c_s)
        shape = winterbottom_shape(p)
        width = max(x for x, _ in shape.vertices) - min(x for x, _ in shape.vertices)
        height = max(y for _, y in shape.vertices)
        print(
            f"  c_S = {float(c_s)}: sigma = {float(p.sigma):+.2f}, {len(shape.vertices)} vertices,"
            f" width {width:.3f}, height {height:.3f}, energy {continuum_energy(shape, p):.4f}"
        )

    print("\nat the q=1 wetting threshold (c_S = 4 c_F) the droplet spreads out:")
    try:
        winterbottom_shape(ModelParams(c_F=1, c_S=4))
    except RegimeError as exc:
        print(f"  c_S = 4: {exc}")

    # the shape is the minimizer, so any competitor of equal mass costs more
    p = ModelParams(c_F=1, c_S=2)
    best = winterbottom_shape(p)
    side = math.sqrt(best.area)
    square = Polygon([(0, 0), (side, 0), (side, side), (0, side)])
    taller = scale_to_mass(wulff_shape(p), best.area).translate(0.0, 0.9)
    print("\ncompetitors at equal mass:")
    print(f"  Winterbottom droplet: {continuum_energy(best, p):.4f}")
    print(f"  square on the substrate: {continuum_energy(square, p):.4f}")
    print(f"  hexagon floating clear of it: {continuum_energy(taller, p):.4f}")


if __name__ == "__main__":
    main()
