"""Exact energy bookkeeping on two small droplets.

Walks a rhombus sitting on the substrate and a seven-atom flower floating
above it through the full audit: bond census, strip energies of the anchored
atoms, the coercivity lower bound, and the hull-based surface/adhesion
decomposition that reproduces the rescaled energy exactly.
"""

from fractions import Fraction

from winterbottom_lab import (
    Configuration,
    ModelParams,
    adhesion_length,
    anisotropic_perimeter,
    build_hn,
    decomposition_energy,
    delta_strip,
    has_substrate_bond,
    rescaled_energy,
    straighten_to_hn_prime,
    strip_energy,
    surface_lower_bound,
    total_energy,
)

PARAMS = ModelParams(c_F=1, c_S=2)

RHOMBUS = Configuration([(0, 0), (1, 0), (0, 1), (1, 1)])
FLOWER = Configuration([(0, 3), (1, 3), (-1, 3), (0, 4), (0, 2), (1, 2), (-1, 4)])


def audit(name, cfg):
    print(f"--- {name} ({cfg.n} atoms) ---")
    e = total_energy(cfg, PARAMS)
    print(f"film bonds {e.film_bonds}, substrate bonds {e.substrate_bonds}")
    print(f"V_n = {e.v_n},  E_n = V_n/sqrt(n) + 6 c_F sqrt(n) = {e.e_n:.6f}")
    print(f"boundary atoms {e.boundary_count}, missing film bonds {e.missing_bond_count}")

    anchored = [s for s in cfg.sorted_sites if has_substrate_bond(s, PARAMS)]
    if anchored:
        print(f"strip energies (sharp per-strip floor at q=1 is 3c_F - c_S = {3 * PARAMS.c_F - PARAMS.c_S}):")
        for s in anchored:
            print(f"  centre ({s.k1}, {s.k2}): {strip_energy(s, cfg, PARAMS)}")
    else:
        print("no anchored atoms, so no strips to account")

    floor = surface_lower_bound(cfg, PARAMS)
    print(f"coercivity: V_n = {e.v_n} >= {floor} = -6 c_F n + delta * boundary")

    hnp = straighten_to_hn_prime(build_hn(cfg, PARAMS))
    surface = anisotropic_perimeter(hnp, PARAMS)
    adhesion = adhesion_length(hnp, PARAMS)
    total = decomposition_energy(cfg, PARAMS)
    print(
        f"decomposition: surface {surface:.6f}"
        f" - adhesion {float(PARAMS.c_S) * adhesion:.6f}"
        f" = {total:.6f}"
    )
    print(f"matches E_n exactly: {total == rescaled_energy(cfg, PARAMS)}")
    print()


def main():
    audit("rhombus on the substrate", RHOMBUS)
    audit("flower above the substrate", FLOWER)

    # the identity survives awkward parameters too
    spaced = ModelParams(c_F=Fraction(3, 2), c_S=Fraction(7, 3), p=1, q=3)
    cfg = Configuration([(0, 0), (1, 0), (2, 0), (3, 0), (1, 1), (2, 1)])
    print("rational parameters, q = 3:")
    print(f"  delta_strip rises to 6c_F - c_S = {delta_strip(spaced)}")
    print(
        f"  decomposition total {decomposition_energy(cfg, spaced):.6f}"
        f" == E_n {rescaled_energy(cfg, spaced):.6f}"
    )


if __name__ == "__main__":
    main()
