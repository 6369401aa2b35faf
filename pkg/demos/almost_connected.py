"""The gathering transformation, one stage at a time.

Three droplets float at different heights over a q=2 substrate. Grounding
drops each one until it bonds (downward translations are free for a detached
droplet, and the landing only helps); gathering then walks the grounded
pieces together until they touch or share an anchor period. Energy never
increases, and the result is almost connected: one cluster up to horizontal
gaps of at most q.
"""

import math

from winterbottom_lab import (
    Configuration,
    ModelParams,
    connected_components,
    diameter,
    is_almost_connected,
    total_energy,
    transform,
    transform_t1,
    transform_t2,
)

PARAMS = ModelParams(c_F=1, c_S=3, p=1, q=2)

SCATTERED = Configuration(
    # a floating rhombus, a high pair, and a lone atom far to the right
    [(0, 4), (1, 4), (0, 5), (1, 5), (7, 2), (8, 2), (15, 7)]
)


def report(label, cfg):
    parts = connected_components(cfg, PARAMS)
    e = total_energy(cfg, PARAMS)
    print(f"{label}:")
    print(f"  components {len(parts.components)}, almost-components {len(parts.almost_components)}")
    print(f"  V_n = {e.v_n}, substrate bonds {e.substrate_bonds}")
    print(f"  almost connected: {is_almost_connected(cfg, PARAMS)}")
    print(f"  diameter {diameter(cfg):.3f}")


def main():
    report("scattered start", SCATTERED)

    grounded = transform_t1(SCATTERED, PARAMS)
    print()
    report("after grounding (every droplet bonds to something)", grounded)

    gathered = transform_t2(grounded, PARAMS)
    print()
    report("after gathering", gathered)

    assert gathered == transform(SCATTERED, PARAMS)

    e0 = total_energy(SCATTERED, PARAMS).v_n
    e2 = total_energy(gathered, PARAMS).v_n
    print(f"\nenergy moved {e0} -> {e2} (never up)")

    bound = math.pi * PARAMS.q * total_energy(gathered, PARAMS).boundary_count
    print(f"diameter {diameter(gathered):.3f} <= pi * q * boundary = {bound:.3f}")

    print("\nidempotence: transforming again changes nothing:",
          transform(gathered, PARAMS) == gathered)


if __name__ == "__main__":
    main()
