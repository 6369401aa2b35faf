"""Energy tests, cross-checked against a float-geometry oracle.

The oracle below recomputes bond counts from raw cartesian positions and
never touches the package's neighbour tables, so agreement is meaningful.
"""

import math
import random
from fractions import Fraction

import pytest

from winterbottom_lab import (
    Configuration,
    InvalidConfiguration,
    ModelParams,
    NotStripCenter,
    RegimeError,
    Site,
    boundary_atoms,
    build_strip,
    deficiency,
    delta_strip,
    excess_energy,
    local_energy,
    rescaled_energy,
    strip_energy,
    substrate_potential_v1,
    surface_lower_bound,
    total_energy,
)

_OFFSETS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))

# Hexagonal flower: one centre atom ringed by its six neighbours.
FLOWER = [(0, 3), (1, 3), (-1, 3), (0, 4), (0, 2), (1, 2), (-1, 4)]


def oracle_breakdown(sites, params):
    """Count bonds from scratch using float positions only.

    Film bond: pair at distance 1. Substrate bond: film atom at distance
    e_S from some substrate atom j*e_S on the x-axis. Returns (film_bonds,
    substrate_bonds, V) as floats.
    """
    e_s = params.q / params.p
    pts = [(k1 + k2 / 2.0, e_s + k2 * math.sqrt(3) / 2.0) for k1, k2 in sites]
    fb = 0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            d = math.hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1])
            if abs(d - 1.0) < 1e-9:
                fb += 1
    xs = [p[0] for p in pts]
    j_lo = math.floor((min(xs) - 2) / e_s)
    j_hi = math.ceil((max(xs) + 2) / e_s)
    sb = 0
    for x, y in pts:
        for j in range(j_lo, j_hi + 1):
            if abs(math.hypot(x - j * e_s, y) - e_s) < 1e-9:
                sb += 1
                break
    v = -2.0 * float(params.c_F) * fb - float(params.c_S) * sb
    return fb, sb, v


def grow_blob(rng, n):
    sites = {(0, 0)}
    while len(sites) < n:
        k1, k2 = rng.choice(sorted(sites))
        d1, d2 = rng.choice(_OFFSETS)
        if k2 + d2 >= 0:
            sites.add((k1 + d1, k2 + d2))
    return sorted(sites)


def scatter(rng, n):
    sites = set()
    while len(sites) < n:
        sites.add((rng.randint(-8, 8), rng.randint(0, 8)))
    return sorted(sites)


def stacked_rows(rng, n):
    sites = []
    k2 = 0
    while len(sites) < n:
        width = rng.randint(1, 6)
        start = rng.randint(-3, 3)
        for k1 in range(start, start + width):
            if len(sites) < n:
                sites.append((k1, k2))
        k2 += 1
    return sites


def sample_family(seed, count, params):
    """A deterministic mixed bag of small configurations."""
    rng = random.Random(seed)
    makers = [grow_blob, scatter, stacked_rows]
    family = [[(0, 0)], [(0, 0), (5, 1)], FLOWER]
    for _ in range(count):
        family.append(makers[rng.randrange(3)](rng, rng.randint(1, 36)))
    return [Configuration(sites) for sites in family]


class TestConfiguration:
    def test_basic_accessors(self):
        cfg = Configuration([(2, 1), (0, 0)])
        assert cfg.n == 2
        assert (0, 0) in cfg
        assert Site(2, 1) in cfg
        assert (9, 9) not in cfg
        assert cfg.sorted_sites == (Site(0, 0), Site(2, 1))

    def test_translate(self):
        cfg = Configuration([(0, 0), (1, 0)]).translate(3, 2)
        assert set(cfg.sites) == {(3, 2), (4, 2)}

    def test_equality_ignores_input_order(self):
        a = Configuration([(0, 0), (1, 0), (0, 1)])
        b = Configuration([(0, 1), (0, 0), (1, 0)])
        assert a == b
        assert hash(a) == hash(b)

    @pytest.mark.parametrize(
        "sites",
        [
            [],
            [(0, 0), (0, 0)],
            [(0, -1)],
            [(0.5, 1)],
            [(0, 1.0)],
        ],
    )
    def test_rejects_bad_input(self, sites):
        with pytest.raises(InvalidConfiguration):
            Configuration(sites)


class TestTotalEnergy:
    def test_flower_is_minus_24(self):
        params = ModelParams(c_F=2, c_S=5, p=1, q=3)
        b = total_energy(Configuration(FLOWER), params)
        assert b.film_bonds == 12
        assert b.substrate_bonds == 0
        assert b.v_n == Fraction(-48)
        assert b.missing_bond_count == 6 * 7 - 24
        assert b.boundary_count == 6

    def test_flower_against_oracle(self):
        params = ModelParams(c_F=2, c_S=5, p=1, q=3)
        fb, sb, v = oracle_breakdown(FLOWER, params)
        assert (fb, sb) == (12, 0)
        assert v == -48.0

    def test_single_atom_bonded(self):
        params = ModelParams(c_F=1, c_S=3, q=1)
        b = total_energy(Configuration([(0, 0)]), params)
        assert b.v_n == Fraction(-3)
        assert b.e_n == pytest.approx(6 - 3)

    def test_single_atom_floating(self):
        params = ModelParams(c_F=1, c_S=3, q=1)
        b = total_energy(Configuration([(0, 5)]), params)
        assert b.v_n == 0
        assert b.e_n == pytest.approx(6.0)

    def test_contiguous_row_q1(self):
        # n=4 atoms in a bonded row: 3 film bonds, 4 substrate bonds, and
        # E_4 = 9 c_F - 2 c_S after rescaling by sqrt(4).
        params = ModelParams(c_F=1, c_S=2, q=1)
        b = total_energy(Configuration([(k, 0) for k in range(4)]), params)
        assert b.film_bonds == 3
        assert b.substrate_bonds == 4
        assert b.v_n == Fraction(-14)
        assert b.e_n == pytest.approx(9 - 2 * 2)

    def test_spread_row_q2(self):
        params = ModelParams(c_F=1, c_S=5, p=1, q=2)
        b = total_energy(Configuration([(0, 0), (2, 0), (4, 0)]), params)
        assert b.film_bonds == 0
        assert b.substrate_bonds == 3
        assert b.v_n == Fraction(-15)

    @pytest.mark.parametrize("q,p", [(1, 1), (2, 1), (3, 2)])
    def test_family_matches_oracle(self, q, p):
        params = ModelParams(c_F=1.25, c_S=2.5, p=p, q=q)
        for cfg in sample_family(97 + q + p, 40, params):
            b = total_energy(cfg, params)
            fb, sb, v = oracle_breakdown(cfg.sorted_sites, params)
            assert (b.film_bonds, b.substrate_bonds) == (fb, sb)
            assert float(b.v_n) == pytest.approx(v, abs=1e-9)

    def test_excess_energy_is_exact_rescaled(self):
        params = ModelParams(c_F=3, c_S=7, p=1, q=2)
        for cfg in sample_family(11, 25, params):
            b = total_energy(cfg, params)
            excess = excess_energy(cfg, params)
            assert excess == params.c_F * b.missing_bond_count - params.c_S * b.substrate_bonds
            assert b.e_n == pytest.approx(float(excess) / math.sqrt(cfg.n))
            assert rescaled_energy(cfg, params) == pytest.approx(b.e_n)

    def test_translation_along_substrate_period(self):
        params = ModelParams(c_F=1, c_S=3, p=1, q=3)
        cfg = Configuration(grow_blob(random.Random(5), 20))
        for k in (1, -2):
            moved = cfg.translate(k * params.q, 0)
            assert total_energy(moved, params) == total_energy(cfg, params)

    def test_lift_off_substrate_loses_adhesion_only(self):
        params = ModelParams(c_F=1, c_S=3, q=1)
        cfg = Configuration([(k, 0) for k in range(5)])
        lifted = cfg.translate(0, 1)
        b0 = total_energy(cfg, params)
        b1 = total_energy(lifted, params)
        assert b1.film_bonds == b0.film_bonds
        assert b1.substrate_bonds == 0
        assert b1.v_n - b0.v_n == params.c_S * 5


class TestLocalEnergy:
    def test_flower_values(self):
        params = ModelParams(c_F=2, c_S=1, q=2)
        cfg = Configuration(FLOWER)
        assert local_energy((0, 3), cfg, params) == 0
        for petal in FLOWER[1:]:
            assert local_energy(petal, cfg, params) == 3 * params.c_F

    def test_absent_site_has_zero_local_energy(self):
        params = ModelParams(c_F=2, c_S=1, q=2)
        cfg = Configuration(FLOWER)
        assert local_energy((40, 0), cfg, params) == 0

    def test_deficiency_of_isolated_atom(self):
        # Six missing film bonds minus the one active substrate bond.
        params = ModelParams(c_F=1, c_S=1, q=1)
        cfg = Configuration([(0, 0)])
        assert deficiency((0, 0), cfg, params) == 5
        assert deficiency((0, 5), Configuration([(0, 5)]), params) == 6

    @pytest.mark.parametrize("q", [1, 2])
    def test_local_decomposition_identity(self, q):
        # 6 c_F n + V_n equals the sum of local energies plus substrate
        # potentials, exactly, for arbitrary configurations.
        params = ModelParams(c_F=2, c_S=5, q=q)
        for cfg in sample_family(31 + q, 30, params):
            b = total_energy(cfg, params)
            lhs = 6 * params.c_F * cfg.n + b.v_n
            rhs = sum(local_energy(s, cfg, params) for s in cfg.sites) + sum(
                substrate_potential_v1(s, params) for s in cfg.sites
            )
            assert lhs == rhs

    def test_boundary_atoms_flower(self):
        cfg = Configuration(FLOWER)
        assert boundary_atoms(cfg) == frozenset(Site(*s) for s in FLOWER[1:])

    def test_boundary_atoms_rhombus(self):
        cfg = Configuration([(i, j) for i in range(4) for j in range(4)])
        boundary = boundary_atoms(cfg)
        assert len(boundary) == 12
        assert Site(1, 1) not in boundary
        assert Site(2, 2) not in boundary


class TestStrip:
    def test_rejects_non_centers(self):
        params = ModelParams(c_F=1, c_S=1, p=1, q=2)
        cfg = Configuration([(0, 0), (1, 0), (0, 1)])
        with pytest.raises(NotStripCenter):
            build_strip((1, 0), cfg, params)  # occupied but not bondable at q=2
        with pytest.raises(NotStripCenter):
            build_strip((2, 0), cfg, params)  # bondable site, no atom
        with pytest.raises(NotStripCenter):
            build_strip((0, 1), cfg, params)  # not on the bottom row

    def test_column_follows_vertical_ladder(self):
        # Sites above the centre share its cartesian abscissa, which in
        # index coordinates is the sequence (k1 - m, 2m), not the t2 ray.
        params = ModelParams(c_F=1, c_S=1, q=1)
        cfg = Configuration([(0, 0), (-1, 2), (-2, 4), (5, 0)])
        s = build_strip((0, 0), cfg, params)
        assert s.top == Site(-2, 4)
        assert s.above_plus == Site(-2, 5)
        assert s.above_minus == Site(-3, 5)

    def test_t2_ray_is_not_the_column(self):
        params = ModelParams(c_F=1, c_S=1, q=1)
        cfg = Configuration([(0, 0), (0, 1), (0, 2)])
        s = build_strip((0, 0), cfg, params)
        assert s.top == Site(0, 0)

    def test_isolated_atom_q2(self):
        params = ModelParams(c_F=1, c_S=2, p=1, q=2)
        cfg = Configuration([(0, 0)])
        assert strip_energy((0, 0), cfg, params) == 6 * params.c_F - params.c_S

    def test_isolated_atom_q1(self):
        # Below: (1/2)*6c_F - c_S; above is empty since the top is the
        # centre and both above sites are vacant.
        params = ModelParams(c_F=1, c_S=2, q=1)
        cfg = Configuration([(0, 0)])
        assert strip_energy((0, 0), cfg, params) == 3 * params.c_F - params.c_S

    def test_weight_pairing_is_crossed(self):
        # With {(0,0),(1,0),(0,1)} at q=1 the right side triggers w_+ = 1/2,
        # and w_+ multiplies E_loc of the *minus* above site (vacant here),
        # while the occupied plus above site keeps full weight w_- = 1:
        # E = [3c_F - c_S] + 1*4c_F + (1/2)*0.
        params = ModelParams(c_F=1, c_S=2, q=1)
        cfg = Configuration([(0, 0), (1, 0), (0, 1)])
        assert strip_energy((0, 0), cfg, params) == 7 * params.c_F - params.c_S

    def test_bonded_pair_q1(self):
        params = ModelParams(c_F=1, c_S=2, q=1)
        cfg = Configuration([(0, 0), (1, 0)])
        assert strip_energy((0, 0), cfg, params) == Fraction(15, 4) - params.c_S

    @pytest.mark.parametrize("q", [2, 3])
    def test_lower_bound_holds_at_q_not_1(self, q):
        params = ModelParams(c_F=1, c_S=Fraction(3, 2), p=1, q=q)
        bound = delta_strip(params)
        assert bound == 6 * params.c_F - params.c_S
        seen = []
        for cfg in sample_family(200 + q, 45, params):
            for s in cfg.sites:
                if s.k2 == 0 and s.k1 % q == 0:
                    seen.append(strip_energy(s, cfg, params))
        assert seen
        assert min(seen) >= bound
        assert min(seen) == bound  # attained by the isolated bonded atom

    def test_lower_bound_q1_corrected_constant(self):
        # The sharp strip constant at q=1 is 3c_F - c_S, attained by an
        # isolated bonded atom; the advertised 4c_F - c_S is exercised (and
        # seen to fail) in the acceptance suite.
        params = ModelParams(c_F=1, c_S=3, q=1)
        seen = []
        for cfg in sample_family(77, 45, params):
            for s in cfg.sites:
                if s.k2 == 0:
                    seen.append(strip_energy(s, cfg, params))
        assert min(seen) == 3 * params.c_F - params.c_S
        assert min(seen) < delta_strip(params)

    def test_delta_strip_values(self):
        assert delta_strip(ModelParams(c_F=1, c_S=3, q=1)) == 1
        assert delta_strip(ModelParams(c_F=1, c_S=3, p=1, q=2)) == 3


class TestSurfaceLowerBound:
    def test_refuses_wetting_parameters(self):
        params = ModelParams(c_F=1, c_S=7, p=1, q=2)
        with pytest.raises(RegimeError):
            surface_lower_bound(Configuration([(0, 0)]), params)

    @pytest.mark.parametrize(
        "params",
        [
            ModelParams(c_F=1, c_S=Fraction(7, 2), q=1),
            ModelParams(c_F=1, c_S=5, p=1, q=2),
            ModelParams(c_F=2, c_S=1, p=2, q=3),
        ],
    )
    def test_coercivity_on_family(self, params):
        for cfg in sample_family(400 + params.q, 40, params):
            b = total_energy(cfg, params)
            bound = surface_lower_bound(cfg, params)
            assert b.v_n >= bound
            assert bound == -6 * params.c_F * cfg.n + params.delta * b.boundary_count

    @pytest.mark.parametrize("q", [1, 2])
    def test_equiboundedness_sandwich(self, q):
        # Delta * #boundary <= sqrt(n) E_n <= 6 c_F * #boundary.
        params = ModelParams(c_F=1, c_S=3, p=1, q=q)
        for cfg in sample_family(500 + q, 40, params):
            b = total_energy(cfg, params)
            excess = excess_energy(cfg, params)
            assert params.delta * b.boundary_count <= excess
            assert excess <= 6 * params.c_F * b.boundary_count
