"""Configurations and exact energies: total, rescaled, local, strip.

The total energy of n film atoms is V_n = -2*c_F*(film bonds) - c_S*(substrate
bonds); the double-sum convention makes each unordered film bond count twice.
The rescaled surface excess E_n = (V_n + 6*c_F*n)/sqrt(n) only sees missing
bonds and adhesion. Strip energies are the weighted local-energy sums used to
bound E_n from below by the boundary size; they are evaluated verbatim,
including the 1/2 weights that split sites shared between adjacent strips.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

from .errors import InvalidConfiguration, NotStripCenter, RegimeError
from .lattice import (
    Coupling,
    ModelParams,
    Regime,
    Site,
    has_substrate_bond,
    neighbors,
    site_key,
    substrate_potential_v1,
)

__all__ = [
    "Configuration",
    "EnergyBreakdown",
    "Strip",
    "boundary_atoms",
    "build_strip",
    "degree",
    "delta_strip",
    "deficiency",
    "excess_energy",
    "local_energy",
    "rescaled_energy",
    "strip_energy",
    "surface_lower_bound",
    "total_energy",
]

# One representative offset per unordered bond direction.
_HALF_OFFSETS = ((1, 0), (0, 1), (1, -1))


class Configuration:
    """An immutable finite set of film sites.

    Accepts any iterable of (k1, k2) integer pairs. Duplicates, empty input
    and negative k2 are rejected rather than silently repaired.
    """

    __slots__ = ("_sites", "_sorted")

    def __init__(self, sites: Iterable[tuple[int, int]]):
        listed = []
        for entry in sites:
            k1, k2 = entry
            if not (isinstance(k1, int) and isinstance(k2, int)):
                raise InvalidConfiguration(f"site coordinates must be integers, got {entry!r}")
            if k2 < 0:
                raise InvalidConfiguration(f"site {entry!r} lies below the film lattice (k2 < 0)")
            listed.append(Site(k1, k2))
        if not listed:
            raise InvalidConfiguration("a configuration needs at least one atom")
        site_set = frozenset(listed)
        if len(site_set) != len(listed):
            raise InvalidConfiguration("duplicate sites in configuration")
        self._sites = site_set
        self._sorted = tuple(sorted(site_set, key=site_key))

    @property
    def sites(self) -> frozenset[Site]:
        return self._sites

    @property
    def sorted_sites(self) -> tuple[Site, ...]:
        """Sites in the canonical (k2, k1) order."""
        return self._sorted

    @property
    def n(self) -> int:
        return len(self._sites)

    def translate(self, d1: int, d2: int) -> "Configuration":
        return Configuration([(s.k1 + d1, s.k2 + d2) for s in self._sorted])

    def __contains__(self, s: object) -> bool:
        return s in self._sites

    def __iter__(self) -> Iterator[Site]:
        return iter(self._sorted)

    def __len__(self) -> int:
        return len(self._sites)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Configuration):
            return self._sites == other._sites
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._sites)

    def __repr__(self) -> str:
        if self.n <= 8:
            inner = ", ".join(f"({s.k1},{s.k2})" for s in self._sorted)
            return f"Configuration([{inner}])"
        return f"Configuration(<{self.n} sites>)"


@dataclass(frozen=True)
class EnergyBreakdown:
    """Bond counts plus the derived total and rescaled energies."""

    film_bonds: int
    substrate_bonds: int
    v_n: Coupling
    e_n: float
    missing_bond_count: int
    boundary_count: int


def degree(s: Site | tuple[int, int], cfg: Configuration) -> int:
    """Number of occupied film neighbors of s."""
    return sum(1 for t in neighbors(s) if t in cfg)


def total_energy(cfg: Configuration, params: ModelParams) -> EnergyBreakdown:
    """Exact energy breakdown of a configuration.

    Film bonds are enumerated once per unordered pair; the returned v_n uses
    the double-sum weight -2*c_F per bond. All counts are integers, so v_n is
    a Fraction whenever the couplings are.
    """
    sites = cfg.sites
    film_bonds = 0
    substrate_bonds = 0
    boundary = 0
    for s in sites:
        deg = 0
        for t in neighbors(s):
            if t in sites:
                deg += 1
        if deg < 6:
            boundary += 1
        for d1, d2 in _HALF_OFFSETS:
            if (s.k1 + d1, s.k2 + d2) in sites:
                film_bonds += 1
        if has_substrate_bond(s, params):
            substrate_bonds += 1
    n = len(sites)
    missing = 6 * n - 2 * film_bonds
    v_n = -2 * params.c_F * film_bonds - params.c_S * substrate_bonds
    e_n = float(params.c_F * missing - params.c_S * substrate_bonds) / math.sqrt(n)
    return EnergyBreakdown(
        film_bonds=film_bonds,
        substrate_bonds=substrate_bonds,
        v_n=v_n,
        e_n=e_n,
        missing_bond_count=missing,
        boundary_count=boundary,
    )


def rescaled_energy(cfg: Configuration, params: ModelParams) -> float:
    """E_n = (V_n + 6*c_F*n)/sqrt(n)."""
    return total_energy(cfg, params).e_n


def excess_energy(cfg: Configuration, params: ModelParams) -> Coupling:
    """The surface excess V_n + 6*c_F*n = sqrt(n)*E_n, kept exact.

    This is the quantity the strip bounds and the geometric decomposition
    control; unlike e_n it carries no irrational sqrt(n) factor.
    """
    b = total_energy(cfg, params)
    return params.c_F * b.missing_bond_count - params.c_S * b.substrate_bonds


def boundary_atoms(cfg: Configuration) -> set[Site]:
    """Occupied sites with fewer than six film neighbors."""
    return {s for s in cfg.sites if degree(s, cfg) < 6}


def local_energy(s: Site | tuple[int, int], cfg: Configuration, params: ModelParams) -> Coupling:
    """Missing-bond count of an occupied site times c_F; 0 off the configuration."""
    site = Site(*s)
    if site not in cfg.sites:
        return 0 * params.c_F
    return params.c_F * (6 - degree(site, cfg))


def deficiency(s: Site | tuple[int, int], cfg: Configuration, params: ModelParams) -> Coupling:
    """Local energy plus the one-body substrate term, for occupied sites."""
    site = Site(*s)
    if site not in cfg.sites:
        return 0 * params.c_F
    return local_energy(site, cfg, params) + substrate_potential_v1(site, params)


@dataclass(frozen=True)
class Strip:
    """The six-site neighborhood used by the strip-energy bound.

    ``top`` is the highest occupied site on the cartesian vertical through the
    center, i.e. among the ladder (k1 - m, 2m); it equals ``center`` when the
    ladder holds nothing above the bottom row. ``occupied`` records which of
    the six sites are in the configuration.
    """

    center: Site
    side_plus: Site
    side_minus: Site
    top: Site
    above_plus: Site
    above_minus: Site
    occupied: frozenset[Site]

    def is_present(self, s: Site) -> bool:
        return s in self.occupied


def _column_top(x: Site, cfg: Configuration) -> Site:
    """Highest occupied site with the same cartesian abscissa as the bottom atom x."""
    max_k2 = max(s.k2 for s in cfg.sites)
    best = x
    for m in range(1, max_k2 // 2 + 1):
        cand = Site(x.k1 - m, 2 * m)
        if cand in cfg.sites:
            best = cand
    return best


def build_strip(x: Site | tuple[int, int], cfg: Configuration, params: ModelParams) -> Strip:
    x = Site(*x)
    if x not in cfg.sites or not has_substrate_bond(x, params):
        raise NotStripCenter(f"{x!r} is not a substrate-bonded atom of the configuration")
    top = _column_top(x, cfg)
    members = (
        x,
        Site(x.k1 + 1, 0),
        Site(x.k1 - 1, 0),
        top,
        Site(top.k1, top.k2 + 1),
        Site(top.k1 - 1, top.k2 + 1),
    )
    occupied = frozenset(s for s in set(members) if s in cfg.sites)
    return Strip(
        center=x,
        side_plus=members[1],
        side_minus=members[2],
        top=top,
        above_plus=members[4],
        above_minus=members[5],
        occupied=occupied,
    )


def _above_weight(sign: int, x: Site, strip: Strip, cfg: Configuration, params: ModelParams) -> Fraction:
    """Weight w_+ (sign=+1) or w_- (sign=-1) of the strip-above terms.

    The weight drops to 1/2 exactly when the corresponding lower side is
    itself a strip center whose column top sits at the same height, so that
    the above-side atom is shared between the two strips. Only possible at
    q = 1, where adjacent bottom atoms can both be substrate-bonded.
    """
    side = Site(x.k1 + sign, 0)
    if side not in cfg.sites or not has_substrate_bond(side, params):
        return Fraction(1)
    side_top = _column_top(side, cfg)
    if side_top.k2 == strip.top.k2:
        return Fraction(1, 2)
    return Fraction(1)


def strip_energy(x: Site | tuple[int, int], cfg: Configuration, params: ModelParams) -> Coupling:
    """Weighted local-energy sum over the strip of a substrate-bonded atom.

    Below part: E_loc(x) + (1/2)E_loc(x+) + (1/2)E_loc(x-) - c_S, with all
    coefficients halved again when q = 1. Above part: E_loc(top) (omitted
    when the top is the center itself) plus w_-*E_loc(above_+) +
    w_+*E_loc(above_-). Local energies of absent sites vanish, so no case
    analysis on membership is needed.
    """
    strip = build_strip(x, cfg, params)
    x = strip.center
    half = Fraction(1, 2)
    e_center = local_energy(x, cfg, params)
    e_plus = local_energy(strip.side_plus, cfg, params)
    e_minus = local_energy(strip.side_minus, cfg, params)
    if params.q == 1:
        below = half * e_center + half * half * (e_plus + e_minus) - params.c_S
    else:
        below = e_center + half * (e_plus + e_minus) - params.c_S
    w_plus = _above_weight(+1, x, strip, cfg, params)
    w_minus = _above_weight(-1, x, strip, cfg, params)
    above = w_minus * local_energy(strip.above_plus, cfg, params) + w_plus * local_energy(
        strip.above_minus, cfg, params
    )
    if strip.top != x:
        above = local_energy(strip.top, cfg, params) + above
    return below + above


def delta_strip(params: ModelParams) -> Coupling:
    """Lower-bound constant for strip energies: 6c_F - c_S, or 4c_F - c_S at q=1."""
    return params.delta_strip


def surface_lower_bound(cfg: Configuration, params: ModelParams) -> Coupling:
    """Coercivity bound -6*c_F*n + delta*#boundary; V_n is at least this.

    Only meaningful in the dewetting regime where delta > 0; in the wetting
    regime the bound is vacuous and asking for it is treated as an error.
    """
    if params.regime is Regime.WETTING:
        raise RegimeError("surface lower bound requires the dewetting regime")
    b = total_energy(cfg, params)
    return -6 * params.c_F * cfg.n + params.delta * b.boundary_count
