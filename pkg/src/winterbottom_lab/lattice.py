"""Reference lattices, model couplings and the short-range potentials.

Film atoms occupy integer coordinates (k1, k2) with k2 >= 0, mapped to the
plane as (k1 + k2/2, e_S + k2*sqrt(3)/2): a triangular lattice whose lowest
row floats at height e_S above a rigid substrate row with atom spacing
e_S = q/p. Film-film bonds are unit distances; a bottom-row atom is bonded
to the substrate exactly when its abscissa is an integer multiple of q,
which is an exact integer test. All energy-relevant predicates run on
integers or rationals; floats only appear in emitted geometry.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import NamedTuple, Union

from .errors import ConfigError

__all__ = [
    "NEIGHBOR_OFFSETS",
    "ModelParams",
    "Regime",
    "Site",
    "classify_regime",
    "film_distance_squared",
    "has_substrate_bond",
    "neighbors",
    "pair_potential_ff",
    "position",
    "site_key",
    "substrate_potential_v1",
]

Coupling = Union[Fraction, float]

_SQRT3 = math.sqrt(3.0)


class Regime(enum.Enum):
    """Which side of the spreading threshold the couplings sit on."""

    WETTING = "wetting"
    DEWETTING = "dewetting"


class Site(NamedTuple):
    """Lattice coordinates of a film site; behaves as a plain (k1, k2) tuple."""

    k1: int
    k2: int


def _coerce_coupling(value: object, name: str) -> Coupling:
    """Normalize a coupling: exact rationals become Fraction, floats stay float."""
    if isinstance(value, bool):
        raise ConfigError(f"{name} must be a positive number, got {value!r}")
    if isinstance(value, float):
        coupling: Coupling = value
    elif isinstance(value, Rational):
        coupling = Fraction(value)
    else:
        raise ConfigError(f"{name} must be a real number, got {type(value).__name__}")
    if not coupling > 0:
        raise ConfigError(f"{name} must be positive, got {value!r}")
    return coupling


@dataclass(frozen=True)
class ModelParams:
    """Physical couplings (c_F, c_S) and the substrate spacing ratio q/p.

    c_F is the film bond energy, c_S the substrate bond energy, and the
    substrate atoms are spaced q/p film-bond lengths apart with p, q coprime
    positive integers. Integer or Fraction couplings put the model in exact
    mode: every energy in the package is then a Fraction.
    """

    c_F: Coupling
    c_S: Coupling
    p: int = 1
    q: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "c_F", _coerce_coupling(self.c_F, "c_F"))
        object.__setattr__(self, "c_S", _coerce_coupling(self.c_S, "c_S"))
        for name in ("p", "q"):
            value = getattr(self, name)
            if not isinstance(value, int) or isinstance(value, bool) or value < 1:
                raise ConfigError(f"{name} must be a positive integer, got {value!r}")
        if math.gcd(self.p, self.q) != 1:
            raise ConfigError(f"p and q must be coprime, got p={self.p}, q={self.q}")

    @property
    def exact(self) -> bool:
        """True when both couplings are rationals, so energies are exact."""
        return not (isinstance(self.c_F, float) or isinstance(self.c_S, float))

    @property
    def e_s(self) -> Fraction:
        """Substrate atom spacing (also the height of the lowest film row)."""
        return Fraction(self.q, self.p)

    @property
    def sigma(self) -> Coupling:
        """Effective adhesivity 2*c_F - c_S/q of the continuum energy."""
        if isinstance(self.c_S, float) or isinstance(self.c_F, float):
            return 2.0 * float(self.c_F) - float(self.c_S) / self.q
        return 2 * self.c_F - Fraction(self.c_S, self.q)

    @property
    def rho(self) -> float:
        """Atomic density of the bulk lattice per unit area."""
        return 2.0 / _SQRT3

    @property
    def delta_strip(self) -> Coupling:
        """Strip-energy lower bound: 6*c_F - c_S, or 4*c_F - c_S when q = 1."""
        factor = 4 if self.q == 1 else 6
        return factor * self.c_F - self.c_S

    @property
    def delta(self) -> Coupling:
        """Per-boundary-atom coercivity constant min(delta_strip/6, c_F)."""
        if isinstance(self.delta_strip, float) or isinstance(self.c_F, float):
            return min(float(self.delta_strip) / 6.0, float(self.c_F))
        return min(Fraction(self.delta_strip, 6), Fraction(self.c_F))

    @property
    def regime(self) -> Regime:
        return classify_regime(self)


def classify_regime(params: ModelParams) -> Regime:
    """Wetting iff c_S >= 6*c_F (or >= 4*c_F when q = 1), else dewetting.

    The threshold itself counts as wetting: spreading into a substrate-bonded
    monolayer is still optimal there.
    """
    threshold = (4 if params.q == 1 else 6) * params.c_F
    if params.c_S >= threshold:
        return Regime.WETTING
    return Regime.DEWETTING


# Offsets of the six film neighbors. The order is part of the API: clockwise
# starting from (1, 0), with the two oblique pairs last.
NEIGHBOR_OFFSETS: tuple[tuple[int, int], ...] = (
    (1, 0),
    (-1, 0),
    (0, 1),
    (0, -1),
    (1, -1),
    (-1, 1),
)


def neighbors(s: Site | tuple[int, int]) -> list[Site]:
    """Film sites at distance one from s, in the fixed offset order.

    Offsets that would leave the lattice (k2 < 0) are dropped, so bottom-row
    sites have four neighbors.
    """
    k1, k2 = s
    out = []
    for d1, d2 in NEIGHBOR_OFFSETS:
        if k2 + d2 >= 0:
            out.append(Site(k1 + d1, k2 + d2))
    return out


def position(s: Site | tuple[int, int], params: ModelParams) -> tuple[float, float]:
    """Cartesian position of a film site (float output)."""
    k1, k2 = s
    return (k1 + 0.5 * k2, float(params.e_s) + 0.5 * _SQRT3 * k2)


def site_key(s: Site | tuple[int, int]) -> tuple[int, int]:
    """Deterministic site ordering key: lexicographic on (k2, k1)."""
    return (s[1], s[0])


def film_distance_squared(a: Site | tuple[int, int], b: Site | tuple[int, int]) -> int:
    """Exact squared distance between two film sites (integer quadratic form)."""
    d1 = a[0] - b[0]
    d2 = a[1] - b[1]
    return d1 * d1 + d1 * d2 + d2 * d2


def has_substrate_bond(s: Site | tuple[int, int], params: ModelParams) -> bool:
    """True iff s sits on the bottom row directly above a substrate atom.

    A bottom-row site (k1, 0) is at distance e_S from the substrate atom at
    (k*q/p, 0) exactly when p*k1 = k*q for some integer k; with p, q coprime
    that reduces to q | k1.
    """
    k1, k2 = s
    return k2 == 0 and k1 % params.q == 0


def substrate_potential_v1(s: Site | tuple[int, int], params: ModelParams) -> Coupling:
    """One-body substrate energy: -c_S on bonded bottom-row sites, else 0.

    Film sites can never come closer than e_S to a substrate atom, so the
    hard-core branch of the potential is unreachable and the value is finite.
    """
    if has_substrate_bond(s, params):
        return -params.c_S
    return 0 * params.c_S


def pair_potential_ff(r: Coupling, params: ModelParams) -> Coupling:
    """Sticky-disc film-film potential: hard core below 1, -c_F at 1, 0 beyond.

    Meant to be evaluated on exact lattice distances (integers or Fractions);
    float input works but equality with 1 is then the caller's problem.
    """
    if not r > 0:
        raise ConfigError(f"pair distance must be positive, got {r!r}")
    if r < 1:
        return math.inf
    if r == 1:
        return -params.c_F
    return 0 * params.c_F
