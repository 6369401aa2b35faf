"""Configuration files, the experiment harness, and deterministic writers.

Everything the command line front end does is callable from here, so runs
are scriptable and reproducible: an :class:`ExperimentSpec` plus a seed pins
down a result byte for byte.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from io import StringIO
from typing import Optional, Sequence

from .auxgeom import (
    adhesion_length,
    anisotropic_perimeter,
    build_hn,
    decomposition_energy,
    straighten_to_hn_prime,
    symmetric_difference_area,
)
from .continuum import Polygon, continuum_energy, winterbottom_shape
from .energy import Configuration, rescaled_energy, strip_energy, total_energy
from .errors import ConfigError
from .lattice import ModelParams, has_substrate_bond
from .search import (
    EXACT_CAP,
    AnnealSchedule,
    SearchReport,
    anneal_minimize,
    exact_minimize,
    recovery_configuration,
)
from .topology import wetting_configuration

__all__ = [
    "CONFIG_FORMAT",
    "EXPERIMENT_KINDS",
    "ExperimentSpec",
    "configuration_from_dict",
    "configuration_to_dict",
    "convergence_experiment",
    "default_convergence_schedule",
    "energy_report",
    "optimal_horizontal_shift",
    "read_configuration",
    "rows_to_csv",
    "run_experiment",
    "wetting_scan",
    "write_configuration",
]

CONFIG_FORMAT = "winterbottom-lab/1"

EXPERIMENT_KINDS = ("Energy", "Minimize", "WettingScan", "Convergence")

DEFAULT_SCAN_RATIOS = (
    Fraction(7, 2),
    Fraction(4),
    Fraction(11, 2),
    Fraction(59, 10),
    Fraction(6),
    Fraction(13, 2),
)
DEFAULT_SCAN_QS = (1, 2)


def _json_number(value):
    """Integers stay integers so exact mode survives a round trip."""
    if value == int(value):
        return int(value)
    return float(value)


def configuration_to_dict(cfg: Configuration, params: ModelParams) -> dict:
    return {
        "format": CONFIG_FORMAT,
        "c_F": _json_number(params.c_F),
        "c_S": _json_number(params.c_S),
        "p": params.p,
        "q": params.q,
        "sites": [[s.k1, s.k2] for s in cfg.sorted_sites],
    }


def configuration_from_dict(payload) -> tuple[Configuration, ModelParams]:
    """Validate and decode one configuration-file object.

    Raises ConfigError on schema problems and lets Configuration's own
    validation reject bad site lists (negative k2, duplicates, non-integers).
    """
    if not isinstance(payload, dict):
        raise ConfigError("configuration file must hold a JSON object")
    version = payload.get("format")
    if version != CONFIG_FORMAT:
        raise ConfigError(f"unsupported format {version!r}, expected {CONFIG_FORMAT!r}")
    missing = sorted({"c_F", "c_S", "p", "q", "sites"} - payload.keys())
    if missing:
        raise ConfigError(f"configuration file lacks keys: {', '.join(missing)}")
    params = ModelParams(
        c_F=payload["c_F"], c_S=payload["c_S"], p=payload["p"], q=payload["q"]
    )
    raw = payload["sites"]
    if not isinstance(raw, list):
        raise ConfigError(f"sites must be a list of [k1, k2] pairs, got {type(raw).__name__}")
    sites = []
    for entry in raw:
        if not isinstance(entry, (list, tuple)) or len(entry) != 2:
            raise ConfigError(f"sites entries must be [k1, k2] pairs, got {entry!r}")
        sites.append(tuple(entry))
    return Configuration(sites), params


def write_configuration(path, cfg: Configuration, params: ModelParams) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(configuration_to_dict(cfg, params), fh, indent=2, sort_keys=True)
        fh.write("\n")


def read_configuration(path) -> tuple[Configuration, ModelParams]:
    with open(path, encoding="utf-8") as fh:
        try:
            payload = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: not valid JSON ({exc})") from None
    return configuration_from_dict(payload)


@dataclass(frozen=True)
class ExperimentSpec:
    """Serializable description of one run.

    ``n`` always holds a tuple: one entry for Energy/Minimize, the size
    ladder for Convergence, and the scan's n_max for WettingScan.
    """

    kind: str
    params: ModelParams
    n: tuple[int, ...] = ()
    seed: Optional[int] = None
    schedule: Optional[AnnealSchedule] = None
    replicas: int = 8
    window: Optional[tuple[int, int]] = None
    ratios: tuple = DEFAULT_SCAN_RATIOS
    qs: tuple[int, ...] = DEFAULT_SCAN_QS
    source: Optional[str] = None
    out: Optional[str] = None
    fmt: str = "csv"

    def __post_init__(self) -> None:
        if self.kind not in EXPERIMENT_KINDS:
            raise ConfigError(
                f"kind must be one of {', '.join(EXPERIMENT_KINDS)}, got {self.kind!r}"
            )
        if self.fmt not in ("json", "csv"):
            raise ConfigError(f"format must be json or csv, got {self.fmt!r}")

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": {
                "c_F": _json_number(self.params.c_F),
                "c_S": _json_number(self.params.c_S),
                "p": self.params.p,
                "q": self.params.q,
            },
            "n": list(self.n),
            "seed": self.seed,
            "schedule": None if self.schedule is None else self.schedule.as_dict(),
            "replicas": self.replicas,
            "window": None if self.window is None else list(self.window),
            "ratios": [_json_number(r) for r in self.ratios],
            "qs": list(self.qs),
            "source": self.source,
            "out": self.out,
            "fmt": self.fmt,
        }

    @classmethod
    def from_dict(cls, payload: dict) -> "ExperimentSpec":
        sched = payload.get("schedule")
        window = payload.get("window")
        return cls(
            kind=payload["kind"],
            params=ModelParams(**payload["params"]),
            n=tuple(payload.get("n", ())),
            seed=payload.get("seed"),
            schedule=None if sched is None else AnnealSchedule(**sched),
            replicas=payload.get("replicas", 8),
            window=None if window is None else tuple(window),
            ratios=tuple(
                _coerce_ratio(r) for r in payload.get("ratios", DEFAULT_SCAN_RATIOS)
            ),
            qs=tuple(payload.get("qs", DEFAULT_SCAN_QS)),
            source=payload.get("source"),
            out=payload.get("out"),
            fmt=payload.get("fmt", "csv"),
        )


def _cell(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, Fraction):
        return repr(float(value))
    return str(value)


def rows_to_csv(rows: Sequence[dict], fieldnames: Sequence[str]) -> str:
    """Header plus one line per row; '.' decimals, never a semicolon."""
    buf = StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(fieldnames), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({name: _cell(row[name]) for name in fieldnames})
    text = buf.getvalue()
    if ";" in text:
        raise ConfigError("CSV output must not contain ';'")
    return text


def energy_report(cfg: Configuration, params: ModelParams) -> dict:
    """Full audit of one configuration: bonds, strips, decomposition, loops."""
    breakdown = total_energy(cfg, params)
    strips = [
        {"site": [s.k1, s.k2], "strip_energy": float(strip_energy(s, cfg, params))}
        for s in cfg.sorted_sites
        if has_substrate_bond(s, params)
    ]
    hn = build_hn(cfg, params)
    hnp = straighten_to_hn_prime(hn)
    surface = anisotropic_perimeter(hnp, params)
    adhesion = adhesion_length(hnp, params)
    decomposed = decomposition_energy(cfg, params)
    rescaled = rescaled_energy(cfg, params)
    return {
        "n": len(cfg),
        "v_n": float(breakdown.v_n),
        "e_n": breakdown.e_n,
        "film_bonds": breakdown.film_bonds,
        "substrate_bonds": breakdown.substrate_bonds,
        "missing_bond_count": breakdown.missing_bond_count,
        "boundary_count": breakdown.boundary_count,
        "strip": {
            "delta_strip": float(params.delta_strip),
            "centers": strips,
        },
        "decomposition": {
            "surface_term": surface,
            "adhesion_term": float(params.c_S) * adhesion,
            "total": decomposed,
            "rescaled_energy": rescaled,
            "exact": bool(decomposed == rescaled),
        },
        "geometry": {
            "hn_loops": [[list(v) for v in loop] for loop in hn.loops_xy()],
            "hn_prime_loops": [[list(v) for v in loop] for loop in hnp.loops_xy()],
            "adhesion_length": adhesion,
        },
    }


def _coerce_ratio(value) -> Fraction:
    if isinstance(value, float):
        return Fraction(str(value))
    return Fraction(value)


def wetting_scan(
    ratios=DEFAULT_SCAN_RATIOS,
    qs=DEFAULT_SCAN_QS,
    n_max: int = 6,
    c_f=1,
    window=None,
) -> list[dict]:
    """Exact minima against the flat-layer energy over a (c_S/c_F, q) grid.

    Ratios are handled as exact rationals so the optimality flag is a true
    comparison of Fractions, never a float coincidence.
    """
    if not isinstance(n_max, int) or not (1 <= n_max <= EXACT_CAP):
        raise ConfigError(f"n_max must be an integer in 1..{EXACT_CAP}, got {n_max!r}")
    base = Fraction(c_f)
    rows = []
    for q in qs:
        for ratio in ratios:
            exact_ratio = _coerce_ratio(ratio)
            params = ModelParams(c_F=base, c_S=base * exact_ratio, p=1, q=q)
            for n in range(1, n_max + 1):
                wet = total_energy(wetting_configuration(n, params), params).v_n
                report = exact_minimize(n, params, window)
                rows.append(
                    {
                        "c_s_over_c_f": float(exact_ratio),
                        "q": q,
                        "n": n,
                        "exact_minimum": float(report.best_energy),
                        "wetting_energy": float(wet),
                        "wetting_optimal": report.best_energy == wet,
                    }
                )
    return rows


def default_convergence_schedule(n: int) -> AnnealSchedule:
    """Low-temperature polish sized to the configuration: 150 n proposals."""
    steps = 150 * n
    return AnnealSchedule(t0=0.6, alpha=1.0 - 6.0 / steps, steps=steps)


def optimal_horizontal_shift(hnp, target: Polygon, params: ModelParams, n: int):
    """Minimize |H' delta (target + s e1)| over shifts s in (q/sqrt n) Z.

    Returns (shift, area at the shift, unshifted area). Ties prefer the
    smallest |shift| so the result is deterministic.
    """
    step = params.q / math.sqrt(n)
    xs_h = [x for loop in hnp.loops_xy() for x, _ in loop]
    xs_t = [v[0] for v in target.vertices]
    k_lo = min(math.ceil((min(xs_h) - max(xs_t)) / step), 0)
    k_hi = max(math.floor((max(xs_h) - min(xs_t)) / step), 0)
    unshifted = symmetric_difference_area(hnp, target)
    best = (unshifted, 0, 0)
    for k in range(k_lo, k_hi + 1):
        if k == 0:
            continue
        area = symmetric_difference_area(hnp, target.translate(k * step, 0.0))
        candidate = (area, abs(k), k)
        if candidate < best:
            best = candidate
    area, _, k = best
    return k * step, area, unshifted


def convergence_experiment(
    params: ModelParams,
    n_list: Sequence[int],
    seed: int,
    schedule: Optional[AnnealSchedule] = None,
    replicas: int = 8,
    workers: Optional[int] = None,
    warm_start: bool = True,
) -> dict:
    """Anneal a ladder of sizes and compare each drop to the continuum shape.

    Each size starts from its recovery drop (resting on the bottom lattice
    row) unless warm_start is off, runs `replicas` independent annealing
    chains, and reports the rescaled energy gap plus the symmetric
    difference to the optimally shifted continuum polygon. ``schedule``
    may be a fixed AnnealSchedule, a callable mapping n to one, or None
    for the built-in size-scaled default.
    """
    shape = winterbottom_shape(params)
    reference = continuum_energy(shape, params)
    rows = []
    hn_prime_loops = {}
    for n in n_list:
        if schedule is None:
            sched = default_convergence_schedule(n)
        elif callable(schedule):
            sched = schedule(n)
        else:
            sched = schedule
        rested = shape.translate(0.0, float(params.e_s) / math.sqrt(n))
        initial = recovery_configuration(rested, n, params) if warm_start else None
        report = anneal_minimize(
            n,
            params,
            sched,
            seed,
            replicas,
            initial=initial,
            workers=workers,
        )
        hnp = straighten_to_hn_prime(build_hn(report.best, params))
        shift, sym_diff, unshifted = optimal_horizontal_shift(hnp, rested, params, n)
        breakdown = total_energy(report.best, params)
        rows.append(
            {
                "n": n,
                "e_n": report.e_n,
                "reference": reference,
                "gap": abs(report.e_n - reference),
                "sym_diff": sym_diff,
                "shift": shift,
                "sym_diff_unshifted": unshifted,
                "largest_component_fraction": report.largest_component_fraction,
                "boundary_count": breakdown.boundary_count,
            }
        )
        hn_prime_loops[str(n)] = [[list(v) for v in loop] for loop in hnp.loops_xy()]
    return {
        "reference": reference,
        "seed": seed,
        "rows": rows,
        "polygons": {
            "winterbottom": [list(v) for v in shape.vertices],
            "hn_prime": hn_prime_loops,
        },
    }


CONVERGENCE_FIELDS = (
    "n",
    "e_n",
    "reference",
    "gap",
    "sym_diff",
    "shift",
    "sym_diff_unshifted",
    "largest_component_fraction",
    "boundary_count",
)

SCAN_FIELDS = (
    "c_s_over_c_f",
    "q",
    "n",
    "exact_minimum",
    "wetting_energy",
    "wetting_optimal",
)


def run_experiment(spec: ExperimentSpec, workers: Optional[int] = None) -> dict:
    """Dispatch a spec to its implementation and return the result payload."""
    if spec.kind == "Energy":
        if spec.source is None:
            raise ConfigError("an Energy spec needs a source configuration file")
        cfg, params = read_configuration(spec.source)
        return energy_report(cfg, params)
    if spec.kind == "Minimize":
        if len(spec.n) != 1:
            raise ConfigError("a Minimize spec needs exactly one atom count")
        n = spec.n[0]
        if spec.schedule is None:
            report = exact_minimize(n, spec.params, spec.window)
        else:
            if spec.seed is None:
                raise ConfigError("annealed minimization needs a seed")
            report = anneal_minimize(
                n, spec.params, spec.schedule, spec.seed, spec.replicas, workers=workers
            )
        return report.as_dict()
    if spec.kind == "WettingScan":
        n_max = spec.n[0] if spec.n else 6
        rows = wetting_scan(spec.ratios, spec.qs, n_max, window=spec.window)
        return {"rows": rows}
    if spec.seed is None:
        raise ConfigError("a Convergence spec needs a seed")
    return convergence_experiment(
        spec.params,
        spec.n or (50, 100, 200, 400),
        spec.seed,
        schedule=spec.schedule,
        replicas=spec.replicas,
        workers=workers,
    )
