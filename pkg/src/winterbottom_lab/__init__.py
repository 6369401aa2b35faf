"""Atomistic wetting/dewetting on a triangular film lattice over a rigid substrate.

Exact lattice energies and strip bounds, ground-state search (exact and
annealed), the almost-connecting rearrangement, auxiliary hexagon geometry
with an exact surface-energy decomposition, and the continuum anisotropic
drop energies the discrete model converges to.
"""

from .errors import (
    ConfigError,
    InvalidConfiguration,
    InvalidPolygon,
    NotStripCenter,
    RegimeError,
    TransformOrderError,
    WindowWarning,
)
from .lattice import (
    NEIGHBOR_OFFSETS,
    ModelParams,
    Regime,
    Site,
    classify_regime,
    film_distance_squared,
    has_substrate_bond,
    neighbors,
    pair_potential_ff,
    position,
    site_key,
    substrate_potential_v1,
)
from .energy import (
    Configuration,
    EnergyBreakdown,
    Strip,
    boundary_atoms,
    build_strip,
    deficiency,
    degree,
    delta_strip,
    excess_energy,
    local_energy,
    rescaled_energy,
    strip_energy,
    surface_lower_bound,
    total_energy,
)
from .topology import (
    ComponentDecomposition,
    connected_components,
    diameter,
    is_almost_connected,
    largest_component_fraction,
    transform,
    transform_t1,
    transform_t2,
    wetting_configuration,
)
from .continuum import (
    ContinuumParams,
    Polygon,
    adhesivity_sigma,
    continuum_energy,
    continuum_energy_shifted,
    scale_to_mass,
    surface_tension_gamma,
    winterbottom_shape,
    wulff_shape,
)
from .auxgeom import (
    PolyLoopSet,
    adhesion_length,
    anisotropic_perimeter,
    build_hn,
    decomposition_energy,
    straighten_to_hn_prime,
    symmetric_difference_area,
    voronoi_cell,
)
from .search import (
    AnnealSchedule,
    ExactCertificate,
    HeuristicCertificate,
    SearchReport,
    anneal_minimize,
    bond_crossing_count,
    configuration_from_polygon,
    exact_minimize,
    recovery_configuration,
    snap_polygon_vertices,
)
from .experiments import (
    CONFIG_FORMAT,
    ExperimentSpec,
    convergence_experiment,
    energy_report,
    read_configuration,
    run_experiment,
    wetting_scan,
    write_configuration,
)

__version__ = "0.1.0"
