"""Plane-wave discontinuous Galerkin solvers for 2-D Helmholtz scattering
by periodic gratings: impedance-PWDG on bounded strips and quasi-periodic
DtN-PWDG with a truncated Rayleigh-mode radiation condition."""

from .assembly import (
    DofLayout,
    LinearSystem,
    assemble_dtn,
    assemble_impedance,
    dump_system,
)
from .basis import (
    FluxParams,
    PlaneWaveSpace,
    direction_set,
    edge_pw_integral,
    edge_quadrature,
    eval_basis,
    psi,
)
from .dtn import (
    BoundaryTrace,
    DtnSpec,
    apply_dtn,
    boundary_l2_pairing,
    dtn_coupling_block,
    mode_beta,
    trace_fourier_coefficient,
)
from .exact import (
    PlaneWaveBoundaryData,
    TwoLayerCoeffs,
    bessel_j,
    circular_wave,
    impedance_data_from_exact,
    two_layer_coefficients,
    two_layer_field,
)
from .geometry import (
    Face,
    FaceTag,
    InterfaceSpec,
    Mesh,
    ValidationReport,
    fixed_eight_triangle_mesh,
    generate_periodic_mesh,
    load_mesh,
    save_mesh,
    validate_mesh,
)
from .harness import SweepRecord, run_compare, run_field_dump, run_solve, run_sweep
from .scenarios import RunConfig, build_problem, parse_config, two_layer_interface
from .solution import (
    DiscreteSolution,
    ErrorReport,
    error_norms,
    evaluate,
    extend_quasiperiodic,
    sample_field,
    solve,
    solve_system,
    tdg_norm,
    triangle_quadrature,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
