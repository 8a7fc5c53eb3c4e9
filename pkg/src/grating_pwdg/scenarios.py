"""Run configurations and scenario wiring for the experiment harness.

A RunConfig couples a scattering scenario (which fixes the geometry and the
reference solution) with a discretization method and its parameters.  Config
files are flat ``key = value`` text; command-line overrides use the same
``key=value`` syntax.
"""

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .assembly import assemble_dtn, assemble_impedance
from .basis import FluxParams, PlaneWaveSpace
from .dtn import DtnSpec
from .errors import InvalidArgumentError
from .exact import (
    PlaneWaveBoundaryData,
    circular_wave,
    impedance_data_from_exact,
    two_layer_coefficients,
    two_layer_field,
)
from .geometry import (
    InterfaceSpec,
    fixed_eight_triangle_mesh,
    generate_periodic_mesh,
    load_mesh,
)

SCENARIOS = ("circular", "planewave", "two_layer", "custom")
METHODS = ("impedance", "dtn")


class ConfigError(ValueError):
    """Invalid run configuration (exit code 2 in the CLI)."""


@dataclass
class RunConfig:
    method: str = "dtn"
    scenario: str = "two_layer"
    k: float = 5.0
    theta: float = -math.pi / 3
    H: float = 3.0
    h_target: float = 1.5
    p: int = 15
    M: int = 100
    eps2: complex = complex(1.27, 0.05) ** 2
    eps_plus: complex = 1.0
    xi: float = 1.0
    d: tuple = (math.sqrt(2) / 2, math.sqrt(2) / 2)
    alpha: float = 0.5
    beta: float = 0.5
    delta: float = 0.5
    duffy_order: int = 10
    gl_points: int = 10
    p_list: list = field(default_factory=lambda: list(range(3, 28)))
    h_list: list = field(default_factory=lambda: [1.5, 0.75, 0.375])
    M_list: list = field(default_factory=lambda: [5, 10, 25, 50, 100])
    mesh_file: str = ""
    eps_map: dict = field(default_factory=dict)
    out: str = ""

    def flux(self):
        return FluxParams(self.alpha, self.beta, self.delta)

    def validate(self):
        if self.method not in METHODS:
            raise ConfigError(f"unknown method {self.method!r}")
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}")
        if self.scenario in ("circular", "planewave") and self.method != "impedance":
            raise ConfigError(f"scenario {self.scenario} requires the impedance method")
        if self.scenario == "custom" and self.method != "dtn":
            raise ConfigError("scenario custom requires the dtn method")
        if self.scenario == "custom" and not self.mesh_file:
            raise ConfigError("scenario custom requires mesh_file")
        if self.scenario == "custom" and not self.eps_map:
            raise ConfigError("scenario custom requires eps.<region> entries")
        if not -math.pi < self.theta < 0:
            raise ConfigError("theta must lie in (-pi, 0)")
        if not self.p_list or not self.h_list or not self.M_list:
            raise ConfigError("sweep ranges must be nonempty")
        try:
            self.flux()
        except InvalidArgumentError as exc:
            raise ConfigError(str(exc)) from exc
        return self


_EVAL_NAMES = {"pi": math.pi, "sqrt": math.sqrt, "cos": math.cos, "sin": math.sin}


def _parse_scalar(text):
    text = text.strip()
    try:
        return int(text)
    except ValueError:
        pass
    try:
        return complex(eval(text, {"__builtins__": {}}, dict(_EVAL_NAMES, j=1j)))
    except Exception as exc:
        raise ConfigError(f"cannot parse value {text!r}") from exc


def _coerce(name, value):
    if name in ("p", "M", "duffy_order", "gl_points"):
        return int(_parse_scalar(value).real)
    if name in ("p_list", "M_list"):
        return [int(_parse_scalar(v).real) for v in _split_list(value)]
    if name == "h_list":
        return [float(_parse_scalar(v).real) for v in _split_list(value)]
    if name in ("eps2", "eps_plus"):
        return _parse_scalar(value)
    if name == "d":
        parts = _split_list(value)
        if len(parts) != 2:
            raise ConfigError("direction d needs two components")
        return (float(_parse_scalar(parts[0]).real),
                float(_parse_scalar(parts[1]).real))
    if name in ("method", "scenario", "mesh_file", "out"):
        return value.strip()
    return float(_parse_scalar(value).real)


def _split_list(value):
    if ":" in value and "," not in value:
        lo, hi = value.split(":")
        return [str(v) for v in range(int(lo), int(hi) + 1)]
    return [v for v in value.split(",") if v.strip()]


def parse_config(path=None, overrides=()):
    """Build a RunConfig from an optional file plus key=value overrides."""
    cfg = RunConfig()
    entries = []
    if path:
        with open(path) as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"malformed config line {line!r}")
                entries.append(line)
    entries.extend(overrides)
    eps_map = dict(cfg.eps_map)
    for entry in entries:
        name, value = (s.strip() for s in entry.split("=", 1))
        if name.startswith("eps."):
            eps_map[int(name[4:])] = _parse_scalar(value)
            continue
        if not hasattr(cfg, name):
            raise ConfigError(f"unknown config key {name!r}")
        cfg = replace(cfg, **{name: _coerce(name, value)})
    cfg.eps_map = eps_map
    return cfg.validate()


# ---------------------------------------------------------------------------
# scenario wiring


def two_layer_interface(eps2, eps1=1.0):
    """Flat interface at x2 = 0: region 0 below (eps2), region 1 above."""
    flat = np.array([[0.0, 0.0], [2.0 * math.pi, 0.0]])
    return InterfaceSpec([flat], {0: complex(eps2), 1: complex(eps1)})


class Problem:
    """A solvable scenario instance: mesh, space, system and reference field."""

    def __init__(self, mesh, space, system, exact=None, dtn_spec=None,
                 interface=None):
        self.mesh = mesh
        self.space = space
        self.system = system
        self.exact = exact
        self.dtn_spec = dtn_spec
        self.interface = interface


def build_problem(cfg, p=None, h=None, M=None):
    """Assemble the configured scenario at the given discretization point."""
    p = cfg.p if p is None else p
    h = cfg.h_target if h is None else h
    M = cfg.M if M is None else M
    flux = cfg.flux()
    if cfg.scenario == "circular":
        mesh = fixed_eight_triangle_mesh()
        space = PlaneWaveSpace.for_mesh(mesh, {0: 1.0}, cfg.k, p)

        def exact(points):
            return circular_wave(points, cfg.xi, cfg.k)

        g_r = impedance_data_from_exact(exact)
        system = assemble_impedance(mesh, space, flux, g_r=g_r,
                                    n_quadrature=cfg.gl_points)
        return Problem(mesh, space, system, exact=exact)
    if cfg.scenario == "planewave":
        mesh = fixed_eight_triangle_mesh()
        space = PlaneWaveSpace.for_mesh(mesh, {0: 1.0}, cfg.k, p)
        d = np.asarray(cfg.d, dtype=float)
        d = d / np.linalg.norm(d)
        wave = PlaneWaveBoundaryData(cfg.k, d)
        system = assemble_impedance(mesh, space, flux, g_r=wave,
                                    n_quadrature=cfg.gl_points)
        return Problem(mesh, space, system, exact=wave.field)
    if cfg.scenario == "two_layer":
        interface = two_layer_interface(cfg.eps2)
        coeffs = two_layer_coefficients(cfg.k, cfg.theta, cfg.eps2, cfg.H)

        def exact(points):
            return two_layer_field(points, coeffs)

        if cfg.method == "dtn":
            mesh = generate_periodic_mesh(interface, cfg.H, h, boundary="grating")
            space = PlaneWaveSpace.for_mesh(mesh, interface.region_eps, cfg.k, p)
            spec = DtnSpec(M=M, alpha0=cfg.k * math.cos(cfg.theta),
                           eps_plus=cfg.eps_plus, k=cfg.k, H=cfg.H)
            system = assemble_dtn(mesh, space, flux, cfg.theta, spec)
            return Problem(mesh, space, system, exact=exact, dtn_spec=spec,
                           interface=interface)
        mesh = generate_periodic_mesh(interface, cfg.H, h, boundary="robin")
        space = PlaneWaveSpace.for_mesh(mesh, interface.region_eps, cfg.k, p)
        g_r = impedance_data_from_exact(exact)
        system = assemble_impedance(mesh, space, flux, g_r=g_r,
                                    n_quadrature=cfg.gl_points)
        return Problem(mesh, space, system, exact=exact, interface=interface)
    if cfg.scenario == "custom":
        mesh = load_mesh(cfg.mesh_file)
        space = PlaneWaveSpace.for_mesh(mesh, cfg.eps_map, cfg.k, p)
        spec = DtnSpec(M=M, alpha0=cfg.k * math.cos(cfg.theta),
                       eps_plus=cfg.eps_plus, k=cfg.k, H=mesh.half_height)
        system = assemble_dtn(mesh, space, flux, cfg.theta, spec)
        return Problem(mesh, space, system, dtn_spec=spec)
    raise ConfigError(f"unknown scenario {cfg.scenario!r}")
