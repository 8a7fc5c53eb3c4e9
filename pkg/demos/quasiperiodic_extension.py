"""Step-profile grating solved on one period and extended quasi-periodically.

The strip [0, 2*pi] x [-2, 2] is split by a piecewise-constant profile (a
raised tooth over the middle half period) into air above and an absorbing
dielectric below; k = 2, incidence -pi/4.  The solution of the single-cell
DtN problem is extended to [-2*pi, 4*pi] through u(x1 + 2*pi*m, x2) =
exp(i*alpha0*2*pi*m) u(x1, x2) and dumped as re/im/abs component files that
the frontend plot tool renders as heatmaps with the profile overlaid.

Run:  python3 demos/quasiperiodic_extension.py [outdir]
"""

import pathlib
import sys
import warnings

import numpy as np

import grating_pwdg as gp
from grating_pwdg.harness import dump_profile
from grating_pwdg.solution import (
    dump_field_component,
    sample_field,
    solve_system,
)

warnings.simplefilter("ignore")

outdir = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "demo_output")
outdir.mkdir(parents=True, exist_ok=True)

K, THETA, H = 2.0, -np.pi / 4, 2.0
EPS2 = (1.27 + 0.25j) ** 2
step = np.array([[0.0, 0.0], [np.pi / 2, 0.0], [np.pi / 2, 1.0],
                 [3 * np.pi / 2, 1.0], [3 * np.pi / 2, 0.0],
                 [2 * np.pi, 0.0]])
iface = gp.InterfaceSpec([step], {0: EPS2, 1: 1.0})
mesh = gp.generate_periodic_mesh(iface, H, 1.0)
print(f"step-profile mesh: {mesh.n_elements} triangles, h = {mesh.h:.3f}")

spec = gp.DtnSpec(M=100, alpha0=K * np.cos(THETA), eps_plus=1.0, k=K, H=H)
space = gp.PlaneWaveSpace.for_mesh(mesh, iface.region_eps, K, 20)
system = gp.assemble_dtn(mesh, space, gp.FluxParams.uwvf(), THETA, spec)
sol, residual, cond = solve_system(system, mesh, space)
print(f"solved N = {system.n}, residual = {residual:.1e}, cond ~ {cond:.1e}")

xs, ys, values = sample_field(sol, (240, 80), extend=1, alpha0=spec.alpha0)
for name, comp in (("re", values.real), ("im", values.imag),
                   ("abs", np.abs(values))):
    path = outdir / f"extended_{name}.dat"
    dump_field_component(path, xs, ys, comp)
    print("wrote", path)
dump_profile(iface, outdir / "extended_profile.dat")
print("wrote", outdir / "extended_profile.dat")
print("\nrender with:  plot field "
      f"{outdir}/extended_re.dat {outdir}/extended_im.dat "
      f"{outdir}/extended_abs.dat {outdir}/extended.png "
      f"--profile {outdir}/extended_profile.dat")
