"""Direct solves, field evaluation, error norms and skeleton seminorms."""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import linalg as dense_linalg
from scipy import sparse
from scipy.sparse.linalg import splu
from numpy.polynomial.legendre import leggauss

from .basis import edge_quadrature, eval_element_fields
from .dtn import BoundaryTrace, beta_array, trace_fourier_coefficients
from .errors import (
    ConditioningWarning,
    InvalidArgumentError,
    PointOutsideDomainError,
    SingularMatrixError,
)
from .geometry import FaceTag

_DENSE_LIMIT = 2000


@dataclass
class DiscreteSolution:
    """Coefficient vector in DofLayout order plus mesh/basis handles."""

    coefficients: np.ndarray
    mesh: object
    space: object
    layout: object

    def element_coeffs(self, e):
        p = self.layout.p
        return self.coefficients[e * p:(e + 1) * p]


@dataclass
class ErrorReport:
    l2_abs: float
    l2_rel: float
    h1_semi_abs: float
    h1_rel: float
    quadrature_order: int


def solve(system):
    """Direct factorization solve of the assembled complex system.

    Returns (DiscreteSolution handles unattached, residual, condition_hint);
    the caller wraps the coefficient vector.  Dense LU is used for
    N <= 2000, sparse LU above.  A ConditioningWarning is emitted when the
    relative residual exceeds 1e-8.
    """
    n = system.n
    A = system.matrix
    b = system.rhs
    if n <= _DENSE_LIMIT:
        Ad = A.toarray()
        try:
            with warnings.catch_warnings():
                # exact singularity is reported through SingularMatrixError
                warnings.simplefilter("ignore")
                lu, piv = dense_linalg.lu_factor(Ad)
        except ValueError as exc:
            raise SingularMatrixError(str(exc)) from exc
        diag = np.abs(np.diag(lu))
        if np.any(diag == 0.0):
            raise SingularMatrixError("exactly singular factorization")
        u = dense_linalg.lu_solve((lu, piv), b)
        anorm = np.linalg.norm(Ad, 1)
        gecon = dense_linalg.get_lapack_funcs("gecon", (lu,))
        rcond, _ = gecon(lu, anorm, norm="1")
        cond_hint = np.inf if rcond == 0 else 1.0 / rcond
        residual = np.linalg.norm(Ad @ u - b) / max(np.linalg.norm(b), 1e-300)
    else:
        try:
            factor = splu(A.tocsc())
        except RuntimeError as exc:
            raise SingularMatrixError(str(exc)) from exc
        u = factor.solve(b)
        residual = np.linalg.norm(A @ u - b) / max(np.linalg.norm(b), 1e-300)
        inv_op = sparse.linalg.LinearOperator(
            (n, n), matvec=factor.solve,
            rmatvec=lambda v: factor.solve(v, trans="H"), dtype=complex)
        cond_hint = float(sparse.linalg.onenormest(A)
                          * sparse.linalg.onenormest(inv_op))
    if residual > 1e-8 or cond_hint > 1e15:
        warnings.warn(
            f"solve residual {residual:.3e}, condition estimate "
            f"{cond_hint:.3e}: results may be dominated by round-off",
            ConditioningWarning, stacklevel=2)
    return u, float(residual), float(cond_hint)


def solve_system(system, mesh, space):
    u, residual, cond = solve(system)
    system.condition_hint = cond
    sol = DiscreteSolution(coefficients=u, mesh=mesh, space=space,
                           layout=system.layout)
    return sol, residual, cond


def evaluate(sol, x):
    """Field value and gradient at a point; owner ties resolve to the lowest
    element index and points outside the strip raise PointOutsideDomainError."""
    e = sol.mesh.locate(np.asarray(x, dtype=float))
    vals, grads = eval_element_fields(sol.space, e, sol.element_coeffs(e),
                                      np.asarray(x, float)[None, :])
    return complex(vals[0]), grads[0]


def triangle_quadrature(order):
    """Duffy-mapped tensor Gauss rule on the reference triangle.

    Maps the order x order Gauss-Legendre grid on the unit square through
    (s, t) -> (s, t*(1-s)) with Jacobian (1-s); returns barycentric nodes
    (1-x-y, x, y) and weights summing to 1/2.
    """
    if not 1 <= order <= 32:
        raise InvalidArgumentError(f"Duffy order must be in [1, 32], got {order}")
    x, w = leggauss(order)
    s = 0.5 * (x + 1.0)
    ws = 0.5 * w
    S, T = np.meshgrid(s, s, indexing="ij")
    WS, WT = np.meshgrid(ws, ws, indexing="ij")
    X = S
    Y = T * (1.0 - S)
    weights = (WS * WT * (1.0 - S)).ravel()
    bary = np.column_stack([1.0 - X.ravel() - Y.ravel(), X.ravel(), Y.ravel()])
    return bary, weights


def _element_quad_points(mesh, e, bary):
    v = mesh.element_vertices(e)
    return bary @ v


def error_norms(sol, exact, order=10):
    """Elementwise Duffy-quadrature L2 and H1 errors against an exact field.

    ``exact`` maps points (n, 2) to (values, gradients).  Reports absolute and
    relative L2 errors, the H1 seminorm error, and the relative full H1 error.
    """
    bary, w = triangle_quadrature(order)
    l2_err = l2_exact = h1_err = h1_exact = 0.0
    for e in range(sol.mesh.n_elements):
        pts = _element_quad_points(sol.mesh, e, bary)
        scale = 2.0 * sol.mesh.element_area(e)
        vals, grads = eval_element_fields(sol.space, e, sol.element_coeffs(e), pts)
        ex_vals, ex_grads = exact(pts)
        l2_err += scale * np.sum(w * np.abs(vals - ex_vals) ** 2)
        l2_exact += scale * np.sum(w * np.abs(ex_vals) ** 2)
        h1_err += scale * np.sum(w * np.sum(np.abs(grads - ex_grads) ** 2, axis=1))
        h1_exact += scale * np.sum(w * np.sum(np.abs(ex_grads) ** 2, axis=1))
    l2_abs = np.sqrt(l2_err)
    h1_semi_abs = np.sqrt(h1_err)
    l2_norm = np.sqrt(l2_exact)
    h1_full_norm = np.sqrt(l2_exact + h1_exact)
    return ErrorReport(
        l2_abs=float(l2_abs),
        l2_rel=float(l2_abs / l2_norm) if l2_norm > 0 else float(l2_abs),
        h1_semi_abs=float(h1_semi_abs),
        h1_rel=float(np.sqrt(l2_err + h1_err) / h1_full_norm)
        if h1_full_norm > 0 else float(h1_semi_abs),
        quadrature_order=order,
    )


def solution_as_exact(sol):
    """Wrap a discrete solution as an exact-field callable for error_norms."""
    def field_fn(points):
        points = np.asarray(points, dtype=float)
        values = np.empty(len(points), dtype=complex)
        grads = np.empty((len(points), 2), dtype=complex)
        for i, x in enumerate(points):
            values[i], grads[i] = evaluate(sol, x)
        return values, grads

    return field_fn


# ---------------------------------------------------------------------------
# skeleton seminorms


def _face_quad(mesh, f, n_points):
    a, b = mesh.face_endpoints(f)
    t, w = edge_quadrature(n_points)
    pts = a[None, :] + t[:, None] * (b - a)[None, :]
    return pts, w * np.linalg.norm(b - a)


def _trace(sol, e, pts):
    return eval_element_fields(sol.space, e, sol.element_coeffs(e), pts)


def tdg_norm(sol, variant="TDG", flux=None, spec=None, n_points=20):
    """Mesh- and flux-dependent skeleton seminorm of a discrete function.

    variant "TDG" (impedance form): interior jump terms + Robin and Dirichlet
    boundary terms.  Variant "TDG_T" (DtN form): interior jumps (periodic
    seam included, with the quasi-periodic phase), the Dirichlet trace term
    and the top-boundary flux residual |grad(w).n - T_M w|.
    """
    if flux is None:
        raise InvalidArgumentError("flux parameters are required")
    if variant not in ("TDG", "TDG_T"):
        raise InvalidArgumentError(f"unknown variant {variant!r}")
    if variant == "TDG_T" and spec is None:
        raise InvalidArgumentError("variant TDG_T requires a DtnSpec")
    mesh, space = sol.mesh, sol.space
    total = 0.0
    for f, face in enumerate(mesh.faces):
        if face.tag is FaceTag.INTERIOR:
            pts, w = _face_quad(mesh, f, n_points)
            o, nb = face.owner, face.neighbor
            n_o = mesh.outward_normal(f, o)
            v_o, g_o = _trace(sol, o, pts)
            v_n, g_n = _trace(sol, nb, pts)
            xi = 0.5 * (space.kappa_of(o).real + space.kappa_of(nb).real)
            jump_v = v_o - v_n                      # scalar jump along n_o
            jump_g = g_o @ n_o - g_n @ n_o          # normal jump of gradients
            total += flux.beta / xi * np.sum(w * np.abs(jump_g) ** 2)
            total += flux.alpha * xi * np.sum(w * np.abs(jump_v) ** 2)
        elif face.tag is FaceTag.ROBIN and variant == "TDG":
            pts, w = _face_quad(mesh, f, n_points)
            e = face.owner
            n = mesh.outward_normal(f, e)
            kappa = space.kappa_of(e).real
            v, g = _trace(sol, e, pts)
            total += flux.delta / kappa * np.sum(w * np.abs(g @ n) ** 2)
            total += (1.0 - flux.delta) * kappa * np.sum(w * np.abs(v) ** 2)
        elif face.tag is FaceTag.DIRICHLET_BOTTOM:
            pts, w = _face_quad(mesh, f, n_points)
            e = face.owner
            kappa = space.kappa_of(e).real
            v, _ = _trace(sol, e, pts)
            total += flux.alpha * kappa * np.sum(w * np.abs(v) ** 2)
    if variant == "TDG_T":
        for fl, fr in sol.mesh.periodic_pairs:
            pts_r, w = _face_quad(mesh, fr, n_points)
            pts_l, _ = _face_quad(mesh, fl, n_points)
            el = mesh.faces[fl].owner
            er = mesh.faces[fr].owner
            phase = np.exp(1j * spec.alpha0 * mesh.width)
            v_l, g_l = _trace(sol, el, pts_l)
            v_r, g_r = _trace(sol, er, pts_r)
            n_r = mesh.outward_normal(fr, er)
            xi = 0.5 * (space.kappa_of(el).real + space.kappa_of(er).real)
            jump_v = v_r - phase * v_l
            jump_g = g_r @ n_r - phase * (g_l @ n_r)
            total += flux.beta / xi * np.sum(w * np.abs(jump_g) ** 2)
            total += flux.alpha * xi * np.sum(w * np.abs(jump_v) ** 2)
        total += _top_residual_sq(sol, flux, spec, n_points)
    return float(np.sqrt(total))


def top_trace(sol, spec):
    """Fourier coefficients of the discrete solution's trace on x2 = H."""
    coeffs = np.zeros(2 * spec.M + 1, dtype=complex)
    mesh, space = sol.mesh, sol.space
    for f, face in enumerate(mesh.faces):
        if face.tag is not FaceTag.TOP_DTN:
            continue
        e = face.owner
        kappa = space.kappa_of(e)
        a, b = mesh.face_endpoints(f)
        cj = sol.element_coeffs(e)
        for j in range(space.p):
            coeffs += cj[j] * trace_fourier_coefficients(
                (a, b), kappa, space.directions[j], spec)
    return BoundaryTrace(spec.M, coeffs)


def _top_residual_sq(sol, flux, spec, n_points):
    mesh, space = sol.mesh, sol.space
    trace = top_trace(sol, spec)
    beta = beta_array(spec)
    alphas = spec.alpha(spec.mode_range())
    total = 0.0
    for f, face in enumerate(mesh.faces):
        if face.tag is not FaceTag.TOP_DTN:
            continue
        pts, w = _face_quad(mesh, f, n_points)
        e = face.owner
        kappa = space.kappa_of(e).real
        _, g = _trace(sol, e, pts)
        modes = np.exp(1j * np.outer(pts[:, 0], alphas))
        tmw = modes @ (1j * beta * trace.coefficients)
        residual = g @ np.array([0.0, 1.0]) - tmw
        total += flux.delta / kappa * np.sum(w * np.abs(residual) ** 2)
    return total


def extend_quasiperiodic(sol, alpha0, copies=(-1, 1)):
    """Sampler extending the strip solution by u(x1 + 2*pi*m, x2) =
    exp(i*alpha0*2*pi*m) * u(x1, x2) for m in the given inclusive range."""
    width = sol.mesh.width
    x_min = sol.mesh.bounds[0]

    def sampler(x):
        x = np.asarray(x, dtype=float)
        m = int(np.floor((x[0] - x_min) / width))
        m = min(max(m, copies[0]), copies[1])
        local = x[0] - width * m
        tol = 1e-9 * width
        if not x_min - tol <= local <= x_min + width + tol:
            raise PointOutsideDomainError(
                f"x1 = {x[0]} outside the extended range")
        base = np.array([min(max(local, x_min), x_min + width), x[1]])
        value, _ = evaluate(sol, base)
        return np.exp(1j * alpha0 * width * m) * value

    return sampler


def sample_field(sol, grid, extend=0, alpha0=0.0):
    """Sample the (optionally quasi-periodically extended) field on a grid.

    Returns (x1 axis, x2 axis, values array of shape (ny, nx)).
    """
    nx, ny = grid
    x0, x1, y0, y1 = sol.mesh.bounds
    xs = np.linspace(x0 - extend * sol.mesh.width, x1 + extend * sol.mesh.width, nx)
    ys = np.linspace(y0, y1, ny)
    sampler = extend_quasiperiodic(sol, alpha0, copies=(-extend, extend))
    eps = 1e-12 * max(x1 - x0, y1 - y0)
    values = np.empty((ny, nx), dtype=complex)
    for iy, y in enumerate(ys):
        yq = min(max(y, y0 + eps), y1 - eps)
        for ix, x in enumerate(xs):
            values[iy, ix] = sampler((x, yq))
    return xs, ys, values


def dump_field_table(path, xs, ys, values):
    """Write the 'x1 x2 re im' text table over a rectangular grid."""
    with open(path, "w") as fh:
        fh.write(f"# grid {len(xs)} {len(ys)}\n")
        for iy, y in enumerate(ys):
            for ix, x in enumerate(xs):
                v = values[iy, ix]
                fh.write(f"{x:.12e} {y:.12e} {v.real:.12e} {v.imag:.12e}\n")


def dump_field_component(path, xs, ys, component):
    """Write one real component as 'x1 x2 value' rows with a grid header."""
    with open(path, "w") as fh:
        fh.write(f"# grid {len(xs)} {len(ys)}\n")
        for iy, y in enumerate(ys):
            for ix, x in enumerate(xs):
                fh.write(f"{x:.12e} {y:.12e} {component[iy, ix]:.12e}\n")
