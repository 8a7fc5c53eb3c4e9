"""Independent quadrature-based assembly used as a test oracle.

Re-derives every matrix and load entry directly from the DG flux definitions
(jumps, averages, boundary fluxes and pointwise truncated-DtN sums) using
composite Gauss-Legendre quadrature.  Shares only the basis-function
definition with the library; no closed-form edge integrals, coefficient
formulas or mode-orthogonality shortcuts are used.
"""

import numpy as np
from numpy.polynomial.legendre import leggauss

from grating_pwdg.geometry import FaceTag


def composite_edge_quad(a, b, fn, n=20, max_freq=0.0):
    """int_F fn(x) dS with enough n-point panels for the given frequency."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    length = np.linalg.norm(b - a)
    panels = max(1, int(np.ceil(abs(max_freq) * length / 20.0)))
    x, w = leggauss(n)
    total = 0.0 + 0.0j
    for k in range(panels):
        lo = k / panels
        hi = (k + 1) / panels
        t = lo + (hi - lo) * 0.5 * (x + 1.0)
        pts = a[None, :] + t[:, None] * (b - a)[None, :]
        total += (hi - lo) * 0.5 * length * np.sum(w * fn(pts))
    return total


class _PW:
    """A (possibly translated and scaled) plane wave and its reversed-phase
    test twin: scale*exp(i*kappa*d.(x-shift)) and its formal inverse."""

    def __init__(self, kappa, d, shift=(0.0, 0.0), scale=1.0 + 0.0j):
        self.kappa = complex(kappa)
        self.d = np.asarray(d, float)
        self.shift = np.asarray(shift, float)
        self.scale = complex(scale)

    def value(self, pts):
        rel = np.asarray(pts, float) - self.shift
        return self.scale * np.exp(1j * self.kappa * (rel @ self.d))

    def grad_dot(self, pts, n):
        return 1j * self.kappa * float(self.d @ np.asarray(n, float)) * self.value(pts)

    def test_value(self, pts):
        rel = np.asarray(pts, float) - self.shift
        return (1.0 / self.scale) * np.exp(-1j * self.kappa * (rel @ self.d))

    def test_grad_dot(self, pts, n):
        return -1j * self.kappa * float(self.d @ np.asarray(n, float)) \
            * self.test_value(pts)


def _interior_pair_entry(a, b, trial, n_trial, test, n_test, xi, flux, freq):
    """Interior-face integrand of the DG form for supported trial/test sides."""
    def fn(pts):
        avg_u = 0.5 * trial.value(pts)
        jump_u_n = trial.value(pts)          # times n_trial
        jump_gu = trial.grad_dot(pts, n_trial)
        avg_gu_dot_ntest = 0.5 * 1j * trial.kappa * float(trial.d @ n_test) \
            * trial.value(pts)
        tv = test.test_value(pts)
        jump_gv = test.test_grad_dot(pts, n_test)
        nn = float(np.dot(n_trial, n_test))
        return (avg_u * jump_gv
                - 1j * flux.beta / xi * jump_gu * jump_gv
                - avg_gu_dot_ntest * tv
                - 1j * flux.alpha * xi * nn * jump_u_n * tv)

    return composite_edge_quad(a, b, fn, max_freq=freq)


def _robin_entry(a, b, trial, test, n, flux, freq):
    def fn(pts):
        u = trial.value(pts)
        gu = trial.grad_dot(pts, n)
        tv = test.test_value(pts)
        gv = test.test_grad_dot(pts, n)
        kappa = test.kappa
        return ((1.0 - flux.delta) * u * gv
                - flux.delta * 1j / kappa * gu * gv
                - flux.delta * gu * tv
                - 1j * kappa * (1.0 - flux.delta) * u * tv)

    return composite_edge_quad(a, b, fn, max_freq=freq)


def _dirichlet_entry(a, b, trial, test, n, flux, freq):
    def fn(pts):
        return (-trial.grad_dot(pts, n) * test.test_value(pts)
                - 1j * test.kappa * flux.alpha * trial.value(pts)
                * test.test_value(pts))

    return composite_edge_quad(a, b, fn, max_freq=freq)


def _interior_block(A, mesh, space, flux, f, dof):
    a, b = mesh.face_endpoints(f)
    face = mesh.faces[f]
    o, nb = face.owner, face.neighbor
    p = space.p
    dirs = space.directions
    k_o, k_n = space.kappa_of(o), space.kappa_of(nb)
    xi = 0.5 * (k_o.real + k_n.real)
    n_o = mesh.outward_normal(f, o)
    freq = 2 * max(abs(k_o), abs(k_n))
    for et, kt, nt in ((o, k_o, n_o), (nb, k_n, -n_o)):
        for ej, kj, nj in ((o, k_o, n_o), (nb, k_n, -n_o)):
            for l in range(p):
                for j in range(p):
                    A[dof(ej, j), dof(et, l)] += _interior_pair_entry(
                        a, b, _PW(kt, dirs[l]), nt, _PW(kj, dirs[j]), nj,
                        xi, flux, freq)


def oracle_assemble_impedance(mesh, space, flux, g_r=None, g_d=None):
    """Dense quadrature assembly of the impedance-PWDG system."""
    p = space.p
    n_dofs = p * mesh.n_elements
    A = np.zeros((n_dofs, n_dofs), dtype=complex)
    rhs = np.zeros(n_dofs, dtype=complex)
    dirs = space.directions

    def dof(e, j):
        return e * p + j

    for f, face in enumerate(mesh.faces):
        if face.tag is FaceTag.INTERIOR:
            _interior_block(A, mesh, space, flux, f, dof)
            continue
        a, b = mesh.face_endpoints(f)
        e = face.owner
        kappa = space.kappa_of(e)
        n = mesh.outward_normal(f, e)
        freq = 2 * abs(kappa)
        for l in range(p):
            for j in range(p):
                trial = _PW(kappa, dirs[l])
                test = _PW(kappa, dirs[j])
                if face.tag is FaceTag.ROBIN:
                    A[dof(e, j), dof(e, l)] += _robin_entry(
                        a, b, trial, test, n, flux, freq)
                else:
                    A[dof(e, j), dof(e, l)] += _dirichlet_entry(
                        a, b, trial, test, n, flux, freq)
        data = g_r if face.tag is FaceTag.ROBIN else g_d
        if data is None:
            continue
        for j in range(p):
            test = _PW(kappa, dirs[j])
            if face.tag is FaceTag.ROBIN:
                def fn(pts, test=test):
                    tv = test.test_value(pts)
                    gv = test.test_grad_dot(pts, n)
                    g = np.asarray(data(pts, n, kappa), complex)
                    return g * (-flux.delta * 1j / kappa * gv
                                + (1.0 - flux.delta) * tv)
            else:
                def fn(pts, test=test):
                    tv = test.test_value(pts)
                    gv = test.test_grad_dot(pts, n)
                    g = np.asarray(data(pts, n, kappa), complex)
                    return g * (-flux.alpha * 1j * kappa * tv - gv)
            rhs[dof(e, j)] += composite_edge_quad(a, b, fn, max_freq=freq)
    return A, rhs


def trace_coeff_quad(mesh, f, pw, spec):
    """Fourier coefficients of a plane-wave trace on a top face by quadrature."""
    a, b = mesh.face_endpoints(f)
    coeffs = np.zeros(2 * spec.M + 1, dtype=complex)
    for idx, n in enumerate(range(-spec.M, spec.M + 1)):
        alpha_n = spec.alpha0 + n

        def fn(pts, alpha_n=alpha_n):
            return np.exp(-1j * alpha_n * pts[:, 0]) * pw.value(pts)

        freq = abs(alpha_n) + abs(pw.kappa)
        coeffs[idx] = composite_edge_quad(a, b, fn, max_freq=freq) / (2 * np.pi)
    return coeffs


def beta_vec_oracle(spec):
    n = np.arange(-spec.M, spec.M + 1)
    disc = spec.k ** 2 * complex(spec.eps_plus) - (spec.alpha0 + n) ** 2 + 0j
    beta = np.sqrt(disc)
    beta = np.where(beta.imag < 0, -beta, beta)
    beta = np.where((disc.imag == 0) & (disc.real > 0), np.abs(beta.real), beta)
    return beta


def oracle_assemble_dtn(mesh, space, flux, theta, spec):
    """Dense quadrature assembly of the DtN-PWDG system.

    The DtN action is evaluated pointwise from quadrature-computed trace
    coefficients; the top-boundary integrals run over the union of all top
    faces with element-support indicator masks.
    """
    p = space.p
    n_dofs = p * mesh.n_elements
    A = np.zeros((n_dofs, n_dofs), dtype=complex)
    rhs = np.zeros(n_dofs, dtype=complex)
    dirs = space.directions
    delta = flux.delta
    alphas = spec.alpha0 + np.arange(-spec.M, spec.M + 1)
    beta = beta_vec_oracle(spec)
    phase = np.exp(1j * spec.alpha0 * mesh.width)

    def dof(e, j):
        return e * p + j

    for f, face in enumerate(mesh.faces):
        if face.tag is FaceTag.INTERIOR:
            _interior_block(A, mesh, space, flux, f, dof)
        elif face.tag is FaceTag.DIRICHLET_BOTTOM:
            a, b = mesh.face_endpoints(f)
            e = face.owner
            kappa = space.kappa_of(e)
            n = mesh.outward_normal(f, e)
            for l in range(p):
                for j in range(p):
                    A[dof(e, j), dof(e, l)] += _dirichlet_entry(
                        a, b, _PW(kappa, dirs[l]), _PW(kappa, dirs[j]), n,
                        flux, 2 * abs(kappa))

    # Periodic seam: the left element participates through its quasi-periodic
    # translate phase*phi(x - (2*pi, 0)); its reversed-phase twin carries 1/phase.
    shift = np.array([mesh.width, 0.0])
    for fl, fr in mesh.periodic_pairs:
        ar, br = mesh.face_endpoints(fr)
        el = mesh.faces[fl].owner
        er = mesh.faces[fr].owner
        k_l, k_r = space.kappa_of(el), space.kappa_of(er)
        xi = 0.5 * (k_l.real + k_r.real)
        n_r = mesh.outward_normal(fr, er)
        freq = 2 * max(abs(k_l), abs(k_r))

        def pw_of(e, i):
            if e == el:
                return _PW(k_l, dirs[i], shift=shift, scale=phase), -n_r
            return _PW(k_r, dirs[i]), n_r

        for et in (el, er):
            for ej in (el, er):
                for l in range(p):
                    trial, nt = pw_of(et, l)
                    for j in range(p):
                        test, nj = pw_of(ej, j)
                        A[dof(ej, j), dof(et, l)] += _interior_pair_entry(
                            ar, br, trial, nt, test, nj, xi, flux, freq)

    # Top boundary: integrate over the union of top faces with support masks.
    top_faces = [f for f, face in enumerate(mesh.faces)
                 if face.tag is FaceTag.TOP_DTN]
    if not top_faces:
        return A, rhs
    top_dofs = []
    trace_coeffs = {}
    owner_of_dof = {}
    pw_of_dof = {}
    for f in top_faces:
        e = mesh.faces[f].owner
        kappa = space.kappa_of(e)
        for j in range(p):
            key = dof(e, j)
            pw = _PW(kappa, dirs[j])
            coeffs = trace_coeff_quad(mesh, f, pw, spec)
            if key in trace_coeffs:
                trace_coeffs[key] = trace_coeffs[key] + coeffs
            else:
                trace_coeffs[key] = coeffs
                top_dofs.append(key)
                owner_of_dof[key] = e
                pw_of_dof[key] = pw

    def tm(coeffs, x1):
        return np.exp(1j * np.outer(x1, alphas)) @ (1j * beta * coeffs)

    def tm_conj(coeffs, x1):
        return np.exp(-1j * np.outer(x1, alphas)) @ np.conj(1j * beta * coeffs)

    max_freq = np.abs(alphas).max() + 2 * np.abs(space.kappa).max()
    n_top = np.array([0.0, 1.0])
    beta0 = spec.k * np.sin(theta)
    kappa_plus = spec.k * np.sqrt(complex(spec.eps_plus))
    if kappa_plus.imag < 0:
        kappa_plus = -kappa_plus
    inc = _PW(kappa_plus, np.array([np.cos(theta), np.sin(theta)]))

    for dj in top_dofs:
        ej = owner_of_dof[dj]
        test = pw_of_dof[dj]
        kj = test.kappa
        coeffs_j = trace_coeffs[dj]
        for f in top_faces:
            a, b = mesh.face_endpoints(f)
            face_owner = mesh.faces[f].owner
            on_test = face_owner == ej

            def load_fn(pts):
                tv = test.test_value(pts) if on_test else np.zeros(len(pts))
                gv = test.test_grad_dot(pts, n_top) if on_test \
                    else np.zeros(len(pts))
                tmv = tm_conj(coeffs_j, pts[:, 0])
                return 2j * beta0 * inc.value(pts) * (
                    tv - delta * 1j / kj * (gv - tmv))

            rhs[dj] += composite_edge_quad(a, b, load_fn, max_freq=max_freq)
            for dt in top_dofs:
                et = owner_of_dof[dt]
                trial = pw_of_dof[dt]
                coeffs_l = trace_coeffs[dt]
                on_trial = face_owner == et

                def mat_fn(pts):
                    u = trial.value(pts) if on_trial else np.zeros(len(pts))
                    gu = trial.grad_dot(pts, n_top) if on_trial \
                        else np.zeros(len(pts))
                    tv = test.test_value(pts) if on_test else np.zeros(len(pts))
                    gv = test.test_grad_dot(pts, n_top) if on_test \
                        else np.zeros(len(pts))
                    tmu = tm(coeffs_l, pts[:, 0])
                    tmv = tm_conj(coeffs_j, pts[:, 0])
                    return (u * gv - tmu * tv
                            - delta * 1j / kj * (gu - tmu) * (gv - tmv))

                A[dj, dt] += composite_edge_quad(a, b, mat_fn, max_freq=max_freq)
    return A, rhs
