"""Closed-form assembly of the impedance-PWDG and DtN-PWDG linear systems.

Every matrix entry is a sum of face terms of the form

    coefficient * int_F exp(i*kappa_l x.d_l - i*kappa_j x.d_j) dS,

evaluated exactly through the psi kernel; the DtN coupling adds finite
Rayleigh-mode sums over the top boundary.  Test functions enter with the
reversed phase exp(-i*kappa*x.d_j) (equal to the complex conjugate whenever
kappa is real), matching the closed-form matrix entries throughout.

Entries are accumulated in (face index, term) order, so assembly is
deterministic and independent of traversal details.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import sparse

from .basis import FluxParams, edge_quadrature, psi
from .dtn import DtnSpec, beta_array, dtn_coupling_block, trace_fourier_coefficients
from .errors import InvalidArgumentError, MixedTopPermittivityWarning
from .exact import PlaneWaveBoundaryData
from .geometry import FaceTag


@dataclass(frozen=True)
class DofLayout:
    """Bijection (element, local direction) <-> global index: e*p + j."""

    p: int
    n_elements: int

    @property
    def n_dofs(self):
        return self.p * self.n_elements

    def index(self, element, j):
        return element * self.p + j

    def element_of(self, dof):
        return divmod(dof, self.p)


@dataclass
class LinearSystem:
    matrix: sparse.csr_matrix
    rhs: np.ndarray
    layout: DofLayout
    condition_hint: float | None = None

    @property
    def n(self):
        return self.layout.n_dofs


# ---------------------------------------------------------------------------
# single-entry face blocks (scalar contracts; the assembler vectorizes)


def _edge_int(a, b, kappa_l, d_l, kappa_j, d_j):
    """int_F exp(i*kappa_l x.d_l - i*kappa_j x.d_j) dS in closed form."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    delta = b - a
    length = np.linalg.norm(delta)
    c = 1j * kappa_l * np.asarray(d_l) - 1j * kappa_j * np.asarray(d_j)
    return length * np.exp(a @ c) * psi(delta @ c)


def face_block_same_element(a, b, n, kappa, xi, d_l, d_j, flux, kind):
    """Matrix entry of two basis functions of one element on one face.

    kind is one of "interior", "robin", "dirichlet"; n is the element's
    outward unit normal on the face.
    """
    dln = float(np.dot(d_l, n))
    djn = float(np.dot(d_j, n))
    if kind == "interior":
        coef = (-0.5j * kappa * (djn + dln)
                - 1j * flux.beta / xi * kappa ** 2 * dln * djn
                - 1j * flux.alpha * xi)
    elif kind == "robin":
        coef = 1j * kappa * ((1.0 - flux.delta) * (-1.0 - djn)
                             + flux.delta * dln * (-djn - 1.0))
    elif kind == "dirichlet":
        coef = 1j * kappa * (-flux.alpha - dln)
    else:
        raise InvalidArgumentError(f"unknown face kind {kind!r}")
    return coef * _edge_int(a, b, kappa, d_l, kappa, d_j)


def face_block_adjacent(a, b, n, kappa_l, d_l, kappa_j, d_j, flux):
    """Matrix entry coupling trial (kappa_l, d_l) with the neighbor's test
    function (kappa_j, d_j) across a shared face.

    n is the outward normal of the trial element; xi averages the real parts
    of the two wavenumbers.  For kappa_l == kappa_j this is minus the
    same-element interior block.
    """
    xi = 0.5 * (np.real(kappa_l) + np.real(kappa_j))
    dln = float(np.dot(d_l, n))
    djn = float(np.dot(d_j, n))
    coef = (0.5j * (kappa_j * djn + kappa_l * dln)
            + 1j * flux.beta / xi * kappa_l * kappa_j * dln * djn
            + 1j * flux.alpha * xi)
    return coef * _edge_int(a, b, kappa_l, d_l, kappa_j, d_j)


def dtn_local_block(a, b, kappa, d_l, d_j, delta):
    """Local top-boundary term -i*kappa*(d_j.n)*(1 + delta d_l.n) * edge integral."""
    n = np.array([0.0, 1.0])
    dln = float(np.dot(d_l, n))
    djn = float(np.dot(d_j, n))
    coef = -1j * kappa * djn * (1.0 + delta * dln)
    return coef * _edge_int(a, b, kappa, d_l, kappa, d_j)


def dtn_global_block(face_l, kappa_l, d_l, face_j, kappa_j, d_j, delta, spec):
    """Global DtN coupling between two top-face basis functions.

    Combines the three analytic coupling integrals as

        -(1 - delta*d_j.n) * I_T_phi_psi
        - i*delta/kappa_j  * I_Tphi_Tpsi
        - delta*(kappa_l/kappa_j)*(d_l.n) * I_phi_Tpsi,

    with n = (0, 1).  The kappa_l/kappa_j ratio collapses to 1 on the
    uniform-permittivity top layers used throughout.
    """
    i1, i2, i3 = dtn_coupling_block(face_l, kappa_l, d_l, face_j, kappa_j,
                                    d_j, spec)
    djn = float(d_j[1])
    dln = float(d_l[1])
    return (-(1.0 - delta * djn) * i1
            - 1j * delta / kappa_j * i2
            - delta * (kappa_l / kappa_j) * dln * i3)


def rhs_dtn(face, kappa, d_j, delta, k, theta, spec):
    """Load entry of a top-face test function under the incident plane wave.

    First term: 2i*beta0*(1 - delta*d_j.n) * int_F exp(i*kappa_plus x.d_i
    - i*kappa x.d_j); second term: -4*pi*i*delta*|beta0|^2/kappa *
    conj(phi_j^0) * exp(i*beta0*H), with beta0 = k sin(theta) < 0.
    """
    a, b = face
    beta0 = k * np.sin(theta)
    d_i = np.array([np.cos(theta), np.sin(theta)])
    kappa_plus = k * np.sqrt(complex(spec.eps_plus))
    if kappa_plus.imag < 0:
        kappa_plus = -kappa_plus
    djn = float(d_j[1])
    term1 = 2j * beta0 * (1.0 - delta * djn) * _edge_int(
        a, b, kappa_plus, d_i, kappa, d_j)
    phi0 = trace_fourier_coefficients((a, b), kappa, d_j, spec)[spec.M]
    term2 = (-4j * np.pi * delta * abs(beta0) ** 2 / kappa
             * np.conj(phi0) * np.exp(1j * beta0 * spec.H))
    return term1 + term2


def rhs_impedance(a, b, n, kappa, d_j, flux, data, kind, n_quadrature=10):
    """Load entry on a Robin or Dirichlet face from boundary data.

    data is a callable (points, normal, kappa) -> values; a
    PlaneWaveBoundaryData instance is integrated in closed form instead of
    with the n_quadrature-point Gauss-Legendre rule.
    """
    if data is None:
        return 0.0 + 0.0j
    djn = float(np.dot(d_j, n))
    if kind == "robin":
        bracket = flux.delta * (-djn - 1.0) + 1.0
    elif kind == "dirichlet":
        bracket = 1j * kappa * (-flux.alpha + djn)
    else:
        raise InvalidArgumentError(f"unknown boundary kind {kind!r}")
    if isinstance(data, PlaneWaveBoundaryData):
        if kind == "robin":
            gcoef = data.amplitude * 1j * (data.kappa_g * np.dot(data.d_g, n) - kappa)
        else:
            gcoef = data.amplitude
        return bracket * gcoef * _edge_int(a, b, data.kappa_g, data.d_g, kappa, d_j)
    t, w = edge_quadrature(n_quadrature)
    pts = np.asarray(a, float)[None, :] + t[:, None] * (np.asarray(b, float)
                                                        - np.asarray(a, float))[None, :]
    length = np.linalg.norm(np.asarray(b, float) - np.asarray(a, float))
    g_vals = np.asarray(data(pts, n, kappa), dtype=complex)
    integrand = np.exp(-1j * kappa * (pts @ np.asarray(d_j))) * g_vals
    return bracket * length * np.sum(w * integrand)


# ---------------------------------------------------------------------------
# vectorized block helpers


def _pairwise_edge_int(a, b, kappa_l, kappa_j, dirs):
    """Matrix E[l, j] = int_F exp(i*kappa_l x.d_l - i*kappa_j x.d_j) dS."""
    a = np.asarray(a, float)
    b = np.asarray(b, float)
    delta = b - a
    length = np.linalg.norm(delta)
    ad = dirs @ a
    dd = dirs @ delta
    start = np.exp(1j * kappa_l * ad)[:, None] * np.exp(-1j * kappa_j * ad)[None, :]
    kernel = psi(1j * kappa_l * dd[:, None] - 1j * kappa_j * dd[None, :])
    return length * start * kernel


def _pairwise_edge_int_two_anchor(a_l, a_j, delta, kappa_l, kappa_j, dirs):
    """Seam variant: trial anchored at a_l, test at a_j, shared direction."""
    ad_l = dirs @ np.asarray(a_l, float)
    ad_j = dirs @ np.asarray(a_j, float)
    dd = dirs @ np.asarray(delta, float)
    length = np.linalg.norm(delta)
    start = np.exp(1j * kappa_l * ad_l)[:, None] * np.exp(-1j * kappa_j * ad_j)[None, :]
    kernel = psi(1j * kappa_l * dd[:, None] - 1j * kappa_j * dd[None, :])
    return length * start * kernel


def _same_element_coef(kappa, xi, dn, flux, kind):
    """Coefficient matrix C[l, j] for one element's direction set."""
    dl = dn[:, None]
    dj = dn[None, :]
    if kind == "interior":
        return (-0.5j * kappa * (dj + dl)
                - 1j * flux.beta / xi * kappa ** 2 * dl * dj
                - 1j * flux.alpha * xi)
    if kind == "robin":
        return 1j * kappa * ((1.0 - flux.delta) * (-1.0 - dj)
                             + flux.delta * dl * (-dj - 1.0))
    if kind == "dirichlet":
        return 1j * kappa * (-flux.alpha - dl) * np.ones_like(dj)
    raise InvalidArgumentError(f"unknown face kind {kind!r}")


def _adjacent_coef(kappa_l, kappa_j, xi, dn, flux):
    dl = dn[:, None]
    dj = dn[None, :]
    return (0.5j * (kappa_j * dj + kappa_l * dl)
            + 1j * flux.beta / xi * kappa_l * kappa_j * dl * dj
            + 1j * flux.alpha * xi)


class _Accumulator:
    """COO triplet collector with (l -> column, j -> row) block scatter."""

    def __init__(self, layout):
        self.layout = layout
        self.rows = []
        self.cols = []
        self.vals = []
        self.rhs = np.zeros(layout.n_dofs, dtype=complex)

    def add_block(self, trial_element, test_element, block_lj):
        """block_lj[l, j] adds to A[dof(test, j), dof(trial, l)]."""
        p = self.layout.p
        rows = self.layout.index(test_element, np.arange(p))
        cols = self.layout.index(trial_element, np.arange(p))
        rr, cc = np.meshgrid(rows, cols, indexing="ij")
        self.rows.append(rr.ravel())
        self.cols.append(cc.ravel())
        self.vals.append(block_lj.T.ravel())

    def finalize(self):
        n = self.layout.n_dofs
        if self.rows:
            rows = np.concatenate(self.rows)
            cols = np.concatenate(self.cols)
            vals = np.concatenate(self.vals)
        else:
            rows = cols = np.zeros(0, dtype=int)
            vals = np.zeros(0, dtype=complex)
        matrix = sparse.coo_matrix((vals, (rows, cols)), shape=(n, n)).tocsr()
        return LinearSystem(matrix=matrix, rhs=self.rhs, layout=self.layout)


def _face_frame(mesh, f):
    a, b = mesh.face_endpoints(f)
    return a, b


def _interior_face_terms(acc, mesh, space, flux, f, face):
    a, b = _face_frame(mesh, f)
    o, nb = face.owner, face.neighbor
    k_o, k_n = space.kappa_of(o), space.kappa_of(nb)
    xi = 0.5 * (k_o.real + k_n.real)
    dirs = space.directions
    n_o = mesh.outward_normal(f, o)
    dn_o = dirs @ n_o
    # same-element blocks on both sides
    e_oo = _pairwise_edge_int(a, b, k_o, k_o, dirs)
    acc.add_block(o, o, _same_element_coef(k_o, xi, dn_o, flux, "interior") * e_oo)
    e_nn = _pairwise_edge_int(a, b, k_n, k_n, dirs)
    acc.add_block(nb, nb, _same_element_coef(k_n, xi, -dn_o, flux, "interior") * e_nn)
    # cross blocks; normal follows the trial element
    e_on = _pairwise_edge_int(a, b, k_o, k_n, dirs)
    acc.add_block(o, nb, _adjacent_coef(k_o, k_n, xi, dn_o, flux) * e_on)
    e_no = _pairwise_edge_int(a, b, k_n, k_o, dirs)
    acc.add_block(nb, o, _adjacent_coef(k_n, k_o, xi, -dn_o, flux) * e_no)


def _periodic_pair_terms(acc, mesh, space, flux, fl, fr, phase):
    """Seam terms: the left element participates through its translate, so its
    trace values are taken at the left face and scaled by the quasi-periodicity
    constant (trial: *phase, test: *conj(phase))."""
    al, bl = _face_frame(mesh, fl)
    ar, br = _face_frame(mesh, fr)
    el = mesh.faces[fl].owner
    er = mesh.faces[fr].owner
    k_l, k_r = space.kappa_of(el), space.kappa_of(er)
    xi = 0.5 * (k_l.real + k_r.real)
    dirs = space.directions
    n_l = mesh.outward_normal(fl, el)   # (-1, 0)
    n_r = mesh.outward_normal(fr, er)   # (+1, 0)
    dn_l = dirs @ n_l
    dn_r = dirs @ n_r
    delta = bl - al
    acc.add_block(el, el, _same_element_coef(k_l, xi, dn_l, flux, "interior")
                  * _pairwise_edge_int(al, bl, k_l, k_l, dirs))
    acc.add_block(er, er, _same_element_coef(k_r, xi, dn_r, flux, "interior")
                  * _pairwise_edge_int(ar, br, k_r, k_r, dirs))
    e_lr = _pairwise_edge_int_two_anchor(al, ar, delta, k_l, k_r, dirs)
    acc.add_block(el, er, phase * _adjacent_coef(k_l, k_r, xi, dn_l, flux) * e_lr)
    e_rl = _pairwise_edge_int_two_anchor(ar, al, delta, k_r, k_l, dirs)
    acc.add_block(er, el, np.conj(phase) * _adjacent_coef(k_r, k_l, xi, dn_r, flux) * e_rl)


def assemble_impedance(mesh, space, flux, g_r=None, g_d=None, n_quadrature=10):
    """Assemble the impedance-PWDG system for Robin/Dirichlet boundaries.

    Parameters
    ----------
    mesh : Mesh
        Faces must be interior, Robin or Dirichlet; grating tags are refused.
    space : PlaneWaveSpace
    flux : FluxParams
    g_r, g_d : callable or PlaneWaveBoundaryData or None
        Boundary data with signature (points, normal, kappa) -> values.
    n_quadrature : int
        Gauss-Legendre points per face for generic boundary data.
    """
    for face in mesh.faces:
        if face.tag in (FaceTag.TOP_DTN, FaceTag.PERIODIC_PAIR):
            raise InvalidArgumentError(
                "impedance assembly requires Robin/Dirichlet boundaries only")
    layout = DofLayout(space.p, mesh.n_elements)
    acc = _Accumulator(layout)
    dirs = space.directions
    for f, face in enumerate(mesh.faces):
        if face.tag is FaceTag.INTERIOR:
            _interior_face_terms(acc, mesh, space, flux, f, face)
            continue
        a, b = _face_frame(mesh, f)
        e = face.owner
        kappa = space.kappa_of(e)
        n = mesh.outward_normal(f, e)
        dn = dirs @ n
        kind = "robin" if face.tag is FaceTag.ROBIN else "dirichlet"
        block = _same_element_coef(kappa, kappa.real, dn, flux, kind) \
            * _pairwise_edge_int(a, b, kappa, kappa, dirs)
        acc.add_block(e, e, block)
        data = g_r if kind == "robin" else g_d
        if data is not None:
            for j in range(space.p):
                acc.rhs[layout.index(e, j)] += rhs_impedance(
                    a, b, n, kappa, dirs[j], flux, data, kind, n_quadrature)
    return acc.finalize()


def assemble_dtn(mesh, space, flux, theta, spec):
    """Assemble the quasi-periodic DtN-PWDG system.

    The mesh must carry TopDtN, DirichletBottom, Interior and PeriodicPair
    faces.  Side faces couple through the quasi-periodicity constant
    exp(i*alpha0*2*pi); top faces add local flux terms, the dense Rayleigh
    coupling among all top elements, and the incident-wave load.
    """
    tags = {face.tag for face in mesh.faces}
    if FaceTag.ROBIN in tags:
        raise InvalidArgumentError("DtN assembly refuses Robin faces")
    if FaceTag.TOP_DTN not in tags:
        raise InvalidArgumentError("DtN assembly requires top faces")
    if abs(spec.alpha0 - spec.k * np.cos(theta)) > 1e-9 * max(1.0, spec.k):
        raise InvalidArgumentError("spec.alpha0 inconsistent with incidence angle")
    if abs(spec.H - mesh.half_height) > 1e-9 * spec.H:
        raise InvalidArgumentError("spec.H inconsistent with the mesh")
    layout = DofLayout(space.p, mesh.n_elements)
    acc = _Accumulator(layout)
    dirs = space.directions
    phase = np.exp(1j * spec.alpha0 * mesh.width)
    delta = flux.delta
    top_faces = []
    for f, face in enumerate(mesh.faces):
        if face.tag is FaceTag.INTERIOR:
            _interior_face_terms(acc, mesh, space, flux, f, face)
        elif face.tag is FaceTag.DIRICHLET_BOTTOM:
            a, b = _face_frame(mesh, f)
            e = face.owner
            kappa = space.kappa_of(e)
            dn = dirs @ mesh.outward_normal(f, e)
            block = _same_element_coef(kappa, kappa.real, dn, flux, "dirichlet") \
                * _pairwise_edge_int(a, b, kappa, kappa, dirs)
            acc.add_block(e, e, block)
        elif face.tag is FaceTag.TOP_DTN:
            top_faces.append(f)
    for fl, fr in mesh.periodic_pairs:
        _periodic_pair_terms(acc, mesh, space, flux, fl, fr, phase)

    # Top boundary: local flux blocks and per-face loads.
    for f in top_faces:
        a, b = _face_frame(mesh, f)
        e = mesh.faces[f].owner
        kappa = space.kappa_of(e)
        d2 = dirs[:, 1]
        coefs = -1j * kappa * d2[None, :] * (1.0 + delta * d2[:, None])
        acc.add_block(e, e, coefs * _pairwise_edge_int(a, b, kappa, kappa, dirs))
        beta0 = spec.k * np.sin(theta)
        d_i = np.array([np.cos(theta), np.sin(theta)])
        kappa_plus = spec.k * np.sqrt(complex(spec.eps_plus))
        if kappa_plus.imag < 0:
            kappa_plus = -kappa_plus
        delta_vec = (b - a)
        length = np.linalg.norm(delta_vec)
        c_j = 1j * kappa_plus * (dirs * 0 + d_i) - 1j * kappa * dirs
        starts = np.exp(np.asarray(a, float) @ c_j.T)
        kernels = psi(np.asarray(delta_vec, float) @ c_j.T)
        term1 = 2j * beta0 * (1.0 - delta * d2) * length * starts * kernels
        for j in range(space.p):
            acc.rhs[layout.index(e, j)] += term1[j]

    # Global Rayleigh coupling and the mode-0 load among top elements.
    if top_faces:
        top_elements = []
        for f in top_faces:
            e = mesh.faces[f].owner
            if e not in top_elements:
                top_elements.append(e)
        kappas = np.array([space.kappa_of(e) for e in top_elements])
        if np.ptp(kappas.real) > 1e-12 * spec.k or np.ptp(kappas.imag) > 1e-12 * spec.k:
            warnings.warn(
                "top-boundary elements carry different permittivities; the "
                "delta-weighted DtN terms use the test element's kappa",
                MixedTopPermittivityWarning, stacklevel=2)
        n_modes = 2 * spec.M + 1
        n_top = len(top_elements)
        p = space.p
        phi = np.zeros((n_top * p, n_modes), dtype=complex)
        omega = np.zeros((n_top * p, n_modes), dtype=complex)
        kap_dof = np.zeros(n_top * p, dtype=complex)
        d2_dof = np.zeros(n_top * p)
        dof_ids = np.zeros(n_top * p, dtype=int)
        for ti, e in enumerate(top_elements):
            kappa = space.kappa_of(e)
            for f in top_faces:
                if mesh.faces[f].owner != e:
                    continue
                a, b = _face_frame(mesh, f)
                for j in range(p):
                    phi[ti * p + j] += trace_fourier_coefficients(
                        (a, b), kappa, dirs[j], spec)
                    omega[ti * p + j] += trace_fourier_coefficients(
                        (a, b), kappa, dirs[j], spec, conjugated=True)
            for j in range(p):
                kap_dof[ti * p + j] = kappa
                d2_dof[ti * p + j] = dirs[j, 1]
                dof_ids[ti * p + j] = layout.index(e, j)
        beta = beta_array(spec)
        two_pi = 2.0 * np.pi
        i1 = two_pi * 1j * (phi * beta[None, :]) @ omega.T
        i2 = two_pi * (phi * (np.abs(beta) ** 2)[None, :]) @ phi.conj().T
        i3 = -two_pi * 1j * (phi * np.conj(beta)[None, :]) @ phi.conj().T
        g = (-(1.0 - delta * d2_dof[None, :]) * i1
             - 1j * delta / kap_dof[None, :] * i2
             - delta * (kap_dof[:, None] / kap_dof[None, :]) * d2_dof[:, None] * i3)
        rr, cc = np.meshgrid(dof_ids, dof_ids, indexing="ij")
        acc.rows.append(rr.ravel())
        acc.cols.append(cc.ravel())
        acc.vals.append(g.T.ravel())
        beta0 = spec.k * np.sin(theta)
        term2 = (-4j * np.pi * delta * abs(beta0) ** 2 / kap_dof
                 * np.conj(phi[:, spec.M]) * np.exp(1j * beta0 * spec.H))
        for idx, dof in enumerate(dof_ids):
            acc.rhs[dof] += term2[idx]
    return acc.finalize()


def dump_system(system, path):
    """Write the coordinate text dump: header 'N nnz', rows 'row col re im'."""
    coo = system.matrix.tocoo()
    with open(path, "w") as fh:
        fh.write(f"{system.n} {coo.nnz}\n")
        order = np.lexsort((coo.col, coo.row))
        for idx in order:
            fh.write(f"{coo.row[idx]} {coo.col[idx]} "
                     f"{coo.data[idx].real:.17g} {coo.data[idx].imag:.17g}\n")
