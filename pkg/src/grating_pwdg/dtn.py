"""Truncated quasi-periodic Dirichlet-to-Neumann operator on the top boundary.

The operator acts diagonally on the Rayleigh modes exp(i*alpha_n*x1) with
alpha_n = alpha0 + n:

    (T_M phi)(x1) = i * sum_{n=-M}^{M} phi_n * beta_n * exp(i*alpha_n*x1),

where beta_n is the vertical wavenumber of the n-th mode above the strip.
Traces of plane-wave basis functions have closed-form Fourier coefficients,
so all coupling integrals reduce to finite mode sums.
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .basis import psi
from .errors import (
    FaceNotOnTopError,
    InvalidArgumentError,
    TruncationWarning,
    WoodAnomalyError,
)


@dataclass(frozen=True)
class DtnSpec:
    """Truncation order M, quasi-momentum alpha0 = k*cos(theta), and medium."""

    M: int
    alpha0: float
    eps_plus: complex
    k: float
    H: float

    def __post_init__(self):
        if self.M < 0:
            raise InvalidArgumentError("truncation order M must be >= 0")
        if self.k <= 0:
            raise InvalidArgumentError("wavenumber k must be positive")
        n = np.arange(-self.M, self.M + 1)
        disc = (self.alpha0 + n) ** 2 - self.k ** 2 * complex(self.eps_plus)
        bad = np.abs(disc) < 1e-12 * self.k ** 2
        if np.any(bad):
            raise WoodAnomalyError(
                f"Wood anomaly at modes {list(n[bad])}: alpha_n^2 == k^2*eps_plus")
        eps = complex(self.eps_plus)
        if eps.imag == 0.0:
            edge = (abs(self.alpha0) + self.M) ** 2
            if edge <= self.k ** 2 * eps.real:
                raise InvalidArgumentError(
                    "truncation order too small: alpha_M^2 must exceed k^2*eps_plus")
            lo = -self.alpha0 - self.k * np.sqrt(eps.real)
            hi = -self.alpha0 + self.k * np.sqrt(eps.real)
            # integer modes strictly inside (lo, hi) are propagating
            if np.floor(lo) + 1 < -self.M or np.ceil(hi) - 1 > self.M:
                warnings.warn(
                    "propagating Rayleigh modes fall outside [-M, M]",
                    TruncationWarning, stacklevel=2)

    @staticmethod
    def for_incidence(k, theta, M=100, eps_plus=1.0, H=3.0):
        return DtnSpec(M=M, alpha0=k * np.cos(theta), eps_plus=eps_plus,
                       k=k, H=H)

    def alpha(self, n):
        return self.alpha0 + np.asarray(n)

    def mode_range(self):
        return np.arange(-self.M, self.M + 1)


def mode_beta(n, spec):
    """Vertical wavenumber beta_n of the n-th Rayleigh mode.

    beta_n = sqrt(k^2*eps_plus - alpha_n^2) with the real positive root for
    propagating modes and i*sqrt(alpha_n^2 - k^2*eps_plus) for evanescent
    ones; for complex eps_plus the principal root folded into Im >= 0.
    """
    alpha = spec.alpha(n)
    disc = spec.k ** 2 * complex(spec.eps_plus) - np.asarray(alpha) ** 2 + 0j
    if np.any(np.abs(disc) < 1e-12 * spec.k ** 2):
        raise WoodAnomalyError(f"Wood anomaly at mode n={n}")
    beta = np.sqrt(disc)
    beta = np.where(beta.imag < 0.0, -beta, beta)
    # Real non-negative discriminant: pick the real positive root exactly.
    beta = np.where((disc.imag == 0.0) & (disc.real > 0.0), np.abs(beta.real), beta)
    if np.ndim(n) == 0:
        return complex(beta)
    return beta


def beta_array(spec):
    return mode_beta(spec.mode_range(), spec)


@dataclass
class BoundaryTrace:
    """Finitely supported Fourier coefficients phi_n, n in [-M, M]."""

    M: int
    coefficients: np.ndarray = field(default=None)

    def __post_init__(self):
        if self.coefficients is None:
            self.coefficients = np.zeros(2 * self.M + 1, dtype=complex)
        else:
            self.coefficients = np.asarray(self.coefficients, dtype=complex)
            if self.coefficients.shape != (2 * self.M + 1,):
                raise InvalidArgumentError("coefficient vector must have 2M+1 entries")

    def get(self, n):
        if abs(n) > self.M:
            return 0.0 + 0.0j
        return complex(self.coefficients[n + self.M])

    def set(self, n, value):
        if abs(n) > self.M:
            raise InvalidArgumentError(f"mode {n} outside [-M, M]")
        self.coefficients[n + self.M] = value

    def evaluate(self, x1, spec):
        """Pointwise sum of the trace series at positions x1."""
        x1 = np.asarray(x1, dtype=float)
        modes = np.exp(1j * np.outer(x1, spec.alpha(spec.mode_range())))
        return modes @ self.coefficients


def apply_dtn(trace, spec):
    """Apply T_M in coefficient space: (T_M phi)_n = i * beta_n * phi_n."""
    if trace.M != spec.M:
        raise InvalidArgumentError("trace and spec truncation orders differ")
    return BoundaryTrace(spec.M, 1j * beta_array(spec) * trace.coefficients)


def boundary_l2_pairing(t1, t2):
    """L2(Gamma_H) pairing of two trace series: 2*pi * sum_n t1_n*conj(t2_n)."""
    if t1.M != t2.M:
        raise InvalidArgumentError("traces have different truncation orders")
    return 2.0 * np.pi * complex(t1.coefficients @ np.conj(t2.coefficients))


def _require_top(face_pts, spec):
    (a, b) = face_pts
    tol = 1e-9 * max(spec.H, 1.0)
    if abs(a[1] - spec.H) > tol or abs(b[1] - spec.H) > tol:
        raise FaceNotOnTopError("face does not lie on x2 = H")
    p1, p2 = sorted((float(a[0]), float(b[0])))
    return p1, p2


def trace_fourier_coefficients(face_pts, kappa, d, spec, conjugated=False):
    """Fourier coefficients of a plane-wave trace on a top face, all modes.

    For the basis function exp(i*kappa*d.x) restricted to a face with x1
    endpoints p1 < p2 on x2 = H:

        phi^n = (1/2pi) exp(i*kappa*d2*H) int_{p1}^{p2}
                exp((i*kappa*d1 - i*alpha_n) x1) dx1,

    evaluated via the psi kernel.  With ``conjugated=True`` the coefficients
    of the reversed-phase trace exp(-i*kappa*d.x) are returned instead (the
    test-function side; equal to conj(phi^n) for real kappa).
    """
    p1, p2 = _require_top(face_pts, spec)
    alpha = spec.alpha(spec.mode_range())
    sign = -1.0 if conjugated else 1.0
    c = sign * 1j * (kappa * d[0] - alpha)
    dx = p2 - p1
    integral = dx * np.exp(c * p1) * psi(c * dx)
    return np.exp(sign * 1j * kappa * d[1] * spec.H) / (2.0 * np.pi) * integral


def trace_fourier_coefficient(face_pts, kappa, d, n, spec):
    """Single mode n of the plane-wave trace on a top face."""
    if abs(n) > spec.M:
        raise InvalidArgumentError(f"mode {n} outside [-M, M]")
    coeffs = trace_fourier_coefficients(face_pts, kappa, d, spec)
    return complex(coeffs[n + spec.M])


def dtn_coupling_block(face_l, kappa_l, d_l, face_j, kappa_j, d_j, spec):
    """The three analytic coupling integrals over the whole top boundary.

    Returns (I_T_phi_psi, I_Tphi_Tpsi, I_phi_Tpsi) with

        I_T_phi_psi = int T_M(phi_l) * psi_j~          = 2*pi*i sum phi_l^n beta_n omega_j^n,
        I_Tphi_Tpsi = int T_M(phi_l) * conj(T_M psi_j) = 2*pi   sum phi_l^n conj(phi_j^n) |beta_n|^2,
        I_phi_Tpsi  = int phi_l * conj(T_M psi_j)      = -2*pi*i sum phi_l^n conj(phi_j^n beta_n),

    where psi_j~ is the reversed-phase test trace and omega_j^n its
    coefficients.  Mode orthogonality collapses every x1 integral.
    """
    phi_l = trace_fourier_coefficients(face_l, kappa_l, d_l, spec)
    phi_j = trace_fourier_coefficients(face_j, kappa_j, d_j, spec)
    omega_j = trace_fourier_coefficients(face_j, kappa_j, d_j, spec, conjugated=True)
    beta = beta_array(spec)
    two_pi = 2.0 * np.pi
    i_t_phi_psi = two_pi * 1j * np.sum(phi_l * beta * omega_j)
    i_tphi_tpsi = two_pi * np.sum(phi_l * np.conj(phi_j) * np.abs(beta) ** 2)
    i_phi_tpsi = -two_pi * 1j * np.sum(phi_l * np.conj(phi_j * beta))
    return complex(i_t_phi_psi), complex(i_tphi_tpsi), complex(i_phi_tpsi)
