"""Analytic reference solutions for manufactured problems and error studies.

Covers the two-layer grating field (incident + reflected wave above a flat
interface, two transmitted components below, Dirichlet bottom), circular
Bessel waves for impedance tests, and impedance data manufactured from any
exact field.
"""

from dataclasses import dataclass

import numpy as np
from scipy import special

from .errors import (
    DegenerateBranchError,
    InvalidArgumentError,
    OutOfEnvelopeError,
    SingularOriginError,
)


def _upper_half_sqrt(z):
    w = complex(np.sqrt(complex(z)))
    if w.imag < 0.0:
        w = -w
    return w


@dataclass(frozen=True)
class TwoLayerCoeffs:
    """Reflection/transmission coefficients of the flat two-layer problem."""

    R: complex
    T1: complex
    T2: complex
    k: float
    theta: float
    eps2: complex
    H: float
    root: complex  # principal sqrt(eps2 - cos(theta)^2), Im >= 0

    @property
    def alpha0(self):
        return self.k * np.cos(self.theta)


def two_layer_coefficients(k, theta, eps2, H):
    """Solve the 3x3 continuity system for the flat two-layer field.

    Unknowns (R, T1, T2) satisfy value continuity at x2 = 0, normal-derivative
    continuity there, and the homogeneous Dirichlet condition at x2 = -H:

        1 + R = T1 + T2
        (1 - R) sin(theta) = (T2 - T1) * sqrt(eps2 - cos(theta)^2)
        T1 exp(i k H q) + T2 exp(-i k H q) = 0,  q = sqrt(eps2 - cos(theta)^2).
    """
    if not -np.pi < theta < 0:
        raise InvalidArgumentError("incidence angle must lie in (-pi, 0)")
    q = _upper_half_sqrt(complex(eps2) - np.cos(theta) ** 2)
    if abs(q) < 1e-9:
        raise DegenerateBranchError("eps2 == cos(theta)^2: branch degenerates")
    s = np.sin(theta)
    A = np.array([
        [-1.0, 1.0, 1.0],
        [-s, q, -q],
        [0.0, np.exp(1j * k * H * q), np.exp(-1j * k * H * q)],
    ], dtype=complex)
    rhs = np.array([1.0, -s, 0.0], dtype=complex)
    R, T1, T2 = np.linalg.solve(A, rhs)
    return TwoLayerCoeffs(R=complex(R), T1=complex(T1), T2=complex(T2),
                          k=float(k), theta=float(theta), eps2=complex(eps2),
                          H=float(H), root=q)


def two_layer_field(x, coeffs):
    """Exact two-layer field and gradient at points x (shape (2,) or (n, 2)).

    Upper branch (x2 >= 0): exp(ik(x1 c + x2 s)) + R exp(ik(x1 c - x2 s));
    lower branch: T1 exp(ik(x1 c - x2 q)) + T2 exp(ik(x1 c + x2 q)).
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = x[None, :] if single else x
    k, c, s, q = coeffs.k, np.cos(coeffs.theta), np.sin(coeffs.theta), coeffs.root
    R, T1, T2 = coeffs.R, coeffs.T1, coeffs.T2
    x1, x2 = pts[:, 0], pts[:, 1]
    upper = x2 >= 0
    phase1 = np.exp(1j * k * (x1 * c + x2 * s))
    phase2 = np.exp(1j * k * (x1 * c - x2 * s))
    phase3 = np.exp(1j * k * (x1 * c - x2 * q))
    phase4 = np.exp(1j * k * (x1 * c + x2 * q))
    val_up = phase1 + R * phase2
    val_lo = T1 * phase3 + T2 * phase4
    values = np.where(upper, val_up, val_lo)
    gx_up = 1j * k * c * val_up
    gy_up = 1j * k * (s * phase1 - R * s * phase2)
    gx_lo = 1j * k * c * val_lo
    gy_lo = 1j * k * (-q * T1 * phase3 + q * T2 * phase4)
    grads = np.stack([np.where(upper, gx_up, gx_lo),
                      np.where(upper, gy_up, gy_lo)], axis=-1)
    if single:
        return complex(values[0]), grads[0]
    return values, grads


def bessel_j(nu, x):
    """J_nu(x) and its derivative on the supported envelope.

    Restricted to 0 <= nu <= 5 and 0 <= x <= 100, where the backend delivers
    at least 1e-10 absolute accuracy.
    """
    nu_arr = np.asarray(nu, dtype=float)
    x_arr = np.asarray(x, dtype=float)
    if np.any(nu_arr < 0) or np.any(nu_arr > 5):
        raise OutOfEnvelopeError("order nu outside [0, 5]")
    if np.any(x_arr < 0) or np.any(x_arr > 100):
        raise OutOfEnvelopeError("argument x outside [0, 100]")
    j = special.jv(nu_arr, x_arr)
    jp = special.jvp(nu_arr, x_arr)
    if np.ndim(nu) == 0 and np.ndim(x) == 0:
        return float(j), float(jp)
    return j, jp


def circular_wave(x, xi, k):
    """Circular wave J_xi(k r) cos(xi angle) and its Cartesian gradient.

    The gradient is singular at the origin for xi < 1; querying it there
    raises SingularOriginError.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    pts = x[None, :] if single else x
    r = np.hypot(pts[:, 0], pts[:, 1])
    if np.any(r == 0.0) and xi < 1:
        raise SingularOriginError("gradient singular at the origin for xi < 1")
    ang = np.arctan2(pts[:, 1], pts[:, 0])
    j, jp = bessel_j(xi, k * r)
    values = j * np.cos(xi * ang)
    with np.errstate(invalid="ignore", divide="ignore"):
        dr = k * jp * np.cos(xi * ang)
        dt_over_r = np.where(r > 0.0, -xi * j * np.sin(xi * ang) / r, 0.0)
    cos_a, sin_a = np.cos(ang), np.sin(ang)
    grads = np.stack([dr * cos_a - dt_over_r * sin_a,
                      dr * sin_a + dt_over_r * cos_a], axis=-1)
    if np.any(r == 0.0):
        # Finite limits exist for xi >= 1: nonzero only at xi == 1.
        at0 = r == 0.0
        grads[at0] = (0.5 * k, 0.0) if xi == 1 else (0.0, 0.0)
    if single:
        return complex(values[0]), grads[0].astype(complex)
    return values.astype(complex), grads.astype(complex)


def impedance_data_from_exact(exact):
    """Robin data g_R(x) = grad(u).n - i*kappa*u from an exact field.

    Returns a boundary-data callable g(points, normal, kappa); ``exact`` maps
    points (n, 2) to (values, gradients).
    """
    def g(points, normal, kappa):
        values, grads = exact(np.asarray(points, dtype=float))
        return grads @ np.asarray(normal, dtype=float) - 1j * kappa * values

    return g


class PlaneWaveBoundaryData:
    """Robin data of an exact plane wave amp*exp(i*kappa_g*d_g.x).

    Carries the wave parameters so the assembler can integrate it in closed
    form; calling it evaluates g_R pointwise for quadrature paths.
    """

    def __init__(self, kappa_g, d_g, amplitude=1.0):
        self.kappa_g = complex(kappa_g)
        self.d_g = np.asarray(d_g, dtype=float)
        self.amplitude = complex(amplitude)

    def field(self, points):
        points = np.asarray(points, dtype=float)
        values = self.amplitude * np.exp(1j * self.kappa_g * (points @ self.d_g))
        grads = values[..., None] * (1j * self.kappa_g * self.d_g)
        return values, grads

    def __call__(self, points, normal, kappa):
        values, grads = self.field(points)
        return grads @ np.asarray(normal, dtype=float) - 1j * kappa * values
