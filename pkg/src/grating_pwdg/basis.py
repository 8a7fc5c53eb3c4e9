"""Plane-wave local spaces and closed-form edge integrals.

Each element K carries the local basis phi_j(x) = exp(i*kappa*d_j.x) with
kappa = k*sqrt(eps_K) and p uniformly spaced unit directions d_j.  Products
of plane waves integrate in closed form along straight edges through the
kernel psi(z) = (exp(z)-1)/z, so no quadrature is needed for the system
matrix.
"""

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import InvalidArgumentError

_PSI_TAYLOR_CUTOFF = 1e-4


def psi(z):
    """Entire kernel psi(z) = int_0^1 exp(z*t) dt = (exp(z)-1)/z, psi(0) = 1.

    Accepts scalars or arrays; switches to a 6-term Taylor expansion for
    |z| < 1e-4 to avoid cancellation near z = 0.
    """
    z = np.asarray(z, dtype=complex)
    small = np.abs(z) < _PSI_TAYLOR_CUTOFF
    zs = np.where(small, 0.0, z)
    with np.errstate(invalid="ignore", divide="ignore"):
        out = np.where(small, 1.0, np.expm1(zs) / np.where(small, 1.0, zs))
    if np.any(small):
        t = np.asarray(z, dtype=complex)
        # psi(z) = sum_{m>=0} z^m / (m+1)!
        taylor = 1.0 + t / 2.0 * (1.0 + t / 3.0 * (1.0 + t / 4.0 * (
            1.0 + t / 5.0 * (1.0 + t / 6.0))))
        out = np.where(small, taylor, out)
    if out.ndim == 0:
        return complex(out)
    return out


def direction_set(p):
    """Return the p uniformly spaced unit directions d_j, j = 1..p.

    d_j = (cos(2*pi*j/p), sin(2*pi*j/p)).  The j = 1..p indexing matters:
    for p = 8 the set contains (sqrt(2)/2, sqrt(2)/2).
    """
    if p < 1:
        raise InvalidArgumentError(f"direction count must be >= 1, got {p}")
    j = np.arange(1, p + 1)
    ang = 2.0 * np.pi * j / p
    return np.column_stack([np.cos(ang), np.sin(ang)])


def edge_pw_integral(a, b, c):
    """Closed form for int_F exp(x.c) dS over the segment F from a to b.

    Parameterizing x = a + t*(b-a) gives
        |b-a| * exp(a.c) * psi((b-a).c),
    with the complex (unconjugated) dot product throughout.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    c = np.asarray(c, dtype=complex)
    d = b - a
    length = float(np.hypot(d[0], d[1]))
    if length == 0.0:
        raise InvalidArgumentError("edge endpoints coincide")
    return length * np.exp(a @ c) * psi(d @ c)


def edge_pw_integral_two_anchor(a_trial, a_test, delta, c_trial, c_test):
    """Edge integral of a product anchored at two different start points.

    Used across the periodic seam, where trial and test traces live on
    translated copies of the same segment: both are parameterized by the
    shared direction ``delta`` = b - a but start at different anchors.
    Returns |delta| * exp(a_trial.c_trial + a_test.c_test)
            * psi(delta.(c_trial + c_test)).
    """
    a_trial = np.asarray(a_trial, dtype=float)
    a_test = np.asarray(a_test, dtype=float)
    delta = np.asarray(delta, dtype=float)
    length = float(np.hypot(delta[0], delta[1]))
    phase = a_trial @ np.asarray(c_trial, complex) + a_test @ np.asarray(c_test, complex)
    return length * np.exp(phase) * psi(delta @ (np.asarray(c_trial, complex)
                                                 + np.asarray(c_test, complex)))


def edge_quadrature(n):
    """n-point Gauss-Legendre rule on [0, 1]; exact to degree 2n-1."""
    if not 1 <= n <= 64:
        raise InvalidArgumentError(f"edge quadrature size must be in [1, 64], got {n}")
    x, w = leggauss(n)
    return 0.5 * (x + 1.0), 0.5 * w


@dataclass(frozen=True)
class FluxParams:
    """DG flux parameters alpha, beta > 0 and 0 < delta <= 1/2."""

    alpha: float = 0.5
    beta: float = 0.5
    delta: float = 0.5

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise InvalidArgumentError("flux parameters alpha, beta must be positive")
        if not 0.0 < self.delta <= 0.5:
            raise InvalidArgumentError("flux parameter delta must lie in (0, 1/2]")

    @staticmethod
    def uwvf():
        """Ultra weak variational formulation choice alpha = beta = delta = 1/2."""
        return FluxParams(0.5, 0.5, 0.5)


@dataclass(frozen=True)
class PlaneWaveSpace:
    """Per-element plane-wave basis: p directions and local wavenumbers.

    kappa[e] = k * sqrt(eps(region(e))) with the principal square root, so
    Im kappa >= 0 for admissible permittivities.
    """

    p: int
    k: float
    directions: np.ndarray = field(repr=False)
    kappa: np.ndarray = field(repr=False)

    @staticmethod
    def for_mesh(mesh, eps_by_region, k, p):
        """Build the space for a mesh whose elements carry region ids."""
        if k <= 0:
            raise InvalidArgumentError("wavenumber k must be positive")
        dirs = direction_set(p)
        kappa = np.empty(mesh.n_elements, dtype=complex)
        for e in range(mesh.n_elements):
            region = mesh.regions[e]
            if region not in eps_by_region:
                raise InvalidArgumentError(f"no permittivity for region {region}")
            kappa[e] = k * _principal_sqrt(complex(eps_by_region[region]))
        return PlaneWaveSpace(p=p, k=float(k), directions=dirs, kappa=kappa)

    def kappa_of(self, element):
        return complex(self.kappa[element])


def _principal_sqrt(z: complex) -> complex:
    w = complex(np.sqrt(complex(z)))
    if w.imag < 0.0:
        w = -w
    return w


def eval_basis(space, element, j, x):
    """Value and gradient of basis function j of an element at point x.

    value = exp(i*kappa*d_j.x), gradient = i*kappa*d_j*value.  No containment
    check is made; x is assumed to lie in the element's closure.
    """
    d = space.directions[j]
    kappa = space.kappa_of(element)
    x = np.asarray(x, dtype=float)
    value = np.exp(1j * kappa * (x @ d))
    return value, 1j * kappa * d * value


def eval_element_fields(space, element, coeffs, points):
    """Vectorized sum_j coeffs[j]*phi_j over an array of points (n, 2).

    Returns (values (n,), gradients (n, 2)).
    """
    kappa = space.kappa_of(element)
    dirs = space.directions
    phase = np.exp(1j * kappa * (np.asarray(points, float) @ dirs.T))  # (n, p)
    values = phase @ coeffs
    grads = (phase * coeffs) @ (1j * kappa * dirs)
    return values, grads
