"""Stroh eigenproblem and surface admittance for one monoclinic half-plane.

Two routes to the surface admittance tensor ``Y = i F L^-1`` are provided:

* :func:`surface_admittance_closed` uses only symmetric functions of the
  characteristic roots and the reduced compliances, so it stays finite when the
  two plane roots coincide (isotropic limit included);
* :func:`stroh_eigensystem` solves the quadratic eigenproblem in ``Q, R, T``
  and assembles ``F`` and ``L`` column by column.

:func:`stroh_system` bundles both and is what downstream modules consume.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateRoots, InadmissibleMaterial
from .materials import (
    MaterialSpec,
    ReducedCompliance,
    StrohMatrices,
    reduced_compliance,
    stroh_matrices,
)

__all__ = [
    "PlaneRootSummary",
    "StrohSystem",
    "characteristic_roots",
    "plane_polynomial",
    "antiplane_polynomial",
    "plane_root_summary",
    "surface_admittance_closed",
    "stroh_eigensystem",
    "admittance_from_eigensystem",
    "stroh_system",
    "DEGENERACY_TOL",
]

#: Relative distance below which the two plane roots count as repeated.
DEGENERACY_TOL = 1e-6

_REAL_ROOT_TOL = 1e-12


def plane_polynomial(rc: ReducedCompliance) -> np.ndarray:
    """Coefficients (highest power first) of the in-plane characteristic quartic."""
    s = rc.s
    return np.array(
        [s(1, 1), -2.0 * s(1, 6), 2.0 * s(1, 2) + s(6, 6), -2.0 * s(2, 6), s(2, 2)]
    )


def antiplane_polynomial(rc: ReducedCompliance) -> np.ndarray:
    """Coefficients (highest power first) of the antiplane characteristic quadratic."""
    s = rc.s
    return np.array([s(5, 5), -2.0 * s(4, 5), s(4, 4)])


def _polish(coeffs, root, iters=3):
    """Newton steps on a polynomial; stops as soon as a step does not help."""
    dcoeffs = np.polyder(coeffs)
    for _ in range(iters):
        p = np.polyval(coeffs, root)
        dp = np.polyval(dcoeffs, root)
        if dp == 0:
            break
        new = root - p / dp
        if abs(np.polyval(coeffs, new)) >= abs(p):
            break
        root = new
    return root


def _upper_roots(coeffs, count, what):
    roots = np.roots(coeffs)
    scale = 1.0 + np.abs(roots)
    if np.any(np.abs(roots.imag) <= _REAL_ROOT_TOL * scale):
        raise InadmissibleMaterial(f"{what} characteristic equation has real roots (non-elliptic data)")
    upper = roots[roots.imag > 0]
    if upper.size != count:
        raise InadmissibleMaterial(f"{what} roots are not in conjugate pairs")
    return upper


def characteristic_roots(rc: ReducedCompliance):
    """Roots ``(mu1, mu2, mu3)`` with positive imaginary part.

    All roots of each polynomial come from the companion-matrix eigenvalues
    (:func:`numpy.roots`), followed by Newton polishing.  A nearly repeated
    plane pair is replaced by its mean polished on the derivative, which is
    far more accurate than the split pair returned by the eigenvalue solver.
    Plane roots are sorted by real part, then imaginary part.
    """
    pc = plane_polynomial(rc)
    ac = antiplane_polynomial(rc)
    m1, m2 = _upper_roots(pc, 2, "in-plane")
    if abs(m1 - m2) < DEGENERACY_TOL * (1.0 + abs(m1)):
        mean = _polish(np.polyder(pc), 0.5 * (m1 + m2))
        m1 = m2 = mean
    else:
        m1, m2 = _polish(pc, m1), _polish(pc, m2)
    m1, m2 = sorted((m1, m2), key=lambda z: (round(z.real, 12), z.imag))
    (m3,) = _upper_roots(ac, 1, "antiplane")
    m3 = _polish(ac, m3)
    return complex(m1), complex(m2), complex(m3)


@dataclass(frozen=True)
class PlaneRootSummary:
    """Symmetric functions of the plane roots.

    ``mu1 + mu2 = a + ib``, ``mu1 mu2 = c + id`` and ``e = ad - bc``.
    """

    a: float
    b: float
    c: float
    d: float
    e: float


def plane_root_summary(mu1: complex, mu2: complex) -> PlaneRootSummary:
    total = mu1 + mu2
    prod = mu1 * mu2
    a, b = total.real, total.imag
    c, d = prod.real, prod.imag
    return PlaneRootSummary(a=a, b=b, c=c, d=d, e=a * d - b * c)


def surface_admittance_closed(rc: ReducedCompliance, roots) -> np.ndarray:
    """Closed-form ``Y`` from reduced compliances and root symmetric functions."""
    mu1, mu2, _ = roots
    disc = rc.antiplane_discriminant
    if disc <= 0.0:
        raise InadmissibleMaterial("s'44 s'55 - s'45^2 must be positive")
    summ = plane_root_summary(mu1, mu2)
    s11, s12 = rc.s(1, 1), rc.s(1, 2)
    prod = complex(summ.c, summ.d)
    Y = np.zeros((3, 3), dtype=complex)
    Y[0, 0] = s11 * summ.b
    Y[0, 1] = 1j * (s12 - s11 * prod)
    Y[1, 0] = 1j * (s11 * prod.conjugate() - s12)
    Y[1, 1] = s11 * summ.e
    Y[2, 2] = np.sqrt(disc)
    return Y


def _plane_stroh_matrix(Q, R, T):
    """Fundamental 4x4 Stroh matrix of the in-plane block."""
    Ti = np.linalg.inv(T)
    return np.block([[-Ti @ R.T, Ti], [R @ Ti @ R.T - Q, -R @ Ti]])


def stroh_eigensystem(sm: StrohMatrices):
    """Eigenvalues ``mu`` and eigenvector matrices ``F``, ``L``.

    Columns 1 and 2 come from the in-plane 2x2 block, column 3 from the
    decoupled antiplane entry.  Each column ``f_j`` is scaled to unit norm with
    a real non-negative leading entry; ``Y`` does not depend on this choice.

    Raises
    ------
    DegenerateRoots
        If the two plane roots coincide within :data:`DEGENERACY_TOL`.
    """
    Q, R, T = sm.Q, sm.R, sm.T
    ip = [0, 1]
    N = _plane_stroh_matrix(Q[np.ix_(ip, ip)], R[np.ix_(ip, ip)], T[np.ix_(ip, ip)])
    vals, vecs = np.linalg.eig(N)
    upper = np.flatnonzero(vals.imag > 0)
    if upper.size != 2:
        raise InadmissibleMaterial("in-plane Stroh eigenvalues are not in conjugate pairs")
    order = sorted(upper, key=lambda k: (round(vals[k].real, 12), vals[k].imag))
    m1, m2 = vals[order[0]], vals[order[1]]
    if abs(m1 - m2) < DEGENERACY_TOL * (1.0 + abs(m1)):
        raise DegenerateRoots("repeated in-plane roots; use the closed-form admittance")

    F = np.zeros((3, 3), dtype=complex)
    L = np.zeros((3, 3), dtype=complex)
    mus = []
    for col, k in enumerate(order):
        mu = vals[k]
        f = _null_vector(_plane_kernel(sm, mu))
        F[:2, col] = f
        mus.append(mu)
    c44, c45, c55 = T[2, 2], R[2, 2], Q[2, 2]
    disc = c44 * c55 - c45 * c45
    if disc <= 0.0:
        raise InadmissibleMaterial("c44 c55 - c45^2 must be positive")
    mu3 = complex(-c45, np.sqrt(disc)) / c44
    F[2, 2] = 1.0
    mus.append(mu3)
    for col, mu in enumerate(mus):
        L[:, col] = (R.T + mu * T) @ F[:, col]
    return np.array(mus), F, L


def _plane_kernel(sm, mu):
    ip = [0, 1]
    Q = sm.Q[np.ix_(ip, ip)]
    R = sm.R[np.ix_(ip, ip)]
    T = sm.T[np.ix_(ip, ip)]
    return Q + (R + R.T) * mu + T * mu * mu


def _null_vector(K):
    _, _, vh = np.linalg.svd(K)
    v = vh[-1].conj()
    k = int(np.argmax(np.abs(v)))
    v = v * (abs(v[k]) / v[k])
    return v / np.linalg.norm(v)


def admittance_from_eigensystem(F, L) -> np.ndarray:
    """``Y = i F L^-1``."""
    return 1j * F @ np.linalg.inv(L)


@dataclass(frozen=True, eq=False)
class StrohSystem:
    """Stroh data of one material.

    ``Y`` is always the closed-form admittance.  ``F`` and ``L`` are ``None``
    when the plane roots are repeated (``degenerate``).
    """

    mu: tuple[complex, complex, complex]
    F: np.ndarray | None
    L: np.ndarray | None
    Y: np.ndarray
    degenerate: bool
    reduced: ReducedCompliance
    summary: PlaneRootSummary

    @property
    def Y_eigen(self) -> np.ndarray | None:
        if self.F is None:
            return None
        return admittance_from_eigensystem(self.F, self.L)


def stroh_system(m: MaterialSpec) -> StrohSystem:
    """Roots, eigenvectors and admittance of a validated material."""
    rc = reduced_compliance(m)
    roots = characteristic_roots(rc)
    Y = surface_admittance_closed(rc, roots)
    if np.linalg.eigvalsh(Y).min() <= 0.0:
        raise InadmissibleMaterial(f"material {m.id!r}: surface admittance is not positive definite")
    try:
        _, F, L = stroh_eigensystem(stroh_matrices(m))
        degenerate = False
    except DegenerateRoots:
        F = L = None
        degenerate = True
    return StrohSystem(
        mu=roots,
        F=F,
        L=L,
        Y=Y,
        degenerate=degenerate,
        reduced=rc,
        summary=plane_root_summary(roots[0], roots[1]),
    )
