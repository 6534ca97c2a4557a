"""Bimaterial matrices, Dundurs-like parameters and plane operator matrices.

Material 1 occupies ``x2 > 0`` and material 2 ``x2 < 0``.  The plane block
of the bimaterial matrices is parameterised as::

    H = H' + i beta  sqrt(H11 H22) E,   H' = [[H11, alpha s], [alpha s, H22]]
    W = W' - i gamma sqrt(H11 H22) E,   W' = [[delta1 H11, lambda s], [lambda s, delta2 H22]]

with ``s = sqrt(H11 H22)`` and ``E = [[0, -1], [1, 0]]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import DegenerateOperator, InadmissibleParameters, PhysicsError
from .materials import MaterialSpec, ReducedCompliance
from .stroh import PlaneRootSummary, StrohSystem, stroh_system

__all__ = [
    "E_MATRIX",
    "BimaterialParams",
    "DundursParameters",
    "PlaneOperatorMatrices",
    "alpha_admissible_interval",
    "antiplane_parameters",
    "bimaterial_matrices",
    "dundurs_parameters",
    "identity_operator_matrices",
    "oscillation_index",
    "plane_blocks",
    "weight_function_transforms",
]

E_MATRIX = np.array([[0.0, -1.0], [1.0, 0.0]])
E_MATRIX.setflags(write=False)

#: Relative half-width of the refused band around alpha^2 + beta^2 = 1.
POLE_TOL = 1e-12


def _check_hermitian_pd(M, name, tol=1e-10):
    M = np.asarray(M, dtype=complex)
    scale = np.abs(M).max()
    if np.abs(M - M.conj().T).max() > tol * scale:
        raise InadmissibleParameters(f"{name} is not Hermitian")
    if np.linalg.eigvalsh(0.5 * (M + M.conj().T)).min() <= 0.0:
        raise InadmissibleParameters(f"{name} is not positive definite")


def bimaterial_matrices(Y1, Y2):
    """``H = Y1 + conj(Y2)`` and ``W = Y1 - conj(Y2)``."""
    Y1 = np.asarray(Y1, dtype=complex)
    Y2 = np.asarray(Y2, dtype=complex)
    _check_hermitian_pd(Y1, "Y of material 1")
    _check_hermitian_pd(Y2, "Y of material 2")
    return Y1 + Y2.conj(), Y1 - Y2.conj()


def antiplane_parameters(y33_1: float, y33_2: float):
    """``(H33, W33, nu)`` from the antiplane admittances of the two materials.

    ``y33`` is ``sqrt(s'44 s'55 - s'45^2)`` of each material.
    """
    if y33_1 <= 0.0 or y33_2 <= 0.0:
        raise InadmissibleParameters("antiplane admittances must be positive")
    H33 = y33_1 + y33_2
    W33 = y33_1 - y33_2
    if H33 <= 0.0:
        raise InadmissibleParameters("H33 must be positive")
    return float(H33), float(W33), float(W33 / H33)


@dataclass(frozen=True)
class DundursParameters:
    H11: float
    H22: float
    alpha: float
    beta: float
    delta1: float
    delta2: float
    lam: float
    gamma: float


def dundurs_parameters(
    summary1: PlaneRootSummary,
    rc1: ReducedCompliance,
    summary2: PlaneRootSummary,
    rc2: ReducedCompliance,
) -> DundursParameters:
    """Plane-strain mismatch parameters of a material pair."""

    def parts(sm, rc):
        s11, s12 = rc.s(1, 1), rc.s(1, 2)
        return sm.b * s11, sm.e * s11, sm.d * s11, s11 * sm.c - s12

    b1, e1, d1, c1 = parts(summary1, rc1)
    b2, e2, d2, c2 = parts(summary2, rc2)
    H11, H22 = b1 + b2, e1 + e2
    if H11 <= 0.0 or H22 <= 0.0:
        raise InadmissibleParameters(f"H11 = {H11}, H22 = {H22} must be positive")
    root = math.sqrt(H11 * H22)
    return DundursParameters(
        H11=H11,
        H22=H22,
        alpha=(d1 + d2) / root,
        beta=(c1 - c2) / root,
        delta1=(b1 - b2) / H11,
        delta2=(e1 - e2) / H22,
        lam=(d1 - d2) / root,
        gamma=-(c1 + c2) / root,
    )


def oscillation_index(beta: float) -> float:
    """``eps = ln((1 - beta) / (1 + beta)) / (2 pi)``."""
    if not abs(beta) < 1.0:
        raise InadmissibleParameters(f"|beta| must be below 1, got {beta}")
    return math.log((1.0 - beta) / (1.0 + beta)) / (2.0 * math.pi)


def weight_function_transforms(xi: float, H, W):
    """Fourier multipliers of the symmetric and skew weight functions.

    Returns the matrices that map the singular traction transform to the
    jump ``[U]^+`` and to the average ``<U>`` at frequency ``xi``.
    """
    if xi == 0.0 or not np.isfinite(xi):
        raise PhysicsError("weight function transforms are singular at xi = 0")
    H = np.asarray(H, dtype=complex)
    W = np.asarray(W, dtype=complex)
    sg = math.copysign(1.0, xi)
    ax = abs(xi)
    jump = -(H.real - 1j * sg * H.imag) / ax
    avg = -(W.real - 1j * sg * W.imag) / (2.0 * ax)
    return jump, avg


def plane_blocks(H11, H22, alpha, beta, delta1, delta2, lam, gamma):
    """Plane 2x2 blocks of ``H`` and ``W`` rebuilt from the parameters."""
    root = math.sqrt(H11 * H22)
    Hp = np.array([[H11, alpha * root], [alpha * root, H22]])
    Wp = np.array([[delta1 * H11, lam * root], [lam * root, delta2 * H22]])
    return Hp + 1j * beta * root * E_MATRIX, Wp - 1j * gamma * root * E_MATRIX


@dataclass(frozen=True, eq=False)
class PlaneOperatorMatrices:
    """Real matrices of the plane-strain integral identities.

    ``A(xi) = pref_A (A' + i sign(xi) A'')`` and
    ``B(xi) = |xi| pref_B (B' + i beta sign(xi) E)``.
    """

    Aprime: np.ndarray
    Adprime: np.ndarray
    Bprime: np.ndarray
    beta: float
    pref_A: float
    pref_B: float
    E: np.ndarray = E_MATRIX

    def A(self, xi: float) -> np.ndarray:
        return self.pref_A * (self.Aprime + 1j * math.copysign(1.0, xi) * self.Adprime)

    def B(self, xi: float) -> np.ndarray:
        sg = math.copysign(1.0, xi)
        return abs(xi) * self.pref_B * (self.Bprime + 1j * self.beta * sg * self.E)


def identity_operator_matrices(params) -> PlaneOperatorMatrices:
    """Assemble ``A'``, ``A''`` and ``B'`` from a parameter set.

    ``params`` needs attributes ``H11, H22, alpha, beta, delta1, delta2, lam, gamma``.
    """
    H11, H22 = params.H11, params.H22
    al, be = params.alpha, params.beta
    d1, d2, la, ga = params.delta1, params.delta2, params.lam, params.gamma
    denom = al * al + be * be - 1.0
    if abs(denom) <= POLE_TOL:
        raise DegenerateOperator("alpha^2 + beta^2 = 1: operator prefactor is singular")
    root = math.sqrt(H11 * H22)
    Ap = np.array(
        [
            [root * (al * la - be * ga - d1), H22 * (la - al * d2)],
            [H11 * (la - al * d1), root * (al * la - be * ga - d2)],
        ]
    )
    App = np.array(
        [
            [-root * (al * ga + be * la), H22 * (ga + be * d2)],
            [-H11 * (ga + be * d1), root * (al * ga + be * la)],
        ]
    )
    Bp = np.array([[math.sqrt(H22 / H11), al], [al, math.sqrt(H11 / H22)]])
    return PlaneOperatorMatrices(
        Aprime=Ap,
        Adprime=App,
        Bprime=Bp,
        beta=be,
        pref_A=1.0 / (2.0 * root * denom),
        pref_B=1.0 / (root * denom),
    )


def _block_min_eig(alpha, H11, H22, delta1, delta2, lam, beta, gamma):
    H, W = plane_blocks(H11, H22, alpha, beta, delta1, delta2, lam, gamma)
    Y1 = 0.5 * (H + W)
    Y2 = (0.5 * (H - W)).conj()
    # congruence with diag(H11, H22)^-1/2 keeps definiteness and removes units
    s = np.array([1.0 / math.sqrt(H11), 1.0 / math.sqrt(H22)])
    scale = np.outer(s, s)
    return min(
        np.linalg.eigvalsh(Y1 * scale).min(),
        np.linalg.eigvalsh(Y2 * scale).min(),
    )


def alpha_admissible_interval(H11, H22, delta1, delta2, lam=0.0, beta=0.0, gamma=0.0, tol=1e-6):
    """Largest alpha interval keeping both reconstructed admittances positive definite.

    ``Y1 = (H + W) / 2`` and ``Y2 = conj(H - W) / 2`` are rebuilt for each
    trial alpha.  The smallest eigenvalue is concave in alpha, so its maximiser
    is found first and the two sign changes are then bracketed and bisected.
    """
    if H11 <= 0.0 or H22 <= 0.0:
        raise InadmissibleParameters("H11 and H22 must be positive")
    args = (H11, H22, delta1, delta2, lam, beta, gamma)

    def f(a):
        return _block_min_eig(a, *args)

    best = optimize.minimize_scalar(lambda a: -f(a), bounds=(-1.0, 1.0), method="bounded",
                                    options={"xatol": 1e-12})
    a0 = best.x
    if f(a0) <= 0.0:
        raise InadmissibleParameters("no alpha makes both admittances positive definite")
    lo = optimize.bisect(f, -1.0, a0, xtol=0.1 * tol) if f(-1.0) <= 0.0 else -1.0
    hi = optimize.bisect(f, a0, 1.0, xtol=0.1 * tol) if f(1.0) <= 0.0 else 1.0
    return lo, hi


@dataclass(frozen=True, eq=False)
class BimaterialParams:
    """Complete parameter set of a bimaterial interface.

    ``H33``, ``W33`` and ``nu`` are ``None`` when only plane-strain parameters
    were supplied through :meth:`from_parameters`; the antiplane entries of
    ``H`` and ``W`` are then NaN.
    """

    H: np.ndarray
    W: np.ndarray
    H33: float | None
    W33: float | None
    nu: float | None
    H11: float
    H22: float
    alpha: float
    beta: float
    delta1: float
    delta2: float
    lam: float
    gamma: float
    epsilon: float
    source: str = "materials"

    @property
    def dundurs(self) -> DundursParameters:
        return DundursParameters(self.H11, self.H22, self.alpha, self.beta,
                                 self.delta1, self.delta2, self.lam, self.gamma)

    @classmethod
    def from_systems(cls, s1: StrohSystem, s2: StrohSystem) -> "BimaterialParams":
        H, W = bimaterial_matrices(s1.Y, s2.Y)
        H33, W33, nu = antiplane_parameters(s1.Y[2, 2].real, s2.Y[2, 2].real)
        dp = dundurs_parameters(s1.summary, s1.reduced, s2.summary, s2.reduced)
        return cls(
            H=H, W=W, H33=H33, W33=W33, nu=nu,
            H11=dp.H11, H22=dp.H22, alpha=dp.alpha, beta=dp.beta,
            delta1=dp.delta1, delta2=dp.delta2, lam=dp.lam, gamma=dp.gamma,
            epsilon=oscillation_index(dp.beta), source="materials",
        )

    @classmethod
    def from_materials(cls, m1: MaterialSpec, m2: MaterialSpec) -> "BimaterialParams":
        return cls.from_systems(stroh_system(m1), stroh_system(m2))

    @classmethod
    def from_parameters(
        cls, H11, H22, alpha=0.0, beta=0.0, delta1=0.0, delta2=0.0, lam=0.0, gamma=0.0,
        H33=None, nu=None,
    ) -> "BimaterialParams":
        """Direct parameter literal, for cases known only at parameter level."""
        if H11 <= 0.0 or H22 <= 0.0:
            raise InadmissibleParameters("H11 and H22 must be positive")
        if alpha * alpha + beta * beta >= 1.0:
            raise InadmissibleParameters("alpha^2 + beta^2 < 1 is required for H to be positive definite")
        Hp, Wp = plane_blocks(H11, H22, alpha, beta, delta1, delta2, lam, gamma)
        H = np.full((3, 3), np.nan, dtype=complex)
        W = np.full((3, 3), np.nan, dtype=complex)
        H[:2, :2], W[:2, :2] = Hp, Wp
        H[:2, 2] = H[2, :2] = W[:2, 2] = W[2, :2] = 0.0
        W33 = None
        if H33 is not None:
            if H33 <= 0.0:
                raise InadmissibleParameters("H33 must be positive")
            nu = 0.0 if nu is None else float(nu)
            if not abs(nu) < 1.0:
                raise InadmissibleParameters("|nu| < 1 is required")
            W33 = nu * H33
            H[2, 2], W[2, 2] = H33, W33
        elif nu is not None:
            raise InadmissibleParameters("nu given without H33")
        return cls(
            H=H, W=W, H33=None if H33 is None else float(H33), W33=W33, nu=nu,
            H11=float(H11), H22=float(H22), alpha=float(alpha), beta=float(beta),
            delta1=float(delta1), delta2=float(delta2), lam=float(lam), gamma=float(gamma),
            epsilon=oscillation_index(beta), source="direct",
        )

    def operator_matrices(self) -> PlaneOperatorMatrices:
        return identity_operator_matrices(self)

    def admissible_alpha(self):
        """Alpha interval for the other parameters held fixed."""
        return alpha_admissible_interval(self.H11, self.H22, self.delta1, self.delta2,
                                         self.lam, self.beta, self.gamma)

    def report(self) -> dict:
        """Flat key -> value table."""
        out = {
            "source": self.source,
            "H33": self.H33, "W33": self.W33, "nu": self.nu,
            "H11": self.H11, "H22": self.H22,
            "alpha": self.alpha, "beta": self.beta,
            "delta1": self.delta1, "delta2": self.delta2,
            "lambda": self.lam, "gamma": self.gamma, "epsilon": self.epsilon,
        }
        try:
            lo, hi = self.admissible_alpha()
        except InadmissibleParameters:
            lo = hi = None
        out["alpha_min"] = lo
        out["alpha_max"] = hi
        return out
