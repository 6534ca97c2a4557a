"""Elastic constants of one monoclinic half-plane.

Matrices use the contracted (Voigt) ordering 11, 22, 33, 23, 13, 12, so
index 4 is the 23 pair, 5 the 13 pair and 6 the 12 pair.  Engineering shear
strains are assumed, i.e. ``S = inv(C)`` without extra factors.  The library is
unit-agnostic: stiffnesses, compliances, lengths and forces only have to be
mutually consistent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InadmissibleMaterial, InvalidMaterial, SingularInput

__all__ = [
    "MaterialSpec",
    "ReducedCompliance",
    "StrohMatrices",
    "MonoclinicReport",
    "reduced_compliance",
    "stroh_matrices",
    "validate_monoclinic",
    "MONOCLINIC_ZEROS",
]

#: Stiffness entries (1-based Voigt) that vanish for a symmetry plane at x3 = 0.
MONOCLINIC_ZEROS = ((1, 4), (1, 5), (2, 4), (2, 5), (4, 6), (5, 6))

DEFAULT_TOL = 1e-9

# tensor index pair (0-based) -> Voigt index (0-based)
_VOIGT = {
    (0, 0): 0, (1, 1): 1, (2, 2): 2,
    (1, 2): 3, (2, 1): 3,
    (0, 2): 4, (2, 0): 4,
    (0, 1): 5, (1, 0): 5,
}


def _as_matrix(a, name):
    if a is None:
        return None
    arr = np.array(a, dtype=float)
    if arr.shape != (6, 6):
        raise InvalidMaterial(f"{name} must be a 6x6 matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidMaterial(f"{name} contains non-finite entries")
    arr.setflags(write=False)
    return arr


def _invert(a, what):
    try:
        inv = np.linalg.inv(a)
    except np.linalg.LinAlgError as exc:
        raise SingularInput(f"{what} matrix is singular") from exc
    if not np.all(np.isfinite(inv)) or np.linalg.cond(a) > 1e14:
        raise SingularInput(f"{what} matrix is numerically singular")
    return inv


@dataclass(frozen=True, eq=False)
class MaterialSpec:
    """Elastic constants of one half-plane.

    Either ``stiffness`` or ``compliance`` (or both, if consistent) must be
    given.  Construction only checks shapes; physical admissibility is checked
    by :func:`validate_monoclinic` and enforced by the operations that consume
    the material.
    """

    id: str
    stiffness: np.ndarray | None = None
    compliance: np.ndarray | None = None

    def __post_init__(self):
        c = _as_matrix(self.stiffness, "stiffness")
        s = _as_matrix(self.compliance, "compliance")
        if c is None and s is None:
            raise InvalidMaterial(f"material {self.id!r}: stiffness or compliance required")
        if c is not None and s is not None:
            scale = np.abs(c).max() * np.abs(s).max()
            if np.abs(c @ s - np.eye(6)).max() > 1e-8 * max(scale, 1.0):
                raise InvalidMaterial(f"material {self.id!r}: stiffness and compliance disagree")
        object.__setattr__(self, "stiffness", c)
        object.__setattr__(self, "compliance", s)

    def compliance_matrix(self) -> np.ndarray:
        """Canonical compliance (inverting the stiffness if needed)."""
        if self.compliance is not None:
            return self.compliance
        return _invert(self.stiffness, "stiffness")

    def stiffness_matrix(self) -> np.ndarray:
        if self.stiffness is not None:
            return self.stiffness
        return _invert(self.compliance, "compliance")

    @classmethod
    def isotropic(cls, E, nu, id="isotropic"):
        """Isotropic solid from Young's modulus and Poisson's ratio."""
        G = E / (2.0 * (1.0 + nu))
        s = np.zeros((6, 6))
        s[:3, :3] = -nu / E
        np.fill_diagonal(s[:3, :3], 1.0 / E)
        s[3, 3] = s[4, 4] = s[5, 5] = 1.0 / G
        return cls(id=id, compliance=s)

    @classmethod
    def orthotropic(cls, E1, E2, E3, G23, G13, G12, nu23, nu13, nu12, id="orthotropic"):
        """Orthotropic solid aligned with the axes.

        ``nu_ij`` is the contraction in j for a stress in i, so ``s_ij = -nu_ij / E_i``.
        """
        s = np.diag([1 / E1, 1 / E2, 1 / E3, 1 / G23, 1 / G13, 1 / G12])
        s[0, 1] = s[1, 0] = -nu12 / E1
        s[0, 2] = s[2, 0] = -nu13 / E1
        s[1, 2] = s[2, 1] = -nu23 / E2
        return cls(id=id, compliance=s)

    def rotated_in_plane(self, theta, id=None):
        """Rotate the material about the x3 axis by ``theta`` radians.

        The x3 = 0 symmetry plane is preserved, so an orthotropic input becomes
        a generic monoclinic material.
        """
        c = self.stiffness_matrix()
        m, n = np.cos(theta), np.sin(theta)
        rot = np.array([[m, -n, 0.0], [n, m, 0.0], [0.0, 0.0, 1.0]])
        C4 = _voigt_to_tensor(c)
        C4r = np.einsum("ip,jq,kr,ls,pqrs->ijkl", rot, rot, rot, rot, C4)
        return MaterialSpec(id=id or f"{self.id}@{theta:g}", stiffness=_tensor_to_voigt(C4r))


def _voigt_to_tensor(c):
    t = np.empty((3, 3, 3, 3))
    for (i, j), I in _VOIGT.items():
        for (k, l), J in _VOIGT.items():
            t[i, j, k, l] = c[I, J]
    return t


def _tensor_to_voigt(t):
    c = np.empty((6, 6))
    for (i, j), I in _VOIGT.items():
        for (k, l), J in _VOIGT.items():
            c[I, J] = t[i, j, k, l]
    return 0.5 * (c + c.T)


@dataclass(frozen=True)
class MonoclinicReport:
    """Diagnostics of :func:`validate_monoclinic`.

    Violations are absolute values in stiffness units; ``passed`` compares them
    with ``tol`` times the largest stiffness entry.
    """

    material_id: str
    symmetry_violation: float
    min_eigenvalue: float
    monoclinic_violation: float
    worst_entry: tuple[int, int] | None
    scale: float
    tol: float
    passed: bool
    messages: tuple[str, ...] = ()


def validate_monoclinic(m: MaterialSpec, tol: float = DEFAULT_TOL) -> MonoclinicReport:
    """Check symmetry, positive definiteness and the x3 = 0 monoclinic zero pattern."""
    messages = []
    try:
        c = m.stiffness_matrix()
    except SingularInput as exc:
        return MonoclinicReport(m.id, np.inf, 0.0, np.inf, None, 0.0, tol, False, (str(exc),))
    scale = float(np.abs(c).max())
    sym = float(np.abs(c - c.T).max())
    min_eig = float(np.linalg.eigvalsh(0.5 * (c + c.T)).min())
    viol, worst = 0.0, None
    for i, j in MONOCLINIC_ZEROS:
        v = max(abs(c[i - 1, j - 1]), abs(c[j - 1, i - 1]))
        if v > viol:
            viol, worst = float(v), (i, j)
    if sym > tol * scale:
        messages.append(f"stiffness not symmetric (max |c_ij - c_ji| = {sym:.3e})")
    if min_eig <= 0.0:
        messages.append(f"stiffness not positive definite (min eigenvalue {min_eig:.3e})")
    if viol > tol * scale:
        i, j = worst
        messages.append(f"monoclinic pattern violated: |c{i}{j}| = {viol:.3e}")
    return MonoclinicReport(
        m.id, sym, min_eig, viol, worst, scale, tol, not messages, tuple(messages)
    )


def _require_valid(m, tol=DEFAULT_TOL):
    rep = validate_monoclinic(m, tol)
    if not rep.passed:
        raise InvalidMaterial(f"material {m.id!r}: " + "; ".join(rep.messages))
    return rep


@dataclass(frozen=True, eq=False)
class ReducedCompliance:
    """Plane-strain compliances ``s'_ij``; row and column 3 are zero."""

    matrix: np.ndarray

    def s(self, i: int, j: int) -> float:
        """Entry ``s'_ij`` with 1-based Voigt indices."""
        return float(self.matrix[i - 1, j - 1])

    @property
    def antiplane_discriminant(self) -> float:
        """``s'44 s'55 - s'45^2``."""
        return self.s(4, 4) * self.s(5, 5) - self.s(4, 5) ** 2

    def plane_block(self):
        idx = [0, 1, 5]
        return self.matrix[np.ix_(idx, idx)]

    def antiplane_block(self):
        return self.matrix[3:5, 3:5]


def reduced_compliance(m: MaterialSpec, tol: float = DEFAULT_TOL) -> ReducedCompliance:
    """``s'_ij = s_ij - s_i3 s_3j / s_33`` for i, j != 3."""
    _require_valid(m, tol)
    s = m.compliance_matrix()
    s33 = s[2, 2]
    if s33 <= 0.0:
        raise InvalidMaterial(f"material {m.id!r}: s33 = {s33} is not positive")
    sp = s - np.outer(s[:, 2], s[2, :]) / s33
    sp[2, :] = 0.0
    sp[:, 2] = 0.0
    sp = 0.5 * (sp + sp.T)
    rc = ReducedCompliance(sp)
    if np.linalg.eigvalsh(rc.plane_block()).min() <= 0.0:
        raise InadmissibleMaterial(f"material {m.id!r}: in-plane reduced compliance not positive definite")
    if np.linalg.eigvalsh(rc.antiplane_block()).min() <= 0.0:
        raise InadmissibleMaterial(f"material {m.id!r}: antiplane reduced compliance not positive definite")
    return rc


@dataclass(frozen=True, eq=False)
class StrohMatrices:
    Q: np.ndarray
    R: np.ndarray
    T: np.ndarray


def stroh_matrices(m: MaterialSpec, tol: float = DEFAULT_TOL) -> StrohMatrices:
    """``Q_ik = C_i1k1``, ``R_ik = C_i1k2``, ``T_ik = C_i2k2``."""
    _require_valid(m, tol)
    c = m.stiffness_matrix()
    first = [_VOIGT[(i, 0)] for i in range(3)]
    second = [_VOIGT[(i, 1)] for i in range(3)]
    Q = c[np.ix_(first, first)].copy()
    R = c[np.ix_(first, second)].copy()
    T = c[np.ix_(second, second)].copy()
    return StrohMatrices(Q, R, T)
