"""Plane-strain (Mode I/II) interfacial crack for ``beta = 0``.

Governing identities with ``phi = d[u]/dx1`` and the matrices of
:class:`~anisocrack.bimaterial.PlaneOperatorMatrices`::

    <p> + pref_A (A' + A'' S^(s)) [p] = pref_B (B' S^(s) - beta E) phi,   x1 < 0
    tau + pref_A A'' S^(c) [p]        = pref_B B' S^(c) phi,              x1 > 0

Vectors are ordered ``(1, 2)``: ``tau = (tau1, tau2)`` and the stress
intensity factors are returned as ``K = (K_II, K_I)`` so that component ``i``
of ``K`` pairs with ``tau_i``.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .bimaterial import BimaterialParams, identity_operator_matrices
from .errors import (
    DegenerateOperator,
    InadmissibleLoad,
    InadmissibleParameters,
    InvalidGeometry,
    OutOfScope,
)
from .mode3_solver import (
    CLOSED_FORM,
    NUMERIC,
    ResidualReport,
    residual_grids,
    sif_extract,
    sif_window,
)
from .singular_ops import (
    HalfLineFunction,
    QuadratureScheme,
    apply_Sc,
    apply_Ss,
    dirac_image,
    dirac_image_antiderivative,
    dirac_image_Sc,
    distribution_norm,
    invert_Ss_weighted,
)

__all__ = [
    "BETA_TOL",
    "LoadSpecPlane",
    "CrackSolutionPlane",
    "SweepRow",
    "SweepTable",
    "solve_plane_sym_line",
    "solve_plane_skew_line",
    "solve_general_plane_sym",
    "forward_identity_residual",
    "skew_line_sif",
    "skew_sif_sweep",
]

#: Largest ``|beta|`` treated as zero by the inversion paths.
BETA_TOL = 1e-9


def _check_offset(a):
    if not (np.isfinite(a) and a > 0.0):
        raise InvalidGeometry(f"line-force offset must be positive, got {a}")
    return float(a)


def _require_beta_zero(beta):
    if abs(beta) > BETA_TOL:
        raise OutOfScope(
            f"beta = {beta:.3e}: inversion for an oscillatory interface is not available; "
            "use forward_identity_residual for beta != 0"
        )


def _require_alpha(alpha):
    if not abs(alpha) < 1.0:
        raise InadmissibleParameters(f"|alpha| < 1 is required, got {alpha}")


# ---------------------------------------------------------------------------
# loads


def _as_pair(value):
    if value is None:
        return (HalfLineFunction.zero(), HalfLineFunction.zero())
    pair = tuple(HalfLineFunction.zero() if v is None else v for v in value)
    if len(pair) != 2 or not all(isinstance(v, HalfLineFunction) for v in pair):
        raise InadmissibleLoad("plane loads are pairs of HalfLineFunction objects")
    if any(v.poles for v in pair):
        raise InadmissibleLoad("loads with poles are not supported")
    return pair


@dataclass(frozen=True, eq=False)
class LoadSpecPlane:
    """Symmetric part ``(<p1>, <p2>)`` and jump ``([p1], [p2])`` of the face load."""

    sym: tuple = field(default=None)
    skew: tuple = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "sym", _as_pair(self.sym))
        object.__setattr__(self, "skew", _as_pair(self.skew))

    @classmethod
    def symmetric_line(cls, F1, F2, a):
        """``<p_i> = -F_i delta(x1 + a)``."""
        a = _check_offset(a)
        return cls(sym=(HalfLineFunction.dirac(-float(F1), -a), HalfLineFunction.dirac(-float(F2), -a)))

    @classmethod
    def skew_line(cls, F1, F2, a):
        """``[p_i] = -2 F_i delta(x1 + a)``."""
        a = _check_offset(a)
        return cls(
            skew=(HalfLineFunction.dirac(-2.0 * float(F1), -a), HalfLineFunction.dirac(-2.0 * float(F2), -a))
        )

    @property
    def has_skew(self) -> bool:
        return not all(v.is_zero for v in self.skew)

    def scaled(self, k):
        return LoadSpecPlane(tuple(v * k for v in self.sym), tuple(v * k for v in self.skew))

    def __add__(self, other):
        if not isinstance(other, LoadSpecPlane):
            return NotImplemented
        return LoadSpecPlane(
            tuple(u + v for u, v in zip(self.sym, other.sym)),
            tuple(u + v for u, v in zip(self.skew, other.skew)),
        )


# ---------------------------------------------------------------------------
# solutions


@dataclass(frozen=True, eq=False)
class CrackSolutionPlane:
    """Openings, their derivatives and the tractions ahead of the tip.

    ``djump`` holds ``(d[u1]/dx1, d[u2]/dx1)``; ``jump(x)`` and
    ``traction(x)`` return arrays with a leading axis of length 2.
    ``K`` is ``(K_II, K_I)``.  ``flags`` lists features that deserve a
    mention in reports, such as the opening step of the skew solution.
    """

    djump: tuple
    jump: object
    traction: object
    K: np.ndarray
    method: str
    flags: tuple = ()
    sif: tuple = ()

    @property
    def K_I(self) -> float:
        return float(self.K[1])

    @property
    def K_II(self) -> float:
        return float(self.K[0])


def _kernel(c, coef):
    """``coef * dirac_image(c, x)`` with its pole declared."""
    return HalfLineFunction(
        func=lambda x, c=c, k=coef: k * dirac_image(c, x),
        poles=((c, coef),),
        tip_exponent=-0.5,
        decay=1.5,
    )


def solve_plane_sym_line(F1: float, F2: float, a: float, bp: BimaterialParams) -> CrackSolutionPlane:
    """Closed form for symmetric line forces ``<p_i> = -F_i delta(x1 + a)``.

    The opening derivatives are ``-(C_i/pi) sqrt(-a/x1)/(x1 + a)`` with
    ``C = (H11 F1 - alpha s F2, H22 F2 - alpha s F1)``, ``s = sqrt(H11 H22)``;
    the tractions ``(F_i/pi) sqrt(a/x1)/(x1 + a)`` do not depend on the
    materials.
    """
    _require_beta_zero(bp.beta)
    a = _check_offset(a)
    F = np.array([float(F1), float(F2)])
    root = math.sqrt(bp.H11 * bp.H22)
    C = np.array([bp.H11 * F[0] - bp.alpha * root * F[1], bp.H22 * F[1] - bp.alpha * root * F[0]])
    c = -a
    djump = tuple(_kernel(c, -Ci / math.pi) for Ci in C)

    def jump(x):
        x = np.asarray(x, dtype=float)
        return np.stack([(Ci / math.pi) * dirac_image_antiderivative(c, x) for Ci in C])

    def traction(x):
        x = np.asarray(x, dtype=float)
        return np.stack([(Fi / math.pi) * dirac_image_Sc(c, x) for Fi in F])

    K = math.sqrt(2.0 / (math.pi * a)) * F
    return CrackSolutionPlane(djump=djump, jump=jump, traction=traction, K=K, method=CLOSED_FORM)


def skew_line_sif(F1, F2, a, H11, H22, alpha, delta1, delta2):
    """``(K_II, K_I)`` of skew line forces for ``beta = lambda = 0``."""
    _require_alpha(alpha)
    a = _check_offset(a)
    pref = math.sqrt(2.0 / (math.pi * a)) / (1.0 - alpha * alpha)
    K_I = pref * (delta2 * F2 + alpha * delta1 * F1 * math.sqrt(H11 / H22))
    K_II = pref * (delta1 * F1 + alpha * delta2 * F2 * math.sqrt(H22 / H11))
    return np.array([K_II, K_I])


def solve_plane_skew_line(F1: float, F2: float, a: float, bp: BimaterialParams) -> CrackSolutionPlane:
    """Closed form for skew line forces ``[p_i] = -2 F_i delta(x1 + a)``.

    Requires ``beta = lambda = 0``.  The opening derivatives carry Dirac
    masses ``gamma s (-F2, F1)`` at ``x1 = -a``, so the openings jump by a
    constant there; this step is reported in ``flags``.
    """
    _require_beta_zero(bp.beta)
    if abs(bp.lam) > BETA_TOL:
        raise OutOfScope(f"lambda = {bp.lam:.3e}: the skew closed form needs lambda = 0")
    _require_alpha(bp.alpha)
    a = _check_offset(a)
    c = -a
    F = np.array([float(F1), float(F2)])
    root = math.sqrt(bp.H11 * bp.H22)
    D = np.array([bp.delta1 * bp.H11 * F[0], bp.delta2 * bp.H22 * F[1]])
    G = bp.gamma * root * np.array([-F[1], F[0]])
    djump = tuple(
        _kernel(c, -D[i] / math.pi) + HalfLineFunction.dirac(G[i], c) for i in range(2)
    )

    def jump(x):
        x = np.asarray(x, dtype=float)
        step = (x < c).astype(float)
        return np.stack([(D[i] / math.pi) * dirac_image_antiderivative(c, x) - G[i] * step for i in range(2)])

    al = bp.alpha
    T = np.array(
        [
            bp.delta1 * F[0] + al * bp.delta2 * F[1] * math.sqrt(bp.H22 / bp.H11),
            bp.delta2 * F[1] + al * bp.delta1 * F[0] * math.sqrt(bp.H11 / bp.H22),
        ]
    ) / (math.pi * (1.0 - al * al))

    def traction(x):
        x = np.asarray(x, dtype=float)
        return np.stack([Ti * dirac_image_Sc(c, x) for Ti in T])

    K = skew_line_sif(F[0], F[1], a, bp.H11, bp.H22, al, bp.delta1, bp.delta2)
    flags = ()
    if np.any(G != 0.0):
        flags = (f"opening steps by {-G[0]:.6g}, {-G[1]:.6g} across x1 = {c:g} (gamma term)",)
    return CrackSolutionPlane(djump=djump, jump=jump, traction=traction, K=K, method=CLOSED_FORM, flags=flags)


class _Inverted:
    """``invert(g)`` split into a sampled smooth part and exact Dirac images."""

    def __init__(self, g: HalfLineFunction, q: QuadratureScheme):
        smooth = g.regular_part()
        self.smooth = invert_Ss_weighted(smooth, q) if smooth.func is not None else None
        # invert(w delta_c) = -(w/pi) dirac_image(c, .)
        self.images = [(c, -w / math.pi) for c, w in g.diracs]

    def function(self) -> HalfLineFunction:
        out = self.smooth if self.smooth is not None else HalfLineFunction.zero()
        for c, k in self.images:
            out = out + _kernel(c, k)
        return out

    def antiderivative(self, x):
        """``int_x^0`` of the inverted function."""
        x = np.asarray(x, dtype=float)
        out = self.smooth.antiderivative_from_tip(x) if self.smooth is not None else np.zeros_like(x)
        for c, k in self.images:
            out = out + k * dirac_image_antiderivative(c, x)
        return out


def solve_general_plane_sym(
    load: LoadSpecPlane,
    bp: BimaterialParams,
    q: QuadratureScheme | None = None,
    *,
    sif_points: int = 20,
) -> CrackSolutionPlane:
    """Numerical solution for symmetric loads at ``beta = 0``.

    Each component of ``<p>`` is inverted, the 2x2 system
    ``<p> = pref_B B' S^(s) phi`` is solved pointwise for ``phi``, the
    tractions follow from ``pref_B B' S^(c) phi`` and ``K`` from
    :func:`~anisocrack.mode3_solver.sif_extract` per component.
    """
    _require_beta_zero(bp.beta)
    if not abs(bp.alpha) < 1.0:
        raise DegenerateOperator(f"|alpha| = {abs(bp.alpha)} >= 1: the plane system is degenerate")
    if load.has_skew:
        raise OutOfScope("smooth skew-symmetric plane loads are not covered; use solve_plane_skew_line")
    q = q or QuadratureScheme()
    ops = identity_operator_matrices(bp)
    # phi = (1/pref_B) inv(B') invert(<p>)
    M = np.linalg.inv(ops.Bprime) / ops.pref_B
    inv = [_Inverted(g, q) for g in load.sym]
    chi = [v.function() for v in inv]
    phi = tuple(M[i, 0] * chi[0] + M[i, 1] * chi[1] for i in range(2))

    def jump(x):
        # [u](x) = -int_x^0 phi
        anti = [v.antiderivative(x) for v in inv]
        return -np.stack([M[i, 0] * anti[0] + M[i, 1] * anti[1] for i in range(2)])

    Sc = [apply_Sc(p, q) for p in phi]
    P = ops.pref_B * ops.Bprime

    def traction(x):
        x = np.asarray(x, dtype=float)
        s = np.stack([f(x) for f in Sc])
        return np.tensordot(P, s, axes=1)

    xs = sif_window(q.scale, sif_points)
    tau = traction(xs)
    ests = tuple(sif_extract(xs, tau[i], strict=False) for i in range(2))
    K = np.array([ests[0].K, ests[1].K])
    return CrackSolutionPlane(djump=phi, jump=jump, traction=traction, K=K, method=NUMERIC, sif=ests)


# ---------------------------------------------------------------------------
# forward identities


def forward_identity_residual(
    solution: CrackSolutionPlane,
    load: LoadSpecPlane,
    bp: BimaterialParams,
    q: QuadratureScheme | None = None,
    points: int = 120,
) -> ResidualReport:
    """Relative L2 residuals of both plane identities for given fields.

    Works for any ``beta`` away from ``alpha^2 + beta^2 = 1``; the norms
    are taken on :func:`~anisocrack.mode3_solver.residual_grids`.
    """
    ops = identity_operator_matrices(bp)
    q = q or QuadratureScheme()
    a = q.scale
    neg, pos = residual_grids(a, points)
    p_sym, p_skew = load.sym, load.skew
    phi = solution.djump
    Ss_skew = [apply_Ss(v, q) for v in p_skew]
    Ss_phi = [apply_Ss(v, q) for v in phi]
    Ap, App, Bp, E = ops.Aprime, ops.Adprime, ops.Bprime, ops.E

    comps = []
    num2 = den2 = 0.0
    for i in range(2):
        lhs = p_sym[i]
        for j in range(2):
            lhs = lhs + (ops.pref_A * Ap[i, j]) * p_skew[j] + (ops.pref_A * App[i, j]) * Ss_skew[j]
        rhs = HalfLineFunction.zero()
        for j in range(2):
            rhs = rhs + (ops.pref_B * Bp[i, j]) * Ss_phi[j] - (ops.pref_B * ops.beta * E[i, j]) * phi[j]
        num = distribution_norm(lhs - rhs, neg, a)
        den = distribution_norm(lhs, neg, a)
        comps.append(num / den if den > 0.0 else (0.0 if num == 0.0 else math.inf))
        num2 += num * num
        den2 += den * den

    Sc_skew = [apply_Sc(v, q) for v in p_skew]
    Sc_phi = [apply_Sc(v, q) for v in phi]
    tau = np.asarray(solution.traction(pos), dtype=float)
    sc_p = np.stack([f(pos) for f in Sc_skew])
    sc_phi = np.stack([f(pos) for f in Sc_phi])
    res = tau + ops.pref_A * App @ sc_p - ops.pref_B * Bp @ sc_phi
    up_num = float(np.linalg.norm(res))
    up_den = float(np.linalg.norm(tau))

    def rel(n, d):
        if d == 0.0:
            return 0.0 if n == 0.0 else math.inf
        return n / d

    return ResidualReport(
        lower=rel(math.sqrt(num2), math.sqrt(den2)),
        upper=rel(up_num, up_den),
        components=tuple(comps),
    )


# ---------------------------------------------------------------------------
# normalised stress intensity factor sweep


@dataclass(frozen=True)
class SweepRow:
    alpha: float
    ratio: float
    Khat_I: float
    Khat_II: float


@dataclass(frozen=True)
class SweepTable:
    """Rows of :func:`skew_sif_sweep`, ordered by ``(ratio, alpha)``."""

    rows: tuple
    skipped: tuple = ()
    columns: tuple = ("alpha", "ratio", "Khat_I", "Khat_II")

    def as_array(self) -> np.ndarray:
        return np.array([[r.alpha, r.ratio, r.Khat_I, r.Khat_II] for r in self.rows], dtype=float).reshape(-1, 4)

    def curve(self, ratio):
        """``(alpha, Khat_I, Khat_II)`` arrays of one ratio."""
        sel = [r for r in self.rows if r.ratio == ratio]
        return (
            np.array([r.alpha for r in sel]),
            np.array([r.Khat_I for r in sel]),
            np.array([r.Khat_II for r in sel]),
        )


def skew_sif_sweep(H11, H22, delta1, delta2, ratios, alphas) -> SweepTable:
    """Normalised skew stress intensity factors over an alpha grid.

    ``Khat_I = K_I sqrt(pi a)/(sqrt(2) F2 delta2)`` and
    ``Khat_II = K_II sqrt(pi a)/(sqrt(2) F1 delta1)`` with ``F1 = 1`` and
    ``F2 = ratio``.  Rows with ``|alpha| >= 1`` are skipped with a warning.
    """
    if H11 <= 0.0 or H22 <= 0.0:
        raise InadmissibleParameters("H11 and H22 must be positive")
    if delta1 == 0.0 or delta2 == 0.0:
        raise InadmissibleParameters("normalisation needs nonzero delta1 and delta2")
    ratios = sorted({float(r) for r in ratios})
    if any(not (r > 0.0 and math.isfinite(r)) for r in ratios):
        raise InadmissibleParameters("force ratios F2/F1 must be positive and finite")
    alphas = sorted({float(al) for al in alphas})
    a = 1.0
    norm = math.sqrt(math.pi * a) / math.sqrt(2.0)
    rows, skipped = [], []
    for r in ratios:
        F1, F2 = 1.0, r
        for al in alphas:
            if not abs(al) < 1.0:
                skipped.append((al, r))
                continue
            K_II, K_I = skew_line_sif(F1, F2, a, H11, H22, al, delta1, delta2)
            rows.append(SweepRow(al, r, K_I * norm / (F2 * delta2), K_II * norm / (F1 * delta1)))
    if skipped:
        bad = sorted({al for al, _ in skipped})
        warnings.warn(f"skipped {len(skipped)} rows with |alpha| >= 1: {bad}", stacklevel=2)
    return SweepTable(rows=tuple(rows), skipped=tuple(skipped))
