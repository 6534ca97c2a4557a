"""Mode III interfacial crack: line-force closed forms and general loads.

Sign conventions follow the governing identities::

    <p3> + (nu/2) [p3] = -(1/H33) S^(s) d[u3]/dx1,   x1 < 0
    tau3(x1)           = -(1/H33) S^(c) d[u3]/dx1,   x1 > 0

A symmetric line force of intensity ``F`` at distance ``a`` behind the tip is
``<p3> = -F delta(x1 + a)``; the skew-symmetric one is ``[p3] = -2F delta(x1 + a)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bimaterial import BimaterialParams
from .errors import (
    InadmissibleLoad,
    InadmissibleParameters,
    InvalidGeometry,
    UnreliableExtraction,
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
    "CLOSED_FORM",
    "NUMERIC",
    "LoadSpecAntiplane",
    "CrackSolutionAntiplane",
    "SifEstimate",
    "ResidualReport",
    "sif_extract",
    "sif_window",
    "solve_line_force_sym",
    "solve_line_force_skew",
    "solve_general_antiplane",
    "antiplane_residual",
    "residual_grids",
]

CLOSED_FORM = "closed-form"
NUMERIC = "numeric"

#: Relative tolerances of :func:`sif_extract`.
SIF_RESIDUAL_TOL = 1e-2
SIF_WINDOW_TOL = 1e-2


def _check_offset(a):
    if not (np.isfinite(a) and a > 0.0):
        raise InvalidGeometry(f"line-force offset must be positive, got {a}")
    return float(a)


def _check_H33(H33):
    if H33 is None or not H33 > 0.0:
        raise InadmissibleParameters(f"H33 must be positive, got {H33}")
    return float(H33)


def _check_nu(nu):
    if nu is None or not abs(nu) < 1.0:
        raise InadmissibleParameters(f"|nu| < 1 is required, got {nu}")
    return float(nu)


# ---------------------------------------------------------------------------
# loads


@dataclass(frozen=True, eq=False)
class LoadSpecAntiplane:
    """Symmetric part ``<p3>`` and jump ``[p3]`` of the crack-face load.

    Both are :class:`HalfLineFunction` objects and may mix smooth parts with
    Dirac masses.  ``line_force`` records ``(F_sym, F_skew, a)`` when the load
    was built from line forces, so closed forms can be dispatched.
    """

    sym: HalfLineFunction = field(default_factory=HalfLineFunction.zero)
    skew: HalfLineFunction = field(default_factory=HalfLineFunction.zero)
    line_force: tuple | None = None

    def __post_init__(self):
        for name in ("sym", "skew"):
            part = getattr(self, name)
            if not isinstance(part, HalfLineFunction):
                raise InadmissibleLoad(f"{name} must be a HalfLineFunction")
            if part.poles:
                raise InadmissibleLoad("loads with poles are not supported")

    @classmethod
    def line_forces(cls, F_sym=0.0, F_skew=0.0, a=1.0):
        """``<p3> = -F_sym delta(x1 + a)`` and ``[p3] = -2 F_skew delta(x1 + a)``."""
        a = _check_offset(a)
        return cls(
            sym=HalfLineFunction.dirac(-float(F_sym), -a),
            skew=HalfLineFunction.dirac(-2.0 * float(F_skew), -a),
            line_force=(float(F_sym), float(F_skew), a),
        )

    def effective(self, nu: float) -> HalfLineFunction:
        """Right-hand side ``g = <p3> + (nu/2) [p3]``."""
        return self.sym + (0.5 * nu) * self.skew

    def scaled(self, k: float) -> "LoadSpecAntiplane":
        lf = None
        if self.line_force is not None:
            lf = (k * self.line_force[0], k * self.line_force[1], self.line_force[2])
        return LoadSpecAntiplane(self.sym * k, self.skew * k, lf)

    def __add__(self, other):
        if not isinstance(other, LoadSpecAntiplane):
            return NotImplemented
        return LoadSpecAntiplane(self.sym + other.sym, self.skew + other.skew)


# ---------------------------------------------------------------------------
# stress intensity factor extraction


@dataclass(frozen=True)
class SifEstimate:
    """Result of :func:`sif_extract`.

    ``residual`` is the largest misfit of the near-tip fit and
    ``window_change`` the change of ``K`` when only the inner half of the
    window is used; both are absolute and in the units of ``K``.
    """

    K: float
    residual: float
    window_change: float
    reliable: bool
    message: str = ""


def sif_window(a: float, points: int = 20, lo: float = 1e-4, hi: float = 1e-2) -> np.ndarray:
    """Log-spaced sample points ``[lo a, hi a]`` ahead of the tip."""
    return np.geomspace(lo * a, hi * a, points)


def _fit_intercept(x, y):
    s = np.sqrt(x)
    basis = np.column_stack([np.ones_like(s), s, s * s])
    coef, *_ = np.linalg.lstsq(basis, y, rcond=None)
    return float(coef[0]), float(np.max(np.abs(basis @ coef - y)))


def sif_extract(x, tau, *, strict: bool = True) -> SifEstimate:
    """``K = lim sqrt(2 pi x) tau(x)`` from samples near the tip.

    ``sqrt(2 pi x) tau`` is fitted by ``K + c1 sqrt(x) + c2 x`` and the
    intercept is returned.  The fit is flagged unreliable when its residual
    or its sensitivity to halving the window exceeds 1% of ``|K|``, or when
    ``K`` is indistinguishable from zero while the samples are not.

    Raises
    ------
    UnreliableExtraction
        If ``strict`` and the fit is flagged.
    """
    x = np.asarray(x, dtype=float)
    tau = np.asarray(tau, dtype=float)
    if x.shape != tau.shape or x.ndim != 1 or x.size < 6:
        raise InadmissibleLoad("sif_extract needs at least 6 matching samples")
    if np.any(x <= 0.0):
        raise InadmissibleLoad("traction samples must lie ahead of the tip (x > 0)")
    order = np.argsort(x)
    x, tau = x[order], tau[order]
    y = np.sqrt(2.0 * math.pi * x) * tau
    K, resid = _fit_intercept(x, y)
    half = x.size // 2
    K_half, _ = _fit_intercept(x[:half], y[:half])
    change = abs(K_half - K)
    ymax = float(np.max(np.abs(y)))
    problems = []
    if ymax > 0.0 and abs(K) < 1e-10 * ymax:
        problems.append("K is indistinguishable from zero")
    else:
        if resid > SIF_RESIDUAL_TOL * abs(K):
            problems.append(f"fit residual {resid:.3e} exceeds 1% of |K|")
        if change > SIF_WINDOW_TOL * abs(K):
            problems.append(f"window sensitivity {change:.3e} exceeds 1% of |K|")
    msg = "; ".join(problems)
    if problems and strict:
        raise UnreliableExtraction(msg)
    return SifEstimate(K=K, residual=resid, window_change=change, reliable=not problems, message=msg)


# ---------------------------------------------------------------------------
# solutions


@dataclass(frozen=True, eq=False)
class CrackSolutionAntiplane:
    """Opening, its derivative and the traction ahead of the tip.

    ``djump`` is ``d[u3]/dx1`` as a :class:`HalfLineFunction` (Dirac images
    are carried as declared poles); ``jump`` and ``traction`` are vectorised
    callables on ``x1 < 0`` and ``x1 > 0``.
    """

    djump: HalfLineFunction
    jump: object
    traction: object
    K3: float
    method: str
    H33: float
    sif: SifEstimate | None = None

    def profile(self, x):
        """``(jump, djump)`` at ``x < 0``."""
        x = np.asarray(x, dtype=float)
        return self.jump(x), self.djump(x)


def _kernel_solution(coef, a, tau_coef):
    """Solution whose opening derivative is ``coef * dirac_image(-a, x)``."""
    c = -a

    def jump(x):
        return -coef * dirac_image_antiderivative(c, np.asarray(x, dtype=float))

    def traction(x):
        return tau_coef * dirac_image_Sc(c, np.asarray(x, dtype=float))

    djump = HalfLineFunction(
        func=lambda x: coef * dirac_image(c, x),
        poles=((c, coef),),
        tip_exponent=-0.5,
        decay=1.5,
    )
    return djump, jump, traction


def solve_line_force_sym(F: float, a: float, H33: float) -> CrackSolutionAntiplane:
    """Closed form for ``<p3> = -F delta(x1 + a)``.

    ``d[u3]/dx1 = -(H33 F/pi) sqrt(-a/x1)/(x1 + a)``,
    ``tau3 = (F/pi) sqrt(a/x1)/(x1 + a)`` and ``K_III = sqrt(2/(pi a)) F``.

    Examples
    --------
    >>> sol = solve_line_force_sym(1.0, 1.0, 1.0)
    >>> round(sol.K3, 6)
    0.797885
    """
    a = _check_offset(a)
    H33 = _check_H33(H33)
    F = float(F)
    djump, jump, traction = _kernel_solution(-H33 * F / math.pi, a, F / math.pi)
    return CrackSolutionAntiplane(
        djump=djump,
        jump=jump,
        traction=traction,
        K3=math.sqrt(2.0 / (math.pi * a)) * F,
        method=CLOSED_FORM,
        H33=H33,
    )


def solve_line_force_skew(F: float, a: float, H33: float, nu: float) -> CrackSolutionAntiplane:
    """Closed form for ``[p3] = -2F delta(x1 + a)``: the symmetric solution times ``nu``."""
    a = _check_offset(a)
    H33 = _check_H33(H33)
    nu = _check_nu(nu)
    return solve_line_force_sym(nu * float(F), a, H33)


def _bimaterial_antiplane(bp: BimaterialParams):
    if bp.H33 is None or not np.isfinite(bp.H33):
        raise InadmissibleParameters("antiplane parameters (H33, nu) are not available")
    return _check_H33(bp.H33), _check_nu(bp.nu)


def solve_general_antiplane(
    load: LoadSpecAntiplane,
    bp: BimaterialParams,
    q: QuadratureScheme | None = None,
    *,
    sif_points: int = 20,
) -> CrackSolutionAntiplane:
    """Numerical solution for an arbitrary admissible load.

    ``d[u3]/dx1 = -H33 invert(g)`` with ``g = <p3> + (nu/2)[p3]``; Dirac
    masses of ``g`` take the exact image path, the smooth part is integrated
    on the panels of ``q``.  The traction is ``-(1/H33) S^(c) d[u3]/dx1``
    evaluated numerically and ``K_III`` comes from :func:`sif_extract`.
    """
    H33, nu = _bimaterial_antiplane(bp)
    q = q or QuadratureScheme()
    g = load.effective(nu)
    smooth = g.regular_part()
    phi_smooth = invert_Ss_weighted(smooth, q) * (-H33) if smooth.func is not None else HalfLineFunction.zero()
    images = []
    for c, w in g.diracs:
        # invert(w delta_c) = -(w/pi) dirac_image(c, .)
        images.append((c, H33 * w / math.pi))
    phi = phi_smooth
    for c, k in images:
        phi = phi + HalfLineFunction(
            func=lambda x, c=c, k=k: k * dirac_image(c, x),
            poles=((c, k),),
            tip_exponent=-0.5,
            decay=1.5,
        )

    def jump(x):
        x = np.asarray(x, dtype=float)
        out = -phi_smooth.antiderivative_from_tip(x) if phi_smooth.func is not None else np.zeros_like(x)
        for c, k in images:
            out = out - k * dirac_image_antiderivative(c, x)
        return out

    Sc = apply_Sc(phi, q)

    def traction(x):
        return -Sc(x) / H33

    xs = sif_window(q.scale, sif_points)
    est = sif_extract(xs, traction(xs), strict=False)
    return CrackSolutionAntiplane(
        djump=phi,
        jump=jump,
        traction=traction,
        K3=est.K,
        method=NUMERIC,
        H33=H33,
        sif=est,
    )


# ---------------------------------------------------------------------------
# forward identity residual


@dataclass(frozen=True)
class ResidualReport:
    """Relative L2 residuals of the governing identities.

    ``lower`` refers to the identity on ``x1 < 0`` (load side), ``upper`` to
    the one on ``x1 > 0`` (traction side).  ``components`` holds per-component
    values for vector problems.
    """

    lower: float
    upper: float
    components: tuple = ()

    @property
    def worst(self) -> float:
        return max(self.lower, self.upper)


def residual_grids(a: float, points: int = 120):
    """Default test grids ``[-100a, -1e-3 a]`` and ``[1e-3 a, 100a]``."""
    neg = -np.geomspace(100.0 * a, 1e-3 * a, points)
    return neg, -neg[::-1]


def _relative(num, den):
    if den == 0.0:
        return 0.0 if num == 0.0 else math.inf
    return num / den


def antiplane_residual(
    solution: CrackSolutionAntiplane,
    load: LoadSpecAntiplane,
    bp: BimaterialParams,
    q: QuadratureScheme | None = None,
    points: int = 120,
) -> ResidualReport:
    """Residuals of both Mode III identities for a given solution."""
    H33, nu = _bimaterial_antiplane(bp)
    q = q or QuadratureScheme()
    a = q.scale
    neg, pos = residual_grids(a, points)
    g = load.effective(nu)
    Ss = apply_Ss(solution.djump, q)
    lhs = g + Ss * (1.0 / H33)
    lower = _relative(distribution_norm(lhs, neg, a), distribution_norm(g, neg, a))
    Sc = apply_Sc(solution.djump, q)
    tau = solution.traction(pos)
    res = tau + Sc(pos) / H33
    upper = _relative(float(np.linalg.norm(res)), float(np.linalg.norm(tau)))
    return ResidualReport(lower=lower, upper=upper)
