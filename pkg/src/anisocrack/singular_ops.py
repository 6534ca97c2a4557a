"""Cauchy singular operators on the negative half-line.

For a function ``phi`` supported on ``x < 0``::

    (S phi)(x) = (1/pi) PV int_{-inf}^0 phi(eta) / (x - eta) d eta

``S^(s)`` is ``S`` restricted to ``x < 0`` and ``S^(c)`` is ``S`` restricted to
``x > 0``.  The weighted kernel::

    (K g)(x) = (1/pi) int_{-inf}^0 sqrt(eta / x) g(eta) / (x - eta) d eta,   x < 0

satisfies ``S^(s) K = -I`` on decaying data, so ``-K`` is the inverse of
``S^(s)`` that decays at both ends.

Functions are represented as a regular part (a vectorised callable that may
carry simple poles ``rho / (x - c)``) plus Dirac masses ``w delta(x - c)``.
The operators map this class into itself: Dirac masses become poles and
poles become Dirac masses, and both are handled analytically.

Quadrature uses the substitution ``eta = -a t^2 / (1 - t)^2`` on ``t in (0, 1)``,
which absorbs the inverse square root at the tip, composite Gauss-Legendre
panels in ``t`` and singularity subtraction for the principal values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy import interpolate

from .errors import ConfigError, InadmissibleLoad, UnsupportedEvaluation

__all__ = [
    "QuadratureScheme",
    "HalfLineFunction",
    "PositiveAxisFunction",
    "cauchy_S",
    "weighted_kernel",
    "apply_Ss",
    "apply_Sc",
    "invert_Ss_weighted",
    "sample",
    "dirac_image",
    "dirac_image_Sc",
    "dirac_image_antiderivative",
    "distribution_norm",
]


@dataclass(frozen=True)
class QuadratureScheme:
    """Composite Gauss-Legendre rule on the mapped half-line.

    Parameters
    ----------
    scale
        Length ``a`` of the map ``eta = -a t^2/(1-t)^2``; ``t = 1/2`` is ``eta = -a``.
    panels
        Number of uniform panels in ``t`` before local refinement.
    order
        Gauss-Legendre points per panel.
    grading_levels
        Geometric refinement levels around singular points of the data.
    """

    scale: float = 1.0
    panels: int = 64
    order: int = 8
    grading_levels: int = 24

    def __post_init__(self):
        if not self.scale > 0.0:
            raise ConfigError(f"quadrature scale must be positive, got {self.scale}")
        if self.panels < 16:
            raise ConfigError(f"at least 16 panels are required, got {self.panels}")
        if self.order < 2:
            raise ConfigError("panel order must be at least 2")

    def refined(self) -> "QuadratureScheme":
        """Same rule with twice the panels."""
        return replace(self, panels=2 * self.panels)

    def t_of(self, x):
        s = np.sqrt(np.abs(x) / self.scale)
        return s / (1.0 + s)

    def eta_of(self, t):
        sig = t / (1.0 - t)
        return -self.scale * sig * sig

    def jacobian(self, t):
        """``|d eta / d t|``."""
        sig = t / (1.0 - t)
        return 2.0 * self.scale * sig / (1.0 - t) ** 2

    @cached_property
    def reference_rule(self):
        return npleg.leggauss(self.order)


def _merge_weighted(items):
    out = {}
    for loc, val in items:
        loc = float(loc)
        out[loc] = out.get(loc, 0.0) + float(val)
    return tuple(sorted((k, v) for k, v in out.items() if v != 0.0))


@dataclass(frozen=True, eq=False)
class HalfLineFunction:
    """Function on ``x < 0``: regular part plus Dirac masses.

    Parameters
    ----------
    func
        Vectorised callable returning the regular part, including any simple
        poles.  It is only called with ``x < 0``.
    poles
        ``(c, rho)`` pairs declaring that ``func`` behaves like ``rho/(x - c)``
        near ``c``.
    diracs
        ``(c, w)`` pairs for the distribution ``w delta(x - c)``.
    breakpoints
        Locations of jumps, kinks or integrable singularities of ``func``;
        quadrature panels are graded towards them.
    tip_exponent
        ``func ~ |x|^p`` as ``x -> 0-``.
    decay
        ``func ~ |x|^-q`` as ``x -> -inf``; ``inf`` for compact support.
    """

    func: object = None
    poles: tuple = ()
    diracs: tuple = ()
    breakpoints: tuple = ()
    tip_exponent: float = 0.0
    decay: float = math.inf
    sampled: "_PanelSample | None" = field(default=None, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "poles", _merge_weighted(self.poles))
        object.__setattr__(self, "diracs", _merge_weighted(self.diracs))
        bps = sorted({float(b) for b in self.breakpoints})
        for c in bps + [c for c, _ in self.poles] + [c for c, _ in self.diracs]:
            if not c < 0.0:
                raise InadmissibleLoad(f"singular locations must lie on x < 0, got {c}")
        if not self.tip_exponent > -1.0:
            raise InadmissibleLoad("tip exponent must exceed -1 for integrability")
        object.__setattr__(self, "breakpoints", tuple(bps))

    # construction helpers

    @classmethod
    def zero(cls):
        return cls()

    @classmethod
    def dirac(cls, weight, at):
        """``weight * delta(x - at)``."""
        return cls(diracs=((at, weight),))

    @classmethod
    def from_callable(cls, func, *, breakpoints=(), tip_exponent=0.0, decay=math.inf, poles=()):
        return cls(func=func, breakpoints=breakpoints, tip_exponent=tip_exponent,
                   decay=decay, poles=poles)

    @classmethod
    def patch(cls, value, start, end=0.0):
        """Constant ``value`` on ``(start, end)`` with ``start < end <= 0``."""
        if not start < end <= 0.0:
            raise InadmissibleLoad("patch needs start < end <= 0")

        def f(x):
            x = np.asarray(x, dtype=float)
            return np.where((x > start) & (x < end), float(value), 0.0)

        bps = (start,) if end == 0.0 else (start, end)
        return cls(func=f, breakpoints=bps)

    @classmethod
    def gaussian(cls, total, center, width):
        """Normalised Gaussian of mass ``total`` (truncated at the tip)."""
        if not center < 0.0 or not width > 0.0:
            raise InadmissibleLoad("gaussian needs center < 0 and width > 0")
        norm = total / (width * math.sqrt(2.0 * math.pi))

        def f(x):
            x = np.asarray(x, dtype=float)
            return norm * np.exp(-0.5 * ((x - center) / width) ** 2)

        bps = tuple(b for b in (center - 2.0 * width, center + 2.0 * width) if b < 0.0)
        return cls(func=f, breakpoints=bps)

    @classmethod
    def tabulated(cls, x, y):
        """Cubic interpolation of samples, zero outside the sampled range."""
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        if x.ndim != 1 or x.shape != y.shape or x.size < 2:
            raise InadmissibleLoad("tabulated load needs matching 1-D x and y")
        order = np.argsort(x)
        x, y = x[order], y[order]
        if x[-1] > 0.0:
            raise InadmissibleLoad("tabulated load must lie on x <= 0")
        spline = interpolate.CubicSpline(x, y, bc_type="not-a-knot" if x.size > 3 else "natural")
        lo, hi = x[0], x[-1]

        def f(q):
            q = np.asarray(q, dtype=float)
            inside = (q >= lo) & (q <= hi)
            return np.where(inside, spline(np.clip(q, lo, hi)), 0.0)

        bps = (lo,) if hi == 0.0 else (lo, hi)
        return cls(func=f, breakpoints=bps)

    # evaluation

    @property
    def has_regular(self) -> bool:
        return self.func is not None

    @property
    def is_zero(self) -> bool:
        return self.func is None and not self.diracs

    def __call__(self, x):
        """Regular part at ``x < 0`` (Dirac masses are not pointwise values)."""
        x = np.asarray(x, dtype=float)
        if self.func is None:
            return np.zeros_like(x)
        return np.asarray(self.func(x), dtype=float)

    def singular_locations(self):
        return sorted(set(self.breakpoints) | {c for c, _ in self.poles} | {c for c, _ in self.diracs})

    def regular_part(self) -> "HalfLineFunction":
        return replace(self, diracs=())

    def dirac_part(self) -> "HalfLineFunction":
        return HalfLineFunction(diracs=self.diracs)

    # linear structure

    def __mul__(self, k):
        k = float(k)
        if k == 0.0:
            return HalfLineFunction.zero()
        f = self.func
        func = None if f is None else (lambda x, f=f: k * np.asarray(f(x), dtype=float))
        sampled = None if self.sampled is None else self.sampled.scaled(k)
        return HalfLineFunction(
            func=func,
            poles=tuple((c, k * r) for c, r in self.poles),
            diracs=tuple((c, k * w) for c, w in self.diracs),
            breakpoints=self.breakpoints,
            tip_exponent=self.tip_exponent,
            decay=self.decay,
            sampled=sampled,
        )

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __add__(self, other):
        if not isinstance(other, HalfLineFunction):
            return NotImplemented
        if self.is_zero:
            return other
        if other.is_zero:
            return self
        f, g = self.func, other.func
        if f is None:
            func = g
        elif g is None:
            func = f
        else:
            func = lambda x, f=f, g=g: np.asarray(f(x), dtype=float) + np.asarray(g(x), dtype=float)  # noqa: E731
        sampled = None
        if self.sampled is not None and other.sampled is not None:
            sampled = self.sampled.plus(other.sampled)
        elif f is None:
            sampled = other.sampled
        elif g is None:
            sampled = self.sampled
        return HalfLineFunction(
            func=func,
            poles=self.poles + other.poles,
            diracs=self.diracs + other.diracs,
            breakpoints=self.breakpoints + other.breakpoints,
            tip_exponent=min(self.tip_exponent, other.tip_exponent),
            decay=min(self.decay, other.decay),
            sampled=sampled,
        )

    def __sub__(self, other):
        if not isinstance(other, HalfLineFunction):
            return NotImplemented
        return self + (-other)

    # integrals

    def antiderivative_from_tip(self, x, q: "QuadratureScheme | None" = None):
        """``int_x^0 f(eta) d eta`` of the regular part, for ``x < 0``.

        Uses the panel sample when available, otherwise samples first.
        Poles are not allowed here (the integral would be a principal value).
        """
        if self.func is None:
            return np.zeros_like(np.asarray(x, dtype=float))
        if self.poles:
            raise UnsupportedEvaluation("antiderivative of a function with poles is not defined pointwise")
        smp = self.sampled
        if smp is None:
            if q is None:
                raise ConfigError("a quadrature scheme is needed to integrate an unsampled function")
            smp = sample(self, q).sampled
        return smp.integral_from_tip(np.asarray(x, dtype=float))


# ---------------------------------------------------------------------------
# panel sampling


@dataclass(frozen=True, eq=False)
class _PanelSample:
    """Piecewise Legendre representation of ``h(t) = f(eta(t)) |eta'(t)|``."""

    scheme: QuadratureScheme
    edges: np.ndarray
    coeffs: np.ndarray  # (npanels, order)

    @classmethod
    def from_node_values(cls, scheme, edges, h):
        u, w = scheme.reference_rule
        n = scheme.order
        V = npleg.legvander(u, n - 1)  # (order, order)
        norm = (2.0 * np.arange(n) + 1.0) / 2.0
        coeffs = (h.reshape(-1, n) * w) @ V * norm
        return cls(scheme, edges, coeffs)

    def scaled(self, k):
        return _PanelSample(self.scheme, self.edges, k * self.coeffs)

    def plus(self, other):
        if self.scheme != other.scheme or self.edges.shape != other.edges.shape or not np.array_equal(
            self.edges, other.edges
        ):
            return None
        return _PanelSample(self.scheme, self.edges, self.coeffs + other.coeffs)

    def _locate(self, t):
        k = np.clip(np.searchsorted(self.edges, t, side="right") - 1, 0, len(self.edges) - 2)
        lo, hi = self.edges[k], self.edges[k + 1]
        u = 2.0 * (t - lo) / (hi - lo) - 1.0
        return k, u, hi - lo

    def h_at(self, t):
        t = np.asarray(t, dtype=float)
        k, u, _ = self._locate(t)
        V = npleg.legvander(u, self.scheme.order - 1)
        return np.einsum("...j,...j->...", V, self.coeffs[k])

    def value_at(self, x):
        q = self.scheme
        t = q.t_of(x)
        return self.h_at(t) / q.jacobian(t)

    @cached_property
    def _integrals(self):
        widths = np.diff(self.edges)
        full = widths * self.coeffs[:, 0]
        cum = np.concatenate([[0.0], np.cumsum(full)])
        anti = npleg.legint(self.coeffs, lbnd=-1, axis=1)
        return cum, anti

    def integral_from_tip(self, x):
        """``int_0^{t(x)} h dt = int_x^0 f d eta``."""
        cum, anti = self._integrals
        t = self.scheme.t_of(x)
        k, u, width = self._locate(t)
        V = npleg.legvander(u, self.scheme.order)
        partial = np.einsum("...j,...j->...", V, anti[k])
        return cum[k] + 0.5 * width * partial


# ---------------------------------------------------------------------------
# discretisation of a source function


def _graded(center, h, levels, lo=0.0, hi=1.0):
    offs = h * 0.5 ** np.arange(1, levels + 1)
    pts = np.concatenate([[center], center - offs, center + offs])
    return pts[(pts > lo) & (pts < hi)]


def _base_edges(q: QuadratureScheme, graded_ts, plain_ts=()):
    h = 1.0 / q.panels
    pts = [np.linspace(0.0, 1.0, q.panels + 1), np.asarray(plain_ts, dtype=float)]
    half = max(q.grading_levels // 2, 1)
    pts.append(_graded(0.0, h, half))
    pts.append(_graded(1.0, h, half))
    for tb in graded_ts:
        pts.append(_graded(tb, h, q.grading_levels))
    edges = np.unique(np.concatenate(pts))
    # drop slivers created by near-coincident points
    keep = np.concatenate([[True], np.diff(edges) > 1e-15])
    return edges[keep]


def _panel_nodes(q: QuadratureScheme, edges):
    u, w = q.reference_rule
    lo = edges[:-1, None]
    width = np.diff(edges)[:, None]
    t = lo + 0.5 * width * (u + 1.0)
    wt = 0.5 * width * w
    return t.ravel(), wt.ravel()


class _Discretized:
    """Source function sampled on the base panels of a scheme."""

    def __init__(self, fn: HalfLineFunction, q: QuadratureScheme):
        if fn.func is not None and not fn.decay > 0.0:
            raise InadmissibleLoad("function must decay at -infinity for the Cauchy integral to converge")
        self.fn = fn
        self.q = q
        self.poles = [(float(q.t_of(c)), c, rho) for c, rho in fn.poles]
        if fn.sampled is not None and fn.sampled.scheme == q:
            self.edges = fn.sampled.edges
            self._h_at = fn.sampled.h_at
        else:
            # poles are subtracted exactly; grading towards them would only
            # put nodes where the pole term loses its digits to cancellation
            graded = [q.t_of(c) for c in fn.breakpoints]
            plain = [tp for tp, _, _ in self.poles]
            self.edges = _base_edges(q, graded, plain)
            self._h_at = self._h_from_func
        self.t, self.w = _panel_nodes(q, self.edges)
        self.panel_of = np.repeat(np.arange(len(self.edges) - 1), q.order)
        self.h = self._h_at(self.t) if fn.func is not None else np.zeros_like(self.t)

    def _h_from_func(self, t):
        q = self.q
        return np.asarray(self.fn.func(q.eta_of(t)), dtype=float) * q.jacobian(t)

    def h_at(self, t):
        if self.fn.func is None:
            return np.zeros_like(t)
        return self._h_at(t)

    def phi_at(self, x):
        if self.fn.func is None:
            return 0.0
        if self.fn.sampled is not None and self.fn.sampled.scheme == self.q:
            return float(np.ravel(self.fn.sampled.value_at(x))[0])
        return float(np.asarray(self.fn.func(np.array([x])), dtype=float)[0])

    def nodes_for(self, extras):
        """Nodes and weights with panels split at the extra points."""
        if not extras:
            return self.t, self.w, self.h
        edges = self.edges
        extras = np.array(sorted(set(extras)))
        idx = np.searchsorted(edges, extras, side="right") - 1
        inside = extras > edges[idx]
        extras, idx = extras[inside], idx[inside]
        if extras.size == 0:
            return self.t, self.w, self.h
        affected = np.unique(idx)
        pts = np.unique(np.concatenate([extras, edges[affected], edges[affected + 1]]))
        owner = np.searchsorted(edges, 0.5 * (pts[:-1] + pts[1:]), side="right") - 1
        keep = np.ones((len(edges) - 1, 1), dtype=bool)
        keep[affected] = False
        sub = ~keep[owner, 0]
        lo, hi = pts[:-1][sub], pts[1:][sub]
        u, wq = self.q.reference_rule
        half = 0.5 * (hi - lo)[:, None]
        tn = (lo[:, None] + half * (u + 1.0)).ravel()
        wn = (half * wq).ravel()
        mask = np.broadcast_to(keep, (len(edges) - 1, self.q.order)).ravel()
        return (
            np.concatenate([self.t[mask], tn]),
            np.concatenate([self.w[mask], wn]),
            np.concatenate([self.h[mask], self.h_at(tn)]),
        )


def _local_extras(q: QuadratureScheme, x):
    """Refinement points adapted to the evaluation point ``x``."""
    sig0 = math.sqrt(abs(x) / q.scale)
    ts = sig0 / (1.0 + sig0)
    h = 2.0 / q.panels
    pts = []
    # the integrand varies on the scale of ts near t = 0 and of 1 - ts near t = 1
    s = 0.5 * ts
    while s < h and s < 0.5:
        pts.append(s)
        s *= 2.0
    s = 0.5 * (1.0 - ts)
    while s < h and s < 0.5:
        pts.append(1.0 - s)
        s *= 2.0
    if x < 0.0:
        pts.append(ts)
        step = min(ts, 1.0 - ts, h)
        for _ in range(4):
            step *= 0.5
            pts.append(ts - step)
            pts.append(ts + step)
    return pts


def _evaluate(d: _Discretized, x: float, weighted: bool, include_diracs: bool = True) -> float:
    """``(1/pi) PV int w(eta, x) phi(eta) / (x - eta) d eta`` at one point."""
    q = d.q
    a = q.scale
    if x == 0.0 or not np.isfinite(x):
        raise UnsupportedEvaluation("operators are not evaluated at the crack tip")
    if weighted and x > 0.0:
        raise UnsupportedEvaluation("the weighted kernel is defined on x < 0 only")
    for _, c, _ in d.poles:
        if x == c:
            raise UnsupportedEvaluation(f"evaluation at the pole {c}")

    total = 0.0
    if d.fn.func is not None:
        t, w, h = d.nodes_for(_local_extras(q, x))
        sig = t / (1.0 - t)
        if x < 0.0:
            sig0 = math.sqrt(-x / a)
            t0 = sig0 / (1.0 + sig0)
            wt = sig / sig0 if weighted else 1.0
            ratio = -(1.0 - t) * (1.0 - t0) / (a * (sig + sig0))
            G = wt * h * ratio
            G0 = -d.phi_at(x)
            R = (G - G0) / (t0 - t)
            total = G0 * math.log(t0 / (1.0 - t0))
        else:
            R = h / (x + a * sig * sig)
        for tp, c, rho in d.poles:
            wc = math.sqrt(c / x) if weighted else 1.0
            rp = wc * rho / (x - c)
            R = R - rp / (tp - t)
            total += rp * math.log(tp / (1.0 - tp))
        total += float(np.dot(w, R))
    res = total / math.pi
    if include_diracs:
        for c, wgt in d.fn.diracs:
            if x == c:
                raise UnsupportedEvaluation(f"evaluation at the Dirac mass {c}")
            wc = math.sqrt(c / x) if weighted else 1.0
            res += wc * wgt / (math.pi * (x - c))
    return res


def _eval_many(d, x, weighted, include_diracs=True):
    x = np.asarray(x, dtype=float)
    flat = x.ravel()
    out = np.empty_like(flat)
    for i, xi in enumerate(flat):
        out[i] = _evaluate(d, float(xi), weighted, include_diracs)
    return out.reshape(x.shape)


# ---------------------------------------------------------------------------
# analytic images of Dirac masses


def dirac_image(c, x):
    """``sqrt(c/x) / (x - c)`` for ``x, c < 0``: ``pi K`` applied to ``delta(. - c)``."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(c / x) / (x - c)


def dirac_image_Sc(c, x):
    """``S^(c)`` of :func:`dirac_image`: ``sqrt(-c/x) / (x - c)`` for ``x > 0``."""
    x = np.asarray(x, dtype=float)
    return np.sqrt(-c / x) / (x - c)


def dirac_image_antiderivative(c, x):
    """``int_x^0`` of :func:`dirac_image` (principal value across ``c``).

    Equals ``2 arctanh(sqrt(x/c))`` for ``c < x < 0`` and
    ``2 arctanh(sqrt(c/x))`` for ``x < c``.
    """
    x = np.asarray(x, dtype=float)
    r = np.sqrt(np.where(np.abs(x) < abs(c), x / c, c / x))
    # logarithmically infinite at x = c
    with np.errstate(divide="ignore"):
        return 2.0 * np.arctanh(r)


# ---------------------------------------------------------------------------
# public operators


def cauchy_S(phi: HalfLineFunction, x, q: QuadratureScheme):
    """``(S phi)(x)`` for ``x != 0``; Dirac masses of ``phi`` contribute analytically."""
    d = _Discretized(phi, q)
    out = _eval_many(d, x, weighted=False)
    return float(out) if out.ndim == 0 else out


def weighted_kernel(g: HalfLineFunction, x, q: QuadratureScheme):
    """``(K g)(x)`` for ``x < 0``."""
    if g.func is not None and not g.decay > 0.5:
        raise InadmissibleLoad("load must decay faster than |x|^-1/2 for the weighted kernel")
    d = _Discretized(g, q)
    out = _eval_many(d, x, weighted=True)
    return float(out) if out.ndim == 0 else out


def apply_Ss(phi: HalfLineFunction, q: QuadratureScheme) -> HalfLineFunction:
    """``S^(s) phi`` as a lazily evaluated :class:`HalfLineFunction`.

    Poles ``rho/(x - c)`` of ``phi`` give Dirac masses ``-pi rho`` at ``c``;
    Dirac masses ``w`` give poles of residue ``w/pi``.
    """
    if phi.is_zero:
        return HalfLineFunction.zero()
    d = _Discretized(phi, q)

    def func(x):
        return _eval_many(d, x, weighted=False)

    return HalfLineFunction(
        func=func,
        poles=tuple((c, w / math.pi) for c, w in phi.diracs),
        diracs=tuple((c, -math.pi * rho) for c, rho in phi.poles),
        breakpoints=phi.breakpoints,
        tip_exponent=-0.5,
        decay=min(phi.decay, 1.0),
    )


@dataclass(frozen=True, eq=False)
class PositiveAxisFunction:
    """Function on ``x > 0`` produced by ``S^(c)``."""

    func: object

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        if np.any(x <= 0.0):
            raise UnsupportedEvaluation("S^(c) images are defined on x > 0 only")
        return np.asarray(self.func(x), dtype=float)

    def __add__(self, other):
        return PositiveAxisFunction(lambda x, f=self, g=other: f(x) + g(x))

    def __mul__(self, k):
        return PositiveAxisFunction(lambda x, f=self, k=float(k): k * f(x))

    __rmul__ = __mul__

    def __neg__(self):
        return self * -1.0

    def __sub__(self, other):
        return self + (-other)


def apply_Sc(phi: HalfLineFunction, q: QuadratureScheme) -> PositiveAxisFunction:
    """``S^(c) phi`` as a function on ``x > 0``."""
    if phi.is_zero:
        return PositiveAxisFunction(lambda x: np.zeros_like(np.asarray(x, dtype=float)))
    d = _Discretized(phi, q)
    return PositiveAxisFunction(lambda x: _eval_many(d, x, weighted=False))


def sample(fn: HalfLineFunction, q: QuadratureScheme) -> HalfLineFunction:
    """Copy of ``fn`` whose regular part is replaced by its panel interpolant."""
    if fn.func is None:
        return fn
    if fn.poles:
        raise UnsupportedEvaluation("functions with poles cannot be sampled")
    d = _Discretized(fn, q)
    smp = _PanelSample.from_node_values(q, d.edges, d.h)
    return replace(fn, func=smp.value_at, sampled=smp)


def invert_Ss_weighted(g: HalfLineFunction, q: QuadratureScheme) -> HalfLineFunction:
    """Decaying solution ``chi`` of ``S^(s) chi = g``, i.e. ``chi = -K g``.

    The regular part of ``g`` is integrated numerically at the panel nodes and
    stored as a piecewise polynomial.  Each Dirac mass ``w`` at ``c`` adds the
    exact image ``-(w/pi) sqrt(c/x)/(x - c)``; each pole ``rho`` of ``g`` adds a
    Dirac mass ``pi rho``.
    """
    if g.is_zero:
        return HalfLineFunction.zero()
    parts = []
    if g.func is not None:
        if not g.decay > 0.5:
            raise InadmissibleLoad("load must decay faster than |x|^-1/2 for inversion")
        d = _Discretized(g.regular_part(), q)
        # the output grid needs the same grading as the load, without pole splits
        x_nodes = q.eta_of(d.t)
        chi = -_eval_many(d, x_nodes, weighted=True, include_diracs=False)
        smp = _PanelSample.from_node_values(q, d.edges, chi * q.jacobian(d.t))
        parts.append(
            HalfLineFunction(
                func=smp.value_at,
                breakpoints=g.breakpoints,
                tip_exponent=-0.5,
                decay=min(g.decay, 1.5),
                sampled=smp,
            )
        )
        if g.poles:
            parts.append(HalfLineFunction(diracs=tuple((c, math.pi * rho) for c, rho in g.poles)))
    for c, wgt in g.diracs:
        k = -wgt / math.pi
        parts.append(
            HalfLineFunction(
                func=lambda x, c=c, k=k: k * dirac_image(c, x),
                poles=((c, k),),
                tip_exponent=-0.5,
                decay=1.5,
            )
        )
    out = HalfLineFunction.zero()
    for p in parts:
        out = out + p
    return out


def distribution_norm(fn: HalfLineFunction, grid, scale: float = 1.0, exclusion: float = 0.02) -> float:
    """Discrete L2 size of a function with Dirac masses on a test grid.

    The regular part is sampled on ``grid`` away from the singular locations
    (closer than ``exclusion * scale`` points are dropped).  Each Dirac mass
    ``w`` at ``c`` counts as ``|w|`` times the grid norm of its Cauchy image
    ``1/(pi (x - c))``, which is how it enters the identities.
    """
    grid = np.asarray(grid, dtype=float)
    locs = np.array(fn.singular_locations(), dtype=float)
    mask = np.ones(grid.shape, dtype=bool)
    if locs.size:
        mask = np.min(np.abs(grid[:, None] - locs[None, :]), axis=1) > exclusion * scale
    total = float(np.sum(np.asarray(fn(grid[mask]), dtype=float) ** 2))
    for c, w in fn.diracs:
        img = 1.0 / (math.pi * (grid[mask] - c))
        total += (w * w) * float(np.sum(img * img))
    return math.sqrt(total)
