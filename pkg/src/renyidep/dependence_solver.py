"""J_alpha and K_alpha: minimum Renyi-type divergence from product distributions.

``J_alpha(X;Y) = min D_alpha(P_XY || Q_X Q_Y)`` is computed by alternating
the exact inner minimizers over ``Q_Y`` (for fixed ``Q_X``) and over ``Q_X``
(for fixed ``Q_Y``). ``K_alpha`` reuses the same solver on the alpha-tilted
joint at order ``1/alpha``.

All arithmetic on the reduced problem happens in the natural-log domain;
values are converted to bits on the way out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .info_measures import (
    LN2,
    kl_divergence,
    min_entropy,
    mutual_information,
    product_divergence,
    renyi_divergence,
    renyi_entropy,
)
from .prob_core import (
    AlphaOrder,
    JointPmf,
    Pmf,
    PmfError,
    as_alpha,
    marginal_x,
    marginal_y,
    safe_log,
    tilt_joint,
    tilt_pmf,
)

NONCONVEX_DEFAULT_STARTS = 8


class SolverError(ValueError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the alternating minimizer and the grid oracle.

    ``n_starts=None`` picks the default for the regime: a single start from
    the marginals when the problem is convex (order >= 1/2), otherwise
    ``NONCONVEX_DEFAULT_STARTS`` starts of which the first is the marginal one.
    """

    tol: float = 1e-11
    max_iters: int = 10_000
    n_starts: Optional[int] = None
    grid_steps: int = 400
    seed: int = 0

    def __post_init__(self):
        if not self.tol > 0:
            raise SolverError("tol must be positive")
        if self.max_iters < 1:
            raise SolverError("max_iters must be >= 1")
        if self.n_starts is not None and self.n_starts < 1:
            raise SolverError("n_starts must be >= 1")
        if self.grid_steps < 2:
            raise SolverError("grid_steps must be >= 2")
        if self.seed < 0:
            raise SolverError("seed must be nonnegative")

    def starts_for(self, alpha: float) -> int:
        if self.n_starts is not None:
            return self.n_starts
        return 1 if alpha >= 0.5 else NONCONVEX_DEFAULT_STARTS


@dataclass(frozen=True)
class MeasureResult:
    value: float
    qx_opt: Pmf
    qy_opt: Pmf
    iters: int
    converged: bool
    starts_used: int
    regime: str
    alpha: float = field(default=math.nan)


@dataclass(frozen=True)
class DualResult:
    value: float
    r_opt: JointPmf
    certificate_gap: float


# -- log-domain kernels --------------------------------------------------------


def _lse(a: np.ndarray, axis: int) -> np.ndarray:
    m = np.max(a, axis=axis, keepdims=True)
    finite = np.isfinite(m)
    shift = np.where(finite, m, 0.0)
    with np.errstate(under="ignore"):
        s = np.sum(np.exp(a - shift), axis=axis, keepdims=True)
    out = np.where(finite, shift + np.log(np.where(finite, s, 1.0)), -np.inf)
    return np.squeeze(out, axis=axis)


def _scaled_log_q(lq: np.ndarray, alpha: float) -> np.ndarray:
    # (1-alpha) * log q, keeping log 0 = -inf -> -inf for alpha < 1
    with np.errstate(invalid="ignore"):
        return (1.0 - alpha) * lq


def _half_step(logp: np.ndarray, lq_other: np.ndarray, alpha: float) -> tuple[np.ndarray, float]:
    """Exact minimizer over the column marginal for a fixed row marginal.

    Returns ``(log Q_col, alpha/(alpha-1) * log gamma)`` where the second item
    is the minimized objective in nats.
    """
    a = alpha * logp + _scaled_log_q(lq_other, alpha)[:, None]
    a[np.isneginf(logp)] = -np.inf
    log_r = _lse(a, axis=0) / alpha
    log_gamma = float(_lse(log_r, axis=0))
    return log_r - log_gamma, alpha / (alpha - 1.0) * log_gamma


def _alternate(logp, lqx0, alpha, tol, max_iters):
    lqx = lqx0
    logpt = logp.T
    lqy, prev = _half_step(logp, lqx, alpha)
    it = 0
    converged = False
    while it < max_iters:
        it += 1
        lqx, _ = _half_step(logpt, lqy, alpha)
        lqy, cur = _half_step(logp, lqx, alpha)
        if abs(prev - cur) <= tol * max(abs(cur), LN2):
            converged = True
            prev = cur
            break
        prev = cur
    return max(prev / LN2, 0.0), lqx, lqy, it, converged


def _reduce(j: JointPmf):
    rows = j.p.sum(axis=1) > 0
    cols = j.p.sum(axis=0) > 0
    return j.p[np.ix_(rows, cols)], rows, cols


def _expand(lq: np.ndarray, mask: np.ndarray, labels) -> Pmf:
    q = np.zeros(mask.size)
    q[mask] = np.exp(lq)
    return Pmf(q / q.sum(), labels)


def _solve_j(j: JointPmf, alpha: float, cfg: SolverConfig) -> MeasureResult:
    p, rows, cols = _reduce(j)
    logp = safe_log(p)
    n_starts = cfg.starts_for(alpha)
    regime = "convex" if alpha >= 0.5 else "nonconvex"

    best = None
    total_iters = 0
    for s in range(n_starts):
        if s == 0:
            qx0 = p.sum(axis=1)
        else:
            rng = np.random.default_rng([cfg.seed, s])
            qx0 = rng.dirichlet(np.ones(p.shape[0]))
        lqx0 = safe_log(qx0 / qx0.sum())
        out = _alternate(logp, lqx0, alpha, cfg.tol, cfg.max_iters)
        total_iters += out[3]
        # strict improvement beyond tol needed to displace an earlier start
        if best is None or out[0] < best[0] - cfg.tol * max(abs(best[0]), 1.0):
            best = out
    value, lqx, lqy, iters, converged = best
    return MeasureResult(
        value=value,
        qx_opt=_expand(lqx, rows, j.x_labels),
        qy_opt=_expand(lqy, cols, j.y_labels),
        iters=iters,
        converged=converged,
        starts_used=n_starts,
        regime=regime,
        alpha=alpha,
    )


# -- public operations -----------------------------------------------------------


def _require_not_one(a: AlphaOrder, what: str) -> None:
    if a.is_one:
        raise SolverError(f"{what} is undefined at alpha = 1; use mutual_information")


def _check_qx(j: JointPmf, qx: Pmf, a: AlphaOrder) -> None:
    if len(qx) != j.shape[0]:
        raise PmfError("qx alphabet does not match the joint's x alphabet")
    if a.value > 1 and np.any((j.p.sum(axis=1) > 0) & (qx.p == 0)):
        raise SolverError("qx must have full support on the support of P_X when alpha > 1")


def j_objective_reduced(j: JointPmf, qx: Pmf, alpha: AlphaOrder | float) -> float:
    """``min over Q_Y of D_alpha(P_XY || qx Q_Y)`` in closed form.

    Equals ``alpha/(alpha-1) * log sum_y [sum_x P(x,y)^alpha qx(x)^(1-alpha)]^(1/alpha)``.
    """
    a = as_alpha(alpha)
    _require_not_one(a, "the Q_Y-eliminated objective")
    _check_qx(j, qx, a)
    _, val = _half_step(safe_log(j.p), safe_log(qx.p), a.value)
    return max(val / LN2, 0.0)


def optimal_qy_given_qx(j: JointPmf, qx: Pmf, alpha: AlphaOrder | float) -> Pmf:
    """The exact minimizer of ``D_alpha(P_XY || qx Q_Y)`` over ``Q_Y``."""
    a = as_alpha(alpha)
    _require_not_one(a, "the inner minimizer")
    _check_qx(j, qx, a)
    lqy, _ = _half_step(safe_log(j.p), safe_log(qx.p), a.value)
    if not np.any(np.isfinite(lqy)):
        raise SolverError("inner minimizer has no mass")
    return Pmf(np.exp(lqy), j.y_labels)


def compute_j_alpha(j: JointPmf, alpha: AlphaOrder | float, cfg: SolverConfig | None = None) -> MeasureResult:
    a = as_alpha(alpha)
    cfg = cfg or SolverConfig()
    if a.is_one:
        return MeasureResult(
            value=mutual_information(j),
            qx_opt=marginal_x(j),
            qy_opt=marginal_y(j),
            iters=0,
            converged=True,
            starts_used=1,
            regime="convex",
            alpha=1.0,
        )
    return _solve_j(j, a.value, cfg)


def compute_k_alpha(j: JointPmf, alpha: AlphaOrder | float, cfg: SolverConfig | None = None) -> MeasureResult:
    """K_alpha through the tilted problem ``J_{1/alpha}`` of ``tilt_joint(j, alpha)``.

    The witnesses are returned in the original coordinates: a witness ``q``
    of the tilted problem maps back to ``tilt(q, 1/alpha)``, whose alpha-tilt
    is ``q`` again.
    """
    a = as_alpha(alpha)
    if a.is_one:
        return compute_j_alpha(j, a, cfg)
    inv = 1.0 / a.value
    res = compute_j_alpha(tilt_joint(j, a), inv, cfg)
    return MeasureResult(
        value=res.value,
        qx_opt=tilt_pmf(res.qx_opt, inv),
        qy_opt=tilt_pmf(res.qy_opt, inv),
        iters=res.iters,
        converged=res.converged,
        starts_used=res.starts_used,
        regime=res.regime,
        alpha=a.value,
    )


def j_self_closed_form(p: Pmf, alpha: AlphaOrder | float) -> float:
    """J_alpha(X;X): ``H_{alpha/(2alpha-1)}`` above 1/2, ``alpha/(1-alpha) H_inf`` otherwise."""
    al = as_alpha(alpha).value
    if al > 0.5:
        return renyi_entropy(p, al / (2.0 * al - 1.0))
    return al / (1.0 - al) * min_entropy(p)


def k_self_closed_form(p: Pmf, alpha: AlphaOrder | float) -> float:
    """K_alpha(X;X): ``2 H_{alpha/(2-alpha)} - H_alpha`` below 2, ``alpha/(alpha-1) H_inf - H_alpha`` from 2 on."""
    a = as_alpha(alpha)
    al = a.value
    if a.is_one:
        return renyi_entropy(p, 1.0)
    if al < 2:
        v = 2.0 * renyi_entropy(p, al / (2.0 - al)) - renyi_entropy(p, al)
    else:
        v = al / (al - 1.0) * min_entropy(p) - renyi_entropy(p, al)
    return max(v, 0.0)


def j_dual_value(j: JointPmf, r: JointPmf, alpha: AlphaOrder | float) -> float:
    """``I_R(X;Y) + alpha/(1-alpha) D(R||P)`` in bits.

    When ``D(R||P)`` is infinite the bracket is ``-inf`` for alpha > 1 (never
    a maximizer) and ``+inf`` for alpha < 1 (never a minimizer).
    """
    a = as_alpha(alpha)
    _require_not_one(a, "the dual bracket")
    if r.shape != j.shape:
        raise PmfError("R and P must live on the same alphabet")
    coef = a.value / (1.0 - a.value)
    d = kl_divergence(r.flatten(), j.flatten())
    if math.isinf(d):
        return -math.inf if coef < 0 else math.inf
    return mutual_information(r) + coef * d


def j_dual_certificate(j: JointPmf, alpha: AlphaOrder | float, result: MeasureResult) -> DualResult:
    """Optimality certificate for alpha > 1 built from the primal witnesses.

    The candidate maximizer is ``R ∝ P^alpha (qx qy)^(1-alpha)``; at the
    optimum its marginals coincide with ``(qx, qy)`` and the bracket equals
    ``D_alpha(P || R_X R_Y)``.
    """
    a = as_alpha(alpha)
    if not a.value > 1 or a.is_one:
        raise SolverError("the dual certificate is only available for alpha > 1")
    al = a.value
    lq = safe_log(result.qx_opt.p)[:, None] + safe_log(result.qy_opt.p)[None, :]
    logp = safe_log(j.p)
    pos = j.p > 0
    if np.any(np.isneginf(lq[pos])):
        raise SolverError("witnesses miss part of the support of P")
    w = np.full(j.shape, -np.inf)
    w[pos] = al * logp[pos] + (1.0 - al) * lq[pos]
    w = np.exp(w - w[pos].max())
    r = JointPmf(w / w.sum(), j.x_labels, j.y_labels)
    dual = j_dual_value(j, r, a)
    primal = product_divergence(j, marginal_x(r), marginal_y(r), a)
    return DualResult(value=dual, r_opt=r, certificate_gap=abs(dual - primal))


# -- brute-force oracle ----------------------------------------------------------


def simplex_grid(m: int, steps: int) -> np.ndarray:
    """All points of the (m-1)-simplex with coordinates in ``{0, 1/steps, ..., 1}``."""
    if m == 1:
        return np.ones((1, 1))
    if m == 2:
        k = np.arange(steps + 1)
        return np.stack([k, steps - k], axis=1) / steps
    if m == 3:
        i, k = np.meshgrid(np.arange(steps + 1), np.arange(steps + 1), indexing="ij")
        keep = i + k <= steps
        i, k = i[keep], k[keep]
        return np.stack([i, k, steps - i - k], axis=1) / steps
    raise SolverError("simplex_grid supports at most 3 symbols")


def _local_grid(center: np.ndarray, width: float, n: int) -> np.ndarray:
    """Square lattice of half-width ``width`` around ``center`` in the first
    ``m-1`` coordinates, clipped to the simplex."""
    m = center.size
    if m == 1:
        return np.ones((1, 1))
    ticks = np.arange(-n, n + 1) / n * width
    axes = np.meshgrid(*[center[i] + ticks for i in range(m - 1)], indexing="ij")
    head = np.stack([a.ravel() for a in axes], axis=1)
    head = np.clip(head, 0.0, 1.0)
    last = 1.0 - head.sum(axis=1, keepdims=True)
    pts = np.hstack([head, last])
    pts = pts[pts[:, -1] >= -1e-15]
    pts[:, -1] = np.maximum(pts[:, -1], 0.0)
    return np.unique(pts, axis=0)


def _grid_min(p, al, measure, gx, gy, chunk=4096):
    """Minimum over the product grid, with its location; values in nats."""
    best, arg = math.inf, (None, None)
    with np.errstate(divide="ignore"):
        if measure == "J":
            left = (gx ** (1.0 - al)) @ (p**al)
            uy = gy ** (1.0 - al)
            for start in range(0, len(uy), chunk):
                s = left @ uy[start : start + chunk].T
                k = np.argmax(s) if al < 1 else np.argmin(s)
                val = math.log(s.flat[k]) / (al - 1.0)
                if val < best:
                    i, c = np.unravel_index(k, s.shape)
                    best, arg = val, (gx[i], gy[start + c])
        else:
            cx = np.log(np.sum(gx**al, axis=1))
            cy = np.log(np.sum(gy**al, axis=1))
            const = -math.log(np.sum(p[p > 0] ** al)) / (1.0 - al)
            left = (gx ** (al - 1.0)) @ p
            vy = gy ** (al - 1.0)
            for start in range(0, len(vy), chunk):
                cross = left @ vy[start : start + chunk].T
                val = al / (1.0 - al) * np.log(cross) + cx[:, None] + cy[None, start : start + chunk] + const
                k = np.argmin(val)
                if val.flat[k] < best:
                    i, c = np.unravel_index(k, val.shape)
                    best, arg = float(val.flat[k]), (gx[i], gy[start + c])
    return best, arg


def _grid_min_kl(p, gx, gy):
    # D(P||Q_X Q_Y) = -H(P) - sum P_X log Q_X - sum P_Y log Q_Y separates
    px, py = p.sum(axis=1), p.sum(axis=0)
    ax = np.log(gx) @ px
    ay = np.log(gy) @ py
    neg_h = float(np.sum(p[p > 0] * np.log(p[p > 0])))
    i, k = int(np.argmax(ax)), int(np.argmax(ay))
    return neg_h - ax[i] - ay[k], (gx[i], gy[k])


def brute_force_oracle(
    j: JointPmf,
    alpha: AlphaOrder | float,
    grid_steps: int | tuple[int, int],
    measure: str = "J",
    refine: int = 0,
) -> float:
    """Exhaustive grid minimization of ``D_alpha`` (``'J'``) or the relative
    alpha-entropy (``'K'``) over ``Q_X x Q_Y`` on two simplex grids.

    Evaluates the divergence definitions directly; it shares no code path
    with the alternating solver or the tilt. ``grid_steps`` may be a pair
    ``(steps_x, steps_y)``. With ``refine > 0`` the search is repeated that
    many times on a 4-cell-wide lattice (20 ticks per half-width) centred on
    the incumbent. The result is an upper bound on the true minimum.
    """
    a = as_alpha(alpha)
    al = a.value
    if measure not in ("J", "K"):
        raise SolverError(f"measure must be 'J' or 'K', got {measure!r}")
    if j.shape[0] > 3 or j.shape[1] > 3:
        raise SolverError("brute_force_oracle is limited to alphabets of at most 3 symbols")
    p, _, _ = _reduce(j)
    nx, ny = p.shape
    sx, sy = (grid_steps, grid_steps) if isinstance(grid_steps, int) else map(int, grid_steps)
    if min(sx, sy) < 2:
        raise SolverError("grid_steps must be >= 2")

    # a zero coordinate gives +inf whenever the objective needs q > 0 on the
    # support; such points are dropped
    interior_only = a.is_one or (measure == "J" and al > 1) or (measure == "K" and al < 1)

    def search(gx, gy):
        if interior_only:
            gx = gx[np.all(gx > 0, axis=1)]
            gy = gy[np.all(gy > 0, axis=1)]
        if len(gx) == 0 or len(gy) == 0:
            return math.inf, (None, None)
        if a.is_one:
            return _grid_min_kl(p, gx, gy)
        return _grid_min(p, al, measure, gx, gy)

    best, (qx, qy) = search(simplex_grid(nx, sx), simplex_grid(ny, sy))
    if qx is None:
        raise SolverError("grid too coarse: no interior points")
    hx, hy = 1.0 / sx, 1.0 / sy
    ticks = 20
    for _ in range(refine):
        val, (cx, cy) = search(_local_grid(qx, 2 * hx, ticks), _local_grid(qy, 2 * hy, ticks))
        if val < best:
            best, qx, qy = val, cx, cy
        hx, hy = 2 * hx / ticks, 2 * hy / ticks
    return max(best / LN2, 0.0)
