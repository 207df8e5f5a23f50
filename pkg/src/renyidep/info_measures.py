"""Shannon/Renyi entropies and the KL, Renyi and relative alpha-entropy divergences.

Every function returns a Python float in bits. Infinite divergences are
returned as ``math.inf``; NaN never escapes (an ``AssertionError`` is raised
instead).
"""

from __future__ import annotations

import math

import numpy as np
from scipy.special import logsumexp

from .prob_core import AlphaOrder, JointPmf, Pmf, PmfError, as_alpha, marginal_x, marginal_y, safe_log

LN2 = math.log(2.0)


def _bits(nats: float) -> float:
    v = float(nats) / LN2
    assert not math.isnan(v), "NaN in information measure"
    if v == 0.0:
        return 0.0  # normalizes -0.0
    return v


def _same_alphabet(p: Pmf, q: Pmf) -> None:
    if len(p) != len(q):
        raise PmfError(f"alphabet sizes differ: {len(p)} vs {len(q)}")


def _lse(logs: np.ndarray) -> float:
    """log(sum(exp(logs))) with an all -inf input mapping to -inf."""
    logs = np.asarray(logs, dtype=float).ravel()
    if logs.size == 0 or not np.any(np.isfinite(logs)):
        return -math.inf
    return float(logsumexp(logs[np.isfinite(logs)]))


def shannon_entropy(p: Pmf) -> float:
    x = p.p[p.p > 0]
    return _bits(max(-float(np.sum(x * np.log(x))), 0.0))


def renyi_entropy(p: Pmf, alpha: AlphaOrder | float) -> float:
    """Renyi entropy of order alpha; alpha = 1 dispatches to Shannon entropy."""
    a = as_alpha(alpha)
    if a.is_one:
        return shannon_entropy(p)
    lp = safe_log(p.p)
    h = _lse(a.value * lp) / (1.0 - a.value)
    return _bits(max(h, 0.0))


def min_entropy(p: Pmf) -> float:
    return _bits(-math.log(float(p.p.max())))


def kl_divergence(p: Pmf, q: Pmf) -> float:
    _same_alphabet(p, q)
    sp = p.p > 0
    if np.any(q.p[sp] == 0):
        return math.inf
    d = float(np.sum(p.p[sp] * (np.log(p.p[sp]) - np.log(q.p[sp]))))
    return _bits(max(d, 0.0))


def renyi_divergence(p: Pmf, q: Pmf, alpha: AlphaOrder | float) -> float:
    """``1/(alpha-1) log sum P^alpha Q^(1-alpha)`` with the p/0 = inf rule for alpha > 1."""
    _same_alphabet(p, q)
    a = as_alpha(alpha)
    if a.is_one:
        return kl_divergence(p, q)
    sp = p.p > 0
    lp, lq = safe_log(p.p), safe_log(q.p)
    if a.value > 1:
        if np.any(q.p[sp] == 0):
            return math.inf
        s = _lse(a.value * lp[sp] + (1.0 - a.value) * lq[sp])
    else:
        both = sp & (q.p > 0)
        s = _lse(a.value * lp[both] + (1.0 - a.value) * lq[both])
        if s == -math.inf:
            # disjoint supports
            return math.inf
    return _bits(max(s / (a.value - 1.0), 0.0))


def relative_alpha_entropy(p: Pmf, q: Pmf, alpha: AlphaOrder | float) -> float:
    """Relative alpha-entropy, evaluated term by term from its three log-sums."""
    _same_alphabet(p, q)
    a = as_alpha(alpha)
    if a.is_one:
        return kl_divergence(p, q)
    al = a.value
    sp = p.p > 0
    lp, lq = safe_log(p.p), safe_log(q.p)
    if al < 1:
        if np.any(q.p[sp] == 0):
            return math.inf
        cross = _lse(lp[sp] + (al - 1.0) * lq[sp])
    else:
        both = sp & (q.p > 0)
        cross = _lse(lp[both] + (al - 1.0) * lq[both])
        if cross == -math.inf:
            return math.inf
    val = (
        al / (1.0 - al) * cross
        + _lse(al * lq[q.p > 0])
        - _lse(al * lp[sp]) / (1.0 - al)
    )
    return _bits(max(val, 0.0))


def mutual_information(j: JointPmf) -> float:
    px, py = marginal_x(j), marginal_y(j)
    prod = JointPmf.product(px, py)
    return kl_divergence(j.flatten(), prod.flatten())


def kl_decomposition_check(j: JointPmf, qx: Pmf, qy: Pmf) -> tuple[float, float, float]:
    """The three terms ``D(P||P_X P_Y), D(P_X||Q_X), D(P_Y||Q_Y)``.

    Their sum equals ``D(P_XY || Q_X Q_Y)``.
    """
    if len(qx) != j.shape[0] or len(qy) != j.shape[1]:
        raise PmfError("qx/qy alphabets do not match the joint")
    return (
        mutual_information(j),
        kl_divergence(marginal_x(j), qx),
        kl_divergence(marginal_y(j), qy),
    )


def product_divergence(j: JointPmf, qx: Pmf, qy: Pmf, alpha: AlphaOrder | float, kind: str = "D") -> float:
    """``D_alpha`` (kind ``'D'``) or relative alpha-entropy (kind ``'Delta'``) of ``j`` from ``qx*qy``."""
    prod = JointPmf.product(qx, qy).flatten()
    flat = j.flatten()
    if kind == "D":
        return renyi_divergence(flat, prod, alpha)
    if kind == "Delta":
        return relative_alpha_entropy(flat, prod, alpha)
    raise ValueError(f"unknown divergence kind {kind!r}")
