"""Distributed task-encoding rate region and a random-binning list-size simulator."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dependence_solver import SolverConfig, compute_k_alpha
from .info_measures import renyi_entropy
from .prob_core import JointPmf, marginal_x, marginal_y

EXACT_PAIR_CAP = 10**7
SIDE_CAP = 10**7
MAX_BINS = 2**62


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class RateRegion:
    rho: float
    rx_min: float
    ry_min: float
    sum_min: float
    k_value: float
    converged: bool = True

    @property
    def corner_points(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return (
            (self.rx_min, self.sum_min - self.rx_min),
            (self.sum_min - self.ry_min, self.ry_min),
        )

    def contains(self, rx: float, ry: float, slack: float = 0.0) -> bool:
        return (
            rx >= self.rx_min - slack
            and ry >= self.ry_min - slack
            and rx + ry >= self.sum_min - slack
        )


@dataclass(frozen=True)
class SimOutcome:
    n: int
    rx: float
    ry: float
    rho: float
    moment_estimate: float
    method: str
    binning: str
    trials: int
    seed: int
    bins_x: int
    bins_y: int
    std_error: float = 0.0


def rate_region(j: JointPmf, rho: float, cfg: SolverConfig | None = None) -> RateRegion:
    """Bounds on ``(R_X, R_Y)`` driving the rho-th list-size moment to one.

    All three bounds are at order ``1/(1+rho)``; the sum bound is the joint
    Renyi entropy plus ``K`` of the same order.
    """
    if not rho > 0 or not math.isfinite(rho):
        raise ValueError(f"rho must be a positive finite number, got {rho!r}")
    order = 1.0 / (1.0 + rho)
    k = compute_k_alpha(j, order, cfg)
    return RateRegion(
        rho=float(rho),
        rx_min=renyi_entropy(marginal_x(j), order),
        ry_min=renyi_entropy(marginal_y(j), order),
        sum_min=renyi_entropy(j.flatten(), order) + k.value,
        k_value=k.value,
        converged=k.converged,
    )


def bin_count(n: int, rate: float) -> int:
    """``floor(2**(n*rate))``, capped at ``MAX_BINS``."""
    if rate < 0 or not math.isfinite(rate):
        raise SimulationError(f"rate must be a nonnegative finite number, got {rate!r}")
    e = n * rate
    if e >= 62:
        return MAX_BINS
    # guard against 2**k evaluating to just below an integer
    return max(1, math.floor(2.0**e * (1 + 1e-12)))


def _random_bins(rng: np.random.Generator, n_seq: int, m: int, binning: str) -> np.ndarray:
    """Size of the bin each sequence falls into.

    ``'balanced'``: a uniformly random partition into ``min(m, n_seq)`` bins
    whose sizes differ by at most one. ``'iid'``: every sequence picks a bin
    uniformly and independently.
    """
    if binning == "balanced":
        bins = np.empty(n_seq, dtype=np.int64)
        bins[rng.permutation(n_seq)] = np.arange(n_seq) % min(m, n_seq)
    elif binning == "iid":
        bins = rng.integers(0, m, size=n_seq, dtype=np.int64)
    else:
        raise SimulationError(f"unknown binning {binning!r}")
    _, inv, counts = np.unique(bins, return_inverse=True, return_counts=True)
    return counts[inv].astype(float)


def _iid_bilinear(p: np.ndarray, n: int, u: np.ndarray, v: np.ndarray) -> float:
    """``sum_{x^n, y^n} prod_i p(x_i, y_i) u[x^n] v[y^n]`` without forming ``p^{(x)n}``.

    Sequences are indexed in base ``|X|`` (``|Y|``), first symbol most significant.
    """
    nx, ny = p.shape
    t = v.reshape((ny,) * n)
    for _ in range(n):
        # contract the leading y-axis into an x-axis appended at the end
        t = np.tensordot(t, p, axes=([0], [1]))
    return float(np.sum(u.reshape((nx,) * n) * t))


def simulate_list_moment(
    j: JointPmf,
    n: int,
    rx: float,
    ry: float,
    rho: float,
    trials: int = 10_000,
    seed: int = 0,
    exact: bool = False,
    binning: str = "balanced",
) -> SimOutcome:
    """rho-th moment of the decoder's list size under random binning.

    The x-sequences (y-sequences) are randomly binned into
    ``floor(2**(n*rx))`` (``floor(2**(n*ry))``) bins, see ``_random_bins``
    for the two binning schemes. The list is every
    pair ``(x^n, y^n)`` matching both bins, zero-probability pairs included,
    so its size is the product of the two bin sizes.

    ``exact=True`` averages over all source pairs under the i.i.d. law;
    otherwise ``trials`` source blocks are sampled. Either way the bin
    assignment is one random draw fixed by ``seed``.
    """
    if n < 1:
        raise SimulationError("block length must be >= 1")
    if not rho > 0:
        raise SimulationError("rho must be positive")
    nx, ny = j.shape
    n_x, n_y = nx**n, ny**n
    mx, my = bin_count(n, rx), bin_count(n, ry)
    if exact and n_x * n_y > EXACT_PAIR_CAP:
        raise SimulationError(
            f"exact enumeration needs {n_x * n_y} pairs, above the cap of {EXACT_PAIR_CAP}"
        )
    if max(n_x, n_y) > SIDE_CAP:
        raise SimulationError(f"bin tables need {max(n_x, n_y)} entries, above the cap of {SIDE_CAP}")
    if not exact and trials < 1:
        raise SimulationError("trials must be >= 1")

    bin_rng = np.random.default_rng([seed, 0])
    size_x = _random_bins(bin_rng, n_x, mx, binning)
    size_y = _random_bins(bin_rng, n_y, my, binning)

    if exact:
        m = _iid_bilinear(j.p, n, size_x**rho, size_y**rho)
        return SimOutcome(n, rx, ry, rho, m, "exact", binning, 0, seed, mx, my)

    src_rng = np.random.default_rng([seed, 1])
    flat = src_rng.choice(nx * ny, size=(trials, n), p=j.p.ravel() / j.p.sum())
    xs, ys = np.divmod(flat, ny)
    wx = nx ** np.arange(n - 1, -1, -1)
    wy = ny ** np.arange(n - 1, -1, -1)
    vals = (size_x[xs @ wx] * size_y[ys @ wy]) ** rho
    se = float(vals.std(ddof=1) / math.sqrt(trials)) if trials > 1 else math.inf
    return SimOutcome(n, rx, ry, rho, float(vals.mean()), "monte_carlo", binning, trials, seed, mx, my, se)


def list_size_covariance(j: JointPmf, n: int, rx: float, ry: float, seed: int = 0, binning: str = "balanced") -> float:
    """Exact covariance of the X-side and Y-side bin sizes under the source law.

    Uses the same bin draw as ``simulate_list_moment`` with this seed. Zero
    for product sources.
    """
    nx, ny = j.shape
    if (nx * ny) ** n > EXACT_PAIR_CAP:
        raise SimulationError("instance too large for exact enumeration")
    bin_rng = np.random.default_rng([seed, 0])
    size_x = _random_bins(bin_rng, nx**n, bin_count(n, rx), binning)
    size_y = _random_bins(bin_rng, ny**n, bin_count(n, ry), binning)
    ones_x, ones_y = np.ones_like(size_x), np.ones_like(size_y)
    exy = _iid_bilinear(j.p, n, size_x, size_y)
    ex = _iid_bilinear(j.p, n, size_x, ones_y)
    ey = _iid_bilinear(j.p, n, ones_x, size_y)
    return exy - ex * ey
