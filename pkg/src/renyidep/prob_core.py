"""Finite probability mass functions, joint PMFs, channels and the alpha-tilt.

All containers are immutable: the probability arrays are copied on
construction and marked read-only.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

NORM_TOL = 1e-12
RENORM_TOL = 1e-9
ALPHA_ONE_TOL = 1e-12


class PmfError(ValueError):
    """Raised when probabilities or alphabets fail validation."""


class RenormalizedWarning(UserWarning):
    pass


def _check_mass(p: np.ndarray, what: str) -> tuple[np.ndarray, bool]:
    if not np.all(np.isfinite(p)):
        raise PmfError(f"{what}: entries must be finite")
    if np.any(p < 0):
        raise PmfError(f"{what}: entries must be nonnegative")
    total = float(p.sum())
    err = abs(total - 1.0)
    if err <= NORM_TOL:
        return p, False
    if err <= RENORM_TOL:
        warnings.warn(
            f"{what}: total mass {total!r} renormalized", RenormalizedWarning, stacklevel=3
        )
        return p / total, True
    raise PmfError(f"{what}: total mass {total!r} is not 1")


def _labels(labels: Sequence | None, n: int, prefix: str) -> tuple:
    if labels is None:
        return tuple(f"{prefix}{i}" for i in range(n))
    labels = tuple(labels)
    if len(labels) != n:
        raise PmfError(f"expected {n} labels, got {len(labels)}")
    if len(set(labels)) != n:
        raise PmfError("labels must be unique")
    return labels


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def safe_log(a: np.ndarray) -> np.ndarray:
    """Natural log with log(0) = -inf and no floating-point warning."""
    a = np.asarray(a, dtype=float)
    out = np.full(a.shape, -np.inf)
    np.log(a, out=out, where=a > 0)
    return out


def power(a: np.ndarray, t: float) -> np.ndarray:
    """Entrywise ``a**t`` for ``a >= 0`` and ``t > 0``, with 0**t = 0."""
    a = np.asarray(a, dtype=float)
    out = np.zeros(a.shape)
    np.exp(t * np.log(a, where=a > 0, out=np.ones(a.shape)), out=out, where=a > 0)
    return out


@dataclass(frozen=True)
class AlphaOrder:
    """A validated order parameter ``alpha > 0``."""

    value: float

    def __post_init__(self):
        v = float(self.value)
        if not math.isfinite(v) or v <= 0:
            raise PmfError(f"alpha must be a positive finite number, got {self.value!r}")
        object.__setattr__(self, "value", v)

    @property
    def is_one(self) -> bool:
        return abs(self.value - 1.0) < ALPHA_ONE_TOL

    @property
    def regime(self) -> str:
        """One of ``'(0,1/2)'``, ``'[1/2,1)'``, ``'1'``, ``'(1,2)'``, ``'[2,inf)'``."""
        a = self.value
        if self.is_one:
            return "1"
        if a < 0.5:
            return "(0,1/2)"
        if a < 1:
            return "[1/2,1)"
        if a < 2:
            return "(1,2)"
        return "[2,inf)"

    def __float__(self) -> float:
        return self.value


def as_alpha(alpha: AlphaOrder | float) -> AlphaOrder:
    return alpha if isinstance(alpha, AlphaOrder) else AlphaOrder(alpha)


@dataclass(frozen=True)
class Pmf:
    """Probability vector over a labelled finite alphabet."""

    p: np.ndarray
    labels: tuple = None
    renormalized: bool = field(default=False, compare=False)

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 1 or p.size == 0:
            raise PmfError("Pmf needs a nonempty 1-d probability vector")
        p, renorm = _check_mass(p, "Pmf")
        object.__setattr__(self, "p", _frozen(p))
        object.__setattr__(self, "labels", _labels(self.labels, p.size, "x"))
        object.__setattr__(self, "renormalized", self.renormalized or renorm)

    def __len__(self) -> int:
        return self.p.size

    def __eq__(self, other) -> bool:
        if not isinstance(other, Pmf):
            return NotImplemented
        return self.labels == other.labels and np.array_equal(self.p, other.p)

    __hash__ = None

    @property
    def support(self) -> np.ndarray:
        return self.p > 0

    @classmethod
    def uniform(cls, m: int, labels=None) -> "Pmf":
        return cls(np.full(m, 1.0 / m), labels)

    @classmethod
    def point_mass(cls, m: int, index: int, labels=None) -> "Pmf":
        p = np.zeros(m)
        p[index] = 1.0
        return cls(p, labels)


@dataclass(frozen=True)
class JointPmf:
    """Probability matrix over ``X x Y`` (rows indexed by x)."""

    p: np.ndarray
    x_labels: tuple = None
    y_labels: tuple = None
    renormalized: bool = field(default=False, compare=False)

    def __post_init__(self):
        p = np.asarray(self.p, dtype=float)
        if p.ndim != 2 or p.size == 0:
            raise PmfError("JointPmf needs a nonempty 2-d probability matrix")
        p, renorm = _check_mass(p, "JointPmf")
        object.__setattr__(self, "p", _frozen(p))
        object.__setattr__(self, "x_labels", _labels(self.x_labels, p.shape[0], "x"))
        object.__setattr__(self, "y_labels", _labels(self.y_labels, p.shape[1], "y"))
        object.__setattr__(self, "renormalized", self.renormalized or renorm)

    def __eq__(self, other) -> bool:
        if not isinstance(other, JointPmf):
            return NotImplemented
        return (
            self.x_labels == other.x_labels
            and self.y_labels == other.y_labels
            and np.array_equal(self.p, other.p)
        )

    __hash__ = None

    @property
    def shape(self) -> tuple[int, int]:
        return self.p.shape

    @property
    def T(self) -> "JointPmf":
        return JointPmf(self.p.T, self.y_labels, self.x_labels)

    def flatten(self) -> Pmf:
        """The joint as a single Pmf over pairs (row-major)."""
        labels = tuple((x, y) for x in self.x_labels for y in self.y_labels)
        return Pmf(self.p.ravel(), labels)

    def conditional_y_given_x(self) -> "ConditionalPmf":
        """P_{Y|X}; rows with zero marginal mass are set uniform."""
        px = self.p.sum(axis=1, keepdims=True)
        m = self.p.shape[1]
        rows = np.where(px > 0, self.p / np.where(px > 0, px, 1.0), 1.0 / m)
        return ConditionalPmf(rows, self.x_labels, self.y_labels)

    @classmethod
    def product(cls, px: Pmf, py: Pmf) -> "JointPmf":
        return cls(np.outer(px.p, py.p), px.labels, py.labels)

    @classmethod
    def diagonal(cls, p: Pmf) -> "JointPmf":
        """Joint law of (X, X)."""
        return cls(np.diag(p.p), p.labels, p.labels)

    @classmethod
    def from_marginal_and_channel(cls, px: Pmf, ch: "ConditionalPmf") -> "JointPmf":
        if len(px) != ch.rows.shape[0]:
            raise PmfError("channel input alphabet does not match marginal")
        return cls(px.p[:, None] * ch.rows, px.labels, ch.out_labels)


@dataclass(frozen=True)
class ConditionalPmf:
    """Row-stochastic matrix: ``rows[i, k] = P(out_k | given_i)``."""

    rows: np.ndarray
    given_labels: tuple = None
    out_labels: tuple = None

    def __post_init__(self):
        rows = np.asarray(self.rows, dtype=float)
        if rows.ndim != 2 or rows.size == 0:
            raise PmfError("ConditionalPmf needs a nonempty 2-d matrix")
        if np.any(rows < 0) or not np.all(np.isfinite(rows)):
            raise PmfError("ConditionalPmf entries must be finite and nonnegative")
        err = np.abs(rows.sum(axis=1) - 1.0)
        if np.any(err > RENORM_TOL):
            raise PmfError("every ConditionalPmf row must sum to 1")
        if np.any(err > NORM_TOL):
            rows = rows / rows.sum(axis=1, keepdims=True)
        object.__setattr__(self, "rows", _frozen(rows))
        object.__setattr__(self, "given_labels", _labels(self.given_labels, rows.shape[0], "y"))
        object.__setattr__(self, "out_labels", _labels(self.out_labels, rows.shape[1], "z"))

    def row(self, i: int) -> Pmf:
        return Pmf(self.rows[i], self.out_labels)

    @classmethod
    def identity(cls, labels: Sequence) -> "ConditionalPmf":
        n = len(labels)
        return cls(np.eye(n), labels, labels)


def marginal_x(j: JointPmf) -> Pmf:
    return Pmf(j.p.sum(axis=1), j.x_labels)


def marginal_y(j: JointPmf) -> Pmf:
    return Pmf(j.p.sum(axis=0), j.y_labels)


def _tilt_array(p: np.ndarray, alpha: float) -> np.ndarray:
    if abs(alpha - 1.0) < ALPHA_ONE_TOL:
        return np.array(p, dtype=float)
    # max-factoring keeps the largest term at exactly 1
    logp = safe_log(p)
    w = np.zeros(p.shape)
    pos = p > 0
    w[pos] = np.exp(alpha * (logp[pos] - logp[pos].max()))
    return w / w.sum()


def tilt_pmf(p: Pmf, alpha: AlphaOrder | float) -> Pmf:
    """Normalized alpha-th power ``P(x)**alpha / sum_x' P(x')**alpha``."""
    a = as_alpha(alpha)
    return Pmf(_tilt_array(p.p, a.value), p.labels)


def tilt_joint(j: JointPmf, alpha: AlphaOrder | float) -> JointPmf:
    """Entrywise alpha-th power renormalized over the whole matrix."""
    a = as_alpha(alpha)
    return JointPmf(_tilt_array(j.p, a.value), j.x_labels, j.y_labels)


def apply_channel(j: JointPmf, ch: ConditionalPmf) -> JointPmf:
    """Post-process Y through ``ch``: ``P_XZ(x,z) = sum_y ch(z|y) P_XY(x,y)``."""
    if ch.rows.shape[0] != j.shape[1]:
        raise PmfError(
            f"channel conditions on {ch.rows.shape[0]} symbols, joint has |Y| = {j.shape[1]}"
        )
    if ch.given_labels != j.y_labels:
        raise PmfError("channel input labels do not match the joint's y labels")
    pxz = j.p @ ch.rows
    pxz = pxz / pxz.sum()
    return JointPmf(pxz, j.x_labels, ch.out_labels)


def kron_joint(a: JointPmf, b: JointPmf) -> JointPmf:
    """Joint of ((X1,X2),(Y1,Y2)) for independent pairs (X1,Y1) and (X2,Y2)."""
    p = np.einsum("ij,kl->ikjl", a.p, b.p).reshape(a.shape[0] * b.shape[0], -1)
    xl = tuple((u, v) for u in a.x_labels for v in b.x_labels)
    yl = tuple((u, v) for u in a.y_labels for v in b.y_labels)
    return JointPmf(p, xl, yl)


def random_pmf(rng: np.random.Generator, m: int, labels=None) -> Pmf:
    return Pmf(rng.dirichlet(np.ones(m)), labels)


def random_joint(rng: np.random.Generator, nx: int, ny: int) -> JointPmf:
    return JointPmf(rng.dirichlet(np.ones(nx * ny)).reshape(nx, ny))


def random_channel(rng: np.random.Generator, given_labels: Sequence, n_out: int) -> ConditionalPmf:
    rows = rng.dirichlet(np.ones(n_out), size=len(given_labels))
    return ConditionalPmf(rows, given_labels)
