"""End-to-end acceptance criteria, one test per criterion.

Each test carries an ``acceptance(number, title)`` marker; conftest prints a
PASS/FAIL line per criterion in the terminal summary.
"""

import itertools
import math
import time

import numpy as np
import pytest

from renyidep import (
    JointPmf,
    Pmf,
    apply_channel,
    brute_force_oracle,
    compute_j_alpha,
    compute_k_alpha,
    j_dual_certificate,
    j_dual_value,
    j_self_closed_form,
    k_self_closed_form,
    mutual_information,
    renyi_entropy,
)
from renyidep.prob_core import kron_joint, random_channel, random_joint, random_pmf
from renyidep.reference_data import REPORTED_K, counterexample_channel, counterexample_joint
from renyidep.task_encoding import rate_region, simulate_list_moment

# tolerances
REG_TOL = 1e-3
ORACLE_TOL = 5e-4
CLOSED_TOL = 5e-6
ZERO_TOL = 1e-9
SYM_TOL = 1e-9
DPI_TOL = 1e-7
ADD_TOL = 1e-7
BOUND_TOL = 1e-9
MONO_TOL = 1e-7
ONE_TOL = 5e-3
CERT_TOL = 1e-6
SANDWICH_TOL = 1e-7
REGION_TOL = 1e-9

ALPHA_GRID = np.linspace(0.1, 4.0, 40)


def _full_support(rng, nx, ny):
    return JointPmf(rng.dirichlet(np.ones(nx * ny)).reshape(nx, ny))


def _lattice4(steps):
    """Points of the 3-simplex with coordinates in multiples of 1/steps."""
    pts = [
        (a, b, c, steps - a - b - c)
        for a, b, c in itertools.product(range(steps + 1), repeat=3)
        if a + b + c <= steps
    ]
    return np.array(pts, dtype=float) / steps


@pytest.mark.acceptance(1, "reference K values within 1e-3 bits, under 10 s")
def test_reference_values(note):
    t0 = time.perf_counter()
    pxy = counterexample_joint()
    pxz = apply_channel(pxy, counterexample_channel())
    got = {key: compute_k_alpha(pxy if key[1] == "XY" else pxz, key[0]).value for key in REPORTED_K}
    elapsed = time.perf_counter() - t0
    worst = max(abs(got[k] - v) for k, v in REPORTED_K.items())
    note(f"max deviation {worst:.1e} bits, {elapsed:.2f} s")
    for key, reported in REPORTED_K.items():
        assert abs(got[key] - reported) <= REG_TOL, f"K_{key[0]}({key[1]}) = {got[key]:.6f}, expected {reported}"
    assert elapsed < 10, f"took {elapsed:.1f} s"


@pytest.mark.slow
@pytest.mark.acceptance(2, "solver matches brute-force grid oracle within 5e-4 bits, under 5 min")
def test_oracle_equivalence(note):
    t0 = time.perf_counter()
    rng = np.random.default_rng(2002)
    worst, where = 0.0, None
    for shape, steps in (((2, 2), (400, 400)), ((2, 3), (400, 80))):
        for _ in range(50):
            j = _full_support(rng, *shape)
            for a in (0.3, 0.5, 0.7, 1.5, 3.0):
                for measure, fn in (("J", compute_j_alpha), ("K", compute_k_alpha)):
                    res = fn(j, a)
                    assert res.converged
                    err = abs(res.value - brute_force_oracle(j, a, steps, measure, refine=3))
                    if err > worst:
                        worst, where = err, (shape, a, measure)
    elapsed = time.perf_counter() - t0
    note(f"max |solver - oracle| {worst:.1e} bits at {where}, {elapsed:.0f} s")
    assert worst <= ORACLE_TOL, f"max deviation {worst:.2e} at {where}"
    assert elapsed < 300, f"took {elapsed:.0f} s"


@pytest.mark.acceptance(3, "closed forms for J(X;X), K(X;X) within 5e-6 bits")
def test_closed_forms(note):
    rng = np.random.default_rng(3003)
    worst = 0.0
    for _ in range(30):
        p = random_pmf(rng, int(rng.integers(2, 6)))
        d = JointPmf.diagonal(p)
        for a in (0.3, 0.5, 0.8, 1.0, 1.3, 2.0, 3.0):
            worst = max(
                worst,
                abs(compute_j_alpha(d, a).value - j_self_closed_form(p, a)),
                abs(compute_k_alpha(d, a).value - k_self_closed_form(p, a)),
            )
    note(f"max deviation {worst:.1e} bits")
    assert worst <= CLOSED_TOL


@pytest.mark.acceptance(4, "J property suite: zero violations")
def test_j_properties(note):
    rng = np.random.default_rng(4004)
    violations = []

    for _ in range(10):
        prod = JointPmf.product(random_pmf(rng, 3), random_pmf(rng, 2))
        dep = _full_support(rng, 3, 2)
        for a in (0.3, 0.7, 1.0, 2.0):
            if compute_j_alpha(prod, a).value > ZERO_TOL:
                violations.append(("independence", a))
            if not compute_j_alpha(dep, a).value > ZERO_TOL:
                violations.append(("dependence", a))

    for _ in range(10):
        j = random_joint(rng, 3, 2)
        for a in (0.3, 0.7, 2.0):
            if abs(compute_j_alpha(j, a).value - compute_j_alpha(j.T, a).value) > SYM_TOL:
                violations.append(("symmetry", a))

    for _ in range(100):
        j = random_joint(rng, 3, 3)
        jz = apply_channel(j, random_channel(rng, j.y_labels, int(rng.integers(2, 5))))
        for a in (0.3, 0.5, 0.9, 1.0, 1.5, 3.0):
            if compute_j_alpha(jz, a).value > compute_j_alpha(j, a).value + DPI_TOL:
                violations.append(("dpi", a))

    for _ in range(20):
        a1, a2 = random_joint(rng, 2, 2), random_joint(rng, 2, 2)
        big = kron_joint(a1, a2)
        for a in (0.4, 0.7, 1.0, 2.0):
            gap = compute_j_alpha(big, a).value - compute_j_alpha(a1, a).value - compute_j_alpha(a2, a).value
            if abs(gap) > ADD_TOL:
                violations.append(("additivity", a))

    for _ in range(10):
        nx, ny = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        j = random_joint(rng, nx, ny)
        for a in (0.3, 1.0, 3.0):
            if compute_j_alpha(j, a).value > math.log2(min(nx, ny)) + BOUND_TOL:
                violations.append(("bound", a))

    for _ in range(3):
        j = random_joint(rng, 3, 3)
        vals = [compute_j_alpha(j, a).value for a in ALPHA_GRID]
        if np.min(np.diff(vals)) < -MONO_TOL:
            violations.append(("monotone", None))

    for _ in range(10):
        j = _full_support(rng, 3, 3)
        mi = mutual_information(j)
        for a in (1 - 1e-3, 1 + 1e-3):
            if abs(compute_j_alpha(j, a).value - mi) > ONE_TOL:
                violations.append(("alpha->1", a))

    note(f"{len(violations)} violations")
    assert not violations, violations[:5]


@pytest.mark.acceptance(5, "K property suite, tilt route vs direct grid, reference orderings")
def test_k_properties(note):
    rng = np.random.default_rng(5005)
    violations = []

    for _ in range(10):
        prod = JointPmf.product(random_pmf(rng, 3), random_pmf(rng, 2))
        dep = _full_support(rng, 3, 2)
        for a in (0.3, 0.7, 2.0):
            if compute_k_alpha(prod, a).value > ZERO_TOL:
                violations.append(("independence", a))
            if not compute_k_alpha(dep, a).value > ZERO_TOL:
                violations.append(("dependence", a))

    for _ in range(10):
        j = random_joint(rng, 3, 2)
        for a in (0.3, 0.7, 2.0):
            if abs(compute_k_alpha(j, a).value - compute_k_alpha(j.T, a).value) > SYM_TOL:
                violations.append(("symmetry", a))

    for _ in range(20):
        a1, a2 = random_joint(rng, 2, 2), random_joint(rng, 2, 2)
        big = kron_joint(a1, a2)
        for a in (0.4, 0.7, 2.0):
            gap = compute_k_alpha(big, a).value - compute_k_alpha(a1, a).value - compute_k_alpha(a2, a).value
            if abs(gap) > ADD_TOL:
                violations.append(("additivity", a))

    for _ in range(10):
        nx, ny = int(rng.integers(2, 5)), int(rng.integers(2, 5))
        j = random_joint(rng, nx, ny)
        for a in (0.3, 1.0, 3.0):
            if compute_k_alpha(j, a).value > math.log2(min(nx, ny)) + BOUND_TOL:
                violations.append(("bound", a))

    for _ in range(3):
        j = random_joint(rng, 3, 3)
        flat = j.flatten()
        vals = [compute_k_alpha(j, a).value + renyi_entropy(flat, a) for a in ALPHA_GRID]
        if np.max(np.diff(vals)) > MONO_TOL:
            violations.append(("K + H monotone", None))

    # tilt route vs direct minimization of the relative alpha-entropy on a grid
    worst_tilt = 0.0
    for _ in range(10):
        j = _full_support(rng, 2, 2)
        for a in (0.3, 0.5, 0.7, 1.5, 3.0):
            direct = brute_force_oracle(j, a, 400, "K")
            tilted = compute_k_alpha(j, a).value
            worst_tilt = max(worst_tilt, abs(direct - tilted))
            if not tilted <= direct + 1e-12 or direct - tilted > ORACLE_TOL:
                violations.append(("tilt route", a))

    pxy = counterexample_joint()
    pxz = apply_channel(pxy, counterexample_channel())
    k_xy, k_xz = compute_k_alpha(pxy, 0.5).value, compute_k_alpha(pxz, 0.5).value
    if not k_xz > k_xy:
        violations.append(("dpi failure ordering", 0.5))
    k02, k1, k15 = (compute_k_alpha(pxy, a).value for a in (0.2, 1.0, 1.5))
    if not (k02 < k1 and k15 < k1):
        violations.append(("non-monotone ordering", None))

    note(
        f"{len(violations)} violations; tilt vs grid {worst_tilt:.1e} bits; "
        f"K(X;Z) {k_xz:.3f} > K(X;Y) {k_xy:.3f}; {k02:.3f} < {k1:.3f} > {k15:.3f}"
    )
    assert not violations, violations[:5]


@pytest.mark.acceptance(6, "dual certificate gap <= 1e-6 (alpha > 1), sandwich (alpha < 1)")
def test_dual(note):
    rng = np.random.default_rng(6006)
    worst_gap = 0.0
    for _ in range(20):
        j = _full_support(rng, 3, 3)
        for a in (1.5, 2.0, 4.0):
            worst_gap = max(worst_gap, j_dual_certificate(j, a, compute_j_alpha(j, a)).certificate_gap)

    lattice = _lattice4(20)
    worst_sandwich = -math.inf
    for _ in range(5):
        j = _full_support(rng, 2, 2)
        for a in (0.3, 0.7):
            jv = compute_j_alpha(j, a).value
            brackets = [j_dual_value(j, JointPmf(r.reshape(2, 2)), a) for r in lattice]
            worst_sandwich = max(worst_sandwich, jv - min(brackets))
    note(f"max gap {worst_gap:.1e} bits; max J - bracket {worst_sandwich:.1e} bits over {len(lattice)} grid R")
    assert worst_gap <= CERT_TOL
    assert worst_sandwich <= SANDWICH_TOL


@pytest.mark.acceptance(7, "rate region special cases within 1e-9")
def test_rate_region(note):
    r = rate_region(JointPmf.diagonal(Pmf.uniform(2)), 1.0)
    rng = np.random.default_rng(7007)
    worst = 0.0
    for _ in range(10):
        prod = JointPmf.product(random_pmf(rng, int(rng.integers(2, 5))), random_pmf(rng, int(rng.integers(2, 5))))
        for rho in (0.5, 1.0, 2.0):
            ri = rate_region(prod, rho)
            worst = max(worst, abs(ri.sum_min - ri.rx_min - ri.ry_min))
    note(f"diag-uniform ({r.rx_min:.12f}, {r.ry_min:.12f}, {r.sum_min:.12f}); independent max gap {worst:.1e}")
    assert abs(r.rx_min - 1) <= REGION_TOL
    assert abs(r.ry_min - 1) <= REGION_TOL
    assert abs(r.sum_min - 2) <= REGION_TOL
    assert worst <= REGION_TOL


@pytest.mark.acceptance(8, "simulator trend at n = 2, 4, 6 over 5 seeds, under 2 min")
def test_simulator_trend(note):
    t0 = time.perf_counter()
    j = JointPmf([[0.4, 0.1], [0.1, 0.4]])
    cx, cy = rate_region(j, 1.0).corner_points[0]
    bad = []
    for seed in range(5):
        inside = [simulate_list_moment(j, n, 1.25 * cx, 1.25 * cy, 1.0, seed=seed, exact=True).moment_estimate for n in (2, 4, 6)]
        outside = [simulate_list_moment(j, n, 0.75 * cx, 0.75 * cy, 1.0, seed=seed, exact=True).moment_estimate for n in (2, 4, 6)]
        if np.any(np.diff(inside) > 1e-12):
            bad.append(("inside", seed, inside))
        if np.any(np.diff(outside) < -1e-12):
            bad.append(("outside", seed, outside))
    elapsed = time.perf_counter() - t0
    note(f"last seed inside {np.round(inside, 3).tolist()}, outside {np.round(outside, 3).tolist()}, {elapsed:.2f} s")
    assert not bad, bad
    assert elapsed < 120
