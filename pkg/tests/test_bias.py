import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from recthull import (
    BiasReport,
    ElementaryOp,
    SignMeasure,
    apply_elementary,
    bias_report,
    edge_reference_measure,
    empirical_sign_measure,
    is_mch,
    mch_reference_measure,
    o_med_bias_mch,
    omb_1d_closed_form,
    omb_general,
    orthant_labels,
    orthant_sup_distance,
    r_med_bias,
    t_med_bias,
)
from recthull.simulate import (
    four_point_disk,
    make_distribution,
    random_elementary_op,
    random_sign_measure,
    sample,
)


def halfplane_min_oracle(y: np.ndarray) -> float:
    """Direct-count reference for the d=2 sweep.

    The minimum over directions is attained strictly between event angles, so
    this evaluates the closed-halfplane fraction only at arc midpoints, where
    every dot product is comfortably nonzero for well-separated directions.
    Independent of the sweep's delta bookkeeping.
    """
    mask = (y[:, 0] != 0.0) | (y[:, 1] != 0.0)
    z = y[mask]
    n = y.shape[0]
    n_zero = n - z.shape[0]
    if z.shape[0] == 0:
        return 1.0
    events = np.concatenate(
        [np.arctan2(-z[:, 0] + 0.0, z[:, 1]), np.arctan2(z[:, 0] + 0.0, -z[:, 1])]
    )
    uniq = np.unique(events)
    mids = 0.5 * (uniq + np.roll(uniq, -1))
    mids[-1] = 0.5 * (uniq[-1] + uniq[0] + 2.0 * np.pi)
    us = np.stack([np.cos(mids), np.sin(mids)], axis=1)
    counts = (z @ us.T >= 0.0).sum(axis=0)
    return (int(counts.min()) + n_zero) / n


def test_r_med_bias_examples():
    # one of three points to the left of 0 on each coordinate
    assert math.isclose(r_med_bias([(1, 2), (2, 1), (-1, -1)], [0, 0]), 1 / 6, abs_tol=1e-15)
    # every second coordinate is positive, so the left halfline at 0 is empty
    assert r_med_bias([(1, 2), (2, 1), (-1, 1)], [0, 0]) == 0.5
    assert r_med_bias([(1.0,), (-1.0,)], [0.0]) == 0.0
    # ties at the center count for both sides
    assert r_med_bias([(0.0,), (1.0,)], [0.0]) == 0.0


def test_r_med_bias_center_shift():
    pts = [(1, 2), (2, 1), (-1, -1)]
    assert r_med_bias(pts, [10.0, 10.0]) == 0.5
    # ties at the center count toward both halflines
    assert r_med_bias(pts, [1.0, 1.0]) == 0.0
    assert math.isclose(r_med_bias(pts, [1.5, 1.5]), 1 / 6, abs_tol=1e-15)


def test_t_med_bias_one_dimensional():
    x = [(1.0,), (2.0,), (3.0,)]
    assert t_med_bias(x, [2.0]) == 0.0
    assert t_med_bias(x, [0.0]) == 0.5
    assert math.isclose(t_med_bias(x, [1.0]), 0.5 - 1 / 3, abs_tol=1e-15)


def test_t_med_bias_known_planar_cases():
    cross = [(1, 0), (-1, 0), (0, 1), (0, -1)]
    assert t_med_bias(cross, [0, 0], method="exact") == 0.0
    # sample confined to an open halfplane
    right = [(1, 0.5), (2, -0.3), (3, 1)]
    assert t_med_bias(right, [0, 0], method="exact") == 0.5
    # exactly paired sample: every halfplane through 0 holds at least half
    rng = np.random.default_rng(3)
    v = rng.standard_normal((25, 2))
    paired = np.concatenate([v, -v])
    assert t_med_bias(paired, [0, 0], method="exact") == 0.0


def test_t_med_bias_method_validation():
    pts = np.zeros((4, 3))
    with pytest.raises(ValueError, match="exact"):
        t_med_bias(pts, [0, 0, 0], method="exact")
    with pytest.raises(ValueError):
        t_med_bias(pts, [0, 0, 0], method="nonsense")
    with pytest.raises(ValueError):
        t_med_bias(pts, [0, 0, 0], method="sampled", n_directions=0)


def test_exact_sweep_matches_direct_count_random():
    rng = np.random.default_rng(11)
    for trial in range(40):
        n = int(rng.integers(1, 400))
        y = rng.standard_normal((n, 2))
        if trial % 3 == 0:
            y = np.round(y, 1)  # force ties and collinear groups
        sweep = t_med_bias(y, [0.0, 0.0], method="exact")
        oracle = max(0.0, 0.5 - halfplane_min_oracle(y))
        assert abs(sweep - oracle) < 1e-12, f"trial {trial}"


# Integer coordinates scaled by exact powers of two: directions stay pairwise
# well separated (or exactly equal), so the midpoint oracle is exact too.
grid_points = st.tuples(
    st.integers(-50, 50), st.integers(-50, 50), st.integers(-20, 20)
).map(lambda t: (float(t[0]) * 2.0 ** t[2], float(t[1]) * 2.0 ** t[2]))


@given(st.lists(grid_points, min_size=1, max_size=60))
@settings(max_examples=150, deadline=None)
def test_exact_sweep_matches_direct_count(point_list):
    y = np.asarray(point_list, dtype=float)
    sweep = t_med_bias(y, [0.0, 0.0], method="exact")
    oracle = max(0.0, 0.5 - halfplane_min_oracle(y))
    assert abs(sweep - oracle) < 1e-12


def test_sweep_boundary_direction_cases():
    # axis-aligned points exercise the signed-zero handling of the event
    # angles; one direction catches only the left point
    y = np.array([(0.0, 1.0), (0.0, -1.0), (-1.0, 0.0)])
    assert math.isclose(t_med_bias(y, [0.0, 0.0], method="exact"), 1 / 6, abs_tol=1e-15)
    # exactly antipodal pair: every halfplane holds one of the two
    assert t_med_bias([(0.0, 1.0), (0.0, -1.0)], [0.0, 0.0], method="exact") == 0.0
    # almost antipodal pair: a separating direction exists in a sliver arc
    y = np.array([(0.0, 1.0), (7.690512068328983e-217, -1.0)])
    assert t_med_bias(y, [0.0, 0.0], method="exact") == 0.5
    # all mass at the center satisfies every halfplane
    assert t_med_bias([(0.0, 0.0)], [0.0, 0.0], method="exact") == 0.0


def test_sampled_method_lower_bounds_exact():
    rng = np.random.default_rng(5)
    for _ in range(10):
        y = rng.standard_normal((int(rng.integers(5, 100)), 2))
        exact = t_med_bias(y, [0.0, 0.0], method="exact")
        sampled = t_med_bias(y, [0.0, 0.0], method="sampled", n_directions=2000, seed=1)
        assert sampled <= exact + 1e-12
        assert exact - sampled <= 0.05


def test_rectilinear_never_exceeds_halfspace():
    rng = np.random.default_rng(17)
    for _ in range(25):
        n = int(rng.integers(2, 120))
        y = rng.standard_normal((n, 2)) + rng.uniform(-1, 1, size=2)
        c = rng.uniform(-0.5, 0.5, size=2)
        assert r_med_bias(y, c) <= t_med_bias(y, c, method="exact") + 1e-12
    for _ in range(10):
        y = rng.standard_normal((50, 4))
        assert r_med_bias(y, np.zeros(4)) <= t_med_bias(y, np.zeros(4), seed=2) + 1e-12


def test_o_med_bias_mch_examples():
    uniform = SignMeasure(2, {g: 0.25 for g in orthant_labels(2)})
    assert o_med_bias_mch(uniform) == 0.0
    assert math.isclose(o_med_bias_mch(mch_reference_measure()), 0.1, abs_tol=1e-15)
    with pytest.raises(ValueError, match="omb_general"):
        o_med_bias_mch(SignMeasure(1, {(0,): 0.5, (1,): 0.5}))


def test_omb_1d_closed_form_examples():
    assert omb_1d_closed_form(0.4, 0.2, 0.4) == 0.0
    assert math.isclose(omb_1d_closed_form(0.1, 0.0, 0.9), 0.4, abs_tol=1e-15)
    assert math.isclose(omb_1d_closed_form(0.9, 0.1, 0.0), 0.4, abs_tol=1e-15)
    assert omb_1d_closed_form(0.5, 0.0, 0.5) == 0.0
    with pytest.raises(ValueError):
        omb_1d_closed_form(0.5, 0.5, 0.5)
    with pytest.raises(ValueError):
        omb_1d_closed_form(-0.1, 0.6, 0.5)


def test_omb_general_reference_values():
    assert math.isclose(omb_general(mch_reference_measure()), 0.1, abs_tol=1e-15)
    assert math.isclose(omb_general(edge_reference_measure()), 7 / 30, abs_tol=1e-9)


def test_omb_general_degenerate_cases():
    # all mass at the all-zero pattern disperses evenly: no bias
    origin = SignMeasure(2, {(0, 0): 1.0})
    assert omb_general(origin) == 0.0
    # all mass on a single orthant: maximal bias
    corner = SignMeasure(2, {(1, 1): 1.0})
    assert omb_general(corner) == 0.5
    assert omb_general(SignMeasure(1, {(0,): 1.0})) == 0.0


def test_omb_general_matches_mch_formula_exactly():
    rng = np.random.default_rng(23)
    for _ in range(50):
        d = int(rng.integers(1, 4))
        m = random_sign_measure(d, rng, mch=True)
        assert omb_general(m) == o_med_bias_mch(m)


def test_omb_general_matches_1d_closed_form():
    rng = np.random.default_rng(29)
    for _ in range(100):
        w = rng.dirichlet(np.ones(3))
        p, q, r = float(w[0]), float(w[1]), float(w[2])
        m = SignMeasure(1, {(-1,): p, (0,): q, (1,): r})
        assert abs(omb_general(m) - omb_1d_closed_form(p, q, r)) <= 1e-9


def closed_orthant_masses(m: SignMeasure) -> dict:
    out = {g: 0.0 for g in orthant_labels(m.d)}
    for key, val in m.items():
        choices = [((-1, 1) if v == 0 else (v,)) for v in key]
        for g in itertools.product(*choices):
            out[g] += val
    return out


def test_omb_general_bracketed_by_naive_values():
    """No-dispersal and all-to-every-orthant values bracket the optimum."""
    rng = np.random.default_rng(31)
    for _ in range(80):
        d = int(rng.integers(1, 4))
        m = random_sign_measure(d, rng)
        scale = 2.0 ** (d - 1)
        target = 2.0**-d
        omb = omb_general(m)
        raw_min = m.orthant_mass_min()
        closed_min = min(closed_orthant_masses(m).values())
        assert omb <= scale * max(0.0, target - raw_min) + 1e-12
        assert omb >= scale * max(0.0, target - closed_min) - 1e-9
        assert -1e-12 <= omb <= 0.5 + 1e-12


def test_omb_general_monotone_under_dispersal():
    # committing mass early can only shrink the reachable set
    rng = np.random.default_rng(37)
    checked = 0
    while checked < 60:
        d = int(rng.integers(1, 4))
        m = random_sign_measure(d, rng)
        op = random_elementary_op(m, rng)
        if op is None:
            continue
        nu = apply_elementary(m, op)
        assert omb_general(nu) >= omb_general(m) - 1e-9
        checked += 1


def test_orthant_sup_distance_examples():
    a = SignMeasure(1, {(-1,): 0.5, (1,): 0.5})
    assert orthant_sup_distance(a, a) == 0.0
    b = SignMeasure(1, {(-1,): 0.3, (1,): 0.7})
    assert math.isclose(orthant_sup_distance(a, b), 0.2, abs_tol=1e-15)
    with pytest.raises(ValueError):
        orthant_sup_distance(a, mch_reference_measure())


def test_orthant_sup_distance_reference_pair():
    a = mch_reference_measure()
    b = edge_reference_measure()
    v = orthant_sup_distance(a, b)
    assert math.isclose(v, 0.2, abs_tol=1e-12)
    assert abs(omb_general(a) - omb_general(b)) <= 2**2 * v + 1e-12


def test_omb_stability_under_sup_distance():
    """Bias difference against an MCH comparator is controlled by 2^d times
    the closed-orthant sup distance."""
    rng = np.random.default_rng(41)
    for _ in range(40):
        d = int(rng.integers(1, 4))
        b = random_sign_measure(d, rng, mch=True)
        # perturb: move a slice of one orthant atom onto a random zero pattern
        atoms = dict(b.items())
        donor = list(atoms)[int(rng.integers(len(atoms)))]
        frac = 0.5 * float(rng.uniform())
        moved = atoms[donor] * frac
        edge = tuple(0 if rng.uniform() < 0.5 else v for v in donor)
        atoms[donor] -= moved
        atoms[edge] = atoms.get(edge, 0.0) + moved
        a = SignMeasure(d, atoms)
        dist = orthant_sup_distance(a, b)
        assert abs(omb_general(a) - omb_general(b)) <= 2.0**d * dist + 1e-9


def test_bias_report_validation():
    with pytest.raises(ValueError):
        BiasReport(r_bias=0.3, t_bias=0.1, o_bias=0.0)
    with pytest.raises(ValueError):
        BiasReport(r_bias=0.0, t_bias=0.0, o_bias=0.7)
    with pytest.raises(ValueError):
        BiasReport(r_bias=-0.2, t_bias=0.0, o_bias=0.0)
    rep = BiasReport(r_bias=0.1, t_bias=0.1, o_bias=0.25)
    assert rep.o_bias == 0.25


def test_bias_report_contents():
    pts = sample(four_point_disk(), 4000, seed=9)
    rep = bias_report(pts, [0.0, 0.0])
    assert set(rep.method_notes) == {"r_bias", "t_bias", "o_bias"}
    assert "sweep" in rep.method_notes["t_bias"]
    assert rep.o_bias == omb_general(empirical_sign_measure(pts, [0.0, 0.0]))
    assert rep.r_bias <= rep.t_bias + 1e-9
    rep3 = bias_report(np.random.default_rng(1).standard_normal((200, 3)), np.zeros(3))
    assert "sampled" in rep3.method_notes["t_bias"]


def test_bias_report_handles_center_ties():
    # exact ties at the center become zero patterns, resolved by dispersal
    pts = np.array([[0.0, 1.0], [0.0, -1.0], [1.0, 0.5], [-1.0, -0.5]])
    rep = bias_report(pts, [0.0, 0.0])
    assert rep.o_bias <= 0.5


SYMMETRY_N = 100_000


def test_zero_bias_for_sign_symmetric_samples():
    """Independent random signs zero out every orthant imbalance."""
    rng = np.random.default_rng(101)
    mags = np.abs(rng.standard_normal((SYMMETRY_N, 2)))
    signs = rng.choice([-1.0, 1.0], size=(SYMMETRY_N, 2))
    pts = mags * signs
    rep = bias_report(pts, [0.0, 0.0])
    assert rep.o_bias <= 0.01
    assert rep.r_bias <= 0.01
    assert rep.t_bias <= 0.01


def test_zero_r_bias_for_marginally_symmetric_sample():
    # tilted quadrant weights keep both marginals symmetric while the
    # quadrants themselves are far from uniform
    pts = sample(make_distribution("tilted-gaussian"), SYMMETRY_N, seed=103)
    rep = bias_report(pts, [0.0, 0.0])
    assert rep.r_bias <= 0.01
    assert rep.o_bias >= 0.2


def test_zero_t_bias_for_centrally_symmetric_sample():
    # strong correlation empties two quadrants without breaking x -> -x symmetry
    rng = np.random.default_rng(107)
    cov = np.array([[1.0, 0.8], [0.8, 1.0]])
    pts = rng.multivariate_normal([0.0, 0.0], cov, size=SYMMETRY_N)
    rep = bias_report(pts, [0.0, 0.0])
    assert rep.t_bias <= 0.01
    assert rep.r_bias <= 0.01
    assert rep.o_bias >= 0.25


def test_r_bias_within_sampling_slack_of_o_bias():
    # for continuous samples the coordinate bias cannot exceed the orthant
    # bias by more than sampling noise
    slack = 3.0 * math.sqrt(math.log(4 * 2) / SYMMETRY_N)
    for seed, dist in ((5, make_distribution("gaussian", d=2)), (7, four_point_disk())):
        pts = sample(dist, SYMMETRY_N, seed=seed)
        rep = bias_report(pts, [0.0, 0.0])
        assert rep.r_bias <= rep.o_bias + slack
