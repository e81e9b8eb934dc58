import numpy as np
import pytest

from dhslab.envelope import (
    Envelope,
    band_norms,
    c_geq,
    convergence_study,
    regularize,
    sharp_envelope,
)
from dhslab.grid import Grid, SpectralField, make_field, norm, zero_field
from dhslab.lp import band_count
from dhslab.stepper import SolverConfig

from oracles import smooth_random

TWOPI = 2.0 * np.pi


def single_mode(grid, k, amp=1.0):
    c = np.zeros(grid.n, dtype=np.complex128)
    j = grid.mode_numbers()
    c[j == k] = amp * grid.n / 2.0
    c[j == -k] = amp * grid.n / 2.0
    return SpectralField.from_coeffs(grid, c)


def banded_field(grid, amps):
    """One cosine mode per dyadic band: mode 2^k gets amplitude amps[k]."""
    c = np.zeros(grid.n, dtype=np.complex128)
    j = grid.mode_numbers()
    for k, a in enumerate(amps):
        m = 2**k
        c[j == m] = a * grid.n / 2.0
        c[j == -m] = a * grid.n / 2.0
    return SpectralField.from_coeffs(grid, c)


def envelope_oracle(base, delta):
    kk = np.arange(len(base))
    return np.array([np.max(2.0 ** (-delta * np.abs(k - kk)) * base) for k in kk])


def test_zero_data():
    g = Grid(256, TWOPI)
    env = sharp_envelope(zero_field(g))
    assert np.all(env.base == 0.0) and np.all(env.c == 0.0)
    assert c_geq(env, 3) == 0.0


def test_single_band_tent():
    # all data in band 5: the envelope is the tent 2^(-delta |k-5|) a_5
    g = Grid(256, TWOPI)
    env = sharp_envelope(single_mode(g, 32), delta=0.5)
    k5 = env.base[5]
    assert k5 > 0.0
    others = np.delete(env.base, 5)
    assert np.max(others) < 1e-10 * k5
    kk = np.arange(len(env.c))
    assert env.c == pytest.approx(k5 * 2.0 ** (-0.5 * np.abs(kk - 5)), rel=1e-9)


def test_envelope_matches_max_formula_and_flattens_fast_decay():
    # a_k ~ 2^(-k) decays faster than the delta = 1/2 slack allows; the
    # sharp construction flattens it to the 2^(-k/2) tent from band 0
    g = Grid(512, TWOPI)
    kmax = band_count(g)
    u = banded_field(g, [2.0 ** (-k * (2.0 - 0.0)) for k in range(kmax)])  # tuned below
    env = sharp_envelope(u, delta=0.5)
    assert env.c == pytest.approx(envelope_oracle(env.base, 0.5), rel=1e-12)

    # construct a_k = 2^(-k) exactly in the h1s norm by amplitude choice
    s = 0.75
    amps = [2.0 ** (-k) / (norm(single_mode(g, 2**k), "hdot", 1.0 + s)) for k in range(1, kmax)]
    u2 = banded_field(g, [0.0] + amps)
    env2 = sharp_envelope(u2, delta=0.5, s=s)
    inner_bands = np.arange(1, kmax)
    assert env2.base[1:kmax] == pytest.approx(2.0 ** (-inner_bands.astype(float)), rel=1e-9)
    # oracle: max formula gives the flattened tent, anchored at band 1
    expect = envelope_oracle(env2.base, 0.5)
    assert env2.c == pytest.approx(expect, rel=1e-12)
    assert env2.c[4] == pytest.approx(2.0 ** (-1.0) * 2.0 ** (-0.5 * 3), rel=1e-9)


def test_envelope_invariants():
    g = Grid(256, TWOPI)
    u = smooth_random(g, 17, decay=1.4)
    for delta in (0.3, 0.5, 0.8):
        env = sharp_envelope(u, delta=delta)
        assert np.all(env.c >= env.base - 1e-15)
        kk = np.arange(len(env.c))
        for k in kk:
            ratio = env.c[k] / env.c
            assert np.all(ratio <= 2.0 ** (delta * np.abs(k - kk)) * (1 + 1e-12))
        cdelta = 2.0 / (1.0 - 2.0 ** (-2 * delta)) - 1.0
        assert np.sum(env.c**2) <= cdelta * np.sum(env.base**2) * (1 + 1e-12)


def test_envelope_validation():
    g = Grid(256, TWOPI)
    with pytest.raises(ValueError):
        sharp_envelope(zero_field(g), delta=1.0)
    with pytest.raises(ValueError):
        sharp_envelope(zero_field(g), norm_kind="l2")
    with pytest.raises(ValueError):
        Envelope(delta=0.5, base=np.zeros(3), c=np.zeros(3), norm_kind="bad", s=0.75)


def test_band_norms_h1x_kind():
    g = Grid(256, TWOPI)
    u = single_mode(g, 8, amp=0.7)
    a = band_norms(u, norm_kind="h1x")
    # H^1 norm of u_x on band 3: sqrt(Hdot1^2 + Hdot2^2)
    expect = np.hypot(norm(u, "hdot", 1.0), norm(u, "hdot", 2.0))
    assert a[3] == pytest.approx(expect, rel=1e-9)


def test_regularize_identity_and_kill():
    g = Grid(256, TWOPI)
    u = smooth_random(g, 4, decay=1.5)
    kmax = band_count(g)
    out = regularize(u, kmax + 2)
    assert np.max(np.abs(out.samples - u.samples)) < 1e-13

    h = 3
    probe = single_mode(g, 2 ** (h + 2))
    assert np.max(np.abs(regularize(probe, h).samples)) < 1e-14

    with pytest.raises(ValueError):
        regularize(u, 0)


def test_regularize_difference_bounds():
    # || u^{h+1} - u^h ||_{Hdot^s} <= C 2^{-h} c_h with stable C
    g = Grid(512, TWOPI)
    s = 0.75
    u = smooth_random(g, 23, decay=1.9)
    env = sharp_envelope(u, delta=0.5, s=s)
    consts = []
    for h in (3, 4, 5, 6):
        d = regularize(u, h + 1) - regularize(u, h)
        consts.append(norm(d, "hdot", s) / (2.0 ** (-h) * env.c[h]))
    print("difference-bound constants:", [f"{c:.3f}" for c in consts])
    assert all(np.isfinite(c) for c in consts)
    assert max(consts) < 100.0


def test_regularized_high_frequency_bound():
    # || u^h ||_{Hdot^1 ∩ Hdot^{2+s}} <= C 2^h c_h uniformly in h
    g = Grid(512, TWOPI)
    s = 0.75
    u = smooth_random(g, 29, decay=1.9)
    env = sharp_envelope(u, delta=0.5, s=s)
    consts = []
    for h in (3, 4, 5, 6):
        uh = regularize(u, h)
        val = max(norm(uh, "hdot", 1.0), norm(uh, "hdot", 2.0 + s))
        consts.append(val / (2.0**h * env.c[h]))
    print("high-frequency-bound constants:", [f"{c:.3f}" for c in consts])
    assert max(consts) / min(consts) < 4.0


def test_c_geq_monotone():
    g = Grid(512, TWOPI)
    env = sharp_envelope(smooth_random(g, 2, decay=1.2))
    tails = [c_geq(env, h) for h in range(len(env.c) + 1)]
    assert all(tails[i + 1] <= tails[i] + 1e-15 for i in range(len(tails) - 1))
    assert tails[-1] == 0.0


def test_convergence_study_band_limited_data():
    # data living below every regularization scale: all distances vanish
    g = Grid(256, TWOPI)
    u = single_mode(g, 3, amp=0.2)  # band 2 at most
    cfg = SolverConfig(g, dt=1e-3, t_end=0.05, monitor_stride=10)
    study = convergence_study(u, [3, 4], cfg, reference_h=6)
    for row in study.rows:
        assert row.distance < 1e-11
        assert row.ratio == 0.0 or row.ratio < 1e-6


def test_convergence_study_requires_fine_reference():
    g = Grid(256, TWOPI)
    cfg = SolverConfig(g, dt=1e-3, t_end=0.05)
    with pytest.raises(ValueError):
        convergence_study(zero_field(g), [3, 4], cfg, reference_h=4)


def test_convergence_study_distances_track_tail():
    g = Grid(256, TWOPI)
    u = 0.3 * smooth_random(g, 42, decay=2.2)
    cfg = SolverConfig(g, dt=5e-4, t_end=0.1, monitor_stride=50)
    study = convergence_study(u, [3, 4, 5], cfg, reference_h=7, workers=2)
    dists = [r.distance for r in study.rows]
    assert all(dists[i + 1] <= dists[i] * 1.05 for i in range(len(dists) - 1))
    tails = [r.c_geq_h for r in study.rows]
    assert all(tails[i + 1] <= tails[i] + 1e-15 for i in range(len(tails) - 1))
    rats = [r.ratio for r in study.rows if r.ratio > 0]
    assert rats and max(rats) / min(rats) < 4.0
