import math

import numpy as np
import pytest

import blipsim as bs


# ---------------------------------------------------------------------------
# closed-form amplitude table


def test_fresnel_rates_known_values():
    r = bs.fresnel_rates(2.0)
    assert r.t_plus == r.t_minus == pytest.approx(0.9428090415820634, rel=1e-15)
    assert r.t_plus == pytest.approx(2.0 * math.sqrt(2.0) / 3.0, rel=1e-15)
    assert r.r_minus == pytest.approx(1.0 / 3.0, rel=1e-15)
    assert r.r_plus == pytest.approx(-1.0 / 3.0, rel=1e-15)
    unity = bs.fresnel_rates(1.0)
    assert unity.t_plus == 1.0 and unity.r_plus == 0.0
    with pytest.raises(bs.DomainError):
        bs.fresnel_rates(0.0)


def test_rates_accessors():
    r = bs.fresnel_rates(4.0)
    assert r.t(+1) == r.t_plus and r.t(-1) == r.t_minus
    assert r.r(+1) == r.r_plus and r.r(-1) == r.r_minus


def test_omega_from_n_known_values():
    assert bs.omega_from_n(2.0).omega == pytest.approx(-0.34314575050761986j, rel=1e-15)
    assert bs.omega_from_n(4.0).omega == pytest.approx(-2j / 3.0, rel=1e-15)
    assert bs.omega_from_n(1.0).omega == 0.0
    assert bs.omega_from_n(2.0, c0=3.0).omega == pytest.approx(3 * -0.34314575050761986j, rel=1e-15)


def test_point_rates_match_boundary_rates():
    """The resummed point-scatterer amplitudes reproduce the boundary table."""
    for n in np.linspace(1.0, 10.0, 19):
        a = bs.rates_from_omega(bs.omega_from_n(float(n)))
        b = bs.fresnel_rates(float(n))
        assert abs(a.t_plus - b.t_plus) < 1e-14
        assert abs(a.t_minus - b.t_minus) < 1e-14
        assert abs(a.r_plus - b.r_plus) < 1e-14
        assert abs(a.r_minus - b.r_minus) < 1e-14


def test_stokes_residuals_vanish():
    rng = np.random.default_rng(99)
    couplings = [bs.omega_from_n(n) for n in (1.0, 1.5, 2.0, 5.0, 9.5)]
    for _ in range(25):
        w = rng.uniform(0.05, 1.9) * np.exp(2j * math.pi * rng.uniform())
        couplings.append(bs.MirrorCoupling(omega=complex(w)))
    for mc in couplings:
        rates = bs.rates_from_omega(mc)
        cross, d_minus, d_plus = bs.stokes_residuals(rates)
        assert cross < 1e-14
        assert d_minus < 1e-14
        assert d_plus < 1e-14


def test_mirror_coupling_parameters():
    mc = bs.MirrorCoupling(omega=-0.6j, c_ref=1.0)
    assert mc.q == pytest.approx(0.3, rel=1e-15)
    assert mc.is_resummable
    strong = bs.MirrorCoupling(omega=4.0, c_ref=1.0)  # constructible on purpose
    assert strong.q == 2.0 and not strong.is_resummable
    with pytest.raises(bs.DivergenceError):
        bs.rates_from_omega(strong)
    with pytest.raises(bs.DomainError):
        bs.MirrorCoupling(omega=1.0, c_ref=0.0)
    with pytest.raises(bs.DomainError):
        bs.MirrorCoupling(omega=complex(math.nan, 0.0))


# ---------------------------------------------------------------------------
# Born series partial sums


def test_dyson_partial_sums_structure():
    mc = bs.MirrorCoupling(omega=-2j * 0.3)
    sums = bs.dyson_partial_sums(mc, 5)
    assert len(sums) == 5
    t0, r0 = sums[0]
    assert t0 == 1.0  # zeroth order transmits untouched
    assert r0 == pytest.approx(-1j * mc.omega, rel=1e-15)
    exact = bs.rates_from_omega(mc)
    t_last, r_last = sums[-1]
    assert abs(t_last - exact.t_plus) < abs(t0 - exact.t_plus)
    assert abs(r_last - exact.r_plus) < abs(r0 - exact.r_plus)
    with pytest.raises(bs.DomainError):
        bs.dyson_partial_sums(mc, 0)


def test_dyson_frozen_remainder_and_bound():
    """Frozen case q = 0.17157: the 6th partial sum misses the closed form
    by 3.720557e-11.  That sits inside the geometric tail bound
    2 q^14/(1-q^2) = 3.946252e-11 but OUTSIDE the bare power q^14 =
    1.915045e-11, so the bare power is not a valid error estimate."""
    q = 0.17157
    mc = bs.MirrorCoupling(omega=-2j * q)
    sums = bs.dyson_partial_sums(mc, 7)
    exact = bs.rates_from_omega(mc)
    err_t = abs(sums[6][0] - exact.t_plus)
    assert err_t == pytest.approx(3.720557e-11, rel=1e-5)
    bound = bs.dyson_remainder_bound(mc, 6, "t")
    assert bound == pytest.approx(3.946252e-11, rel=1e-5)
    assert bound == pytest.approx(2.0 * q**14 / (1.0 - q * q), rel=1e-12)
    assert err_t <= bound
    assert err_t > q**14


def test_dyson_bound_holds_at_every_order():
    """Every order obeys the analytic tail bound up to the rounding floor
    (the float remainder saturates near 1 ulp while the bound keeps
    shrinking, e.g. q = 0.1 beyond order 6)."""
    floor = bs.scattering.REMAINDER_ROUNDING_FLOOR
    for q in (0.1, 0.17157, 0.5, 0.9):
        mc = bs.MirrorCoupling(omega=-2j * q)
        exact = bs.rates_from_omega(mc)
        for order, (t_part, r_part) in enumerate(bs.dyson_partial_sums(mc, 12)):
            assert abs(t_part - exact.t_plus) <= bs.dyson_remainder_bound(mc, order, "t") + floor
            assert abs(r_part - exact.r_plus) <= bs.dyson_remainder_bound(mc, order, "r") + floor


def test_dyson_divergence_detected():
    """At q >= 1 the increments stop shrinking; sums are still computable."""
    for q in (1.0, 1.5):
        mc = bs.MirrorCoupling(omega=-2j * q)
        sums = bs.dyson_partial_sums(mc, 8)
        steps = [abs(sums[i + 1][0] - sums[i][0]) for i in range(len(sums) - 1)]
        assert all(b >= a - 1e-15 for a, b in zip(steps, steps[1:]))
        assert steps[-1] >= 2.0 - 1e-12
        assert math.isinf(bs.dyson_remainder_bound(mc, 3, "t"))
        with pytest.raises(bs.DivergenceError):
            bs.rates_from_omega(mc)


def test_dyson_remainder_bound_guards():
    mc = bs.MirrorCoupling(omega=-2j * 0.3)
    with pytest.raises(bs.DomainError):
        bs.dyson_remainder_bound(mc, -1, "t")
    with pytest.raises(bs.DomainError):
        bs.dyson_remainder_bound(mc, 2, "x")


# ---------------------------------------------------------------------------
# beamsplitter map (single medium)


def test_beamsplitter_splits_and_conserves(rig_packet, ref_medium):
    rates = bs.rates_from_omega(bs.MirrorCoupling(omega=-2j * 0.3))
    out = bs.beamsplitter_scatter(rig_packet, rates, ref_medium, t_final=140.0)
    assert out.prob_t == pytest.approx(abs(rates.t_plus) ** 2, rel=1e-9)
    assert out.prob_r == pytest.approx(abs(rates.r_plus) ** 2, rel=1e-9)
    assert out.prob_t + out.prob_r == pytest.approx(1.0, abs=1e-9)
    assert out.transmitted.channels() == (bs.Channel(1, "H"),)
    assert out.reflected.channels() == (bs.Channel(-1, "H"),)
    assert out.asymptotic and out.resampling_drift == 0.0
    # transmitted keeps moving right; reflected is the mirror image
    assert bs.centroid(out.transmitted) == pytest.approx(80.0, abs=1e-6)
    assert bs.centroid(out.reflected) == pytest.approx(-80.0, abs=1e-6)


def test_beamsplitter_spectrum_untouched(rig_grid, rig_packet):
    """No wavenumber rescaling at a point coupling: |psi~| is preserved
    branchwise up to the constant amplitudes."""
    rates = bs.rates_from_omega(bs.MirrorCoupling(omega=-2j * 0.3))
    out = bs.beamsplitter_scatter(rig_packet, rates, bs.Medium.reference(), t_final=140.0)
    phi_in = np.abs(bs.to_momentum(rig_packet).amp[bs.Channel(1, "H")])
    phi_t = np.abs(bs.to_momentum(out.transmitted).amp[bs.Channel(1, "H")])
    phi_r = np.abs(bs.to_momentum(out.reflected).amp[bs.Channel(-1, "H")])
    assert np.max(np.abs(phi_t - abs(rates.t_plus) * phi_in)) < 1e-12
    assert np.max(np.abs(phi_r - abs(rates.r_plus) * phi_in)) < 1e-12


# ---------------------------------------------------------------------------
# boundary map (two media)


def test_interface_air_to_medium_expectations(rig_packet, ref_medium, glass):
    n = 2.0
    out = bs.interface_scatter(rig_packet, n, t_final=140.0)
    assert out.prob_t == pytest.approx(8.0 / 9.0, rel=1e-9)
    assert out.prob_r == pytest.approx(1.0 / 9.0, rel=1e-9)
    assert out.prob_t + out.prob_r == pytest.approx(1.0, abs=1e-9)

    media = {+1: glass, -1: ref_medium}
    total = bs.combine(out.transmitted, out.reflected)
    vals = bs.branch_expectations(total, media)
    assert vals["energy"] == pytest.approx(30.0, rel=1e-9)
    assert vals["dyn_momentum"] == pytest.approx(30.0 * (3 * n - 1) / (n + 1), rel=1e-9)
    # transmitted spectral peak sits at n*k0 within one bin
    phi_t = bs.to_momentum(out.transmitted).amp[bs.Channel(1, "H")]
    k_peak = rig_packet.grid.k[int(np.argmax(np.abs(phi_t)))]
    assert abs(k_peak - n * 30.0) <= rig_packet.grid.dk


def test_interface_medium_to_air_expectations(rig_grid, ref_medium, glass):
    n = 2.0
    p = bs.gaussian_packet(rig_grid, (-1, "H"), x0=30.0, k0=30.0, sigma=2.0)
    out = bs.interface_scatter(p, n, t_final=150.0)
    assert out.prob_t + out.prob_r == pytest.approx(1.0, abs=1e-9)
    media = {+1: glass, -1: ref_medium}
    total = bs.combine(out.transmitted, out.reflected)
    vals = bs.branch_expectations(total, media)
    assert vals["energy"] == pytest.approx(15.0, rel=1e-9)  # hbar c_glass k0
    p_in = -30.0  # s = -1 carrier
    assert vals["dyn_momentum"] == pytest.approx(p_in * (3 - n) / (n + 1), rel=1e-9)
    # transmitted (still s = -1, now in the fast medium) peaks at k0/n
    phi_t = bs.to_momentum(out.transmitted).amp[bs.Channel(-1, "H")]
    k_peak = rig_grid.k[int(np.argmax(np.abs(phi_t)))]
    assert abs(k_peak - 30.0 / n) <= rig_grid.dk
    # reflected flipped to s = +1 and stays in the slow medium
    assert out.reflected.channels() == (bs.Channel(1, "H"),)
    assert bs.centroid(out.reflected) == pytest.approx(0.5 * (150.0 - 60.0), abs=1e-3)


def test_interface_keeps_wavenumber_sign(rig_grid):
    """A right-mover with negative carrier still transmits to negative
    carrier: rescaling never moves weight across k = 0."""
    p = bs.gaussian_packet(rig_grid, (+1, "H"), x0=-60.0, k0=-30.0, sigma=2.0)
    out = bs.interface_scatter(p, 2.0, t_final=140.0)
    grid = rig_grid
    phi_t = bs.to_momentum(out.transmitted).amp[bs.Channel(1, "H")]
    pos_mass = float(np.sum(np.abs(phi_t[grid.k > 0]) ** 2)) * grid.dk
    assert pos_mass < 1e-20
    k_peak = grid.k[int(np.argmax(np.abs(phi_t)))]
    assert abs(k_peak - (-60.0)) <= grid.dk
    vals = bs.branch_expectations(
        bs.combine(out.transmitted, out.reflected),
        {+1: bs.Medium.from_index(2.0), -1: bs.Medium.reference()},
    )
    assert vals["dyn_momentum"] == pytest.approx(-30.0 * 5.0 / 3.0, rel=1e-9)


def test_interface_unit_index_is_free_flight(rig_packet):
    out = bs.interface_scatter(rig_packet, 1.0, t_final=140.0)
    assert out.prob_r == 0.0
    assert out.prob_t == pytest.approx(1.0, abs=1e-12)
    assert out.resampling_drift == 0.0
    assert bs.centroid(out.transmitted) == pytest.approx(80.0, abs=1e-6)


def test_double_transition_recovers_shape(rig_grid, rig_packet, ref_medium, glass):
    """Passing into the medium and back out restores the spectral shape."""
    first = bs.interface_scatter(rig_packet, 2.0, t_final=140.0)
    # bring the transmitted branch back to the left of a second boundary
    inside = bs.evolve_free(first.transmitted, glass, -160.0)
    assert bs.centroid(inside) == pytest.approx(-40.0, abs=1e-6)
    second = bs.interface_scatter(
        inside, 0.5, t_final=120.0, left=glass, right=ref_medium
    )
    phi_in = np.abs(bs.to_momentum(rig_packet).amp[bs.Channel(1, "H")])
    phi_out = np.abs(bs.to_momentum(second.transmitted).amp[bs.Channel(1, "H")])
    # compare normalized moduli: all phases (propagation, amplitudes) drop out
    overlap = float(np.sum(phi_in * phi_out)) / math.sqrt(
        float(np.sum(phi_in**2)) * float(np.sum(phi_out**2))
    )
    assert overlap == pytest.approx(1.0, abs=1e-8)
    k_peak = rig_grid.k[int(np.argmax(phi_out))]
    assert abs(k_peak - 30.0) <= rig_grid.dk


def test_interface_media_consistency_checks(rig_packet, ref_medium, glass):
    out = bs.interface_scatter(rig_packet, 2.0, t_final=140.0, left=ref_medium, right=glass)
    assert out.prob_t == pytest.approx(8.0 / 9.0, rel=1e-9)
    with pytest.raises(bs.ConsistencyError):
        bs.interface_scatter(rig_packet, 3.0, t_final=140.0, left=ref_medium, right=glass)
    with pytest.raises(bs.ConsistencyError):
        bs.interface_scatter(rig_packet, 2.0, t_final=140.0, left=ref_medium)
    with pytest.raises(bs.DomainError):
        bs.interface_scatter(rig_packet, -1.0, t_final=140.0)


def test_support_guard_rules(rig_grid, rig_packet):
    # straddling the scatterer
    with pytest.raises(bs.SupportGuardError):
        bs.interface_scatter(
            bs.gaussian_packet(rig_grid, (+1, "H"), x0=0.0, k0=30.0, sigma=2.0),
            2.0,
            t_final=140.0,
        )
    # right-mover on the wrong side
    with pytest.raises(bs.SupportGuardError):
        bs.interface_scatter(
            bs.gaussian_packet(rig_grid, (+1, "H"), x0=60.0, k0=30.0, sigma=2.0),
            2.0,
            t_final=140.0,
        )
    # left-mover on the wrong side
    with pytest.raises(bs.SupportGuardError):
        bs.interface_scatter(
            bs.gaussian_packet(rig_grid, (-1, "H"), x0=-60.0, k0=30.0, sigma=2.0),
            2.0,
            t_final=140.0,
        )


def test_not_asymptotic_handling(rig_packet):
    with pytest.raises(bs.NotAsymptoticError):
        bs.interface_scatter(rig_packet, 2.0, t_final=61.0)
    out = bs.interface_scatter(rig_packet, 2.0, t_final=61.0, allow_partial=True)
    assert not out.asymptotic
    assert out.guard_fraction > bs.scattering.GUARD_TOL
    # probabilities are still the branch norms and still sum to one
    assert out.prob_t + out.prob_r == pytest.approx(1.0, abs=1e-9)


def test_band_edge_overflow_rejected(rig_grid):
    """Transmission would compress the spectrum past the band edge."""
    p = bs.gaussian_packet(rig_grid, (+1, "H"), x0=-60.0, k0=90.0, sigma=2.0)
    with pytest.raises(bs.InterpolationAccuracyError):
        bs.interface_scatter(p, 2.0, t_final=140.0)


def test_outcome_records_context(rig_packet, ref_medium):
    out = bs.interface_scatter(rig_packet, 2.0, t_final=140.0, tag="demo")
    assert out.scenario_tag == "demo"
    assert out.t_final == 140.0
    assert out.left_medium.n == 1.0
    assert out.right_medium.n == 2.0
    assert out.rates.t_plus == pytest.approx(bs.fresnel_rates(2.0).t_plus, rel=1e-15)
