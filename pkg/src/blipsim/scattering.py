"""Scattering at a point mirror and at a dielectric half-space boundary.

A point scatterer at ``x = 0`` with coupling strength ``Omega`` has the
resummed (all-orders Born series) amplitudes

    q   = |Omega| / (2 c)
    t_s = (1 - q^2) / (1 + q^2)
    r_+ = (-i Omega   / c) / (1 + q^2)
    r_- = (-i Omega^* / c) / (1 + q^2)  =  -conj(r_+)

which satisfy the Stokes relations ``|r_s|^2 + |t_s|^2 = 1`` and
``r_-^* t_+ + t_-^* r_+ = 0`` identically.  The series converges only for
``q < 1``; the partial sums are exposed so the divergence beyond that
radius can be observed directly.

A boundary between media with speed ratio ``n = c_left / c_right``
reproduces the normal-incidence amplitude table

    r_- = (n - 1)/(n + 1)    r_+ = -(n - 1)/(n + 1)    t_s = 2 sqrt(n)/(n + 1)

via the purely imaginary coupling ``Omega(n) = -2 i c_left (sqrt(n) - 1)/(sqrt(n) + 1)``.

The scattering maps are asymptotic: they take an in-packet whose channels
approach ``x = 0`` (direction ``+1`` from the left, ``-1`` from the right)
and return the out-branches at a time ``t_final`` by which every branch has
cleared the scatterer.  Transmission through the boundary rescales
wavenumbers by the index ratio, ``psi~(k) -> psi~(k/n)`` going in and
``psi~(n k)`` coming out, with the matching ``1/sqrt(n)`` amplitude factors;
the sign of ``k`` is never changed.  Wavenumber rescaling is evaluated on
the band-limited interpolant (see :mod:`blipsim.spectral`) and its norm
drift is measured and bounded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ConsistencyError,
    DivergenceError,
    DomainError,
    DomainExitError,
    InterpolationAccuracyError,
    NotAsymptoticError,
    SupportGuardError,
)
from .lattice import BlipWavePacket, Channel, Medium, _support_interval, norm
from .spectral import (
    SpectralWavePacket,
    _forward,
    sample_spectrum_scaled,
    to_position,
)

__all__ = [
    "ScatterRates",
    "MirrorCoupling",
    "ScatterOutcome",
    "rates_from_omega",
    "stokes_residuals",
    "dyson_partial_sums",
    "dyson_remainder_bound",
    "fresnel_rates",
    "omega_from_n",
    "beamsplitter_scatter",
    "interface_scatter",
]

#: Half-width of the guard band around x = 0, in grid cells.
GUARD_HALF_CELLS = 4
#: Largest tolerated fraction of channel weight inside the band / on the wrong side.
GUARD_TOL = 1e-10
#: Largest tolerated relative norm drift introduced by wavenumber rescaling.
RESAMPLE_DRIFT_TOL = 1e-8
#: Channel weights below this fraction of the input are not guard-checked.
NEGLIGIBLE_WEIGHT = 1e-14


@dataclass(frozen=True)
class ScatterRates:
    """Transmission/reflection amplitudes per incidence direction."""

    t_minus: complex
    t_plus: complex
    r_minus: complex
    r_plus: complex

    def t(self, s: int) -> complex:
        return self.t_plus if s > 0 else self.t_minus

    def r(self, s: int) -> complex:
        return self.r_plus if s > 0 else self.r_minus


@dataclass(frozen=True)
class MirrorCoupling:
    """Point-scatterer coupling ``Omega`` and the reference speed it is quoted at.

    Couplings with ``|Omega| >= 2 c_ref`` are constructible on purpose: the
    partial sums must be able to demonstrate the divergence of the Born
    series there.  The closed-form rates refuse them.
    """

    omega: complex
    c_ref: float = 1.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.c_ref) and self.c_ref > 0):
            raise DomainError(f"c_ref must be positive and finite, got {self.c_ref!r}")
        w = complex(self.omega)
        if not (math.isfinite(w.real) and math.isfinite(w.imag)):
            raise DomainError(f"omega must be finite, got {self.omega!r}")
        object.__setattr__(self, "omega", w)

    @property
    def q(self) -> float:
        """Series expansion parameter ``|Omega| / (2 c_ref)``."""
        return abs(self.omega) / (2.0 * self.c_ref)

    @property
    def is_resummable(self) -> bool:
        return self.q < 1.0


def rates_from_omega(mc: MirrorCoupling) -> ScatterRates:
    """Resummed amplitudes of the point scatterer; requires ``q < 1``."""
    q = mc.q
    if q >= 1.0:
        raise DivergenceError(
            f"|Omega|/(2 c) = {q} >= 1: the Born series does not converge"
        )
    denom = 1.0 + q * q
    t = complex((1.0 - q * q) / denom)
    r_plus = (-1j * mc.omega / mc.c_ref) / denom
    return ScatterRates(t_minus=t, t_plus=t, r_minus=-r_plus.conjugate(), r_plus=r_plus)


def stokes_residuals(rates: ScatterRates) -> tuple[float, float, float]:
    """Deviations from the Stokes identities (all zero for physical rates).

    Returns ``(|r_-^* t_+ + t_-^* r_+|, |1 - |r_-|^2 - |t_-|^2|,
    |1 - |r_+|^2 - |t_+|^2|)``.
    """
    cross = abs(rates.r_minus.conjugate() * rates.t_plus + rates.t_minus.conjugate() * rates.r_plus)
    d_minus = abs(1.0 - abs(rates.r_minus) ** 2 - abs(rates.t_minus) ** 2)
    d_plus = abs(1.0 - abs(rates.r_plus) ** 2 - abs(rates.t_plus) ** 2)
    return (cross, d_minus, d_plus)


def dyson_partial_sums(mc: MirrorCoupling, n_terms: int) -> list[tuple[complex, complex]]:
    """Partial sums ``(t_N, r_N)`` of the Born series for ``N = 0 .. n_terms-1``.

    ``t_N = 1 + 2 sum_{m=1..N} (-q^2)^m`` and ``r_N = (-i Omega/c) sum_{m=0..N}
    (-q^2)^m`` (the ``s = +1`` reflection row).  ``N = 0`` is free propagation
    plus the single-bounce reflection.  Valid for any coupling; for
    ``q >= 1`` the sums visibly fail to settle.
    """
    if not (isinstance(n_terms, (int, np.integer)) and n_terms >= 1):
        raise DomainError(f"n_terms must be an integer >= 1, got {n_terms!r}")
    q2 = mc.q**2
    r0 = -1j * mc.omega / mc.c_ref
    out: list[tuple[complex, complex]] = []
    t_acc = 1.0 + 0.0j
    geom_term = 1.0
    geom_acc = 1.0
    for order in range(int(n_terms)):
        if order > 0:
            geom_term *= -q2
            t_acc += 2.0 * geom_term
            geom_acc += geom_term
        out.append((complex(t_acc), complex(r0 * geom_acc)))
    return out


#: Additive allowance when comparing float partial sums against
#: :func:`dyson_remainder_bound`: once the analytic tail drops below the
#: accumulation roundoff (~20 ulps of the O(1) sums), the measured remainder
#: saturates at the rounding floor instead of following the bound down.
REMAINDER_ROUNDING_FLOOR = 4e-15


def dyson_remainder_bound(mc: MirrorCoupling, order: int, component: str = "t") -> float:
    """Geometric tail bound on ``|t_N - t|`` (or ``|r_N - r|``) at partial-sum order ``N``.

    ``2 q^(2N+2) / (1 - q^2)`` for the transmission row; one more power of
    ``q`` for the reflection row.  Infinite for ``q >= 1``.  This is the
    exact-arithmetic bound; numerical comparisons should allow
    :data:`REMAINDER_ROUNDING_FLOOR` on top of it.
    """
    if order < 0:
        raise DomainError(f"order must be >= 0, got {order!r}")
    if component not in ("t", "r"):
        raise DomainError(f"component must be 't' or 'r', got {component!r}")
    q = mc.q
    if q >= 1.0:
        return math.inf
    power = 2 * order + 2 + (1 if component == "r" else 0)
    return 2.0 * q**power / (1.0 - q * q)


def fresnel_rates(n: float) -> ScatterRates:
    """Normal-incidence boundary amplitudes for speed ratio ``n``."""
    if not (isinstance(n, (int, float)) and math.isfinite(n) and n > 0):
        raise DomainError(f"refractive index must be positive and finite, got {n!r}")
    rho = (n - 1.0) / (n + 1.0)
    t = 2.0 * math.sqrt(n) / (1.0 + n)
    return ScatterRates(
        t_minus=complex(t), t_plus=complex(t), r_minus=complex(rho), r_plus=complex(-rho)
    )


def omega_from_n(n: float, c0: float = 1.0) -> MirrorCoupling:
    """Coupling whose resummed rates equal :func:`fresnel_rates` for this ``n``.

    ``Omega(n) = -2 i c0 (sqrt(n) - 1)/(sqrt(n) + 1)``, on the negative
    imaginary axis for ``n > 1``.
    """
    if not (isinstance(n, (int, float)) and math.isfinite(n) and n > 0):
        raise DomainError(f"refractive index must be positive and finite, got {n!r}")
    root = math.sqrt(n)
    return MirrorCoupling(omega=-2j * c0 * (root - 1.0) / (root + 1.0), c_ref=c0)


@dataclass(frozen=True)
class ScatterOutcome:
    """Out-state of one scattering event, split into its two branches.

    ``prob_t``/``prob_r`` are the measured branch weights (probabilities for
    a unit-norm input).  After the event, direction ``+1`` channels occupy
    ``right_medium`` and direction ``-1`` channels ``left_medium``.
    ``asymptotic`` records whether every branch had fully cleared the guard
    band at ``t_final``; ``resampling_drift`` is the largest relative norm
    error introduced by wavenumber rescaling and ``guard_fraction`` the
    largest branch weight fraction still inside the band or on the wrong
    side.
    """

    transmitted: BlipWavePacket
    reflected: BlipWavePacket
    prob_t: float
    prob_r: float
    scenario_tag: str
    left_medium: Medium
    right_medium: Medium
    rates: ScatterRates
    t_final: float
    asymptotic: bool = True
    resampling_drift: float = 0.0
    guard_fraction: float = 0.0


def _support_masses(p: BlipWavePacket, ch: Channel, half_width: float) -> tuple[float, float, float]:
    """Channel weight left of, inside, and right of the guard band."""
    x = p.grid.x
    dens = np.abs(p.amp[ch]) ** 2 * p.grid.dx
    inside = (x >= -half_width) & (x <= half_width)
    left = float(np.sum(dens[x < -half_width]))
    mid = float(np.sum(dens[inside]))
    right = float(np.sum(dens[x > half_width]))
    return left, mid, right


def _check_incoming_support(p: BlipWavePacket) -> float:
    """Enforce the in-state guard; returns the total input weight."""
    if not p.amp:
        raise SupportGuardError("cannot scatter an empty packet")
    if not (p.grid.x_min < 0.0 < p.grid.x_max):
        raise SupportGuardError("the scatterer at x = 0 lies outside the grid")
    half = GUARD_HALF_CELLS * p.grid.dx
    total = 0.0
    for ch in p.amp:
        left, mid, right = _support_masses(p, ch, half)
        weight = left + mid + right
        total += weight
        if weight == 0.0:
            continue
        wrong = right if ch.s > 0 else left
        side = "x < 0" if ch.s > 0 else "x > 0"
        if mid > GUARD_TOL * weight:
            raise SupportGuardError(
                f"channel {ch} has {mid / weight:.3e} of its weight within "
                f"{half:.3g} of the scatterer"
            )
        if wrong > GUARD_TOL * weight:
            raise SupportGuardError(
                f"channel {ch} must approach from {side}; "
                f"{wrong / weight:.3e} of its weight is on the outgoing side"
            )
    if total == 0.0:
        raise SupportGuardError("cannot scatter a zero-weight packet")
    return total


def _branch_guard_fraction(branch: BlipWavePacket, input_weight: float) -> float:
    """Largest fraction of a branch channel still in-band or on the wrong side.

    After scattering the correct side is the outgoing one: ``x > 0`` for
    direction ``+1``, ``x < 0`` for ``-1``.
    """
    half = GUARD_HALF_CELLS * branch.grid.dx
    worst = 0.0
    for ch in branch.amp:
        left, mid, right = _support_masses(branch, ch, half)
        weight = left + mid + right
        if weight < NEGLIGIBLE_WEIGHT * input_weight:
            continue
        wrong = left if ch.s > 0 else right
        worst = max(worst, (mid + wrong) / weight)
    return worst


def _check_branch_domains(
    p: BlipWavePacket, left: Medium, right: Medium, t_final: float, rates: ScatterRates
) -> None:
    """Reject ``t_final`` values that would carry a branch past a grid edge.

    The map builds branches directly at ``t_final`` from spectral phases,
    so a branch pushed past an edge would wrap around periodically instead
    of failing; this transports each incident channel's support through the
    exact branch kinematics first.  For ``s = +1`` content on ``[a, b]``,
    the transmitted image is ``[a/n + c_R t, b/n + c_R t]`` and the
    reflected one ``[-b - c_L t, -a - c_L t]``; mirrored for ``s = -1``.
    Branches with exactly zero amplitude are skipped: they carry nothing
    that could wrap.
    """
    grid = p.grid
    lo_edge = grid.x_min + grid.dx
    hi_edge = grid.x_max - 2.0 * grid.dx
    n = left.c / right.c
    for ch in p.amp:
        bounds = _support_interval(p, ch)
        if bounds is None:
            continue
        a, b = bounds
        if ch.s > 0:
            images = {
                "transmitted": (a / n + right.c * t_final, b / n + right.c * t_final),
                "reflected": (-b - left.c * t_final, -a - left.c * t_final),
            }
        else:
            images = {
                "transmitted": (n * a - left.c * t_final, n * b - left.c * t_final),
                "reflected": (right.c * t_final - b, right.c * t_final - a),
            }
        amps = {"transmitted": rates.t(ch.s), "reflected": rates.r(ch.s)}
        for name, (lo, hi) in images.items():
            if amps[name] == 0:
                continue
            if lo < lo_edge or hi > hi_edge:
                raise DomainExitError(
                    f"the {name} branch of channel {ch} would span "
                    f"[{lo:.6g}, {hi:.6g}] at t = {t_final}, outside the grid "
                    f"[{grid.x_min}, {grid.x_max}); enlarge the grid or "
                    "shorten the schedule"
                )


def _finish_outcome(
    trans_amp: dict[Channel, np.ndarray],
    refl_amp: dict[Channel, np.ndarray],
    p: BlipWavePacket,
    input_weight: float,
    drift: float,
    left: Medium,
    right: Medium,
    rates: ScatterRates,
    t_final: float,
    tag: str,
    allow_partial: bool,
) -> ScatterOutcome:
    grid = p.grid
    transmitted = to_position(SpectralWavePacket(grid, trans_amp))
    reflected = to_position(SpectralWavePacket(grid, refl_amp))
    guard_fraction = max(
        _branch_guard_fraction(transmitted, input_weight),
        _branch_guard_fraction(reflected, input_weight),
    )
    asymptotic = guard_fraction <= GUARD_TOL
    if not asymptotic and not allow_partial:
        raise NotAsymptoticError(
            f"at t = {t_final} a branch still has a {guard_fraction:.3e} weight "
            "fraction at the scatterer; increase t_final"
        )
    return ScatterOutcome(
        transmitted=transmitted,
        reflected=reflected,
        prob_t=norm(transmitted),
        prob_r=norm(reflected),
        scenario_tag=tag,
        left_medium=left,
        right_medium=right,
        rates=rates,
        t_final=float(t_final),
        asymptotic=asymptotic,
        resampling_drift=drift,
        guard_fraction=guard_fraction,
    )


def beamsplitter_scatter(
    p: BlipWavePacket,
    rates: ScatterRates,
    m: Medium,
    t_final: float,
    *,
    tag: str = "",
    allow_partial: bool = False,
) -> ScatterOutcome:
    """Scatter off a point coupling inside a single medium.

    Per incident channel ``(s, pol)`` the out-state is ``t_s`` on the same
    channel plus ``r_s`` on the mirrored channel ``(-s, pol)``, both freely
    advanced to ``t_final``; no wavenumber rescaling is involved.  Raises
    :class:`DomainExitError` if a branch would leave the grid by ``t_final``.
    """
    input_weight = _check_incoming_support(p)
    t_final = float(t_final)
    _check_branch_domains(p, m, m, t_final, rates)
    grid = p.grid
    phase = np.exp(-1j * m.c * grid.k * t_final)
    trans_amp: dict[Channel, np.ndarray] = {}
    refl_amp: dict[Channel, np.ndarray] = {}
    for ch, a in p.amp.items():
        phi = _forward(grid, ch.s, a) * phase
        mirrored = Channel(-ch.s, ch.pol)
        _accumulate(trans_amp, ch, rates.t(ch.s) * phi)
        _accumulate(refl_amp, mirrored, rates.r(ch.s) * phi)
    return _finish_outcome(
        trans_amp,
        refl_amp,
        p,
        input_weight,
        0.0,
        m,
        m,
        rates,
        t_final,
        tag or f"beamsplitter(t={t_final:.6g})",
        allow_partial,
    )


def _accumulate(amp: dict[Channel, np.ndarray], ch: Channel, values: np.ndarray) -> None:
    amp[ch] = amp[ch] + values if ch in amp else values


def interface_scatter(
    p: BlipWavePacket,
    n: float,
    t_final: float,
    *,
    rates: ScatterRates | None = None,
    left: Medium | None = None,
    right: Medium | None = None,
    tag: str = "",
    allow_partial: bool = False,
) -> ScatterOutcome:
    """Scatter at the boundary with speed ratio ``n = c_left / c_right``.

    The reference medium fills ``x < 0`` and the slower one ``x > 0``;
    ``rates`` defaults to :func:`fresnel_rates`.  Per incident channel:

    * from the left (``s = +1``): transmitted ``(t_+/sqrt(n)) psi~(k/n)``
      advanced at ``c_right``; reflected ``r_+ psi~(k)`` on ``(-1, pol)``
      advanced at ``c_left``;
    * from the right (``s = -1``): transmitted ``sqrt(n) t_- psi~(n k)``
      advanced at ``c_left``; reflected ``r_- psi~(k)`` on ``(+1, pol)``
      advanced at ``c_right``.

    At ``n = 1`` with default rates this reduces exactly to free
    propagation with an empty reflected branch.  Raises
    :class:`InterpolationAccuracyError` when the rescaled spectra drift in
    norm by more than ``1e-8`` relative to the closed-form ``|t_s|^2``, and
    :class:`DomainExitError` if a branch would leave the grid by ``t_final``.
    """
    n = float(n)
    if not (math.isfinite(n) and n > 0):
        raise DomainError(f"refractive index must be positive and finite, got {n!r}")
    if (left is None) != (right is None):
        raise ConsistencyError("give both media or neither")
    if left is None:
        left = Medium.reference()
        right = Medium.from_index(n)
    else:
        assert right is not None
        ratio = left.c / right.c
        if not math.isclose(ratio, n, rel_tol=1e-12, abs_tol=0.0):
            raise ConsistencyError(
                f"media speed ratio {ratio!r} does not match n = {n!r}"
            )
    if rates is None:
        rates = fresnel_rates(n)

    input_weight = _check_incoming_support(p)
    t_final = float(t_final)
    _check_branch_domains(p, left, right, t_final, rates)
    grid = p.grid
    phase_left = np.exp(-1j * left.c * grid.k * t_final)
    phase_right = np.exp(-1j * right.c * grid.k * t_final)
    root_n = math.sqrt(n)

    trans_amp: dict[Channel, np.ndarray] = {}
    refl_amp: dict[Channel, np.ndarray] = {}
    drift = 0.0
    for ch, a in p.amp.items():
        phi = _forward(grid, ch.s, a)
        weight = float(np.sum(np.abs(phi) ** 2)) * grid.dk
        if ch.s > 0:
            scaled = phi if n == 1.0 else sample_spectrum_scaled(p, ch, 1.0 / n)
            trans = (rates.t_plus / root_n) * scaled * phase_right
            refl = rates.r_plus * phi * phase_left
            refl_ch = Channel(-1, ch.pol)
        else:
            scaled = phi if n == 1.0 else sample_spectrum_scaled(p, ch, n)
            trans = root_n * rates.t_minus * scaled * phase_left
            refl = rates.r_minus * phi * phase_right
            refl_ch = Channel(+1, ch.pol)
        if weight > 0.0:
            measured = float(np.sum(np.abs(trans) ** 2)) * grid.dk
            expected = abs(rates.t(ch.s)) ** 2 * weight
            drift = max(drift, abs(measured - expected) / weight)
        _accumulate(trans_amp, ch, trans)
        _accumulate(refl_amp, refl_ch, refl)
    if drift > RESAMPLE_DRIFT_TOL:
        raise InterpolationAccuracyError(
            f"wavenumber rescaling drifted branch norms by {drift:.3e} "
            f"(> {RESAMPLE_DRIFT_TOL:.0e}); the spectrum is too close to the band edge"
        )
    return _finish_outcome(
        trans_amp,
        refl_amp,
        p,
        input_weight,
        drift,
        left,
        right,
        rates,
        t_final,
        tag or f"interface(n={n:.6g}, t={t_final:.6g})",
        allow_partial,
    )
