"""Expectation values of the quadratic observables.

All expectations are diagonal in the momentum representation:

* photon number      ``sum_ch integral dk |psi~|^2``
* energy             ``sum_ch integral dk hbar c_m |k| |psi~|^2``   (positive)
* dynamical energy   ``sum_ch integral dk hbar c_m  k  |psi~|^2``   (signed)
* dynamical momentum ``sum_ch integral dk hbar s k |psi~|^2``
* field momentum     ``sum_ch integral dk hbar s |k| |psi~|^2``

The signed forms generate the dynamics; the absolute-value forms are what a
field functional measures.  For spectra confined to one sign of ``k`` the
two coincide up to that sign.  The field momentum here is the canonical
(medium-weighted) one; dividing by ``n^2`` gives its kinetic counterpart.

Position-space forms of the signed observables (via the spectral
derivative) and field-profile functionals (see :mod:`blipsim.fields`) are
provided as independent evaluation routes; they must agree with the
momentum-space sums and are cross-checked in the test suite rather than
collapsed into one implementation.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Mapping

import numpy as np

from . import fields as _fields
from .errors import DomainError, ZeroNormError
from .lattice import BlipWavePacket, Channel, Medium, as_channel, norm
from .spectral import (
    SpectralWavePacket,
    spectral_derivative,
    spectral_norm,
    to_momentum,
)

if TYPE_CHECKING:  # pragma: no cover
    from .scattering import ScatterOutcome

__all__ = [
    "ObservableReport",
    "expect_photon_number",
    "expect_energy",
    "expect_dyn_hamiltonian",
    "expect_dyn_momentum",
    "expect_field_momentum",
    "dyn_momentum_position_form",
    "dyn_hamiltonian_position_form",
    "abraham_momentum",
    "branch_expectations",
    "packet_report",
    "conditional_expectations",
]

#: Branch weight below which conditional expectations are refused.
CONDITIONAL_MIN_WEIGHT = 1e-12


@dataclass(frozen=True)
class ObservableReport:
    """One state's expectation values, tagged with the medium they refer to."""

    photon_number: float
    energy: float
    dyn_hamiltonian: float
    dyn_momentum: float
    field_momentum: float
    medium_tag: str


def expect_photon_number(state: BlipWavePacket | SpectralWavePacket) -> float:
    """Total excitation weight, in whichever representation is given."""
    if isinstance(state, BlipWavePacket):
        return norm(state)
    return spectral_norm(state)


def expect_energy(sp: SpectralWavePacket, m: Medium, hbar: float = 1.0) -> float:
    """Positive-definite energy ``sum hbar c_m |k| |psi~|^2 dk``."""
    k = sp.grid.k
    acc = sum(float(np.sum(np.abs(k) * np.abs(a) ** 2)) for a in sp.amp.values())
    return hbar * m.c * acc * sp.grid.dk


def expect_dyn_hamiltonian(sp: SpectralWavePacket, m: Medium, hbar: float = 1.0) -> float:
    """Signed generator of time evolution ``sum hbar c_m k |psi~|^2 dk``."""
    k = sp.grid.k
    acc = sum(float(np.sum(k * np.abs(a) ** 2)) for a in sp.amp.values())
    return hbar * m.c * acc * sp.grid.dk


def expect_dyn_momentum(sp: SpectralWavePacket, hbar: float = 1.0) -> float:
    """Generator of translations ``sum hbar s k |psi~|^2 dk``."""
    k = sp.grid.k
    acc = sum(
        ch.s * float(np.sum(k * np.abs(a) ** 2)) for ch, a in sp.amp.items()
    )
    return hbar * acc * sp.grid.dk


def expect_field_momentum(fp: "_fields.FieldProfile", m: Medium) -> float:
    """Field-profile route; see :func:`blipsim.fields.momentum_from_fields`."""
    return _fields.momentum_from_fields(fp, m)


def dyn_momentum_position_form(p: BlipWavePacket, hbar: float = 1.0) -> float:
    """Position-space evaluation ``sum_ch integral psi* (-i hbar d/dx) psi dx``.

    The translation generator is ``-i hbar d/dx`` on every channel alike;
    per channel the integral already equals ``hbar s integral k |psi~|^2 dk``.
    Independent route for cross-checking :func:`expect_dyn_momentum`; the
    imaginary residual of the integral is discarded (it vanishes to rounding).
    """
    acc = 0.0
    for ch, a in p.amp.items():
        dpsi = spectral_derivative(p, ch)
        acc += float(np.sum(np.conj(a) * (-1j * hbar) * dpsi).real)
    return acc * p.grid.dx


def dyn_hamiltonian_position_form(p: BlipWavePacket, m: Medium, hbar: float = 1.0) -> float:
    """Position-space evaluation ``sum_ch s c_m integral psi* (-i hbar d/dx) psi dx``.

    Here the extra ``s`` undoes the direction sign of the channel kernel,
    leaving ``hbar c_m integral k |psi~|^2 dk`` per channel.
    """
    acc = 0.0
    for ch, a in p.amp.items():
        dpsi = spectral_derivative(p, ch)
        acc += ch.s * float(np.sum(np.conj(a) * (-1j * hbar) * dpsi).real)
    return m.c * acc * p.grid.dx


def abraham_momentum(p_field: float, n: float) -> float:
    """Kinetic momentum paired with a canonical value: ``p / n^2``."""
    if not (np.isfinite(n) and n > 0):
        raise DomainError(f"refractive index must be positive and finite, got {n!r}")
    return p_field / (n * n)


def _media_by_channel(
    p: BlipWavePacket, media_by_direction: Mapping[int, Medium]
) -> dict[Channel, Medium]:
    try:
        return {ch: media_by_direction[ch.s] for ch in p.amp}
    except KeyError as exc:  # pragma: no cover - guarded by callers
        raise DomainError(f"no medium given for direction {exc.args[0]}") from exc


def branch_expectations(
    p: BlipWavePacket,
    media_by_direction: Mapping[int, Medium],
    hbar: float = 1.0,
) -> dict[str, float]:
    """All expectations of a packet whose channels may sit in different media.

    ``media_by_direction`` maps the direction ``s`` to the medium that
    channel occupies (after scattering, ``+1`` movers are on the right and
    ``-1`` movers on the left; before, the opposite).  Energy and field
    quantities are evaluated channel by channel in that channel's medium;
    the field momentum goes through the actual field-profile functional.
    """
    media = _media_by_channel(p, media_by_direction)
    sp = to_momentum(p)
    out = {
        "photon_number": spectral_norm(sp),
        "energy": 0.0,
        "dyn_hamiltonian": 0.0,
        "dyn_momentum": expect_dyn_momentum(sp, hbar),
        "field_momentum": 0.0,
        "abraham_momentum": 0.0,
    }
    for ch in sp.amp:
        single = SpectralWavePacket(sp.grid, {ch: sp.amp[ch]})
        m = media[ch]
        out["energy"] += expect_energy(single, m, hbar)
        out["dyn_hamiltonian"] += expect_dyn_hamiltonian(single, m, hbar)
        p_field = _fields.momentum_from_fields(
            _fields.field_profile(single, m, hbar), m
        )
        out["field_momentum"] += p_field
        out["abraham_momentum"] += abraham_momentum(p_field, m.n)
    return out


def packet_report(
    p: BlipWavePacket, m: Medium, hbar: float = 1.0, tag: str | None = None
) -> ObservableReport:
    """Report for a packet entirely inside one medium."""
    vals = branch_expectations(p, {+1: m, -1: m}, hbar)
    return ObservableReport(
        photon_number=vals["photon_number"],
        energy=vals["energy"],
        dyn_hamiltonian=vals["dyn_hamiltonian"],
        dyn_momentum=vals["dyn_momentum"],
        field_momentum=vals["field_momentum"],
        medium_tag=m.label if tag is None else tag,
    )


def conditional_expectations(
    outcome: "ScatterOutcome", branch: str, hbar: float = 1.0
) -> ObservableReport:
    """Expectations post-selected on one branch of a scattering outcome.

    ``branch`` is ``"transmitted"`` or ``"reflected"``.  The branch packet
    is renormalized by its own weight; branches with weight below
    ``1e-12`` (for example the reflected branch at index 1) are refused.
    """
    if branch not in ("transmitted", "reflected"):
        raise DomainError(f"branch must be 'transmitted' or 'reflected', got {branch!r}")
    packet: BlipWavePacket = getattr(outcome, branch)
    media = {+1: outcome.right_medium, -1: outcome.left_medium}
    vals = branch_expectations(packet, media, hbar)
    weight = vals["photon_number"]
    if weight < CONDITIONAL_MIN_WEIGHT:
        raise ZeroNormError(
            f"{branch} branch weight {weight:.3e} is below {CONDITIONAL_MIN_WEIGHT:.0e}; "
            "conditional expectations are undefined"
        )
    tags = sorted({media[ch.s].label for ch in packet.amp})
    return ObservableReport(
        photon_number=1.0,
        energy=vals["energy"] / weight,
        dyn_hamiltonian=vals["dyn_hamiltonian"] / weight,
        dyn_momentum=vals["dyn_momentum"] / weight,
        field_momentum=vals["field_momentum"] / weight,
        medium_tag="+".join(tags),
    )
