"""Simulator for single-photon wave packets built from local excitations.

The state of one photon lives on a position lattice with four channels
(direction x polarization).  The package provides the exact lattice
Fourier pair between position and momentum amplitudes, observable
functionals in both representations, electromagnetic field profiles and
their quadratic functionals, scattering maps for point mirrors and
dielectric boundaries, free propagation, scripted scenarios, and a CLI.
"""

from .errors import (
    BlipSimError,
    ConfigurationError,
    ConsistencyError,
    DivergenceError,
    DomainError,
    DomainExitError,
    FixtureError,
    InterpolationAccuracyError,
    NotAsymptoticError,
    SupportGuardError,
    ZeroNormError,
)
from .lattice import (
    CHANNELS,
    BlipWavePacket,
    Channel,
    Grid,
    Medium,
    as_channel,
    centroid,
    combine,
    gaussian_packet,
    is_normalized,
    make_grid,
    norm,
    restrict,
)
from .spectral import (
    SpectralWavePacket,
    sample_position_affine,
    sample_spectrum_scaled,
    spectral_derivative,
    spectral_norm,
    to_momentum,
    to_position,
)
from .observables import (
    ObservableReport,
    abraham_momentum,
    branch_expectations,
    conditional_expectations,
    dyn_hamiltonian_position_form,
    dyn_momentum_position_form,
    expect_dyn_hamiltonian,
    expect_dyn_momentum,
    expect_energy,
    expect_field_momentum,
    expect_photon_number,
    packet_report,
)
from .fields import (
    FieldProfile,
    energy_from_fields,
    field_profile,
    momentum_from_fields,
    momentum_imaginary_residual,
    position_kernel_R,
    zeta,
)
from .scattering import (
    MirrorCoupling,
    ScatterOutcome,
    ScatterRates,
    beamsplitter_scatter,
    dyson_partial_sums,
    dyson_remainder_bound,
    fresnel_rates,
    interface_scatter,
    omega_from_n,
    rates_from_omega,
    stokes_residuals,
)
from .propagation import (
    Scenario,
    ScenarioResult,
    ScenarioRow,
    evolve_free,
    run_scenario,
)

__version__ = "0.1.0"

__all__ = [
    "BlipSimError",
    "ConfigurationError",
    "ConsistencyError",
    "DivergenceError",
    "DomainError",
    "DomainExitError",
    "FixtureError",
    "InterpolationAccuracyError",
    "NotAsymptoticError",
    "SupportGuardError",
    "ZeroNormError",
    "CHANNELS",
    "BlipWavePacket",
    "Channel",
    "Grid",
    "Medium",
    "as_channel",
    "centroid",
    "combine",
    "gaussian_packet",
    "is_normalized",
    "make_grid",
    "norm",
    "restrict",
    "SpectralWavePacket",
    "sample_position_affine",
    "sample_spectrum_scaled",
    "spectral_derivative",
    "spectral_norm",
    "to_momentum",
    "to_position",
    "ObservableReport",
    "abraham_momentum",
    "branch_expectations",
    "conditional_expectations",
    "dyn_hamiltonian_position_form",
    "dyn_momentum_position_form",
    "expect_dyn_hamiltonian",
    "expect_dyn_momentum",
    "expect_energy",
    "expect_field_momentum",
    "expect_photon_number",
    "packet_report",
    "FieldProfile",
    "energy_from_fields",
    "field_profile",
    "momentum_from_fields",
    "momentum_imaginary_residual",
    "position_kernel_R",
    "zeta",
    "MirrorCoupling",
    "ScatterOutcome",
    "ScatterRates",
    "beamsplitter_scatter",
    "dyson_partial_sums",
    "dyson_remainder_bound",
    "fresnel_rates",
    "interface_scatter",
    "omega_from_n",
    "rates_from_omega",
    "stokes_residuals",
    "Scenario",
    "ScenarioResult",
    "ScenarioRow",
    "evolve_free",
    "run_scenario",
]
