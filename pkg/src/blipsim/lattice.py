"""Position lattice, channels, media, and wave packets.

A single excitation is described by one complex amplitude per channel,
sampled on a shared uniform position grid.  A channel is the pair
``(s, pol)`` where ``s = +1/-1`` is the propagation direction and ``pol``
is the transverse polarization ``"H"`` or ``"V"``.  Channel amplitudes for
both wavenumber signs live in the same array; negative wavenumbers are
ordinary spectral content, not a separate channel.

Design notes
------------
* The grid covers ``[x_min, x_min + n_points*dx)``; ``n_points`` is a power
  of two so transforms stay exact-roundtrip fast paths.
* The conjugate wavenumber lattice is stored in ascending order,
  ``k_m = -pi/dx + m*dk`` with ``dk = 2*pi/(n_points*dx)``.
* All sums over the grid are plain Riemann sums weighted by ``dx`` (or
  ``dk``); for the smooth, edge-decaying states this package handles these
  are spectrally accurate.
* Packets are value objects: amplitude arrays are copied in and frozen
  (read-only); operations return new packets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping

import numpy as np

from .errors import ConfigurationError, DomainError, FixtureError, ZeroNormError

__all__ = [
    "Channel",
    "CHANNELS",
    "as_channel",
    "Grid",
    "make_grid",
    "Medium",
    "BlipWavePacket",
    "gaussian_packet",
    "norm",
    "centroid",
    "is_normalized",
    "combine",
    "restrict",
]

#: Fraction of norm a fixture may leave outside the grid or the band.
FIXTURE_TAIL_TOL = 1e-12

#: Per-side weight fraction ignored when locating a packet's support.
SUPPORT_QUANTILE = 1e-12


@dataclass(frozen=True, order=True)
class Channel:
    """Direction/polarization label ``(s, pol)``; hashable, usable as dict key."""

    s: int
    pol: str

    def __post_init__(self) -> None:
        if self.s not in (-1, 1):
            raise DomainError(f"channel direction must be +1 or -1, got {self.s}")
        if self.pol not in ("H", "V"):
            raise DomainError(f"channel polarization must be 'H' or 'V', got {self.pol!r}")


#: The four channels, in deterministic iteration order.
CHANNELS = (Channel(-1, "H"), Channel(-1, "V"), Channel(1, "H"), Channel(1, "V"))


def as_channel(ch: Channel | tuple[int, str]) -> Channel:
    """Coerce ``(s, pol)`` tuples to :class:`Channel`."""
    if isinstance(ch, Channel):
        return ch
    s, pol = ch
    return Channel(int(s), str(pol))


@dataclass(frozen=True)
class Grid:
    """Uniform position lattice and its conjugate wavenumber lattice."""

    x_min: float
    dx: float
    n_points: int

    @property
    def x_max(self) -> float:
        return self.x_min + self.dx * self.n_points

    @property
    def dk(self) -> float:
        return 2.0 * math.pi / (self.n_points * self.dx)

    @property
    def k_max(self) -> float:
        """Band edge ``pi/dx``; the lattice spans ``[-k_max, k_max - dk]``."""
        return math.pi / self.dx

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.n_points)

    @property
    def k(self) -> np.ndarray:
        """Ascending wavenumber lattice ``-k_max + m*dk``."""
        return -self.k_max + self.dk * np.arange(self.n_points)


def make_grid(x_min: float, x_max: float, n_points: int) -> Grid:
    """Build a grid over ``[x_min, x_max)`` with ``n_points`` cells.

    ``n_points`` must be a power of two, at least 8; ``x_max > x_min``.
    """
    if not (isinstance(n_points, (int, np.integer)) and n_points >= 8):
        raise ConfigurationError(f"n_points must be an integer >= 8, got {n_points!r}")
    n_points = int(n_points)
    if n_points & (n_points - 1):
        raise ConfigurationError(f"n_points must be a power of two, got {n_points}")
    x_min = float(x_min)
    x_max = float(x_max)
    if not (math.isfinite(x_min) and math.isfinite(x_max) and x_max > x_min):
        raise ConfigurationError(f"need finite x_max > x_min, got [{x_min}, {x_max})")
    return Grid(x_min=x_min, dx=(x_max - x_min) / n_points, n_points=n_points)


@dataclass(frozen=True)
class Medium:
    """Homogeneous, dispersionless medium: permittivity, permeability, mode area.

    The phase speed is ``c = 1/sqrt(epsilon*mu)`` and the refractive index is
    taken relative to the configured reference speed ``c0`` (the default
    ``epsilon = mu = c0 = 1`` is vacuum in natural units).
    """

    epsilon: float = 1.0
    mu: float = 1.0
    area: float = 1.0
    c0: float = 1.0
    tag: str = ""

    def __post_init__(self) -> None:
        for name in ("epsilon", "mu", "area", "c0"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise DomainError(f"medium {name} must be a positive finite number, got {v!r}")

    @property
    def c(self) -> float:
        return 1.0 / math.sqrt(self.epsilon * self.mu)

    @property
    def n(self) -> float:
        return self.c0 / self.c

    @property
    def label(self) -> str:
        return self.tag or f"n={self.n:.6g}"

    @classmethod
    def from_index(cls, n: float, *, area: float = 1.0, c0: float = 1.0, tag: str = "") -> "Medium":
        """Non-magnetic medium (``mu = 1``) with refractive index ``n``."""
        if not (isinstance(n, (int, float)) and math.isfinite(n) and n > 0):
            raise DomainError(f"refractive index must be positive and finite, got {n!r}")
        return cls(epsilon=(n / c0) ** 2, mu=1.0, area=area, c0=c0, tag=tag)

    @classmethod
    def reference(cls, *, area: float = 1.0, c0: float = 1.0, tag: str = "") -> "Medium":
        """The reference (index 1) medium for the given ``c0``."""
        return cls.from_index(1.0, area=area, c0=c0, tag=tag)


def _freeze_amp(
    grid: Grid, amp: Mapping[Channel | tuple[int, str], np.ndarray]
) -> dict[Channel, np.ndarray]:
    """Validate and copy channel amplitudes; returned arrays are read-only."""
    items: dict[Channel, np.ndarray] = {}
    for raw_ch, values in amp.items():
        ch = as_channel(raw_ch)
        if ch in items:
            raise ConfigurationError(f"channel {ch} given twice")
        items[ch] = values
    out: dict[Channel, np.ndarray] = {}
    for ch in sorted(items):
        arr = np.array(items[ch], dtype=np.complex128)
        if arr.shape != (grid.n_points,):
            raise ConfigurationError(
                f"channel {ch} amplitude has shape {arr.shape}, "
                f"expected ({grid.n_points},)"
            )
        if not np.all(np.isfinite(arr)):
            raise ConfigurationError(f"channel {ch} amplitude contains NaN/Inf")
        arr.flags.writeable = False
        out[ch] = arr
    return out


@dataclass(frozen=True)
class BlipWavePacket:
    """Position-space amplitudes per channel on a shared grid.

    ``amp`` maps channels to complex arrays of length ``grid.n_points``.
    Channels that are absent are identically zero.  Arrays are copied on
    construction and frozen; treat packets as immutable values.
    """

    grid: Grid
    amp: Mapping[Channel | tuple[int, str], np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        object.__setattr__(self, "amp", _freeze_amp(self.grid, self.amp))

    def channels(self) -> tuple[Channel, ...]:
        return tuple(self.amp)

    def amplitude(self, ch: Channel | tuple[int, str]) -> np.ndarray:
        """Amplitude array for ``ch`` (a read-only zeros array if absent)."""
        ch = as_channel(ch)
        if ch in self.amp:
            return self.amp[ch]
        zeros = np.zeros(self.grid.n_points, dtype=np.complex128)
        zeros.flags.writeable = False
        return zeros


def gaussian_packet(
    grid: Grid,
    ch: Channel | tuple[int, str],
    x0: float,
    k0: float,
    sigma: float,
) -> BlipWavePacket:
    """Normalized Gaussian fixture ``exp(-(x-x0)^2/(4 sigma^2)) * exp(i s k0 x)``.

    ``sigma`` is the density's standard deviation; the spectral density is a
    Gaussian of width ``sigma_k = 1/(2 sigma)`` centred at ``k0`` for either
    direction.  Raises :class:`FixtureError` when the envelope cannot be
    resolved (``sigma <= 3 dx``) or when more than ``1e-12`` of the norm
    would fall outside the grid or outside the wavenumber band.
    """
    ch = as_channel(ch)
    x0 = float(x0)
    k0 = float(k0)
    sigma = float(sigma)
    if not (math.isfinite(x0) and math.isfinite(k0) and math.isfinite(sigma)):
        raise FixtureError("x0, k0, sigma must be finite")
    if sigma <= 3.0 * grid.dx:
        raise FixtureError(
            f"sigma = {sigma} is not resolvable: need sigma > 3*dx = {3.0 * grid.dx}"
        )

    def gauss_tail(distance: float, width: float) -> float:
        # one-sided mass of a unit Gaussian density beyond `distance`
        return 0.5 * math.erfc(distance / (math.sqrt(2.0) * width))

    edge_mass = gauss_tail(x0 - grid.x_min, sigma) + gauss_tail(grid.x_max - x0, sigma)
    if edge_mass > FIXTURE_TAIL_TOL:
        raise FixtureError(
            f"envelope at x0={x0}, sigma={sigma} leaves {edge_mass:.3e} of norm "
            f"outside [{grid.x_min}, {grid.x_max})"
        )
    sigma_k = 0.5 / sigma
    band_mass = gauss_tail(grid.k_max - k0, sigma_k) + gauss_tail(grid.k_max + k0, sigma_k)
    if band_mass > FIXTURE_TAIL_TOL:
        raise FixtureError(
            f"carrier k0={k0} with sigma_k={sigma_k} leaves {band_mass:.3e} of norm "
            f"outside the band |k| <= {grid.k_max:.6g}"
        )

    x = grid.x
    values = np.exp(-((x - x0) ** 2) / (4.0 * sigma**2) + 1j * ch.s * k0 * x)
    values /= math.sqrt(float(np.sum(np.abs(values) ** 2)) * grid.dx)
    return BlipWavePacket(grid, {ch: values})


def norm(p: BlipWavePacket) -> float:
    """Total weight ``sum_ch integral |psi|^2 dx`` (1 for a physical state)."""
    return float(sum(np.sum(np.abs(a) ** 2) for a in p.amp.values()) * p.grid.dx)


def is_normalized(p: BlipWavePacket, tol: float = 1e-9) -> bool:
    return abs(norm(p) - 1.0) <= tol


def centroid(p: BlipWavePacket) -> float:
    """Mean position of the total density; undefined for zero packets."""
    total = norm(p)
    if total == 0.0:
        raise ZeroNormError("centroid of a zero packet is undefined")
    x = p.grid.x
    first = sum(float(np.sum(x * np.abs(a) ** 2)) for a in p.amp.values()) * p.grid.dx
    return first / total


def _support_interval(p: BlipWavePacket, ch: Channel) -> tuple[float, float] | None:
    """Positions bracketing all but ``SUPPORT_QUANTILE`` per side of a channel."""
    dens = np.abs(p.amp[ch]) ** 2 * p.grid.dx
    total = float(dens.sum())
    if total == 0.0:
        return None
    cum = np.cumsum(dens)
    tol = SUPPORT_QUANTILE * total
    x = p.grid.x
    lo = x[int(np.searchsorted(cum, tol, side="right"))]
    hi = x[min(int(np.searchsorted(cum, total - tol, side="left")), p.grid.n_points - 1)]
    return float(lo), float(hi)


def combine(*packets: BlipWavePacket) -> BlipWavePacket:
    """Coherent sum of packets on the same grid (shared channels add)."""
    if not packets:
        raise DomainError("combine() needs at least one packet")
    grid = packets[0].grid
    acc: dict[Channel, np.ndarray] = {}
    for p in packets:
        if p.grid != grid:
            raise DomainError("combine() requires a shared grid")
        for ch, a in p.amp.items():
            acc[ch] = acc[ch] + a if ch in acc else np.array(a)
    return BlipWavePacket(grid, acc)


def restrict(p: BlipWavePacket, channels: Iterable[Channel | tuple[int, str]]) -> BlipWavePacket:
    """Packet containing only the requested channels (missing ones drop out)."""
    wanted = {as_channel(c) for c in channels}
    return BlipWavePacket(p.grid, {ch: a for ch, a in p.amp.items() if ch in wanted})
