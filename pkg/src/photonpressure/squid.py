"""Flux-tunable cavity model.

The cavity inductance contains a SQUID whose Josephson inductance grows with
the flux threading the loop.  A phenomenological arch-widening exponent
``gamma_l`` absorbs loop inductance and non-sinusoidal current-phase effects,
so the resonance frequency over one arch reads

    omega0(phi) = omega0(0) / sqrt(dilution + (1 - dilution)/cos(pi*gamma_l*phi))

with the bias ``phi`` in flux-quantum units and the dilution
Lambda = (L_total - L_J0/2) / L_total.  Everything here is a pure function of
the bias point; flux units are PHI_0 externally, SI internally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import PHI_0, hbar
from .errors import BeyondArchError, DomainError

__all__ = [
    "SquidSpec",
    "PowerDependence",
    "squid_spec_from_fit",
    "squid_frequency",
    "josephson_inductance",
    "flux_responsivity",
    "single_photon_coupling",
    "intracavity_photons",
    "total_linewidth",
    "kerr_shift",
]


@dataclass(frozen=True)
class SquidSpec:
    """Flux-tunable cavity description.

    ``dilution`` is the fraction of the total inductance that does not tune
    with flux; ``arch_widening`` is the phenomenological stretch of the flux
    axis within one arch.
    """

    sweet_spot_frequency: float   # rad/s, omega0 at zero bias
    dilution: float               # dimensionless, 0 < Lambda < 1
    arch_widening: float          # dimensionless gamma_l > 0
    junction_inductance: float    # H, single junction L_J0
    critical_current: float       # A, single junction
    loop_inductance: float        # H
    screening: float              # dimensionless beta_L
    total_inductance: float       # H

    def __post_init__(self):
        if not 0 < self.dilution < 1:
            raise DomainError("dilution must lie in (0, 1)")
        if self.arch_widening <= 0:
            raise DomainError("arch widening must be positive")
        if self.sweet_spot_frequency <= 0:
            raise DomainError("sweet-spot frequency must be positive")
        lj0 = PHI_0 / (2.0 * math.pi * self.critical_current)
        if abs(lj0 - self.junction_inductance) > 1e-12 * lj0:
            raise DomainError("junction inductance inconsistent with critical current")
        beta = 2.0 * self.loop_inductance * self.critical_current / PHI_0
        if abs(beta - self.screening) > 1e-12 * abs(beta):
            raise DomainError("screening parameter inconsistent with loop inductance")

    @property
    def arch_half_width(self) -> float:
        """Largest |bias| (in PHI_0) for which the model is defined."""
        return 0.5 / self.arch_widening


@dataclass(frozen=True)
class PowerDependence:
    """Photon-number dependence of the cavity: saturable two-level-system
    losses and a linear frequency pull per photon."""

    kerr_per_photon: float      # rad/s
    tls_rate: float             # rad/s, unsaturated TLS loss
    critical_photons: float     # saturation scale
    residual_internal: float    # rad/s, power-independent internal loss

    def __post_init__(self):
        if self.tls_rate < 0 or self.residual_internal < 0:
            raise DomainError("loss rates must be >= 0")
        if self.critical_photons <= 0:
            raise DomainError("critical photon number must be positive")


def squid_spec_from_fit(sweet_spot_frequency: float, dilution: float,
                        arch_widening: float, total_inductance: float,
                        loop_inductance: float = 0.0) -> SquidSpec:
    """Build a consistent :class:`SquidSpec` from arch-fit parameters.

    The junction inductance follows from the dilution,
    L_J0 = 2 (1 - Lambda) L_total, and the critical current from
    I_c = PHI_0 / (2 pi L_J0).
    """
    if total_inductance <= 0:
        raise DomainError("total inductance must be positive")
    if not 0 < dilution < 1:
        raise DomainError("dilution must lie in (0, 1)")
    lj0 = 2.0 * (1.0 - dilution) * total_inductance
    ic = PHI_0 / (2.0 * math.pi * lj0)
    return SquidSpec(
        sweet_spot_frequency=sweet_spot_frequency,
        dilution=dilution,
        arch_widening=arch_widening,
        junction_inductance=lj0,
        critical_current=ic,
        loop_inductance=loop_inductance,
        screening=2.0 * loop_inductance * ic / PHI_0,
        total_inductance=total_inductance,
    )


def _arch_cosine(flux_bias, spec: SquidSpec):
    c = np.cos(np.pi * spec.arch_widening * np.asarray(flux_bias, dtype=float))
    if np.any(c <= 0.0):
        raise BeyondArchError(
            "flux bias beyond the arch (|phi| >= "
            f"{spec.arch_half_width:.4f} PHI_0): Josephson inductance diverges"
        )
    return c


def squid_frequency(flux_bias, spec: SquidSpec):
    """Cavity resonance frequency at a bias point (rad/s).

    ``flux_bias`` is in PHI_0 units, scalar or array; the bias must stay
    inside the arch, cos(pi * gamma_l * phi) > 0.
    """
    c = _arch_cosine(flux_bias, spec)
    out = spec.sweet_spot_frequency / np.sqrt(spec.dilution + (1.0 - spec.dilution) / c)
    return out if out.ndim else float(out)


def josephson_inductance(flux_bias, spec: SquidSpec):
    """Flux-dependent SQUID inductance L_J0 / (2 cos(pi*gamma_l*phi)), H."""
    c = _arch_cosine(flux_bias, spec)
    out = spec.junction_inductance / (2.0 * c)
    return out if out.ndim else float(out)


def flux_responsivity(flux_bias, spec: SquidSpec):
    """Signed derivative of the cavity frequency with bias, rad/s per PHI_0.

    Analytic derivative of the arch model; negative for positive bias.  The
    magnitude is what enters the coupling rate.
    """
    phi = np.asarray(flux_bias, dtype=float)
    c = _arch_cosine(phi, spec)
    u = np.pi * spec.arch_widening * phi
    lam = spec.dilution
    sec = 1.0 / c
    out = (-0.5 * spec.sweet_spot_frequency
           * (lam + (1.0 - lam) * sec) ** -1.5
           * (1.0 - lam) * sec * np.tan(u) * np.pi * spec.arch_widening)
    return out if out.ndim else float(out)


def single_photon_coupling(flux_bias, spec: SquidSpec, zero_point_flux_phi0: float):
    """Vacuum coupling rate g0 = |d omega0/d phi| * phi_zpf, rad/s.

    ``zero_point_flux_phi0`` is the zero-point flux threading the loop in
    PHI_0 units.  Zero at the sweet spot by symmetry.
    """
    if zero_point_flux_phi0 < 0:
        raise DomainError("zero-point flux must be >= 0")
    out = np.abs(flux_responsivity(flux_bias, spec)) * zero_point_flux_phi0
    return out if np.ndim(out) else float(out)


def intracavity_photons(power_in: float, pump_frequency: float, kappa: float,
                        kappa_e: float, detuning) -> float:
    """Steady-state photon number for a drive of on-chip power ``power_in``.

    n = (4 P / hbar omega_p) * kappa_e / (kappa^2 + 4 Delta^2), with the
    detuning Delta between pump and cavity.
    """
    if kappa <= 0 or kappa_e <= 0:
        raise DomainError("cavity rates must be positive")
    if pump_frequency <= 0:
        raise DomainError("pump frequency must be positive")
    if power_in < 0:
        raise DomainError("power must be >= 0")
    d = np.asarray(detuning, dtype=float)
    out = 4.0 * power_in / (hbar * pump_frequency) * kappa_e / (kappa ** 2 + 4.0 * d ** 2)
    return out if out.ndim else float(out)


def total_linewidth(n_photons, dep: PowerDependence, kappa_e: float):
    """Cavity linewidth vs photon number with saturable TLS losses.

    kappa(n) = kappa_e + kappa_1 + kappa_TLS / sqrt(1 + n/n_crit).
    """
    if kappa_e < 0:
        raise DomainError("external rate must be >= 0")
    n = np.asarray(n_photons, dtype=float)
    if np.any(n < 0):
        raise DomainError("photon number must be >= 0")
    out = kappa_e + dep.residual_internal \
        + dep.tls_rate / np.sqrt(1.0 + n / dep.critical_photons)
    return out if out.ndim else float(out)


def kerr_shift(n_photons, kerr_per_photon: float):
    """Linear frequency pull -chi * n toward lower frequency, rad/s."""
    out = -np.asarray(n_photons, dtype=float) * kerr_per_photon
    return out if out.ndim else float(out)
