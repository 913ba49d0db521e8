"""Frequency-domain response of the driven, linearized two-mode system.

A strong pump at detuning Delta from the cavity turns the flux coupling into
a beam-splitter / amplifier interaction with multi-photon rate
g = sqrt(n_c) * g0.  This module evaluates the resulting susceptibilities,
reflection responses, backaction on the low-frequency mode, and the hybrid
normal modes.  Probe frequencies for the cavity-side response are offsets
from the pump, Omega = omega_probe - omega_pump; the low-frequency side is
probed directly at its own (absolute) frequency.

All functions are pure and accept scalars or arrays for the frequency
argument; large arrays are evaluated through the selected kernel backend.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError

__all__ = [
    "OperatingPoint",
    "BackactionResult",
    "HybridModes",
    "cavity_susceptibility",
    "effective_lf_susceptibility",
    "s11_bare",
    "s11_pumped",
    "lf_s11_pumped",
    "backaction_exact",
    "backaction_sideband",
    "normal_modes",
    "cooperativity",
]


@dataclass(frozen=True)
class OperatingPoint:
    """One pump/flux configuration of the driven system."""

    flux_bias: float                # PHI_0 units
    pump_frequency: float           # rad/s
    pump_detuning: float            # rad/s, omega_p - omega_0
    sideband_offset: float          # rad/s, detuning from the sideband
    intracavity_photons: float
    single_photon_rate: float       # rad/s
    multi_photon_rate: float        # rad/s, sqrt(n_c) * g0
    effective_cavity_linewidth: float  # rad/s

    def __post_init__(self):
        if self.intracavity_photons < 0:
            raise DomainError("photon number must be >= 0")
        expected = self.intracavity_photons * self.single_photon_rate ** 2
        if abs(self.multi_photon_rate ** 2 - expected) > 1e-12 * max(expected, 1e-300):
            raise DomainError("multi-photon rate inconsistent with n_c * g0^2")


@dataclass(frozen=True)
class BackactionResult:
    """Pump-induced modification of the low-frequency mode."""

    frequency_shift: float          # rad/s
    damping_shift: float            # rad/s


@dataclass(frozen=True)
class HybridModes:
    """Eigenmodes of the driven system at exact red-sideband pumping."""

    upper: complex                  # rad/s
    lower: complex                  # rad/s
    splitting: float                # rad/s, Re(upper - lower)
    linewidth_upper: float          # rad/s
    linewidth_lower: float          # rad/s


def _ret(values, scalar_input, to_complex=True):
    arr = np.asarray(values)
    if scalar_input:
        return complex(arr.flat[0]) if to_complex else float(arr.flat[0])
    return arr


def cavity_susceptibility(offset, detuning, kappa):
    """Cavity susceptibility 1/(kappa/2 - i(Delta + Omega)).

    ``offset`` is the probe-pump offset Omega, ``detuning`` the pump-cavity
    detuning Delta.
    """
    if kappa <= 0:
        raise DomainError("cavity linewidth must be positive")
    om = np.asarray(offset)
    om = om.astype(complex if np.iscomplexobj(om) else float)
    out = 1.0 / (0.5 * kappa - 1j * (detuning + om))
    return _ret(out, om.ndim == 0)


def effective_lf_susceptibility(offset, lf_frequency, lf_linewidth, g, detuning, kappa):
    """Low-frequency susceptibility including the pump-mediated self-energy.

    chi_eff = 1 / (Omega0^2 - Omega^2 - i*Omega*Gamma0
                   - 2i*Omega0*g^2*[chi_c(Omega) - chi_c*(-Omega)])
    """
    if lf_linewidth <= 0 or kappa <= 0:
        raise DomainError("rates must be positive")
    om = np.asarray(offset)
    om = om.astype(complex if np.iscomplexobj(om) else float)
    chi_c = 1.0 / (0.5 * kappa - 1j * (detuning + om))
    chi_cm = 1.0 / (0.5 * kappa + 1j * (detuning - om))
    out = 1.0 / (lf_frequency ** 2 - om ** 2 - 1j * om * lf_linewidth
                 - 2j * lf_frequency * g ** 2 * (chi_c - chi_cm))
    return _ret(out, om.ndim == 0)


def s11_bare(omega, omega0, kappa_i, kappa_e):
    """Reflection 1 - 2*kappa_e/(kappa_i + kappa_e + 2i(omega - omega0)).

    Same form for either resonator; pass the matching rates.
    """
    if kappa_i < 0 or kappa_e < 0 or kappa_i + kappa_e <= 0:
        raise DomainError("decay rates must be >= 0 with a positive total")
    om = np.asarray(omega, dtype=float)
    out = kernels.s11_bare(om.ravel(), omega0, kappa_i, kappa_e).reshape(om.shape)
    return _ret(out, om.ndim == 0)


def s11_pumped(omega_probe, omega0, kappa_i, kappa_e, lf_frequency, lf_linewidth,
               g, detuning):
    """Cavity reflection with a pump at omega0 + detuning.

    S11 = 1 - kappa_e*chi_c*[1 + 2i*Omega0*g^2*chi_c*chi_eff], evaluated at
    the probe-pump offset implied by ``omega_probe``.  Reduces to
    :func:`s11_bare` at g = 0.
    """
    if kappa_i < 0 or kappa_e < 0 or kappa_i + kappa_e <= 0:
        raise DomainError("decay rates must be >= 0 with a positive total")
    if lf_linewidth <= 0:
        raise DomainError("low-frequency linewidth must be positive")
    om = np.asarray(omega_probe, dtype=float)
    out = kernels.s11_pumped(om.ravel(), omega0, kappa_i, kappa_e,
                             lf_frequency, lf_linewidth, g, detuning).reshape(om.shape)
    return _ret(out, om.ndim == 0)


def lf_s11_pumped(omega, lf_frequency, gamma_i, gamma_e, g, detuning, kappa):
    """Low-frequency reflection including pump-induced backaction.

    High-Q form: S11 = 1 - Gamma_e / (Gamma0/2 - i(Omega - Omega0) + i*Sigma)
    with the self-energy Sigma = -i g^2 [chi_c(Omega) - chi_c*(-Omega)].
    The dip sits at the shifted frequency with the backaction-broadened
    linewidth; g = 0 recovers the bare response.
    """
    if gamma_i < 0 or gamma_e < 0 or gamma_i + gamma_e <= 0:
        raise DomainError("decay rates must be >= 0 with a positive total")
    if kappa <= 0:
        raise DomainError("cavity linewidth must be positive")
    om = np.asarray(omega, dtype=float)
    out = kernels.lf_s11_pumped(om.ravel(), lf_frequency, gamma_i, gamma_e,
                                g, detuning, kappa).reshape(om.shape)
    return _ret(out, om.ndim == 0)


def backaction_exact(detuning, g, kappa, lf_frequency):
    """Pump-induced frequency shift and damping of the low-frequency mode.

    Evaluated from the self-energy at the mode frequency:

        shift   = g^2 [ (D+W)/(k^2/4+(D+W)^2) + (D-W)/(k^2/4+(D-W)^2) ]
        damping = g^2 k [ 1/(k^2/4+(D+W)^2) - 1/(k^2/4+(D-W)^2) ]

    with D the pump detuning, W the mode frequency and k the cavity
    linewidth.  Valid for any detuning.
    """
    if kappa <= 0:
        raise DomainError("cavity linewidth must be positive")
    d = np.asarray(detuning, dtype=float)
    plus = kappa ** 2 / 4.0 + (d + lf_frequency) ** 2
    minus = kappa ** 2 / 4.0 + (d - lf_frequency) ** 2
    shift = g ** 2 * ((d + lf_frequency) / plus + (d - lf_frequency) / minus)
    damping = g ** 2 * kappa * (1.0 / plus - 1.0 / minus)
    if d.ndim == 0:
        return BackactionResult(float(shift), float(damping))
    return BackactionResult(shift, damping)


def backaction_sideband(offset, g, kappa_eff, sideband="red"):
    """Resolved-sideband approximation of the backaction.

        shift   = 4 g^2 d / (k^2 + 4 d^2)
        damping = +-4 g^2 k / (k^2 + 4 d^2)   (+ red, - blue)

    ``offset`` is the pump detuning from the chosen sideband and ``kappa_eff``
    the effective cavity linewidth under drive.
    """
    if kappa_eff <= 0:
        raise DomainError("effective cavity linewidth must be positive")
    if sideband not in ("red", "blue"):
        raise DomainError(f"sideband must be 'red' or 'blue', got {sideband!r}")
    d = np.asarray(offset, dtype=float)
    denom = kappa_eff ** 2 + 4.0 * d ** 2
    shift = 4.0 * g ** 2 * d / denom
    damping = 4.0 * g ** 2 * kappa_eff / denom
    if sideband == "blue":
        damping = -damping
    if d.ndim == 0:
        return BackactionResult(float(shift), float(damping))
    return BackactionResult(shift, damping)


def normal_modes(g, kappa, gamma0, lf_frequency) -> HybridModes:
    """Hybrid eigenmodes for an exact red-sideband pump.

    omega_pm = Omega0 - i(kappa+Gamma0)/4 +- sqrt(g^2 - ((kappa-Gamma0)/4)^2)

    The principal square root of the (possibly negative) discriminant is
    used: above the threshold g = (kappa-Gamma0)/4 the two modes split in
    frequency and share the linewidth (kappa+Gamma0)/2; below it the
    splitting is zero and the linewidths differ.  (The alternative
    strong-coupling convention, splitting exceeding the hybrid linewidth,
    corresponds to g > (kappa+Gamma0)/4 and is left to the caller.)
    """
    if kappa <= 0 or gamma0 <= 0:
        raise DomainError("rates must be positive")
    disc = np.emath.sqrt(g ** 2 - ((kappa - gamma0) / 4.0) ** 2)
    base = lf_frequency - 0.25j * (kappa + gamma0)
    upper = complex(base + disc)
    lower = complex(base - disc)
    return HybridModes(
        upper=upper,
        lower=lower,
        splitting=float(upper.real - lower.real),
        linewidth_upper=float(-2.0 * upper.imag),
        linewidth_lower=float(-2.0 * lower.imag),
    )


def cooperativity(g, kappa, gamma0) -> float:
    """C = 4 g^2 / (kappa * Gamma0)."""
    if kappa <= 0 or gamma0 <= 0:
        raise DomainError("rates must be positive")
    return 4.0 * g ** 2 / (kappa * gamma0)
