"""Parameter extraction from measured or synthesized traces.

The central routine is :func:`fit_resonance`, a three-stage fit of a complex
reflection trace on top of a slowly varying instrumental background:

1. mask the resonance region (default: within 2 initial-guess linewidths of
   the initial-guess center) and estimate the background
   (a0 + a1*w) * exp(i(b0 + b1*w)) from the remaining baseline;
2. divide the background out and fit the ideal response including a
   resonance-circle rotation theta;
3. re-fit the full model jointly, seeded by stages 1-2.

The returned result carries the fitted background and a background-corrected
trace (divided by the background, rotation removed).  The other entry points
fit Lorentzian spectra, backaction curves and the flux arch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import PHI_0
from .dynamics import backaction_sideband, s11_bare, s11_pumped
from .errors import (BackgroundEstimationError, DomainError,
                     NonIdentifiableError)
from .lsq import FitResult, least_squares
from .traces import ComplexTrace, SpectrumTrace

__all__ = [
    "BackgroundModel",
    "fit_resonance",
    "fit_lorentzian",
    "fit_backaction",
    "fit_flux_arch",
]

_MIN_POINTS = 16


@dataclass(frozen=True)
class BackgroundModel:
    """Linear amplitude and phase background with a resonance rotation.

    Evaluates (a0 + a1*(w - w_ref)) * exp(i*(b0 + b1*(w - w_ref))); the
    rotation ``circle_rotation`` applies to the resonance term only and is
    kept here so a fit result carries the full instrumental model.  Slopes
    are per rad/s.
    """

    amplitude_offset: float = 1.0
    amplitude_slope: float = 0.0
    phase_offset: float = 0.0
    phase_slope: float = 0.0
    circle_rotation: float = 0.0
    reference_frequency: float = 0.0  # rad/s

    def evaluate(self, omega):
        w = np.asarray(omega, dtype=float) - self.reference_frequency
        return (self.amplitude_offset + self.amplitude_slope * w) \
            * np.exp(1j * (self.phase_offset + self.phase_slope * w))

    def is_identity(self, span: float, tol: float = 1e-6) -> bool:
        """True when the background is unity within ``tol`` over ``span``."""
        return (abs(self.amplitude_offset - 1.0) < tol
                and abs(self.amplitude_slope) * span < tol
                and abs(self.phase_offset) < tol
                and abs(self.phase_slope) * span < tol
                and abs(self.circle_rotation) < tol)


def _require_points(n, minimum=_MIN_POINTS):
    if n < minimum:
        raise DomainError(f"need at least {minimum} points for a fit, got {n}")


def _initial_dip(omega, mag):
    """Center and linewidth guesses from the deepest dip of |S11|."""
    i0 = int(np.argmin(mag))
    center = omega[i0]
    edge = max(1, mag.size // 10)
    baseline = float(np.median(np.concatenate([mag[:edge], mag[-edge:]])))
    depth = baseline - mag[i0]
    if depth <= 0:
        return center, (omega[-1] - omega[0]) / 10.0
    half = mag[i0] + 0.5 * depth
    left = i0
    while left > 0 and mag[left] < half:
        left -= 1
    right = i0
    while right < mag.size - 1 and mag[right] < half:
        right += 1
    width = omega[right] - omega[left]
    if width <= 0:
        width = (omega[-1] - omega[0]) / 100.0
    return center, width


def _circle_rotation_guess(values):
    """Rotation of the resonance circle from an algebraic circle fit.

    The off-resonant point of the ideal response is 1; the point opposite
    the circle center is the dip, so the tilt is the phase of (1 - center).
    """
    x, y = values.real, values.imag
    a = np.column_stack([x, y, np.ones_like(x)])
    b = x * x + y * y
    try:
        sol, *_ = np.linalg.lstsq(a, b, rcond=None)
    except np.linalg.LinAlgError:
        return 0.0, 0.5
    xc, yc = sol[0] / 2.0, sol[1] / 2.0
    vec = 1.0 - (xc + 1j * yc)
    return float(np.angle(vec)), float(abs(vec))


def _baseline_phase(omega, values, base_idx):
    """Phase of the baseline points, unwrapped per contiguous segment and
    reconciled across the resonance gap.

    An overcoupled resonance winds the phase by a full turn, so segments on
    either side of the dip may sit on branches a multiple of 2*pi apart; each
    segment is shifted onto the line extrapolated from the longest one.
    """
    segments = np.split(base_idx, np.where(np.diff(base_idx) > 1)[0] + 1)
    segments.sort(key=len, reverse=True)
    anchor = segments[0]
    phase = {i: v for i, v in zip(anchor, np.unwrap(np.angle(values[anchor])))}
    w = omega[anchor]
    design = np.column_stack([np.ones_like(w), w - w.mean()])
    coef, *_ = np.linalg.lstsq(design, np.fromiter(phase.values(), float), rcond=None)
    for seg in segments[1:]:
        seg_phase = np.unwrap(np.angle(values[seg]))
        predicted = coef[0] + coef[1] * (omega[seg] - w.mean())
        shift = 2.0 * np.pi * np.round(np.median(seg_phase - predicted) / (2.0 * np.pi))
        for i, v in zip(seg, seg_phase - shift):
            phase[i] = v
    idx = np.array(sorted(phase))
    return idx, np.array([phase[i] for i in idx])


def _background_stage(omega, values, mask, w_ref):
    """Linear amplitude/phase background from the unmasked baseline."""
    base_idx = np.where(~mask)[0]
    w = omega[base_idx] - w_ref
    design = np.column_stack([np.ones_like(w), w])
    amp_coef, *_ = np.linalg.lstsq(design, np.abs(values[base_idx]), rcond=None)
    idx, phases = _baseline_phase(omega, values, base_idx)
    wp = omega[idx] - w_ref
    ph_coef, *_ = np.linalg.lstsq(np.column_stack([np.ones_like(wp), wp]),
                                  phases, rcond=None)
    return BackgroundModel(
        amplitude_offset=float(amp_coef[0]),
        amplitude_slope=float(amp_coef[1]),
        phase_offset=float(_wrap_angle(ph_coef[0])),
        phase_slope=float(ph_coef[1]),
        reference_frequency=w_ref,
    )


def _wrap_angle(a):
    return (a + np.pi) % (2.0 * np.pi) - np.pi


def fit_resonance(trace: ComplexTrace, model: str = "bare", *, pumped: dict | None = None,
                  mask_halfwidths: float = 2.0, min_baseline_fraction: float = 0.25) -> FitResult:
    """Three-stage background-corrected fit of a complex reflection trace.

    ``model`` selects the resonance term: "bare" fits (omega0, kappa_i,
    kappa_e, theta); "pumped" fits (omega0, kappa_i, g, lf_frequency, theta)
    with fixed ``pumped = {"kappa_e": ..., "gamma0": ..., "detuning": ...}``.
    The result's extras hold the corrected trace and, for convenience, the
    total linewidth.
    """
    _require_points(len(trace))
    if model not in ("bare", "pumped"):
        raise DomainError(f"unknown resonance model {model!r}")
    if model == "pumped":
        if not pumped or not all(k in pumped for k in ("kappa_e", "gamma0", "detuning")):
            raise DomainError("pumped fit needs kappa_e, gamma0 and detuning")

    omega = 2.0 * np.pi * trace.frequency_hz
    values = trace.values
    w_ref = 0.5 * (omega[0] + omega[-1])

    center0, width0 = _initial_dip(omega, np.abs(values))
    span = omega[-1] - omega[0]
    if span < 5.0 * width0:
        raise DomainError("trace must span at least 5 estimated linewidths")

    # stage 1: background from the off-resonant baseline
    mask = np.abs(omega - center0) <= mask_halfwidths * width0
    if (~mask).sum() < min_baseline_fraction * omega.size:
        raise BackgroundEstimationError(
            f"only {(~mask).sum()} of {omega.size} points are off-resonant; "
            f"need {min_baseline_fraction:.0%}")
    bg1 = _background_stage(omega, values, mask, w_ref)

    # stage 2: ideal response on the background-divided data.  The engine
    # sees dimensionless parameters (frequency as offset from the initial
    # center in units of the initial width) so the normal matrix stays well
    # conditioned for narrow lines on large carriers.
    corrected = values / bg1.evaluate(omega)
    theta0, tilt_mag = _circle_rotation_guess(corrected[mask] if mask.sum() >= 8 else corrected)
    kappa_e0 = max(width0 * tilt_mag / 2.0, width0 * 0.01)
    kappa_i0 = max(width0 - kappa_e0, width0 * 0.05)

    if model == "bare":
        stage2_names = ("omega0", "kappa_i", "kappa_e", "theta")
        ref2 = np.array([center0, 0.0, 0.0, 0.0])
        scale2 = np.array([width0, width0, width0, 1.0])
        phys0 = np.array([center0, kappa_i0, kappa_e0, theta0])

        def resonance(omega_arr, pars):
            om0, ki, ke, theta = pars
            dip = 1.0 - s11_bare(omega_arr, om0, abs(ki), abs(ke))
            return 1.0 - dip * np.exp(1j * theta)
    else:
        ke_fix = float(pumped["kappa_e"])
        gamma0_fix = float(pumped["gamma0"])
        detuning_fix = float(pumped["detuning"])
        g0_guess = float(pumped.get("g", width0))
        lf_guess = float(pumped.get("lf_frequency", abs(detuning_fix)))
        stage2_names = ("omega0", "kappa_i", "g", "lf_frequency", "theta")
        ref2 = np.array([center0, 0.0, 0.0, lf_guess, 0.0])
        scale2 = np.array([width0, width0, max(width0, g0_guess),
                           max(width0, gamma0_fix), 1.0])
        phys0 = np.array([center0, kappa_i0, g0_guess, lf_guess, theta0])

        def resonance(omega_arr, pars):
            om0, ki, g, lf, theta = pars
            dip = 1.0 - s11_pumped(omega_arr, om0, abs(ki), ke_fix, lf,
                                   gamma0_fix, g, detuning_fix)
            return 1.0 - dip * np.exp(1j * theta)

    # alternate the ideal-response fit with a tail-free background
    # re-estimate (dividing the fitted resonance out of the data) so the
    # stage-2 seed is not biased by resonance tails leaking into the
    # baseline; stop when the estimate converges or hits the noise floor
    bg_est = bg1
    guess = (phys0 - ref2) / scale2
    span_w = omega[-1] - omega[0]
    prev_delta = np.inf
    for _ in range(40):
        corrected = values / bg_est.evaluate(omega)
        fit2 = least_squares(
            lambda u: resonance(omega, ref2 + scale2 * u) - corrected,
            guess, names=stage2_names, step_tol=1e-11, step_floor=1e-8)
        guess = fit2.params
        bg_new = _background_stage(
            omega, values / resonance(omega, ref2 + scale2 * fit2.params),
            mask, w_ref)
        delta = max(abs(bg_new.amplitude_offset - bg_est.amplitude_offset),
                    abs(bg_new.amplitude_slope - bg_est.amplitude_slope) * span_w,
                    abs(bg_new.phase_offset - bg_est.phase_offset),
                    abs(bg_new.phase_slope - bg_est.phase_slope) * span_w)
        bg_est = bg_new
        if delta < 1e-12 or delta > 0.8 * prev_delta:
            break
        prev_delta = delta
    bg1 = bg_est
    fit2.params = ref2 + scale2 * fit2.params
    fit2.uncertainties = scale2 * fit2.uncertainties

    # stage 3: joint fit of resonance and background, seeded by stages 1-2
    names = stage2_names + ("amplitude_offset", "amplitude_slope",
                            "phase_offset", "phase_slope")
    ref3 = np.concatenate([ref2, [0.0, 0.0, 0.0, 0.0]])
    scale3 = np.concatenate([scale2, [1.0, 1.0 / span_w, 1.0, 1.0 / span_w]])
    phys0 = np.concatenate([fit2.params,
                            [bg1.amplitude_offset, bg1.amplitude_slope,
                             bg1.phase_offset, bg1.phase_slope]])

    n_res = len(stage2_names)

    def full_model(pars):
        res = resonance(omega, pars[:n_res])
        a0, a1, b0, b1 = pars[n_res:]
        w = omega - w_ref
        return res * (a0 + a1 * w) * np.exp(1j * (b0 + b1 * w))

    fit3 = least_squares(lambda u: full_model(ref3 + scale3 * u) - values,
                         (phys0 - ref3) / scale3, names=names,
                         step_tol=1e-11, step_floor=1e-8)
    fit3.params = ref3 + scale3 * fit3.params
    fit3.uncertainties = scale3 * fit3.uncertainties

    pars = fit3.params
    background = BackgroundModel(
        amplitude_offset=float(pars[n_res]),
        amplitude_slope=float(pars[n_res + 1]),
        phase_offset=float(_wrap_angle(pars[n_res + 2])),
        phase_slope=float(pars[n_res + 3]),
        circle_rotation=float(_wrap_angle(pars[stage2_names.index("theta")])),
        reference_frequency=w_ref,
    )
    # rates enter the model through |.|; report them positive
    for name in ("kappa_i", "kappa_e", "g"):
        if name in names:
            i = names.index(name)
            pars[i] = abs(pars[i])
    theta_i = names.index("theta")
    pars[theta_i] = _wrap_angle(pars[theta_i])

    final = values / background.evaluate(omega)
    final = 1.0 - (1.0 - final) * np.exp(-1j * background.circle_rotation)
    fit3.background = background
    fit3.extras["corrected_trace"] = ComplexTrace(trace.frequency_hz, final)
    fit3.extras["stage2_params"] = {
        name: float(v) for name, v in zip(stage2_names, fit2.params)}
    if model == "bare":
        fit3.extras["kappa"] = float(pars[1] + pars[2])
    return fit3


def fit_lorentzian(trace: SpectrumTrace) -> FitResult:
    """Fit offset + A*(w/2)^2 / ((f - f0)^2 + (w/2)^2) to a spectrum.

    Frequencies are in Hz as stored in the trace.  Initial guesses come from
    the maximum, the median floor and the half-maximum crossings.
    """
    _require_points(len(trace))
    f = trace.frequency_hz
    y = trace.values

    offset0 = float(np.median(y))
    i0 = int(np.argmax(y))
    amp0 = float(y[i0] - offset0)
    if amp0 <= 0:
        raise NonIdentifiableError("no peak visible above the median floor")
    center0 = float(f[i0])
    half = offset0 + 0.5 * amp0
    left = i0
    while left > 0 and y[left] > half:
        left -= 1
    right = i0
    while right < y.size - 1 and y[right] > half:
        right += 1
    fwhm0 = float(f[right] - f[left])
    if fwhm0 <= 0:
        # second-moment fallback
        weights = np.clip(y - offset0, 0.0, None)
        fwhm0 = 2.0 * float(np.sqrt(np.sum(weights * (f - center0) ** 2) / np.sum(weights)))

    def model(pars):
        off, amp, center, fwhm = pars
        hw2 = (fwhm / 2.0) ** 2
        return off + amp * hw2 / ((f - center) ** 2 + hw2)

    fit = least_squares(lambda p: model(p) - y,
                        np.array([offset0, amp0, center0, fwhm0]),
                        names=("offset", "amplitude", "center", "fwhm"),
                        step_tol=1e-12, cost_tol=1e-15)
    fit.params[3] = abs(fit.params[3])
    if fit.params[3] <= 0:
        raise NonIdentifiableError("degenerate peak: fitted width is not positive")
    return fit


def fit_backaction(offsets, frequency_shifts, damping_shifts) -> FitResult:
    """Simultaneous fit of the sideband backaction pair to (g, kappa_eff).

    Both curves share the grid and are weighted equally:
    shift = 4 g^2 d/(k^2+4d^2), damping = 4 g^2 k/(k^2+4d^2).
    """
    d = np.asarray(offsets, dtype=float)
    shift = np.asarray(frequency_shifts, dtype=float)
    damping = np.asarray(damping_shifts, dtype=float)
    if d.shape != shift.shape or d.shape != damping.shape:
        raise DomainError("offset grid and data arrays must share one shape")
    scale = max(np.max(np.abs(shift)), np.max(np.abs(damping)))
    if scale == 0:
        raise NonIdentifiableError("backaction data is identically zero")

    kappa0 = _fwhm_guess(d, damping) or (d[-1] - d[0]) / 4.0
    g0 = 0.5 * math.sqrt(abs(np.max(damping)) * kappa0)

    def residual(pars):
        g, kappa = abs(pars[0]), abs(pars[1])
        ba = backaction_sideband(d, g, max(kappa, 1e-12), "red")
        return np.concatenate([ba.frequency_shift - shift, ba.damping_shift - damping])

    fit = least_squares(residual, np.array([g0, kappa0]), names=("g", "kappa_eff"))
    fit.params = np.abs(fit.params)
    return fit


def _fwhm_guess(x, y):
    i0 = int(np.argmax(y))
    top = y[i0]
    if top <= 0:
        return None
    above = np.where(y >= top / 2.0)[0]
    if above.size < 2:
        return None
    return float(x[above[-1]] - x[above[0]])


def fit_flux_arch(flux_bias, frequencies, total_inductance: float | None = None) -> FitResult:
    """Fit the frequency-vs-flux arch to (omega0(0), dilution, widening).

    ``flux_bias`` in PHI_0 units, ``frequencies`` in rad/s, at least 5 points
    inside a single arch.  When ``total_inductance`` is given the junction
    inductance 2*(1-dilution)*L and its critical current are reported in the
    extras.  Points spanning more than one arch raise
    :class:`NonIdentifiableError`; reduce them to one period first.
    """
    phi = np.asarray(flux_bias, dtype=float)
    om = np.asarray(frequencies, dtype=float)
    if phi.shape != om.shape or phi.size < 5:
        raise DomainError("need >= 5 (flux, frequency) points on a shared grid")
    if np.ptp(om) < 1e-9 * np.mean(om):
        raise NonIdentifiableError(
            "arch is flat: dilution and widening are not identifiable")

    order = np.argsort(phi)
    phi_s, om_s = phi[order], om[order]
    i_top = int(np.argmax(om_s))
    tol = 0.05 * np.ptp(om_s)
    left, right = om_s[:i_top + 1], om_s[i_top:]
    if np.any(np.diff(left) < -tol) or np.any(np.diff(right) > tol):
        raise NonIdentifiableError(
            "frequency rises again away from the arch top: points appear to "
            "span multiple arches; calibrate the flux axis to one period first")

    # coarse scan over the widening; the other two parameters are linear in
    # 1/omega^2 = a + b*sec(pi*gamma_l*phi)
    best = None
    y = 1.0 / om ** 2
    for gamma_l in np.linspace(0.05, 2.0, 118):
        c = np.cos(np.pi * gamma_l * phi)
        if np.any(c <= 0.05):
            continue
        design = np.column_stack([np.ones_like(phi), 1.0 / c])
        coef, res, *_ = np.linalg.lstsq(design, y, rcond=None)
        a, b = coef
        if a + b <= 0 or a < 0:
            continue
        sse = float(res[0]) if res.size else float(np.sum((design @ coef - y) ** 2))
        if best is None or sse < best[0]:
            best = (sse, gamma_l, a, b)
    if best is None:
        raise NonIdentifiableError("no single-arch model matches the points")
    _, gamma_l0, a, b = best
    omega00 = 1.0 / math.sqrt(a + b)
    dilution0 = a / (a + b)

    def model(pars):
        om0, dil, gl = pars
        c = np.cos(np.pi * gl * phi)
        c = np.where(c > 1e-9, c, 1e-9)
        return om0 / np.sqrt(np.abs(dil + (1.0 - dil) / c))

    fit = least_squares(lambda p: model(p) - om,
                        np.array([omega00, dilution0, gamma_l0]),
                        names=("omega0", "dilution", "gamma_l"))
    om0, dil, gl = fit.params
    if not 0 < dil < 1 or 1.0 - dil < 1e-6:
        raise NonIdentifiableError(
            f"fitted dilution {dil} leaves the widening unconstrained")
    if total_inductance is not None:
        lj0 = 2.0 * (1.0 - dil) * total_inductance
        fit.extras["junction_inductance"] = lj0
        fit.extras["critical_current"] = PHI_0 / (2.0 * math.pi * lj0)
    return fit
