#pragma once

// Second-order low-pass stage in the Sallen-Key (VCVS) topology:
// continuous-time design from (cutoff, Q, gain), an equal-resistor
// component realization, bilinear discretization prewarped at the
// cutoff, and a direct-form-II-transposed runner.
//
// Continuous prototype, with w0 = 2*pi*f_c:
//
//     H(s) = k * w0^2 / (s^2 + (w0/q) * s + w0^2)

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "eogsim/error.hpp"
#include "eogsim/frontend.hpp"

namespace eogsim {

struct SallenKeyParams {
    double f_c_hz = 50.0;   // -3 dB design cutoff (for q = 1/sqrt(2))
    double q = std::numbers::sqrt2 / 2.0;
    double k = 1.0;         // passband gain, >= 1 for the non-inverting stage
};

inline void validate_params(const SallenKeyParams& p) {
    if (!(p.f_c_hz > 0.0))
        throw ValidationError("cutoff frequency must be positive");
    if (!(p.q > 0.0))
        throw ValidationError("quality factor must be positive");
    if (!(p.k >= 1.0))
        throw ValidationError("passband gain must be >= 1 for the non-inverting topology");
}

inline SallenKeyParams design_sallen_key(double f_c_hz, double q, double k) {
    SallenKeyParams p{f_c_hz, q, k};
    validate_params(p);
    return p;
}

/// Continuous transfer function evaluated at s = j*2*pi*f.
inline std::complex<double> analog_response(const SallenKeyParams& p, double f_hz) {
    const double w0 = 2.0 * std::numbers::pi * p.f_c_hz;
    const std::complex<double> s(0.0, 2.0 * std::numbers::pi * f_hz);
    return p.k * w0 * w0 / (s * s + (w0 / p.q) * s + w0 * w0);
}

/// One R/C/K realization of the stage.
struct ComponentValues {
    double r1_ohms = 0.0;
    double r2_ohms = 0.0;
    double c1_farads = 0.0;   // feedback capacitor (node to output)
    double c2_farads = 0.0;   // shunt capacitor (op-amp input to ground)
    double gain = 1.0;        // non-inverting amplifier gain K
};

/// Re-derives (f_c, q, k) from component values via the topology's
/// transfer function. Rejects component sets whose damping term is not
/// positive (no stable low-pass response).
inline SallenKeyParams derive_params(const ComponentValues& cv) {
    if (!(cv.r1_ohms > 0.0 && cv.r2_ohms > 0.0 && cv.c1_farads > 0.0 && cv.c2_farads > 0.0))
        throw ValidationError("component values must be positive");
    const double r1c1 = cv.r1_ohms * cv.c1_farads;
    const double prod = cv.r1_ohms * cv.r2_ohms * cv.c1_farads * cv.c2_farads;
    const double damping = r1c1 * (1.0 - cv.gain) + cv.c2_farads * (cv.r1_ohms + cv.r2_ohms);
    if (!(damping > 0.0))
        throw ValidationError("component set has non-positive damping; stage would oscillate");
    SallenKeyParams p;
    p.f_c_hz = 1.0 / (2.0 * std::numbers::pi * std::sqrt(prod));
    p.q = std::sqrt(prod) / damping;
    p.k = cv.gain;
    return p;
}

/// Solves for components under the equal-resistor normalization:
/// R1 = R2, C2 = c_farads, C1 = ratio * c_farads, K = k. The capacitor
/// ratio follows from the damping equation; it is positive for every
/// k >= 1, q > 0. The result is self-checked by substitution back into
/// the transfer function (0.01% tolerance).
inline ComponentValues component_values(const SallenKeyParams& p, double c_farads) {
    validate_params(p);
    if (!(c_farads > 0.0))
        throw ValidationError("reference capacitance must be positive");

    // With R1 = R2 = R and x = sqrt(C1/C2), the damping equation reads
    // (k-1) x^2 + x/q - 2 = 0; the positive root in cancellation-free form:
    const double iq = 1.0 / p.q;
    const double x = 4.0 / (iq + std::sqrt(iq * iq + 8.0 * (p.k - 1.0)));
    if (!(x > 0.0) || !std::isfinite(x))
        throw ValidationError("no positive-real component solution for the requested (q, k)");

    const double w0 = 2.0 * std::numbers::pi * p.f_c_hz;
    ComponentValues cv;
    cv.c2_farads = c_farads;
    cv.c1_farads = x * x * c_farads;
    cv.r1_ohms = cv.r2_ohms = 1.0 / (w0 * c_farads * x);
    cv.gain = p.k;

    const SallenKeyParams check = derive_params(cv);
    const double tol = 1e-4;
    if (std::abs(check.f_c_hz - p.f_c_hz) > tol * p.f_c_hz ||
        std::abs(check.q - p.q) > tol * p.q || std::abs(check.k - p.k) > tol * p.k)
        throw ValidationError("component self-check failed to reproduce the design");
    return cv;
}

/// Two-pole recurrence coefficients, a0 normalized to 1.
struct BiquadCoeffs {
    double b0 = 0.0, b1 = 0.0, b2 = 0.0;
    double a1 = 0.0, a2 = 0.0;
    double fs_hz = 0.0;
};

/// Bilinear transform of the analog prototype with frequency prewarping
/// at f_c, so the discrete magnitude at f_c equals the analog one (k*q)
/// exactly. Requires f_c strictly below Nyquist.
inline BiquadCoeffs discretize(const SallenKeyParams& p, double fs_hz) {
    validate_params(p);
    if (!(fs_hz > 2.0 * p.f_c_hz))
        throw ValidationError("sample rate " + std::to_string(fs_hz) +
                              " Hz must exceed twice the cutoff " + std::to_string(p.f_c_hz) +
                              " Hz");

    const double w = 2.0 * std::numbers::pi * p.f_c_hz / fs_hz;
    const double sn = std::sin(w);
    const double cs = std::cos(w);
    const double alpha = sn / (2.0 * p.q);
    const double a0 = 1.0 + alpha;

    BiquadCoeffs c;
    c.b0 = p.k * (1.0 - cs) / 2.0 / a0;
    c.b1 = p.k * (1.0 - cs) / a0;
    c.b2 = c.b0;
    c.a1 = -2.0 * cs / a0;
    c.a2 = (1.0 - alpha) / a0;
    c.fs_hz = fs_hz;
    return c;
}

/// Exact evaluation of the discrete transfer function on the unit
/// circle; f must lie in [0, fs/2].
struct ResponsePoint {
    double magnitude = 0.0;
    double phase_rad = 0.0;
};

inline ResponsePoint frequency_response(const BiquadCoeffs& c, double f_hz) {
    if (f_hz < 0.0 || f_hz > c.fs_hz / 2.0)
        throw ValidationError("frequency " + std::to_string(f_hz) + " Hz outside [0, " +
                              std::to_string(c.fs_hz / 2.0) + "] Hz");
    const double w = 2.0 * std::numbers::pi * f_hz / c.fs_hz;
    const std::complex<double> z1 = std::polar(1.0, -w);
    const std::complex<double> z2 = z1 * z1;
    const std::complex<double> h =
        (c.b0 + c.b1 * z1 + c.b2 * z2) / (1.0 + c.a1 * z1 + c.a2 * z2);
    return {std::abs(h), std::arg(h)};
}

/// Runs the recurrence causally from zero state (direct form II
/// transposed).
inline std::vector<double> filter_signal(std::span<const double> x, const BiquadCoeffs& c) {
    std::vector<double> y(x.size());
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double yi = c.b0 * x[i] + s1;
        s1 = c.b1 * x[i] - c.a1 * yi + s2;
        s2 = c.b2 * x[i] - c.a2 * yi;
        y[i] = yi;
    }
    return y;
}

/// Filters an amplified trace sample for sample. Rail flags pass
/// through untouched; they describe the upstream stage.
inline AmplifiedTrace apply_filter(const AmplifiedTrace& trace, const BiquadCoeffs& c) {
    if (trace.sample_rate_hz != c.fs_hz)
        throw ValidationError("trace sample rate " + std::to_string(trace.sample_rate_hz) +
                              " Hz does not match filter design rate " + std::to_string(c.fs_hz) +
                              " Hz");
    AmplifiedTrace out = trace;
    out.v_out_V = filter_signal(trace.v_out_V, c);
    return out;
}

}  // namespace eogsim
