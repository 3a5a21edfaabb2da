#pragma once

// Synthetic EOG signal model: scripted gaze events rendered as smooth
// signed pulses on a two-electrode trace, plus configurable corruption
// (white noise, mains hum, slow drift).

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "eogsim/error.hpp"

namespace eogsim {

enum class Direction { Left, Right };

inline const char* to_string(Direction d) {
    return d == Direction::Left ? "Left" : "Right";
}

/// EOG amplitude range, microvolts.
inline constexpr double kAmplitudeMinUv = 50.0;
inline constexpr double kAmplitudeMaxUv = 3500.0;

/// EOG frequency band, Hz.
inline constexpr double kBandLowHz = 1.0;
inline constexpr double kBandHighHz = 50.0;

/// Minimum supported sample rate: twice the band's upper edge.
inline constexpr double kMinSampleRateHz = 2.0 * kBandHighHz;

/// Maps gaze direction to deflection sign on the point electrode.
struct Polarity {
    bool right_is_positive = true;

    double sign(Direction d) const {
        const double s = right_is_positive ? 1.0 : -1.0;
        return d == Direction::Right ? s : -s;
    }
};

/// Uniformly sampled electrode potentials, microvolts. v_p_uV is the
/// point-of-interest electrode, v_ref_uV the body reference. Sample i
/// sits at t = i / sample_rate_hz.
struct SampleTrace {
    double sample_rate_hz = 0.0;
    std::vector<double> v_p_uV;
    std::vector<double> v_ref_uV;

    std::size_t size() const { return v_p_uV.size(); }
    double time_at(std::size_t i) const { return static_cast<double>(i) / sample_rate_hz; }
};

inline void validate_trace(const SampleTrace& t) {
    if (t.v_p_uV.empty())
        throw ValidationError("trace is empty");
    if (t.v_p_uV.size() != t.v_ref_uV.size())
        throw ValidationError("trace channels differ in length: v_p has " +
                              std::to_string(t.v_p_uV.size()) + " samples, v_ref has " +
                              std::to_string(t.v_ref_uV.size()));
    if (!(t.sample_rate_hz >= kMinSampleRateHz))
        throw ValidationError("sample rate " + std::to_string(t.sample_rate_hz) +
                              " Hz is below the minimum " + std::to_string(kMinSampleRateHz) +
                              " Hz (twice the band's upper edge)");
}

/// One scripted ground-truth eye movement.
struct GazeEvent {
    Direction direction = Direction::Right;
    double onset_s = 0.0;
    double duration_s = 0.0;
    double amplitude_uV = 0.0;
};

/// Additive corruption applied to the point electrode.
struct NoiseConfig {
    double white_sigma_uV = 0.0;
    double hum_amp_uV = 0.0;
    double hum_freq_hz = 50.0;
    double drift_amp_uV = 0.0;
    double drift_freq_hz = 0.2;
    std::uint64_t seed = 0;
};

inline void validate_noise(const NoiseConfig& cfg) {
    if (cfg.white_sigma_uV < 0.0 || cfg.hum_amp_uV < 0.0 || cfg.drift_amp_uV < 0.0)
        throw ValidationError("noise amplitudes must be nonnegative");
    if (!(cfg.hum_freq_hz > 0.0) || !(cfg.drift_freq_hz > 0.0))
        throw ValidationError("noise frequencies must be positive");
}

/// Per-subject amplitude statistics and noise environment.
struct SubjectProfile {
    int id = 0;
    double saccade_amp_mean_uV = 0.0;
    double saccade_amp_jitter_frac = 0.0;
    NoiseConfig noise;
};

inline void validate_profile(const SubjectProfile& p) {
    if (!(p.saccade_amp_mean_uV >= kAmplitudeMinUv && p.saccade_amp_mean_uV <= kAmplitudeMaxUv))
        throw ValidationError("subject " + std::to_string(p.id) + ": mean amplitude " +
                              std::to_string(p.saccade_amp_mean_uV) + " µV outside EOG range [" +
                              std::to_string(kAmplitudeMinUv) + ", " +
                              std::to_string(kAmplitudeMaxUv) + "] µV");
    if (!(p.saccade_amp_jitter_frac >= 0.0 && p.saccade_amp_jitter_frac < 1.0))
        throw ValidationError("subject " + std::to_string(p.id) +
                              ": amplitude jitter fraction must lie in [0, 1)");
    validate_noise(p.noise);
}

/// Checks ordering, spacing and amplitude bounds of a gaze script.
inline void validate_script(std::span<const GazeEvent> script, double total_s) {
    for (std::size_t i = 0; i < script.size(); ++i) {
        const GazeEvent& e = script[i];
        if (!(e.duration_s > 0.0))
            throw ValidationError("event " + std::to_string(i) + ": duration must be positive");
        if (e.onset_s < 0.0 || e.onset_s + e.duration_s > total_s + 1e-9)
            throw ValidationError("event " + std::to_string(i) + ": does not fit in [0, " +
                                  std::to_string(total_s) + "] s");
        if (!(e.amplitude_uV >= kAmplitudeMinUv && e.amplitude_uV <= kAmplitudeMaxUv))
            throw ValidationError("event " + std::to_string(i) + ": amplitude " +
                                  std::to_string(e.amplitude_uV) + " µV outside EOG range [" +
                                  std::to_string(kAmplitudeMinUv) + ", " +
                                  std::to_string(kAmplitudeMaxUv) + "] µV");
        if (i > 0) {
            const GazeEvent& prev = script[i - 1];
            if (prev.onset_s + prev.duration_s > e.onset_s + 1e-9)
                throw ValidationError("events " + std::to_string(i - 1) + " and " +
                                      std::to_string(i) + " overlap or are out of order");
        }
    }
}

namespace detail {

/// Raised-cosine plateau envelope on u in [0,1]: quarter-period rise,
/// half-period unity plateau, quarter-period fall. Zero outside.
inline double pulse_envelope(double u) {
    constexpr double edge = 0.25;
    if (u <= 0.0 || u >= 1.0) return 0.0;
    if (u < edge) return 0.5 * (1.0 - std::cos(std::numbers::pi * u / edge));
    if (u > 1.0 - edge) return 0.5 * (1.0 - std::cos(std::numbers::pi * (1.0 - u) / edge));
    return 1.0;
}

}  // namespace detail

/// Renders a gaze script as a noiseless trace: each event becomes a
/// smooth unipolar pulse whose sign encodes direction and whose plateau
/// reaches the event amplitude exactly; the reference channel stays 0.
/// The trace covers [0, total_s) with round(total_s * fs_hz) samples.
inline SampleTrace synth_trace(std::span<const GazeEvent> script, double total_s, double fs_hz,
                               const Polarity& polarity = {}) {
    if (!(total_s > 0.0))
        throw ValidationError("total duration must be positive");
    if (!(fs_hz >= kMinSampleRateHz))
        throw ValidationError("sample rate " + std::to_string(fs_hz) +
                              " Hz is below the minimum " + std::to_string(kMinSampleRateHz) +
                              " Hz (twice the band's upper edge)");
    validate_script(script, total_s);

    const auto n = static_cast<std::size_t>(std::llround(total_s * fs_hz));
    if (n == 0)
        throw ValidationError("requested trace has no samples");

    SampleTrace trace;
    trace.sample_rate_hz = fs_hz;
    trace.v_p_uV.assign(n, 0.0);
    trace.v_ref_uV.assign(n, 0.0);

    for (std::size_t ev = 0; ev < script.size(); ++ev) {
        const GazeEvent& e = script[ev];
        if (e.duration_s * fs_hz < 2.0)
            throw ValidationError("event " + std::to_string(ev) +
                                  ": duration shorter than two sample periods cannot place a "
                                  "sample on the pulse plateau");
        const double sign = polarity.sign(e.direction);
        const auto i0 = static_cast<std::size_t>(std::max(0.0, std::ceil(e.onset_s * fs_hz)));
        const auto i1 = std::min<std::size_t>(
            n - 1, static_cast<std::size_t>(std::floor((e.onset_s + e.duration_s) * fs_hz)));
        for (std::size_t i = i0; i <= i1; ++i) {
            const double u = (trace.time_at(i) - e.onset_s) / e.duration_s;
            trace.v_p_uV[i] += sign * e.amplitude_uV * detail::pulse_envelope(u);
        }
    }
    return trace;
}

/// Adds seeded white Gaussian noise plus deterministic hum and drift
/// sinusoids to the point electrode only. Same trace, same config and
/// seed give bit-identical output.
inline SampleTrace add_noise(const SampleTrace& trace, const NoiseConfig& cfg) {
    validate_trace(trace);
    validate_noise(cfg);

    SampleTrace out = trace;
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> unit(0.0, 1.0);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double t = out.time_at(i);
        double extra = cfg.white_sigma_uV > 0.0 ? cfg.white_sigma_uV * unit(rng) : 0.0;
        extra += cfg.hum_amp_uV * std::sin(two_pi * cfg.hum_freq_hz * t);
        extra += cfg.drift_amp_uV * std::sin(two_pi * cfg.drift_freq_hz * t);
        out.v_p_uV[i] += extra;
    }
    return out;
}

/// Injects an identical sinusoid on both electrodes (pure common mode),
/// e.g. line-coupled interference that an ideal differential stage
/// cancels.
inline SampleTrace add_common_mode(const SampleTrace& trace, double amp_uV, double freq_hz) {
    validate_trace(trace);
    if (amp_uV < 0.0 || !(freq_hz > 0.0))
        throw ValidationError("common-mode amplitude must be >= 0 and frequency > 0");

    SampleTrace out = trace;
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double v = amp_uV * std::sin(two_pi * freq_hz * out.time_at(i));
        out.v_p_uV[i] += v;
        out.v_ref_uV[i] += v;
    }
    return out;
}

}  // namespace eogsim
