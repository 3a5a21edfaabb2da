#pragma once

// Controller-side decision stage: mid-tread quantization to an ADC
// grid, then supra-threshold pulse detection with hysteresis, debounce
// and a refractory hold-off. Pulse polarity carries the left/right
// command.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "eogsim/error.hpp"
#include "eogsim/frontend.hpp"
#include "eogsim/signal.hpp"

namespace eogsim {

struct AdcConfig {
    int bits = 8;
    double full_scale_V = 5.0;
    double fs_hz = 250.0;
};

inline void validate_adc(const AdcConfig& adc) {
    if (adc.bits < 1 || adc.bits > 24)
        throw ValidationError("ADC bits must lie in [1, 24]");
    if (!(adc.full_scale_V > 0.0))
        throw ValidationError("ADC full scale must be positive");
    if (!(adc.fs_hz > 0.0))
        throw ValidationError("ADC sample rate must be positive");
}

struct DetectorConfig {
    double threshold_V = 0.5;
    double release_V = 0.3;
    double min_pulse_s = 0.04;
    double refractory_s = 0.2;
};

inline void validate_detector(const DetectorConfig& det) {
    if (!(det.release_V > 0.0 && det.release_V < det.threshold_V))
        throw ValidationError("hysteresis requires 0 < release_V < threshold_V");
    if (!(det.min_pulse_s > 0.0))
        throw ValidationError("minimum pulse width must be positive");
    if (det.refractory_s < 0.0)
        throw ValidationError("refractory period must be nonnegative");
}

/// One detected supra-threshold excursion.
struct DetectedPulse {
    Direction direction = Direction::Right;
    double onset_s = 0.0;
    double duration_s = 0.0;
    double peak_V = 0.0;   // signed extremum within the pulse
};

/// A left/right command emitted at pulse onset.
struct Command {
    Direction direction = Direction::Right;
    double at_s = 0.0;
};

/// Snaps each sample to the nearest of 2^bits mid-tread levels spanning
/// [-full_scale_V, +full_scale_V); out-of-range samples clamp to the
/// edge codes and are flagged as clipped.
inline AmplifiedTrace quantize(const AmplifiedTrace& trace, const AdcConfig& adc) {
    validate_adc(adc);
    if (trace.sample_rate_hz != adc.fs_hz)
        throw ValidationError("trace sample rate " + std::to_string(trace.sample_rate_hz) +
                              " Hz does not match ADC rate " + std::to_string(adc.fs_hz) + " Hz");

    const double step = 2.0 * adc.full_scale_V / std::pow(2.0, adc.bits);
    const auto code_min = -(std::int64_t{1} << (adc.bits - 1));
    const auto code_max = (std::int64_t{1} << (adc.bits - 1)) - 1;

    AmplifiedTrace out = trace;
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::int64_t code = std::llround(trace.v_out_V[i] / step);
        if (code < code_min) {
            code = code_min;
            out.clipped[i] = true;
        } else if (code > code_max) {
            code = code_max;
            out.clipped[i] = true;
        }
        out.v_out_V[i] = static_cast<double>(code) * step;
    }
    return out;
}

/// Scans the trace for pulses: one opens when |v| rises above
/// threshold_V and closes when |v| falls below release_V (or the trace
/// ends). Pulses shorter than min_pulse_s are discarded; every close —
/// kept or discarded — suppresses detection for refractory_s. Direction
/// is the sign of the pulse's peak.
inline std::vector<DetectedPulse> detect_pulses(const AmplifiedTrace& trace,
                                                const DetectorConfig& det) {
    validate_detector(det);
    if (trace.size() == 0)
        throw ValidationError("trace is empty");

    const double fs = trace.sample_rate_hz;
    const auto refractory_n = static_cast<std::size_t>(std::llround(det.refractory_s * fs));

    std::vector<DetectedPulse> pulses;
    bool open = false;
    std::size_t open_at = 0;
    std::size_t hold_until = 0;   // first index where detection resumes
    double peak = 0.0;

    auto close_pulse = [&](std::size_t i) {
        const double duration = static_cast<double>(i - open_at) / fs;
        if (duration >= det.min_pulse_s) {
            pulses.push_back({peak > 0.0 ? Direction::Right : Direction::Left,
                              static_cast<double>(open_at) / fs, duration, peak});
        }
        open = false;
        hold_until = i + refractory_n;
    };

    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double v = trace.v_out_V[i];
        if (!open) {
            if (i >= hold_until && std::abs(v) > det.threshold_V) {
                open = true;
                open_at = i;
                peak = v;
            }
        } else {
            if (std::abs(v) < det.release_V) {
                close_pulse(i);
            } else if (std::abs(v) > std::abs(peak)) {
                peak = v;
            }
        }
    }
    if (open) close_pulse(trace.size());
    return pulses;
}

}  // namespace eogsim
