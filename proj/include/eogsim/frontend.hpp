#pragma once

// Ideal differential instrumentation stage: output = gain * (point -
// reference + offset), clamped to the supply rails. Subtraction is
// exact, so common-mode interference cancels except for the explicit
// input offset.

#include <cmath>
#include <string>
#include <vector>

#include "eogsim/error.hpp"
#include "eogsim/signal.hpp"

namespace eogsim {

struct FrontEndConfig {
    double gain_A = 1000.0;
    double rail_pos_V = 5.0;
    double rail_neg_V = -5.0;
    double input_offset_uV = 0.0;
};

inline void validate_frontend(const FrontEndConfig& cfg) {
    if (!(cfg.gain_A > 0.0))
        throw ValidationError("front-end gain must be positive");
    if (!(cfg.rail_neg_V < 0.0 && cfg.rail_pos_V > 0.0))
        throw ValidationError("supply rails must straddle zero (rail_neg < 0 < rail_pos)");
    if (!std::isfinite(cfg.input_offset_uV))
        throw ValidationError("input offset must be finite");
}

/// Amplified signal in volts with a per-sample rail-limiting flag.
struct AmplifiedTrace {
    double sample_rate_hz = 0.0;
    std::vector<double> v_out_V;
    std::vector<bool> clipped;

    std::size_t size() const { return v_out_V.size(); }
    double time_at(std::size_t i) const { return static_cast<double>(i) / sample_rate_hz; }
};

/// Differential amplification with rail clamping. clipped[i] is set iff
/// the ideal (pre-clamp) value exceeded a rail at sample i.
inline AmplifiedTrace diff_amplify(const SampleTrace& trace, const FrontEndConfig& cfg) {
    validate_trace(trace);
    validate_frontend(cfg);

    AmplifiedTrace out;
    out.sample_rate_hz = trace.sample_rate_hz;
    out.v_out_V.resize(trace.size());
    out.clipped.resize(trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
        const double vp = trace.v_p_uV[i];
        const double vr = trace.v_ref_uV[i];
        if (!std::isfinite(vp) || !std::isfinite(vr))
            throw ValidationError("non-finite input sample at index " + std::to_string(i));
        const double ideal = cfg.gain_A * ((vp - vr + cfg.input_offset_uV) * 1e-6);
        bool clip = false;
        double v = ideal;
        if (v > cfg.rail_pos_V) {
            v = cfg.rail_pos_V;
            clip = true;
        } else if (v < cfg.rail_neg_V) {
            v = cfg.rail_neg_V;
            clip = true;
        }
        out.v_out_V[i] = v;
        out.clipped[i] = clip;
    }
    return out;
}

/// Feeds a pure common-mode trace (v_p == v_ref sample for sample)
/// through the stage and reports max |v_out|. With zero offset the
/// ideal subtraction yields exactly zero.
inline double common_mode_rejection_check(const SampleTrace& common_signal,
                                          const FrontEndConfig& cfg) {
    validate_trace(common_signal);
    for (std::size_t i = 0; i < common_signal.size(); ++i) {
        if (common_signal.v_p_uV[i] != common_signal.v_ref_uV[i])
            throw ValidationError("input is not pure common-mode: channels differ at index " +
                                  std::to_string(i));
    }
    const AmplifiedTrace amp = diff_amplify(common_signal, cfg);
    double peak = 0.0;
    for (double v : amp.v_out_V) peak = std::max(peak, std::abs(v));
    return peak;
}

}  // namespace eogsim
