#pragma once

// Whole-chain configuration and the end-to-end classifier:
// differential amplification -> low-pass filter -> ADC -> pulse
// detector. Config files are declarative `key = value` text grouped in
// [sections]; '#' starts a comment.

#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "eogsim/decision.hpp"
#include "eogsim/error.hpp"
#include "eogsim/filter.hpp"
#include "eogsim/frontend.hpp"
#include "eogsim/io.hpp"
#include "eogsim/motor.hpp"
#include "eogsim/signal.hpp"

namespace eogsim {

/// Timing of the single gaze event used per evaluation trial.
struct TrialProtocol {
    double duration_s = 1.0;
    double event_onset_s = 0.4;
    double event_duration_s = 0.2;
};

struct PipelineConfig {
    double sample_rate_hz = 250.0;
    Polarity polarity;
    FrontEndConfig frontend;
    SallenKeyParams filter;
    AdcConfig adc;
    DetectorConfig detector;
    double motor_dwell_s = 1.0;
    double motor_tick_s = kDefaultDeadTimeS;
    TrialProtocol trial;
    std::vector<SubjectProfile> subjects;
    int eval_trials = 1000;
    std::uint64_t eval_seed = 1;
};

inline void validate_config(const PipelineConfig& cfg) {
    if (!(cfg.sample_rate_hz >= kMinSampleRateHz))
        throw ValidationError("pipeline sample rate must be at least " +
                              std::to_string(kMinSampleRateHz) + " Hz");
    validate_frontend(cfg.frontend);
    validate_params(cfg.filter);
    if (!(cfg.sample_rate_hz > 2.0 * cfg.filter.f_c_hz))
        throw ValidationError("pipeline sample rate must exceed twice the filter cutoff");
    validate_adc(cfg.adc);
    if (cfg.adc.fs_hz != cfg.sample_rate_hz)
        throw ValidationError("ADC sample rate must equal the pipeline sample rate");
    validate_detector(cfg.detector);
    if (!(cfg.motor_dwell_s >= 0.0) || !(cfg.motor_tick_s > 0.0))
        throw ValidationError("motor dwell must be >= 0 and tick > 0");
    if (!(cfg.trial.duration_s > 0.0) || !(cfg.trial.event_duration_s > 0.0) ||
        cfg.trial.event_onset_s < 0.0 ||
        cfg.trial.event_onset_s + cfg.trial.event_duration_s > cfg.trial.duration_s)
        throw ValidationError("trial event must fit inside the trial window");
    if (cfg.eval_trials < 1)
        throw ValidationError("evaluation needs at least one trial");
    for (const SubjectProfile& p : cfg.subjects) validate_profile(p);
}

/// Full decision chain: per-pulse left/right commands stamped at pulse
/// onset. The trace must be sampled at the configured pipeline rate.
inline std::vector<Command> classify(const SampleTrace& trace, const PipelineConfig& cfg) {
    validate_config(cfg);
    if (trace.sample_rate_hz != cfg.sample_rate_hz)
        throw ValidationError("trace sample rate " + std::to_string(trace.sample_rate_hz) +
                              " Hz does not match the configured pipeline rate " +
                              std::to_string(cfg.sample_rate_hz) + " Hz");

    const AmplifiedTrace amplified = diff_amplify(trace, cfg.frontend);
    const BiquadCoeffs coeffs = discretize(cfg.filter, trace.sample_rate_hz);
    const AmplifiedTrace filtered = apply_filter(amplified, coeffs);
    const AmplifiedTrace digital = quantize(filtered, cfg.adc);
    const std::vector<DetectedPulse> pulses = detect_pulses(digital, cfg.detector);

    std::vector<Command> commands;
    commands.reserve(pulses.size());
    for (const DetectedPulse& p : pulses) commands.push_back({p.direction, p.onset_s});
    return commands;
}

namespace detail {

struct ConfigEntry {
    std::string value;
    std::size_t line_no;
};

inline std::int64_t parse_int(const std::string& field, std::size_t line_no) {
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ValidationError("line " + std::to_string(line_no) + ": invalid integer '" + field +
                              "'");
    return v;
}

inline bool parse_bool(const std::string& field, std::size_t line_no) {
    if (field == "true" || field == "1") return true;
    if (field == "false" || field == "0") return false;
    throw ValidationError("line " + std::to_string(line_no) + ": invalid boolean '" + field +
                          "' (expected true/false)");
}

}  // namespace detail

/// Parses a pipeline config. Unknown sections or keys are rejected so
/// typos cannot silently fall back to defaults. Subjects are listed as
/// [subject.N] sections; if none appear, the defaults ship no subjects.
inline PipelineConfig parse_config(std::istream& in) {
    using detail::ConfigEntry;

    std::map<std::string, std::map<std::string, ConfigEntry>> sections;
    std::vector<std::string> subject_order;

    std::string line, section;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const std::string stripped = detail::strip(line);
        if (stripped.empty()) continue;
        if (stripped.front() == '[') {
            if (stripped.back() != ']')
                throw ValidationError("line " + std::to_string(line_no) +
                                      ": unterminated section header");
            section = detail::strip(stripped.substr(1, stripped.size() - 2));
            if (section.empty())
                throw ValidationError("line " + std::to_string(line_no) + ": empty section name");
            if (section.rfind("subject.", 0) == 0 && !sections.count(section))
                subject_order.push_back(section);
            continue;
        }
        const std::size_t eq = stripped.find('=');
        if (eq == std::string::npos)
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": expected `key = value` or a [section] header");
        const std::string key = detail::strip(stripped.substr(0, eq));
        const std::string value = detail::strip(stripped.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ValidationError("line " + std::to_string(line_no) + ": empty key or value");
        if (section.empty())
            throw ValidationError("line " + std::to_string(line_no) +
                                  ": key '" + key + "' appears before any [section]");
        sections[section][key] = {value, line_no};
    }

    PipelineConfig cfg;
    auto take = [&](const std::string& sec, const std::string& key, auto parse, auto& dest) {
        auto s = sections.find(sec);
        if (s == sections.end()) return;
        auto k = s->second.find(key);
        if (k == s->second.end()) return;
        dest = parse(k->second.value, k->second.line_no);
        s->second.erase(k);
    };
    const auto as_double = [](const std::string& v, std::size_t n) {
        return detail::parse_double(v, n);
    };
    const auto as_int = [](const std::string& v, std::size_t n) {
        return static_cast<int>(detail::parse_int(v, n));
    };
    const auto as_u64 = [](const std::string& v, std::size_t n) {
        return static_cast<std::uint64_t>(detail::parse_int(v, n));
    };
    const auto as_bool = [](const std::string& v, std::size_t n) {
        return detail::parse_bool(v, n);
    };

    take("signal", "sample_rate_hz", as_double, cfg.sample_rate_hz);
    take("signal", "right_is_positive", as_bool, cfg.polarity.right_is_positive);
    take("trial", "duration_s", as_double, cfg.trial.duration_s);
    take("trial", "event_onset_s", as_double, cfg.trial.event_onset_s);
    take("trial", "event_duration_s", as_double, cfg.trial.event_duration_s);
    take("frontend", "gain", as_double, cfg.frontend.gain_A);
    take("frontend", "rail_pos_v", as_double, cfg.frontend.rail_pos_V);
    take("frontend", "rail_neg_v", as_double, cfg.frontend.rail_neg_V);
    take("frontend", "input_offset_uv", as_double, cfg.frontend.input_offset_uV);
    take("filter", "cutoff_hz", as_double, cfg.filter.f_c_hz);
    take("filter", "q", as_double, cfg.filter.q);
    take("filter", "gain", as_double, cfg.filter.k);
    take("adc", "bits", as_int, cfg.adc.bits);
    take("adc", "full_scale_v", as_double, cfg.adc.full_scale_V);
    take("detector", "threshold_v", as_double, cfg.detector.threshold_V);
    take("detector", "release_v", as_double, cfg.detector.release_V);
    take("detector", "min_pulse_s", as_double, cfg.detector.min_pulse_s);
    take("detector", "refractory_s", as_double, cfg.detector.refractory_s);
    take("motor", "dwell_s", as_double, cfg.motor_dwell_s);
    take("motor", "tick_s", as_double, cfg.motor_tick_s);
    take("evaluate", "trials", as_int, cfg.eval_trials);
    take("evaluate", "seed", as_u64, cfg.eval_seed);

    for (const std::string& sec : subject_order) {
        SubjectProfile p;
        p.id = static_cast<int>(detail::parse_int(sec.substr(8), 0));
        take(sec, "amp_mean_uv", as_double, p.saccade_amp_mean_uV);
        take(sec, "amp_jitter_frac", as_double, p.saccade_amp_jitter_frac);
        take(sec, "white_sigma_uv", as_double, p.noise.white_sigma_uV);
        take(sec, "hum_amp_uv", as_double, p.noise.hum_amp_uV);
        take(sec, "hum_freq_hz", as_double, p.noise.hum_freq_hz);
        take(sec, "drift_amp_uv", as_double, p.noise.drift_amp_uV);
        take(sec, "drift_freq_hz", as_double, p.noise.drift_freq_hz);
        cfg.subjects.push_back(p);
    }

    for (const auto& [sec, keys] : sections) {
        if (keys.empty()) continue;
        const auto& [key, entry] = *keys.begin();
        throw ValidationError("line " + std::to_string(entry.line_no) + ": unknown key '" + key +
                              "' in section [" + sec + "]");
    }

    cfg.adc.fs_hz = cfg.sample_rate_hz;
    validate_config(cfg);
    return cfg;
}

inline PipelineConfig load_config(const std::string& path) {
    auto in = detail::open_input(path);
    return parse_config(in);
}

}  // namespace eogsim
