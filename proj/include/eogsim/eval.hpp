#pragma once

// Monte-Carlo accuracy harness: per-subject balanced left/right trials,
// each one synthesized gaze event pushed through the full chain. Trial
// seeds are derived from (master seed, subject, trial index), so
// results do not depend on execution order and parallel runs reproduce
// sequential ones bit for bit.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <random>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "eogsim/error.hpp"
#include "eogsim/pipeline.hpp"
#include "eogsim/signal.hpp"

namespace eogsim {

struct TrialResult {
    int subject_id = 0;
    Direction scripted = Direction::Right;
    std::optional<Direction> classified;   // set only when exactly one command fired
    bool correct = false;
    std::uint64_t seed = 0;
};

struct SubjectStats {
    int subject_id = 0;
    double accuracy_percent = 0.0;
    double variance_percent = 0.0;   // block-wise accuracy standard deviation
    int n_trials = 0;
};

struct EvalReport {
    std::vector<SubjectStats> per_subject;
    double overall_accuracy_percent = 0.0;
    int total_trials = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace detail

/// Order-free per-trial seed: a fixed mix of master seed, subject id
/// and trial index.
inline std::uint64_t derive_trial_seed(std::uint64_t master, int subject_id,
                                       std::uint64_t trial_index) {
    std::uint64_t s = detail::splitmix64(master ^ (0x632be59bd9b4e019ULL *
                                                   (static_cast<std::uint64_t>(subject_id) + 1)));
    return detail::splitmix64(s ^ (0x9e3779b97f4a7c15ULL * (trial_index + 1)));
}

/// One trial: synthesize a single jittered-amplitude event, corrupt it
/// with the subject's noise, classify. Correct means exactly one
/// command was emitted and its direction matches the script.
inline TrialResult run_trial(const SubjectProfile& profile, Direction direction,
                             const PipelineConfig& cfg, std::uint64_t seed) {
    validate_profile(profile);

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(-1.0, 1.0);
    const double jittered =
        profile.saccade_amp_mean_uV * (1.0 + profile.saccade_amp_jitter_frac * uniform(rng));
    const double amplitude = std::clamp(jittered, kAmplitudeMinUv, kAmplitudeMaxUv);

    const GazeEvent event{direction, cfg.trial.event_onset_s, cfg.trial.event_duration_s,
                          amplitude};
    SampleTrace trace =
        synth_trace({&event, 1}, cfg.trial.duration_s, cfg.sample_rate_hz, cfg.polarity);

    NoiseConfig noise = profile.noise;
    noise.seed = rng();
    trace = add_noise(trace, noise);

    const std::vector<Command> commands = classify(trace, cfg);

    TrialResult result;
    result.subject_id = profile.id;
    result.scripted = direction;
    result.seed = seed;
    if (commands.size() == 1) result.classified = commands.front().direction;
    result.correct = commands.size() == 1 && commands.front().direction == direction;
    return result;
}

/// Scripted direction of trial t: alternating, starting Right, so n
/// trials contain ceil(n/2) Right and floor(n/2) Left.
inline Direction trial_direction(int trial_index) {
    return trial_index % 2 == 0 ? Direction::Right : Direction::Left;
}

/// All trials for one subject, in trial-index order. With threads > 1
/// the index range is partitioned; each worker writes its own slots, so
/// the result is identical to a sequential run.
inline std::vector<TrialResult> run_subject_trials(const SubjectProfile& profile, int n_trials,
                                                   const PipelineConfig& cfg,
                                                   std::uint64_t master_seed, int threads = 1) {
    if (n_trials < 1)
        throw ValidationError("need at least one trial");

    std::vector<TrialResult> results(static_cast<std::size_t>(n_trials));
    auto run_range = [&](int begin, int end) {
        for (int t = begin; t < end; ++t) {
            const std::uint64_t seed =
                derive_trial_seed(master_seed, profile.id, static_cast<std::uint64_t>(t));
            results[static_cast<std::size_t>(t)] =
                run_trial(profile, trial_direction(t), cfg, seed);
        }
    };

    const int workers = std::max(1, std::min(threads, n_trials));
    if (workers == 1) {
        run_range(0, n_trials);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            const int begin = static_cast<int>(static_cast<std::int64_t>(n_trials) * w / workers);
            const int end =
                static_cast<int>(static_cast<std::int64_t>(n_trials) * (w + 1) / workers);
            pool.emplace_back(run_range, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    return results;
}

/// Sample standard deviation of per-block accuracy over `blocks`
/// consecutive equal slices of the trial sequence.
inline double block_accuracy_stddev(std::span<const TrialResult> results, int blocks = 10) {
    const int n = static_cast<int>(results.size());
    blocks = std::min(blocks, n);
    if (blocks < 2) return 0.0;

    std::vector<double> acc(static_cast<std::size_t>(blocks));
    for (int b = 0; b < blocks; ++b) {
        const int begin = static_cast<int>(static_cast<std::int64_t>(n) * b / blocks);
        const int end = static_cast<int>(static_cast<std::int64_t>(n) * (b + 1) / blocks);
        int correct = 0;
        for (int t = begin; t < end; ++t)
            if (results[static_cast<std::size_t>(t)].correct) ++correct;
        acc[static_cast<std::size_t>(b)] = 100.0 * correct / (end - begin);
    }
    double mean = 0.0;
    for (double a : acc) mean += a;
    mean /= blocks;
    double ss = 0.0;
    for (double a : acc) ss += (a - mean) * (a - mean);
    return std::sqrt(ss / (blocks - 1));
}

/// Balanced evaluation over all subjects. Deterministic in
/// (profiles, n_trials, cfg, master_seed); thread count does not affect
/// the report.
inline EvalReport evaluate(std::span<const SubjectProfile> profiles, int n_trials,
                           const PipelineConfig& cfg, std::uint64_t master_seed,
                           int threads = 1) {
    if (n_trials < 1)
        throw ValidationError("need at least one trial per subject");
    validate_config(cfg);

    EvalReport report;
    std::int64_t total_correct = 0;
    for (const SubjectProfile& profile : profiles) {
        const std::vector<TrialResult> results =
            run_subject_trials(profile, n_trials, cfg, master_seed, threads);
        int correct = 0;
        for (const TrialResult& r : results)
            if (r.correct) ++correct;
        SubjectStats stats;
        stats.subject_id = profile.id;
        stats.n_trials = n_trials;
        stats.accuracy_percent = 100.0 * correct / n_trials;
        stats.variance_percent = block_accuracy_stddev(results);
        report.per_subject.push_back(stats);
        total_correct += correct;
        report.total_trials += n_trials;
    }
    report.overall_accuracy_percent =
        report.total_trials > 0 ? 100.0 * static_cast<double>(total_correct) / report.total_trials
                                : 0.0;
    return report;
}

enum class ReportFormat { Plain, Csv, Markdown };

inline ReportFormat parse_report_format(const std::string& name) {
    if (name == "plain") return ReportFormat::Plain;
    if (name == "csv") return ReportFormat::Csv;
    if (name == "md" || name == "markdown") return ReportFormat::Markdown;
    throw ValidationError("unknown report format '" + name + "' (expected plain, csv or md)");
}

namespace detail {

inline std::string fixed2(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string fixed1(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", v);
    return buf;
}

inline std::string subject_label(int id) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%02d", id);
    return buf;
}

}  // namespace detail

/// Renders the three-column accuracy table plus the overall average and
/// the best subject.
inline std::string render_report(const EvalReport& report, ReportFormat format) {
    std::ostringstream out;
    switch (format) {
        case ReportFormat::Plain: {
            out << "Subjects | Accuracy | Variance\n";
            out << "------------------------------\n";
            for (const SubjectStats& s : report.per_subject) {
                char row[96];
                std::snprintf(row, sizeof(row), "%8s | %7s%% | %6s%%\n",
                              detail::subject_label(s.subject_id).c_str(),
                              detail::fixed2(s.accuracy_percent).c_str(),
                              ("±" + detail::fixed1(s.variance_percent)).c_str());
                out << row;
            }
            out << "------------------------------\n";
            out << "Overall average accuracy: " << detail::fixed2(report.overall_accuracy_percent)
                << "%  (" << report.total_trials << " trials)\n";
            break;
        }
        case ReportFormat::Csv: {
            out << "subject,accuracy_percent,variance_percent,n_trials\n";
            for (const SubjectStats& s : report.per_subject)
                out << detail::subject_label(s.subject_id) << ','
                    << detail::fixed2(s.accuracy_percent) << ','
                    << detail::fixed2(s.variance_percent) << ',' << s.n_trials << '\n';
            out << "overall," << detail::fixed2(report.overall_accuracy_percent) << ",,"
                << report.total_trials << '\n';
            break;
        }
        case ReportFormat::Markdown: {
            out << "| Subjects | Accuracy | Variance |\n";
            out << "|---------:|---------:|---------:|\n";
            for (const SubjectStats& s : report.per_subject)
                out << "| " << detail::subject_label(s.subject_id) << " | "
                    << detail::fixed2(s.accuracy_percent) << "% | ±"
                    << detail::fixed1(s.variance_percent) << "% |\n";
            out << "\nOverall average accuracy: **"
                << detail::fixed2(report.overall_accuracy_percent) << "%** ("
                << report.total_trials << " trials)\n";
            break;
        }
    }
    if (!report.per_subject.empty() && format != ReportFormat::Csv) {
        const auto best = std::max_element(
            report.per_subject.begin(), report.per_subject.end(),
            [](const SubjectStats& a, const SubjectStats& b) {
                return a.accuracy_percent < b.accuracy_percent;
            });
        out << "Best subject: " << detail::subject_label(best->subject_id) << " ("
            << detail::fixed2(best->accuracy_percent) << "%)\n";
    }
    return out.str();
}

/// Parses a report back from its CSV rendering.
inline EvalReport load_report_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw ValidationError("line 1: missing report header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::strip(line) != "subject,accuracy_percent,variance_percent,n_trials")
        throw ValidationError("line 1: unexpected report header '" + line + "'");

    EvalReport report;
    bool saw_overall = false;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (detail::strip(line).empty()) continue;
        const auto fields = detail::split_fields(line);
        if (fields.size() != 4)
            throw ValidationError("line " + std::to_string(line_no) + ": expected 4 values");
        if (fields[0] == "overall") {
            report.overall_accuracy_percent = detail::parse_double(fields[1], line_no);
            report.total_trials = static_cast<int>(detail::parse_int(fields[3], line_no));
            saw_overall = true;
            continue;
        }
        SubjectStats s;
        s.subject_id = static_cast<int>(detail::parse_int(fields[0], line_no));
        s.accuracy_percent = detail::parse_double(fields[1], line_no);
        s.variance_percent = detail::parse_double(fields[2], line_no);
        s.n_trials = static_cast<int>(detail::parse_int(fields[3], line_no));
        report.per_subject.push_back(s);
    }
    if (!saw_overall)
        throw ValidationError("report CSV has no overall row");
    return report;
}

inline EvalReport load_report_csv(const std::string& path) {
    auto in = detail::open_input(path);
    return load_report_csv(in);
}

}  // namespace eogsim
