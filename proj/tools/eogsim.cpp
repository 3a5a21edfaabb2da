// Command-line front door to the simulation chain.
//
//   synth     render a gaze script to a trace CSV (optionally noisy)
//   filter    run a trace CSV through the low-pass stage
//   classify  turn a trace CSV into timed left/right commands
//   evaluate  Monte-Carlo accuracy table over the configured subjects
//   respond   tabulate the discrete frequency response of a design
//
// Exit codes: 0 success, 1 validation error, 2 I/O error.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eogsim/eogsim.hpp"

namespace {

struct SynthArgs {
    std::string script_path;
    std::string out_path;
    double total_s = 1.0;
    double fs_hz = 250.0;
    bool right_negative = false;
    eogsim::NoiseConfig noise;
};

void run_synth(const SynthArgs& args) {
    const std::vector<eogsim::GazeEvent> script = eogsim::load_script(args.script_path);
    eogsim::Polarity polarity{!args.right_negative};
    eogsim::SampleTrace trace = eogsim::synth_trace(script, args.total_s, args.fs_hz, polarity);
    if (args.noise.white_sigma_uV > 0.0 || args.noise.hum_amp_uV > 0.0 ||
        args.noise.drift_amp_uV > 0.0)
        trace = eogsim::add_noise(trace, args.noise);
    eogsim::save_trace_csv(trace, args.out_path);
}

struct FilterArgs {
    std::string in_path;
    std::string out_path;
    std::string coeffs_path;
    double cutoff_hz = 50.0;
    double q = std::numbers::sqrt2 / 2.0;
    double gain = 1.0;
};

void run_filter(const FilterArgs& args) {
    const eogsim::SampleTrace trace = eogsim::load_trace_csv(args.in_path);
    const eogsim::SallenKeyParams params =
        eogsim::design_sallen_key(args.cutoff_hz, args.q, args.gain);
    const eogsim::BiquadCoeffs coeffs = eogsim::discretize(params, trace.sample_rate_hz);
    if (!args.coeffs_path.empty()) eogsim::save_coeffs_csv(coeffs, args.coeffs_path);
    if (!args.out_path.empty()) {
        eogsim::SampleTrace filtered = trace;
        filtered.v_p_uV = eogsim::filter_signal(trace.v_p_uV, coeffs);
        filtered.v_ref_uV = eogsim::filter_signal(trace.v_ref_uV, coeffs);
        eogsim::save_trace_csv(filtered, args.out_path);
    }
}

struct ClassifyArgs {
    std::string in_path;
    std::string config_path;
    std::string out_path;
    std::string motor_log_path;
};

void run_classify(const ClassifyArgs& args) {
    const eogsim::PipelineConfig cfg = args.config_path.empty()
                                           ? eogsim::PipelineConfig{}
                                           : eogsim::load_config(args.config_path);
    const eogsim::SampleTrace trace = eogsim::load_trace_csv(args.in_path);
    const std::vector<eogsim::Command> commands = eogsim::classify(trace, cfg);
    if (!args.out_path.empty())
        eogsim::save_commands_csv(commands, args.out_path);
    else
        eogsim::save_commands_csv(commands, std::cout);
    if (!args.motor_log_path.empty()) {
        std::vector<eogsim::MotorCommand> motor_cmds;
        motor_cmds.reserve(commands.size());
        for (const eogsim::Command& c : commands)
            motor_cmds.push_back({c.direction == eogsim::Direction::Left
                                      ? eogsim::MotorDrive::Left
                                      : eogsim::MotorDrive::Right,
                                  c.at_s});
        const std::vector<eogsim::MotorState> log =
            eogsim::run_sequence(motor_cmds, cfg.motor_dwell_s, cfg.motor_tick_s);
        eogsim::save_motor_log_csv(log, args.motor_log_path);
    }
}

struct EvaluateArgs {
    std::string config_path;
    std::string out_path;
    std::string format = "plain";
    int trials = -1;
    std::int64_t seed = -1;
    int threads = 1;
};

void run_evaluate(const EvaluateArgs& args) {
    const eogsim::PipelineConfig cfg = eogsim::load_config(args.config_path);
    if (cfg.subjects.empty())
        throw eogsim::ValidationError("config defines no subjects to evaluate");
    const int trials = args.trials > 0 ? args.trials : cfg.eval_trials;
    const std::uint64_t seed =
        args.seed >= 0 ? static_cast<std::uint64_t>(args.seed) : cfg.eval_seed;
    const eogsim::EvalReport report =
        eogsim::evaluate(cfg.subjects, trials, cfg, seed, args.threads);
    const std::string text =
        eogsim::render_report(report, eogsim::parse_report_format(args.format));
    if (args.out_path.empty()) {
        std::cout << text;
    } else {
        auto out = eogsim::detail::open_output(args.out_path);
        out << text;
    }
}

struct RespondArgs {
    std::string out_path;
    double cutoff_hz = 50.0;
    double q = std::numbers::sqrt2 / 2.0;
    double gain = 1.0;
    double fs_hz = 250.0;
    int points = 256;
};

void run_respond(const RespondArgs& args) {
    const eogsim::SallenKeyParams params =
        eogsim::design_sallen_key(args.cutoff_hz, args.q, args.gain);
    const eogsim::BiquadCoeffs coeffs = eogsim::discretize(params, args.fs_hz);
    if (args.points < 2)
        throw eogsim::ValidationError("need at least 2 sweep points");

    std::ostream* out = &std::cout;
    std::ofstream file;
    if (!args.out_path.empty()) {
        file = eogsim::detail::open_output(args.out_path);
        out = &file;
    }
    *out << "f_hz,magnitude,phase_rad\n";
    for (int i = 0; i < args.points; ++i) {
        const double f = (args.fs_hz / 2.0) * i / (args.points - 1);
        const eogsim::ResponsePoint r = eogsim::frequency_response(coeffs, f);
        *out << eogsim::detail::format_double(f) << ','
             << eogsim::detail::format_double(r.magnitude) << ','
             << eogsim::detail::format_double(r.phase_rad) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Desk-scale simulator of an EOG-driven wheelchair control chain"};
    app.require_subcommand(1);

    SynthArgs synth;
    CLI::App* synth_cmd = app.add_subcommand("synth", "Render a gaze script to a trace CSV");
    synth_cmd->add_option("--script", synth.script_path, "Gaze script file")->required();
    synth_cmd->add_option("--out", synth.out_path, "Output trace CSV")->required();
    synth_cmd->add_option("--total", synth.total_s, "Trace duration, seconds");
    synth_cmd->add_option("--fs", synth.fs_hz, "Sample rate, Hz");
    synth_cmd->add_flag("--right-negative", synth.right_negative,
                        "Map Right gaze to a negative deflection");
    synth_cmd->add_option("--white-sigma", synth.noise.white_sigma_uV,
                          "White noise sigma, microvolts");
    synth_cmd->add_option("--hum-amp", synth.noise.hum_amp_uV, "Mains hum amplitude, microvolts");
    synth_cmd->add_option("--hum-freq", synth.noise.hum_freq_hz, "Mains hum frequency, Hz");
    synth_cmd->add_option("--drift-amp", synth.noise.drift_amp_uV,
                          "Baseline drift amplitude, microvolts");
    synth_cmd->add_option("--drift-freq", synth.noise.drift_freq_hz,
                          "Baseline drift frequency, Hz");
    synth_cmd->add_option("--seed", synth.noise.seed, "Noise seed");

    FilterArgs filter;
    CLI::App* filter_cmd =
        app.add_subcommand("filter", "Low-pass filter both channels of a trace CSV");
    filter_cmd->add_option("--in", filter.in_path, "Input trace CSV")->required();
    filter_cmd->add_option("--out", filter.out_path, "Filtered trace CSV");
    filter_cmd->add_option("--cutoff", filter.cutoff_hz, "Cutoff frequency, Hz");
    filter_cmd->add_option("--q", filter.q, "Quality factor");
    filter_cmd->add_option("--gain", filter.gain, "Passband gain (>= 1)");
    filter_cmd->add_option("--dump-coeffs", filter.coeffs_path,
                           "Also write the recurrence coefficients to this CSV");

    ClassifyArgs classify;
    CLI::App* classify_cmd =
        app.add_subcommand("classify", "Classify a trace CSV into left/right commands");
    classify_cmd->add_option("--in", classify.in_path, "Input trace CSV")->required();
    classify_cmd->add_option("--config", classify.config_path, "Pipeline config file");
    classify_cmd->add_option("--out", classify.out_path, "Commands CSV (stdout if omitted)");
    classify_cmd->add_option("--motor-log", classify.motor_log_path,
                             "Also fold commands through the motor state machine into this CSV");

    EvaluateArgs evaluate;
    CLI::App* evaluate_cmd =
        app.add_subcommand("evaluate", "Run the Monte-Carlo accuracy evaluation");
    evaluate_cmd->add_option("--config", evaluate.config_path, "Pipeline config file")->required();
    evaluate_cmd->add_option("--format", evaluate.format, "Report format: plain, csv or md");
    evaluate_cmd->add_option("--trials", evaluate.trials, "Trials per subject");
    evaluate_cmd->add_option("--seed", evaluate.seed, "Master seed");
    evaluate_cmd->add_option("--threads", evaluate.threads, "Worker threads");
    evaluate_cmd->add_option("--out", evaluate.out_path, "Report file (stdout if omitted)");

    RespondArgs respond;
    CLI::App* respond_cmd =
        app.add_subcommand("respond", "Tabulate the discrete frequency response");
    respond_cmd->add_option("--cutoff", respond.cutoff_hz, "Cutoff frequency, Hz");
    respond_cmd->add_option("--q", respond.q, "Quality factor");
    respond_cmd->add_option("--gain", respond.gain, "Passband gain (>= 1)");
    respond_cmd->add_option("--fs", respond.fs_hz, "Sample rate, Hz");
    respond_cmd->add_option("--points", respond.points, "Sweep points from DC to Nyquist");
    respond_cmd->add_option("--out", respond.out_path, "Response CSV (stdout if omitted)");

    try {
        app.parse(argc, argv);
        if (synth_cmd->parsed()) run_synth(synth);
        if (filter_cmd->parsed()) run_filter(filter);
        if (classify_cmd->parsed()) run_classify(classify);
        if (evaluate_cmd->parsed()) run_evaluate(evaluate);
        if (respond_cmd->parsed()) run_respond(respond);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const eogsim::IoError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const eogsim::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
