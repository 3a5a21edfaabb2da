#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "eogsim/decision.hpp"
#include "eogsim/pipeline.hpp"

using namespace eogsim;

namespace {

AmplifiedTrace volts(std::vector<double> v, double fs = 250.0) {
    AmplifiedTrace t;
    t.sample_rate_hz = fs;
    t.clipped.assign(v.size(), false);
    t.v_out_V = std::move(v);
    return t;
}

SampleTrace saccade(Direction d, double amp_uV, double onset = 0.4, double duration = 0.2,
                    double total = 1.0) {
    const GazeEvent e{d, onset, duration, amp_uV};
    return synth_trace({&e, 1}, total, 250.0);
}

}  // namespace

TEST_CASE("quantization is mid-tread: zero maps to zero") {
    const AmplifiedTrace out = quantize(volts({0.0, 0.01, -0.01}), AdcConfig{8, 5.0, 250.0});
    REQUIRE(out.v_out_V[0] == 0.0);
    REQUIRE(out.v_out_V[1] == 0.0);   // below half a step
    REQUIRE(out.v_out_V[2] == 0.0);
}

TEST_CASE("quantization error is bounded by half a step") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> volt(-4.9, 4.9);
    const AdcConfig adc{8, 5.0, 250.0};
    const double step = 10.0 / 256.0;
    REQUIRE_THAT(step, Catch::Matchers::WithinAbs(0.0390625, 1e-15));
    std::vector<double> v(2000);
    for (double& x : v) x = volt(rng);
    const AmplifiedTrace out = quantize(volts(v), adc);
    for (std::size_t i = 0; i < v.size(); ++i)
        REQUIRE(std::abs(out.v_out_V[i] - v[i]) <= step / 2.0 + 1e-12);
}

TEST_CASE("full-scale input clamps to the top code and is flagged") {
    const AmplifiedTrace out = quantize(volts({5.0, -5.0}), AdcConfig{8, 5.0, 250.0});
    const double step = 10.0 / 256.0;
    REQUIRE_THAT(out.v_out_V[0], Catch::Matchers::WithinAbs(127.0 * step, 1e-12));
    REQUIRE(out.clipped[0]);
    REQUIRE_THAT(out.v_out_V[1], Catch::Matchers::WithinAbs(-128.0 * step, 1e-12));
    REQUIRE_FALSE(out.clipped[1]);   // -5 V is exactly the bottom code
}

TEST_CASE("quantize rejects rate mismatches and bad configs") {
    REQUIRE_THROWS_AS(quantize(volts({0.0}, 500.0), AdcConfig{8, 5.0, 250.0}), ValidationError);
    REQUIRE_THROWS_AS(quantize(volts({0.0}), AdcConfig{0, 5.0, 250.0}), ValidationError);
    REQUIRE_THROWS_AS(quantize(volts({0.0}), AdcConfig{25, 5.0, 250.0}), ValidationError);
    REQUIRE_THROWS_AS(quantize(volts({0.0}), AdcConfig{8, 0.0, 250.0}), ValidationError);
}

TEST_CASE("an all-zero trace detects nothing") {
    REQUIRE(detect_pulses(volts(std::vector<double>(500, 0.0)), DetectorConfig{}).empty());
}

TEST_CASE("a one-sample spike is debounced away") {
    std::vector<double> v(250, 0.0);
    v[100] = 2.0;
    REQUIRE(detect_pulses(volts(v), DetectorConfig{0.5, 0.3, 0.04, 0.2}).empty());
}

TEST_CASE("hysteresis holds one pulse across a slow ramp") {
    // Triangle: rises to 1 V over 0.5 s, falls back. Release below
    // threshold means the detector cannot chatter near the crossing.
    std::vector<double> v(250);
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double t = static_cast<double>(i) / 250.0;
        v[i] = t < 0.5 ? 2.0 * t : 2.0 * (1.0 - t);
    }
    const auto pulses = detect_pulses(volts(v), DetectorConfig{0.5, 0.3, 0.04, 0.2});
    REQUIRE(pulses.size() == 1);
    REQUIRE(pulses[0].direction == Direction::Right);
    REQUIRE_THAT(pulses[0].peak_V, Catch::Matchers::WithinAbs(1.0, 0.02));
    REQUIRE(pulses[0].duration_s >= 0.04);
}

TEST_CASE("pulse direction follows the signed peak") {
    std::vector<double> v(250, 0.0);
    for (std::size_t i = 50; i < 80; ++i) v[i] = -1.5;
    const auto pulses = detect_pulses(volts(v), DetectorConfig{0.5, 0.3, 0.04, 0.2});
    REQUIRE(pulses.size() == 1);
    REQUIRE(pulses[0].direction == Direction::Left);
    REQUIRE(pulses[0].peak_V == -1.5);
    REQUIRE_THAT(pulses[0].onset_s, Catch::Matchers::WithinAbs(0.2, 1e-9));
}

TEST_CASE("the refractory hold-off suppresses closely spaced pulses") {
    std::vector<double> v(500, 0.0);
    for (std::size_t i = 100; i < 120; ++i) v[i] = 1.0;   // 80 ms pulse
    for (std::size_t i = 140; i < 160; ++i) v[i] = 1.0;   // 80 ms later
    const auto near = detect_pulses(volts(v), DetectorConfig{0.5, 0.3, 0.04, 0.2});
    REQUIRE(near.size() == 1);
    const auto spaced = detect_pulses(volts(v), DetectorConfig{0.5, 0.3, 0.04, 0.05});
    REQUIRE(spaced.size() == 2);
}

TEST_CASE("detected pulses are ordered, long enough and separated") {
    std::mt19937_64 rng(71);
    std::normal_distribution<double> gauss(0.0, 0.6);
    const DetectorConfig det{0.5, 0.3, 0.04, 0.2};
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> v(2000);
        for (double& x : v) x = gauss(rng);
        const auto pulses = detect_pulses(volts(v), det);
        for (std::size_t i = 0; i < pulses.size(); ++i) {
            REQUIRE(pulses[i].duration_s >= det.min_pulse_s);
            REQUIRE(std::abs(pulses[i].peak_V) >= det.threshold_V);
            if (i > 0) {
                const double prev_end = pulses[i - 1].onset_s + pulses[i - 1].duration_s;
                REQUIRE(pulses[i].onset_s >= prev_end + det.refractory_s - 1e-9);
            }
        }
    }
}

TEST_CASE("a clean saccade through the default chain yields one matching command") {
    const PipelineConfig cfg;
    const auto commands = classify(saccade(Direction::Right, 1000.0), cfg);
    REQUIRE(commands.size() == 1);
    REQUIRE(commands[0].direction == Direction::Right);
    REQUIRE(commands[0].at_s > 0.3);
    REQUIRE(commands[0].at_s < 0.6);
}

TEST_CASE("a scripted left-right-left sequence classifies in order") {
    const std::vector<GazeEvent> script = {{Direction::Right, 0.3, 0.2, 1000.0},
                                           {Direction::Left, 1.0, 0.2, 1000.0},
                                           {Direction::Right, 1.7, 0.2, 1000.0}};
    const SampleTrace trace = synth_trace(script, 2.2, 250.0);
    const auto commands = classify(trace, PipelineConfig{});
    REQUIRE(commands.size() == 3);
    REQUIRE(commands[0].direction == Direction::Right);
    REQUIRE(commands[1].direction == Direction::Left);
    REQUIRE(commands[2].direction == Direction::Right);
    REQUIRE(commands[0].at_s < commands[1].at_s);
    REQUIRE(commands[1].at_s < commands[2].at_s);
}

TEST_CASE("pure common-mode interference produces no commands") {
    const SampleTrace hum = add_common_mode(synth_trace({}, 1.0, 250.0), 2000.0, 50.0);
    REQUIRE(classify(hum, PipelineConfig{}).empty());
}

TEST_CASE("classification is deterministic") {
    NoiseConfig noise;
    noise.white_sigma_uV = 150.0;
    noise.seed = 2024;
    const SampleTrace trace = add_noise(saccade(Direction::Left, 1200.0), noise);
    const auto a = classify(trace, PipelineConfig{});
    const auto b = classify(trace, PipelineConfig{});
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        REQUIRE(a[i].direction == b[i].direction);
        REQUIRE(a[i].at_s == b[i].at_s);
    }
}

TEST_CASE("classify rejects traces at the wrong sample rate") {
    const GazeEvent e{Direction::Right, 0.4, 0.2, 1000.0};
    const SampleTrace trace = synth_trace({&e, 1}, 1.0, 500.0);
    REQUIRE_THROWS_AS(classify(trace, PipelineConfig{}), ValidationError);
}

TEST_CASE("amplification never hides a pulse: scaling keeps the count") {
    const PipelineConfig cfg;
    const BiquadCoeffs coeffs = discretize(cfg.filter, 250.0);
    const AmplifiedTrace base =
        apply_filter(diff_amplify(saccade(Direction::Right, 700.0), cfg.frontend), coeffs);
    const auto base_count = detect_pulses(base, cfg.detector).size();
    REQUIRE(base_count == 1);
    for (double alpha : {1.5, 2.0, 4.0}) {
        AmplifiedTrace scaled = base;
        for (double& v : scaled.v_out_V) v *= alpha;
        REQUIRE(detect_pulses(scaled, cfg.detector).size() >= base_count);
    }
}

TEST_CASE("clean scripted traces classify with every direction correct") {
    std::mt19937_64 rng(301);
    std::uniform_real_distribution<double> amp(700.0, 3500.0);
    const PipelineConfig cfg;
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<GazeEvent> script;
        double t = 0.2;
        const int events = 1 + static_cast<int>(rng() % 3);
        for (int i = 0; i < events; ++i) {
            script.push_back(
                {rng() % 2 == 0 ? Direction::Left : Direction::Right, t, 0.16, amp(rng)});
            t += 0.16 + 0.4;
        }
        const SampleTrace trace = synth_trace(script, t + 0.2, 250.0);
        const auto commands = classify(trace, cfg);
        REQUIRE(commands.size() == script.size());
        for (std::size_t i = 0; i < commands.size(); ++i)
            REQUIRE(commands[i].direction == script[i].direction);
    }
}
