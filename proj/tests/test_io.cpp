#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "eogsim/io.hpp"

using namespace eogsim;

namespace {

SampleTrace tiny_trace() {
    SampleTrace t;
    t.sample_rate_hz = 250.0;
    t.v_p_uV = {0.0, 123.456789012345, -3500.0};
    t.v_ref_uV = {0.0, 0.25, 1e-9};
    return t;
}

}  // namespace

TEST_CASE("trace CSV round trip preserves every field") {
    const SampleTrace t = tiny_trace();
    std::stringstream buf;
    save_trace_csv(t, buf);
    const SampleTrace back = load_trace_csv(buf);
    REQUIRE(back.size() == t.size());
    REQUIRE_THAT(back.sample_rate_hz, Catch::Matchers::WithinRel(t.sample_rate_hz, 1e-12));
    for (std::size_t i = 0; i < t.size(); ++i) {
        REQUIRE_THAT(back.v_p_uV[i], Catch::Matchers::WithinAbs(t.v_p_uV[i], 1e-9));
        REQUIRE_THAT(back.v_ref_uV[i], Catch::Matchers::WithinAbs(t.v_ref_uV[i], 1e-9));
    }
}

TEST_CASE("trace CSV header names all three columns") {
    std::stringstream buf;
    save_trace_csv(tiny_trace(), buf);
    std::string header;
    std::getline(buf, header);
    REQUIRE(header == "time_s,v_p_uV,v_ref_uV");
}

TEST_CASE("a two-column file is rejected naming the missing column") {
    std::stringstream buf("time_s,v_p_uV\n0,1\n0.004,2\n");
    REQUIRE_THROWS_MATCHES(load_trace_csv(buf), ValidationError,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("v_ref_uV")));
}

TEST_CASE("malformed rows are reported with their line number") {
    std::stringstream buf("time_s,v_p_uV,v_ref_uV\n0,1,0\n0.004,2,0\n0.008,oops,0\n");
    REQUIRE_THROWS_MATCHES(
        load_trace_csv(buf), ValidationError,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("line 4")));
}

TEST_CASE("a row with the wrong arity is rejected") {
    std::stringstream buf("time_s,v_p_uV,v_ref_uV\n0,1,0\n0.004,2\n");
    REQUIRE_THROWS_MATCHES(
        load_trace_csv(buf), ValidationError,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("line 3")));
}

TEST_CASE("non-uniform timestamps are rejected") {
    std::stringstream buf("time_s,v_p_uV,v_ref_uV\n0,1,0\n0.004,2,0\n0.009,3,0\n");
    REQUIRE_THROWS_MATCHES(load_trace_csv(buf), ValidationError,
                           Catch::Matchers::MessageMatches(
                               Catch::Matchers::ContainsSubstring("non-uniform")));
}

TEST_CASE("single-row files cannot determine a sample rate") {
    std::stringstream buf("time_s,v_p_uV,v_ref_uV\n0,1,0\n");
    REQUIRE_THROWS_AS(load_trace_csv(buf), ValidationError);
}

TEST_CASE("ten seconds sampled inclusively at 250 Hz writes 2501 rows") {
    // Endpoint convention: a trace holding samples t = 0..10 s inclusive
    // has 10*250 + 1 samples, one data row each.
    SampleTrace t;
    t.sample_rate_hz = 250.0;
    t.v_p_uV.assign(2501, 1.0);
    t.v_ref_uV.assign(2501, 0.0);
    std::stringstream buf;
    save_trace_csv(t, buf);
    std::string line;
    std::size_t rows = 0;
    std::getline(buf, line);   // header
    while (std::getline(buf, line))
        if (!line.empty()) ++rows;
    REQUIRE(rows == 2501);
}

TEST_CASE("missing files raise IoError") {
    REQUIRE_THROWS_AS(load_trace_csv(std::string("/nonexistent/trace.csv")), IoError);
    REQUIRE_THROWS_AS(load_script(std::string("/nonexistent/script.txt")), IoError);
}

TEST_CASE("gaze scripts parse directions, comments and blank lines") {
    std::stringstream buf(
        "# gaze script\n"
        "\n"
        "Right,0.1,0.2,800\n"
        "left,0.5,0.2,1200.5\n");
    const std::vector<GazeEvent> script = load_script(buf);
    REQUIRE(script.size() == 2);
    REQUIRE(script[0].direction == Direction::Right);
    REQUIRE(script[0].onset_s == 0.1);
    REQUIRE(script[0].duration_s == 0.2);
    REQUIRE(script[0].amplitude_uV == 800.0);
    REQUIRE(script[1].direction == Direction::Left);
    REQUIRE(script[1].amplitude_uV == 1200.5);
}

TEST_CASE("scripts with unknown direction tokens are rejected") {
    std::stringstream buf("Up,0.1,0.2,800\n");
    REQUIRE_THROWS_MATCHES(
        load_script(buf), ValidationError,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("Up")));
}

TEST_CASE("scripts with missing fields are rejected with a line number") {
    std::stringstream buf("Right,0.1,0.2,800\nLeft,0.5\n");
    REQUIRE_THROWS_MATCHES(
        load_script(buf), ValidationError,
        Catch::Matchers::MessageMatches(Catch::Matchers::ContainsSubstring("line 2")));
}

TEST_CASE("command CSV lists one timestamped direction per row") {
    const std::vector<Command> commands = {{Direction::Right, 0.42}, {Direction::Left, 1.0}};
    std::stringstream buf;
    save_commands_csv(commands, buf);
    std::string line;
    std::getline(buf, line);
    REQUIRE(line == "time_s,direction");
    std::getline(buf, line);
    REQUIRE(line == "0.41999999999999998,Right");
    std::getline(buf, line);
    REQUIRE(line == "1,Left");
}

TEST_CASE("motor log CSV lists one state per transition") {
    const std::vector<MotorState> log = {{MotorDrive::Stop, 0.0}, {MotorDrive::Right, 0.5}};
    std::stringstream buf;
    save_motor_log_csv(log, buf);
    std::string line;
    std::getline(buf, line);
    REQUIRE(line == "time_s,state");
    std::getline(buf, line);
    REQUIRE(line == "0,Stop");
    std::getline(buf, line);
    REQUIRE(line == "0.5,Right");
}

TEST_CASE("coefficient CSV carries the five coefficients and the rate") {
    BiquadCoeffs c{0.1, 0.2, 0.1, -0.5, 0.25, 250.0};
    std::stringstream buf;
    save_coeffs_csv(c, buf);
    std::string line;
    std::getline(buf, line);
    REQUIRE(line == "b0,b1,b2,a1,a2,fs_hz");
    std::getline(buf, line);
    REQUIRE(line.find("0.1") == 0);
    REQUIRE(line.find("250") != std::string::npos);
}
