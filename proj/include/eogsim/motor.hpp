#pragma once

// Drive-direction state machine for the wheelchair motor. Two safety
// rules sit on top of plain switching: opposite drive directions are
// always separated by a one-tick Stop (H-bridge dead time), and any
// drive state times out to Stop after dwell_s without a fresh command.

#include <span>
#include <string>
#include <vector>

#include "eogsim/error.hpp"

namespace eogsim {

enum class MotorDrive { Stop, Left, Right };

inline const char* to_string(MotorDrive d) {
    switch (d) {
        case MotorDrive::Stop: return "Stop";
        case MotorDrive::Left: return "Left";
        default: return "Right";
    }
}

struct MotorState {
    MotorDrive value = MotorDrive::Stop;
    double since_s = 0.0;
};

struct MotorCommand {
    MotorDrive direction = MotorDrive::Stop;
    double at_s = 0.0;
};

/// Dead time inserted between opposite drive directions.
inline constexpr double kDefaultDeadTimeS = 0.001;

namespace detail {

inline bool opposite(MotorDrive a, MotorDrive b) {
    return (a == MotorDrive::Left && b == MotorDrive::Right) ||
           (a == MotorDrive::Right && b == MotorDrive::Left);
}

/// Applies one command, appending every resulting transition to log
/// (which may be null). Assumes cmd.at_s >= state.since_s.
inline MotorState apply_command(MotorState state, const MotorCommand& cmd, double dwell_s,
                                double tick_s, std::vector<MotorState>* log) {
    auto enter = [&](MotorDrive value, double at) {
        state = {value, at};
        if (log) log->push_back(state);
    };

    // Timeout first: a drive state left alone for more than dwell_s has
    // already stopped by the time this command arrives.
    if (state.value != MotorDrive::Stop && cmd.at_s > state.since_s + dwell_s)
        enter(MotorDrive::Stop, state.since_s + dwell_s);

    if (cmd.direction == state.value) {
        state.since_s = cmd.at_s;   // refresh; not a transition
    } else if (opposite(cmd.direction, state.value)) {
        enter(MotorDrive::Stop, cmd.at_s);
        enter(cmd.direction, cmd.at_s + tick_s);
    } else {
        enter(cmd.direction, cmd.at_s);
    }
    return state;
}

}  // namespace detail

/// Advances the machine by one command. Commands may not predate the
/// current state.
inline MotorState step(const MotorState& state, const MotorCommand& cmd, double dwell_s,
                       double tick_s = kDefaultDeadTimeS) {
    if (!(dwell_s >= 0.0))
        throw ValidationError("dwell time must be nonnegative");
    if (cmd.at_s < state.since_s)
        throw ValidationError("command at t=" + std::to_string(cmd.at_s) +
                              " s predates the current state (t=" + std::to_string(state.since_s) +
                              " s)");
    return detail::apply_command(state, cmd, dwell_s, tick_s, nullptr);
}

/// Advances the machine to time t with no command; fires the auto-stop
/// timeout if the quiet period exceeds dwell_s.
inline MotorState settle(const MotorState& state, double t_s, double dwell_s) {
    if (t_s < state.since_s)
        throw ValidationError("cannot settle backwards in time");
    if (state.value != MotorDrive::Stop && t_s > state.since_s + dwell_s)
        return {MotorDrive::Stop, state.since_s + dwell_s};
    return state;
}

/// Folds a time-ordered command stream from the initial Stop state and
/// returns the full transition log (initial state included). A command
/// landing inside a dead-time window takes effect at the window's end.
inline std::vector<MotorState> run_sequence(std::span<const MotorCommand> commands,
                                            double dwell_s, double tick_s = kDefaultDeadTimeS) {
    if (!(dwell_s >= 0.0))
        throw ValidationError("dwell time must be nonnegative");

    std::vector<MotorState> log;
    MotorState state{MotorDrive::Stop, 0.0};
    log.push_back(state);

    double prev_at = 0.0;
    for (std::size_t i = 0; i < commands.size(); ++i) {
        MotorCommand cmd = commands[i];
        if (cmd.at_s < 0.0 || (i > 0 && cmd.at_s < prev_at))
            throw ValidationError("command " + std::to_string(i) +
                                  " is out of order (t=" + std::to_string(cmd.at_s) + " s)");
        prev_at = cmd.at_s;
        if (cmd.at_s < state.since_s) cmd.at_s = state.since_s;   // dead-time deferral
        state = detail::apply_command(state, cmd, dwell_s, tick_s, &log);
    }
    return log;
}

}  // namespace eogsim
