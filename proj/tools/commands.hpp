#pragma once

#include <iosfwd>

#include "config.hpp"

namespace treesir::cli {

// Exit codes: 0 success, 1 invariant failure, 2 config error, 3 numerical abort.
// Command functions return the exit code; config/numerical errors propagate as
// exceptions and are mapped in main.

int cmd_derive(const RunConfig& cfg, std::ostream& out);
int cmd_simulate(const RunConfig& cfg, std::ostream& out);
int cmd_stationary(const RunConfig& cfg, std::ostream& out);
int cmd_speed(const RunConfig& cfg, std::ostream& out);
int cmd_sweep(const RunConfig& cfg, std::ostream& out);
int cmd_check(const RunConfig& cfg, std::ostream& out);

/// Maps an in-flight exception to the documented exit code.
int exit_code_for_current_exception();

}  // namespace treesir::cli
