#pragma once

#include <string>

#include "config.hpp"

namespace cavkit {

// Command implementations behind the CLI and the C API. Each resolves its
// inputs from the config, writes outputs (plus the resolved config) into a
// content-addressed run directory under out.dir, and returns that directory.
std::string cmd_gen(const RunConfig& cfg);
std::string cmd_train(const RunConfig& cfg);
std::string cmd_eval(const RunConfig& cfg);
std::string cmd_tcav(const RunConfig& cfg);
std::string cmd_doe(const RunConfig& cfg);
std::string cmd_augment(const RunConfig& cfg);
std::string cmd_vocab(const RunConfig& cfg);
std::string cmd_report(const RunConfig& cfg);

// Dispatch by CLI subcommand name ("evaluate" aliases "eval").
std::string run_command(const std::string& name, const RunConfig& cfg);

}  // namespace cavkit
