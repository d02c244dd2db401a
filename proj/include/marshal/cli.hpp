// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace marshal {

struct InputSpec {
    std::string path;
    std::string format;  // "json", "native" or empty for by-extension
};

/// Everything a subcommand needs, as parsed from the command line.
struct RunManifest {
    std::vector<InputSpec> inputs;
    /// "builtin", "none" or rule file paths, in order.
    std::vector<std::string> rules{"builtin"};
    bool close = true;
    /// Template keys; empty means all.
    std::set<std::string> templates;
    bool non_property = false;
    bool variants = false;
    std::string format = "text";
    std::string output;  // empty: standard output
    bool include_deprecated = false;
    std::optional<std::size_t> max_violations;
    bool oracle = false;
};

/// `path`, `path:json` or `path:native`.
InputSpec parse_input_spec(const std::string& text);

/// Exit status contract of every subcommand.
enum ExitCode : int { kExitOk = 0, kExitViolations = 1, kExitError = 2 };

/// Runs `marshal <subcommand> ...`; argv[0] is the program name.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace marshal
