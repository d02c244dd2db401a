// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "marshal/catalog.hpp"

namespace marshal {

enum class ReportFormat { Text, Json };

struct ReportSummary {
    std::size_t total = 0;       // every violation, suppressed or not
    std::size_t suppressed = 0;
    std::size_t unsuppressed = 0;
    /// Unsuppressed violations per severity name; all three names present.
    std::map<std::string, std::size_t> by_severity;
};

ReportSummary summarize(const std::vector<Violation>& violations);

struct ReportOptions {
    /// List at most this many violations; the summary still counts all.
    std::optional<std::size_t> max_violations;
};

/// Renders violations in the order given (see sort_violations) followed by
/// run-level diagnostics. JSON shape:
///   {"summary": {"total", "suppressed", "unsuppressed", "by_severity"},
///    "violations": [{"template", "template_name", "formula",
///                    "declaration", "declaration_property", "subject",
///                    "params", "binding", "severity", "suppressed",
///                    "message", "diagnostics"}],
///    "truncated", "diagnostics": [...]}
std::string render_report(const std::vector<Violation>& violations, ReportFormat format,
                          const std::vector<std::string>& diagnostics = {}, const ReportOptions& opts = {});

}  // namespace marshal
