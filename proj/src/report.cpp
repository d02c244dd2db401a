// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include "marshal/report.hpp"

#include <algorithm>

#include "json.hpp"

#include "marshal/literal.hpp"

namespace marshal {

using nlohmann::ordered_json;

ReportSummary summarize(const std::vector<Violation>& violations) {
    ReportSummary s;
    for (Severity sev : {Severity::Mandatory, Severity::Normal, Severity::Suggestion})
        s.by_severity[std::string(severity_name(sev))] = 0;
    for (const auto& v : violations) {
        ++s.total;
        if (v.suppressed) {
            ++s.suppressed;
        } else {
            ++s.unsuppressed;
            ++s.by_severity[std::string(severity_name(v.severity))];
        }
    }
    return s;
}

namespace {

ordered_json params_json(const AttrSet& params) {
    ordered_json out = ordered_json::object();
    for (const auto& [a, v] : params.qualifiers_only()) out[a.str()].push_back(format_value(v));
    return out;
}

ordered_json binding_json(const Binding& b) {
    ordered_json out = ordered_json::object();
    for (const auto& [k, v] : b.objects) out[k] = format_value(v);
    for (const auto& [k, s] : b.sets) out[k] = format_attrset(s.qualifiers_only());
    return out;
}

ordered_json violation_json(const Violation& v) {
    ordered_json j;
    j["template"] = v.tmpl ? v.tmpl->type_id.str() : "";
    j["template_name"] = v.tmpl ? v.tmpl->name : "";
    j["formula"] = v.formula_label;
    j["declaration"] = v.declaration_id;
    j["declaration_property"] = v.property ? ordered_json(v.property->str()) : ordered_json(nullptr);
    j["subject"] = v.subject ? ordered_json(format_value(*v.subject)) : ordered_json(nullptr);
    j["params"] = params_json(v.params);
    j["binding"] = binding_json(v.binding);
    j["severity"] = std::string(severity_name(v.severity));
    j["suppressed"] = v.suppressed;
    j["message"] = v.message;
    j["diagnostics"] = v.diagnostics;
    return j;
}

}  // namespace

std::string render_report(const std::vector<Violation>& violations, ReportFormat format,
                          const std::vector<std::string>& diagnostics, const ReportOptions& opts) {
    const ReportSummary s = summarize(violations);
    const std::size_t shown = std::min(violations.size(), opts.max_violations.value_or(violations.size()));

    if (format == ReportFormat::Json) {
        ordered_json j;
        j["summary"] = {{"total", s.total},
                        {"suppressed", s.suppressed},
                        {"unsuppressed", s.unsuppressed},
                        {"by_severity", s.by_severity}};
        j["violations"] = ordered_json::array();
        for (std::size_t i = 0; i < shown; ++i) j["violations"].push_back(violation_json(violations[i]));
        j["truncated"] = shown < violations.size();
        j["diagnostics"] = diagnostics;
        return j.dump(2) + "\n";
    }

    std::string out;
    for (std::size_t i = 0; i < shown; ++i) {
        const Violation& v = violations[i];
        out += "[" + std::string(severity_name(v.severity)) + "] " + v.message;
        if (!v.declaration_id.empty()) out += " (declaration " + v.declaration_id + ")";
        if (v.suppressed) out += " (suppressed)";
        out += "\n";
        for (const auto& d : v.diagnostics) out += "  note: " + d + "\n";
    }
    if (shown < violations.size()) out += "... " + std::to_string(violations.size() - shown) + " more not shown\n";
    out += "summary: " + std::to_string(s.total) + " violations, " + std::to_string(s.suppressed) + " suppressed";
    for (const auto& [name, n] : s.by_severity) out += ", " + name + " " + std::to_string(n);
    out += "\n";
    for (const auto& d : diagnostics) out += "diagnostic: " + d + "\n";
    return out;
}

}  // namespace marshal
