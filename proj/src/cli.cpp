// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include "marshal/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "marshal/catalog.hpp"
#include "marshal/eval.hpp"
#include "marshal/formula.hpp"
#include "marshal/ingest.hpp"
#include "marshal/labels.hpp"
#include "marshal/literal.hpp"
#include "marshal/report.hpp"
#include "marshal/rules.hpp"

namespace marshal {

InputSpec parse_input_spec(const std::string& text) {
    auto colon = text.rfind(':');
    if (colon != std::string::npos) {
        std::string fmt = text.substr(colon + 1);
        if (fmt == "json" || fmt == "native") return {text.substr(0, colon), fmt};
    }
    return {text, ""};
}

namespace {

/// Raised for usage and input problems; maps to exit status 2.
struct CliFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RawOptions {
    std::vector<std::string> inputs;
    std::vector<std::string> rules;
    bool close = false;
    bool no_close = false;
    std::string templates = "all";
    std::string non_property = "off";
    bool variants = false;
    std::string format = "text";
    std::string output;
    bool include_deprecated = false;
    long long max_violations = -1;
    bool oracle = false;
};

void add_input_options(CLI::App* cmd, RawOptions& o, bool required = true) {
    auto* in = cmd->add_option("-i,--input", o.inputs, "Input file, optionally suffixed :json or :native");
    in->allow_extra_args(false);
    if (required) in->required();
    cmd->add_option("--rules", o.rules, "builtin, none, or a rule file (repeatable)")->allow_extra_args(false);
    cmd->add_flag("--include-deprecated", o.include_deprecated, "Let deprecated statements match");
}

void add_close_options(CLI::App* cmd, RawOptions& o) {
    auto* c = cmd->add_flag("--close", o.close, "Close the KB under the rules first (default)");
    auto* n = cmd->add_flag("--no-close", o.no_close, "Use the KB as loaded");
    c->excludes(n);
}

void add_output_options(CLI::App* cmd, RawOptions& o) {
    cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
    cmd->add_option("-o,--output", o.output, "Write output to this file");
}

RunManifest to_manifest(const RawOptions& o) {
    RunManifest m;
    for (const auto& i : o.inputs) m.inputs.push_back(parse_input_spec(i));
    if (!o.rules.empty()) m.rules = o.rules;
    bool has_none = std::find(m.rules.begin(), m.rules.end(), "none") != m.rules.end();
    if (has_none && m.rules.size() > 1) throw CliFailure("--rules none cannot be combined with other rule sources");
    if (has_none) m.rules.clear();
    m.close = !o.no_close;
    if (o.templates != "all") {
        std::stringstream ss(o.templates);
        for (std::string name; std::getline(ss, name, ',');) {
            if (name.empty()) continue;
            const ConstraintTemplate* t = find_template(builtin_templates(), name);
            if (!t) throw CliFailure("unknown template '" + name + "'");
            m.templates.insert(t->key);
        }
        if (m.templates.empty()) throw CliFailure("--templates names no template");
    }
    m.non_property = o.non_property == "on";
    m.variants = o.variants;
    m.format = o.format;
    m.output = o.output;
    m.include_deprecated = o.include_deprecated;
    if (o.max_violations >= 0) m.max_violations = static_cast<std::size_t>(o.max_violations);
    m.oracle = o.oracle;
    return m;
}

KnowledgeBase load_inputs(const RunManifest& m, const LabelMap& labels, std::ostream& err) {
    KnowledgeBase kb;
    IngestStats total;
    for (const auto& in : m.inputs) {
        try {
            load_file(in.path, in.format, kb, total, labels);
        } catch (const IngestError& e) {
            throw CliFailure(e.what());
        }
    }
    for (const auto& [reason, n] : total.skip_counts()) err << "skipped " << n << " (" << reason << ")\n";
    return kb;
}

RuleSet load_rule_sources(const RunManifest& m, const LabelMap& labels) {
    RuleSet rules;
    try {
        for (const auto& src : m.rules) {
            if (src == "builtin")
                rules.extend(builtin_ontology());
            else
                rules.extend(load_rules_file(src, labels));
        }
    } catch (const std::exception& e) {
        throw CliFailure(std::string("rules: ") + e.what());
    }
    return rules;
}

KnowledgeBase maybe_close(KnowledgeBase kb, const RunManifest& m, const LabelMap& labels, std::ostream& err) {
    if (!m.close) return kb;
    RuleSet rules = load_rule_sources(m, labels);
    if (rules.empty()) return kb;
    ClosureStats stats;
    ClosureOptions opts;
    opts.include_deprecated = m.include_deprecated;
    KnowledgeBase closed = closure(kb, rules, &stats, opts);
    err << "closure: " << stats.derived << " derived statements in " << stats.rounds << " rounds\n";
    return closed;
}

/// Writes to --output or `out`.
void emit(const RunManifest& m, const std::string& text, std::ostream& out) {
    if (m.output.empty()) {
        out << text;
        return;
    }
    std::ofstream f(m.output, std::ios::binary);
    f << text;
    f.close();
    if (!f) throw CliFailure(m.output + ": write failed");
}

std::vector<std::string> oracle_check(const KnowledgeBase& kb, const std::vector<ViolationQuery>& queries,
                                      const EvalConfig& cfg, const std::string& where, bool& mismatch) {
    std::vector<std::string> diags;
    for (const auto& q : queries) {
        try {
            EvalResult fast = evaluate(kb, q.query, cfg);
            EvalResult slow = brute_force_evaluate(kb, q.query, cfg);
            if (fast.bindings != slow.bindings) {
                mismatch = true;
                diags.push_back("oracle mismatch: " + where + (q.formula->label.empty() ? "" : " [" + q.formula->label + "]"));
            }
        } catch (const std::exception& e) {
            mismatch = true;
            diags.push_back("oracle: " + where + ": " + e.what());
        }
    }
    return diags;
}

int cmd_check(const RunManifest& m, std::ostream& out, std::ostream& err) {
    LabelMap labels = LabelMap::from_environment();
    KnowledgeBase kb = maybe_close(load_inputs(m, labels, err), m, labels, err);

    Extraction ex = extract_declarations(kb);
    CheckConfig cfg;
    cfg.eval.include_deprecated = m.include_deprecated;
    cfg.templates = m.templates;
    cfg.variants = m.variants;
    CheckResult res = check(kb, ex.declarations, cfg);
    if (m.non_property) {
        CheckResult np = check_nonproperty(kb, cfg);
        for (auto& v : np.violations) res.violations.push_back(std::move(v));
        for (auto& d : np.diagnostics) res.diagnostics.push_back(std::move(d));
        sort_violations(res.violations);
    }

    bool mismatch = false;
    if (m.oracle) {
        for (const auto& d : ex.declarations) {
            if (!d.valid || (!m.templates.empty() && !m.templates.count(d.tmpl->key))) continue;
            auto diags = oracle_check(kb, derive_violation_queries(d, m.variants), cfg.eval,
                                      "declaration " + d.statement_id, mismatch);
            res.diagnostics.insert(res.diagnostics.end(), diags.begin(), diags.end());
        }
        if (m.non_property)
            for (const auto& t : builtin_templates()) {
                if (t.scope != TemplateScope::NonProperty) continue;
                if (!m.templates.empty() && !m.templates.count(t.key)) continue;
                std::vector<ViolationQuery> qs;
                for (const auto& f : t.formulas)
                    if (!f.variant || m.variants) qs.push_back({&f, generic_violation_query(f)});
                auto diags = oracle_check(kb, qs, cfg.eval, t.name, mismatch);
                res.diagnostics.insert(res.diagnostics.end(), diags.begin(), diags.end());
            }
        if (!mismatch) res.diagnostics.push_back("oracle: evaluator agrees with brute force on every query");
    }

    ReportOptions ropts;
    ropts.max_violations = m.max_violations;
    emit(m, render_report(res.violations, m.format == "json" ? ReportFormat::Json : ReportFormat::Text, res.diagnostics,
                          ropts),
         out);
    if (mismatch) return kExitError;
    return summarize(res.violations).unsuppressed > 0 ? kExitViolations : kExitOk;
}

int cmd_query(const RunManifest& m, const std::string& text, std::ostream& out, std::ostream& err) {
    LabelMap labels = LabelMap::from_environment();
    Formula f;
    try {
        f = parse_formula(text, labels);
    } catch (const ParseError& e) {
        throw CliFailure(std::string("query: ") + e.what());
    }
    SafeRange sr = check_safe_range(f);
    if (!sr.ok) {
        std::string why = "query is not safe-range";
        for (const auto& d : sr.diagnostics) why += "\n  " + d;
        throw CliFailure(why);
    }
    KnowledgeBase kb = maybe_close(load_inputs(m, labels, err), m, labels, err);
    EvalConfig cfg;
    cfg.include_deprecated = m.include_deprecated;
    cfg.max_bindings = m.max_violations;
    EvalResult res;
    try {
        res = evaluate(kb, f, cfg);
    } catch (const std::exception& e) {
        throw CliFailure(std::string("query: ") + e.what());
    }
    std::set<std::string> vars = free_variables(f);
    auto cell = [](const Binding& b, const std::string& v) -> std::string {
        if (const Value* o = b.object(v)) return format_value(*o);
        if (const AttrSet* s = b.set(v)) return format_attrset(s->qualifiers_only());
        return "";
    };
    std::string doc;
    if (m.format == "json") {
        nlohmann::ordered_json j;
        j["variables"] = vars;
        j["bindings"] = nlohmann::ordered_json::array();
        for (const auto& b : res.bindings) {
            nlohmann::ordered_json row = nlohmann::ordered_json::object();
            for (const auto& v : vars) row[v] = cell(b, v);
            j["bindings"].push_back(row);
        }
        j["truncated"] = res.truncated;
        j["diagnostics"] = res.diagnostics;
        doc = j.dump(2) + "\n";
    } else {
        std::string header;
        for (const auto& v : vars) header += (header.empty() ? "" : "\t") + v;
        if (!header.empty()) doc += header + "\n";
        for (const auto& b : res.bindings) {
            std::string row;
            bool first = true;
            for (const auto& v : vars) {
                row += (first ? "" : "\t") + cell(b, v);
                first = false;
            }
            doc += (vars.empty() ? "true" : row) + "\n";
        }
        doc += "(" + std::to_string(res.bindings.size()) + " rows" + (res.truncated ? ", truncated" : "") + ")\n";
        for (const auto& d : res.diagnostics) doc += "diagnostic: " + d + "\n";
    }
    emit(m, doc, out);
    return kExitOk;
}

int cmd_infer(const RunManifest& m, const std::string& explain_id, std::ostream& out, std::ostream& err) {
    LabelMap labels = LabelMap::from_environment();
    KnowledgeBase kb = load_inputs(m, labels, err);
    RuleSet rules = load_rule_sources(m, labels);
    ClosureStats stats;
    ClosureOptions opts;
    opts.include_deprecated = m.include_deprecated;
    KnowledgeBase closed = closure(kb, rules, &stats, opts);
    err << "derived " << stats.derived << " statements in " << stats.rounds << " rounds\n";
    for (const auto& [rule, n] : stats.per_rule) err << "  " << rule << ": " << n << "\n";
    if (!explain_id.empty()) {
        try {
            emit(m, print_derivation(closed, explain(closed, explain_id)), out);
        } catch (const RuleError& e) {
            throw CliFailure(e.what());
        }
        return kExitOk;
    }
    emit(m, export_native(closed), out);
    return kExitOk;
}

int cmd_catalog(const std::vector<std::string>& filter, bool self_test, bool formulas, const std::string& format,
                std::ostream& out) {
    const auto& all = builtin_templates();
    std::vector<const ConstraintTemplate*> shown;
    for (const auto& t : all) {
        bool keep = filter.empty();
        for (const auto& name : filter)
            if (find_template({t}, name) || t.name.find(name) != std::string::npos) keep = true;
        if (keep) shown.push_back(&t);
    }
    auto ids = [](const std::vector<EntityId>& v) {
        std::vector<std::string> out;
        for (const auto& e : v) out.push_back(e.str());
        return out;
    };
    if (format == "json") {
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (const auto* t : shown) {
            nlohmann::ordered_json e;
            e["key"] = t->key;
            e["name"] = t->name;
            e["type"] = t->type_id.str();
            e["scope"] = t->scope == TemplateScope::Property ? "property" : "non-property";
            e["required"] = ids(t->required_params);
            e["optional"] = ids(t->optional_params);
            e["formulas"] = nlohmann::ordered_json::array();
            for (const auto& f : t->formulas)
                e["formulas"].push_back({{"label", f.label},
                                         {"variant", f.variant},
                                         {"positive", print_formula(f.positive)},
                                         {"violation_query", print_formula(generic_violation_query(f))}});
            j.push_back(e);
        }
        out << j.dump(2) << "\n";
    } else {
        for (const auto* t : shown) {
            out << t->display() << "  [" << t->key << ", "
                << (t->scope == TemplateScope::Property ? "property" : "non-property") << ", " << t->formulas.size()
                << (t->formulas.size() == 1 ? " formula" : " formulae") << "]";
            auto req = ids(t->required_params);
            auto opt = ids(t->optional_params);
            if (!req.empty()) {
                out << " required:";
                for (const auto& r : req) out << " " << r;
            }
            if (!opt.empty()) {
                out << " optional:";
                for (const auto& r : opt) out << " " << r;
            }
            out << "\n";
            if (!formulas) continue;
            for (const auto& f : t->formulas) {
                out << "  " << (f.label.empty() ? "formula" : f.label) << (f.variant ? " (variant)" : "") << ":\n";
                out << "    " << print_formula(f.positive) << "\n";
                out << "    violation query: " << print_formula(generic_violation_query(f)) << "\n";
            }
        }
        out << shown.size() << " templates\n";
    }
    if (!self_test) return kExitOk;
    auto failures = catalog_self_test(all);
    for (const auto& f : failures) out << "self-test failure: " << f << "\n";
    if (failures.empty()) out << "self-test passed: " << all.size() << " templates\n";
    return failures.empty() ? kExitOk : kExitError;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Checks Wikidata property constraints as logical formulae."};
    app.set_version_flag("--version", "marshal 0.1.0");
    app.require_subcommand(1);

    RawOptions o;
    auto* check = app.add_subcommand("check", "Check constraint declarations and report violations");
    add_input_options(check, o);
    add_close_options(check, o);
    add_output_options(check, o);
    check->add_option("--templates", o.templates, "all, or comma-separated template names");
    check->add_option("--non-property", o.non_property, "Run the non-property templates")
        ->check(CLI::IsMember({"on", "off"}));
    check->add_flag("--variants", o.variants, "Also run off-by-default template variants");
    check->add_option("--max-violations", o.max_violations, "List at most this many violations")
        ->check(CLI::NonNegativeNumber);
    check->add_flag("--oracle", o.oracle, "Cross-check every query against brute force (small KBs only)");

    std::string query_text, query_file;
    auto* query = app.add_subcommand("query", "Evaluate a formula and print its bindings");
    add_input_options(query, o);
    add_close_options(query, o);
    add_output_options(query, o);
    auto* qt = query->add_option("formula", query_text, "Formula text");
    auto* qf = query->add_option("-f,--file", query_file, "Read the formula from a file");
    qt->excludes(qf);
    query->add_option("--limit", o.max_violations, "Stop after this many bindings")->check(CLI::NonNegativeNumber);

    std::string explain_id;
    auto* infer = app.add_subcommand("infer", "Close the KB under the rules and export it");
    add_input_options(infer, o);
    infer->add_option("-o,--output", o.output, "Write the export to this file");
    infer->add_option("--explain", explain_id, "Print the derivation of this statement id instead");

    std::vector<std::string> filter;
    bool self_test = false, formulas = false;
    auto* catalog = app.add_subcommand("catalog", "List constraint templates");
    catalog->add_option("names", filter, "Only templates matching these names");
    catalog->add_flag("--self-test", self_test, "Check every template formula");
    catalog->add_flag("--formulas", formulas, "Print formulae and violation queries");
    catalog->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kExitOk : kExitError;
    }

    try {
        if (*catalog) return cmd_catalog(filter, self_test, formulas, o.format, out);
        RunManifest m = to_manifest(o);
        if (*check) return cmd_check(m, out, err);
        if (*infer) return cmd_infer(m, explain_id, out, err);
        if (*query) {
            if (query_text.empty() && query_file.empty()) throw CliFailure("query: give a formula or --file");
            if (!query_file.empty()) {
                std::ifstream f(query_file);
                if (!f) throw CliFailure(query_file + ": cannot open");
                std::stringstream ss;
                ss << f.rdbuf();
                query_text = ss.str();
            }
            return cmd_query(m, query_text, out, err);
        }
    } catch (const CliFailure& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace marshal
