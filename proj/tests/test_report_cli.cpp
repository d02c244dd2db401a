// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include <filesystem>

#include "doctest.h"

#include "json.hpp"

#include "marshal/cli.hpp"
#include "marshal/report.hpp"
#include "support.hpp"

using namespace marshal;
using namespace marshal::testing;

namespace {

struct Run {
    int code;
    std::string out, err;
};

Run cli(std::vector<std::string> args) {
    args.insert(args.begin(), "marshal");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string temp_file(const std::string& name, const std::string& text) {
    auto path = std::filesystem::temp_directory_path() / ("marshal_cli_" + name);
    std::ofstream(path) << text;
    return path.string();
}

const char* const kKb = "P2302(P1, Q52848401) @ {P2303: Q1}\nP2302(P2, Q52848401) @ {P2316: Q21502408}\n"
                        "P1(Q1, 0.5)\nP1(Q4, 1.5)\nP1(Q6, 2)\nP2(Q5, 0.5)\n";

}  // namespace

TEST_CASE("summary counts") {
    KnowledgeBase kb = load_native(kKb);
    auto r = check(kb, extract_declarations(kb).declarations);
    ReportSummary s = summarize(r.violations);
    CHECK(s.total == 3);
    CHECK(s.suppressed == 1);
    CHECK(s.unsuppressed == 2);
    CHECK(s.by_severity.at("mandatory") == 1);
    CHECK(s.by_severity.at("normal") == 1);
    CHECK(s.by_severity.at("suggestion") == 0);

    auto j = nlohmann::json::parse(render_report(r.violations, ReportFormat::Json, {"note"}));
    CHECK(j["summary"]["total"] == 3);
    CHECK(j["violations"].size() == 3);
    CHECK(j["truncated"] == false);
    CHECK(j["diagnostics"][0] == "note");
    for (const auto& v : j["violations"])
        for (const char* key : {"template", "template_name", "formula", "declaration", "declaration_property", "subject",
                                "params", "binding", "severity", "suppressed", "message", "diagnostics"})
            CHECK(v.contains(key));

    ReportOptions one;
    one.max_violations = 1;
    auto t = nlohmann::json::parse(render_report(r.violations, ReportFormat::Json, {}, one));
    CHECK(t["violations"].size() == 1);
    CHECK(t["truncated"] == true);
    CHECK(t["summary"]["total"] == 3);
    std::string text = render_report(r.violations, ReportFormat::Text, {}, one);
    CHECK(text.find("2 more not shown") != std::string::npos);
    CHECK(text.find("summary: 3 violations, 1 suppressed") != std::string::npos);
}

TEST_CASE("check exit codes") {
    std::string kb = temp_file("v.kb", kKb);
    std::string clean = temp_file("c.kb", "P2302(P1, Q19474404)\nP1(Q1, Q2)\n");
    CHECK(cli({"check", "-i", kb}).code == kExitViolations);
    CHECK(cli({"check", "-i", clean}).code == kExitOk);
    CHECK(cli({"check", "-i", "/nonexistent.kb"}).code == kExitError);
    CHECK(cli({"check"}).code == kExitError);
    CHECK(cli({"check", "-i", kb, "--format", "yaml"}).code == kExitError);
    CHECK(cli({"check", "-i", kb, "--close", "--no-close"}).code == kExitError);
    CHECK(cli({"check", "-i", kb, "--rules", "none", "--rules", "builtin"}).code == kExitError);
    CHECK(cli({"check", "-i", kb, "--templates", "integer"}).code == kExitViolations);
    CHECK(cli({"check", "-i", kb, "--templates", "nonsense"}).code == kExitError);
    CHECK(cli({"frobnicate"}).code == kExitError);
    std::string small = temp_file("o.kb", "P2302(P1, Q52848401)\nP1(Q1, 0.5)\nP1(Q2, 1)\n");
    auto oracle = cli({"check", "-i", small, "--oracle"});
    CHECK(oracle.code == kExitViolations);
    CHECK(oracle.out.find("evaluator agrees with brute force") != std::string::npos);
    CHECK(cli({"check", "-i", kb, "--oracle"}).code == kExitError);  // domain above the oracle limit
}

TEST_CASE("check writes reports") {
    std::string kb = temp_file("r.kb", kKb);
    auto out = std::filesystem::temp_directory_path() / "marshal_cli_report.json";
    auto r = cli({"check", "-i", kb, "--format", "json", "-o", out.string()});
    CHECK(r.code == kExitViolations);
    auto j = nlohmann::json::parse(read_file(out.string()));
    CHECK(j["summary"]["unsuppressed"] == 2);
    auto text = cli({"check", "-i", kb, "--max-violations", "0"});
    CHECK(text.out.find("summary: 3 violations") != std::string::npos);
}

TEST_CASE("query subcommand") {
    std::string kb = temp_file("q.kb", kKb);
    auto r = cli({"query", "-i", kb, "P1(?x, ?y)"});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("(3 rows)") != std::string::npos);
    auto j = cli({"query", "-i", kb, "--format", "json", "--limit", "1", "P1(?x, ?y)"});
    auto doc = nlohmann::json::parse(j.out);
    CHECK(doc["bindings"].size() == 1);
    CHECK(doc["truncated"] == true);
    CHECK(cli({"query", "-i", kb, "!P1(?x, ?y)"}).code == kExitError);
    CHECK(cli({"query", "-i", kb, "P1(?x,"}).code == kExitError);
}

TEST_CASE("infer and catalog subcommands") {
    std::string kb = temp_file("i.kb", "P279(Q1, Q2)\nP279(Q2, Q3)\n");
    auto r = cli({"infer", "-i", kb});
    CHECK(r.code == kExitOk);
    CHECK(r.out.find("P279(Q1, Q3)") != std::string::npos);
    CHECK(r.err.find("derived 1 statements") != std::string::npos);
    CHECK(cli({"infer", "-i", kb, "--explain", "s3"}).out.find("subclass_of_transitive") != std::string::npos);
    CHECK(cli({"infer", "-i", kb, "--explain", "s99"}).code == kExitError);

    auto cat = cli({"catalog"});
    CHECK(cat.code == kExitOk);
    CHECK(cat.out.find("37 templates") != std::string::npos);
    auto st = cli({"catalog", "--self-test"});
    CHECK(st.code == kExitOk);
    auto one = cli({"catalog", "--formulas", "symmetric"});
    CHECK(one.out.find("violation query") != std::string::npos);
    auto js = nlohmann::json::parse(cli({"catalog", "--format", "json"}).out);
    CHECK(js.size() == 37);
}

TEST_CASE("input specs") {
    CHECK(parse_input_spec("a.kb").format.empty());
    CHECK(parse_input_spec("a.txt:json").format == "json");
    CHECK(parse_input_spec("a.txt:native").path == "a.txt");
    CHECK(parse_input_spec("C:/x.kb").path == "C:/x.kb");
}
