// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

// Parallel kernels against their serial references.

#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "marshal/catalog.hpp"
#include "marshal/ingest.hpp"
#include "marshal/rules.hpp"

using namespace marshal;

namespace {

// A class tree, instances, spouse pairs with dates and a declaration mix.
KnowledgeBase workload(int people) {
    std::mt19937_64 rng(5);
    std::string text =
        "P2302(P26, Q21510862)\n"
        "P2302(P26, Q25796498)\n"
        "P2302(P26, Q21510865) @ {P2308: Q5, P2309: Q21503252}\n"
        "P2302(P569, Q19474404)\n"
        "P2302(P569, Q21510860) @ {P2310: 1800-01-01/11, P2311: 2020-01-01/11}\n"
        "P2302(P214, Q21502410)\n"
        "P2302(P214, Q21502404) @ {P1793: \"[1-9][0-9]{4,8}\"}\n";
    const int classes = people / 20 + 5;
    for (int c = 2; c <= classes; ++c)
        text += "P279(Q" + std::to_string(c) + ", Q" + std::to_string(1 + rng() % (c - 1)) + ")\n";
    text += "P279(Q1, Q5)\n";
    for (int i = 0; i < people; ++i) {
        const std::string q = "Q" + std::to_string(100000 + i);
        text += "P31(" + q + ", Q" + std::to_string(1 + rng() % classes) + ")\n";
        text += "P569(" + q + ", " + std::to_string(1850 + rng() % 150) + "-01-01/9)\n";
        if (rng() % 3 == 0) text += "P570(" + q + ", " + std::to_string(1950 + rng() % 70) + "-06-01/11)\n";
        text += "P214(" + q + ", \"" + std::to_string(10000 + rng() % (people * 4)) + "\")\n";
        if (i % 2 == 1) {
            const std::string p = "Q" + std::to_string(100000 + i - 1);
            text += "P26(" + q + ", " + p + ")\n";
            if (rng() % 4) text += "P26(" + p + ", " + q + ")\n";
        }
    }
    return load_native(text);
}

void BM_Closure(benchmark::State& state) {
    KnowledgeBase kb = workload(static_cast<int>(state.range(0)));
    RuleSet rules = builtin_ontology();
    for (auto _ : state) benchmark::DoNotOptimize(closure(kb, rules).size());
    state.counters["statements"] = static_cast<double>(kb.size());
}

void BM_ClosureReference(benchmark::State& state) {
    KnowledgeBase kb = workload(static_cast<int>(state.range(0)));
    RuleSet rules = builtin_ontology();
    for (auto _ : state) benchmark::DoNotOptimize(closure_reference(kb, rules).size());
    state.counters["statements"] = static_cast<double>(kb.size());
}

void BM_Check(benchmark::State& state) {
    KnowledgeBase kb = closure(workload(static_cast<int>(state.range(0))), builtin_ontology());
    auto decls = extract_declarations(kb).declarations;
    for (auto _ : state) benchmark::DoNotOptimize(check(kb, decls).violations.size());
    state.counters["statements"] = static_cast<double>(kb.size());
}

void BM_CheckSerial(benchmark::State& state) {
    KnowledgeBase kb = closure(workload(static_cast<int>(state.range(0))), builtin_ontology());
    auto decls = extract_declarations(kb).declarations;
    for (auto _ : state) benchmark::DoNotOptimize(check_serial(kb, decls).violations.size());
    state.counters["statements"] = static_cast<double>(kb.size());
}

}  // namespace

BENCHMARK(BM_Closure)->Arg(500)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ClosureReference)->Arg(500)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Check)->Arg(500)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CheckSerial)->Arg(500)->Arg(4000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
