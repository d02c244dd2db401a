// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "marshal/formula.hpp"
#include "marshal/kb.hpp"

namespace marshal {

class EvalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Assignment of values to object variables and attribute sets to set variables.
struct Binding {
    std::map<std::string, Value> objects;
    std::map<std::string, AttrSet> sets;

    const Value* object(const std::string& name) const;
    const AttrSet* set(const std::string& name) const;
    bool empty() const { return objects.empty() && sets.empty(); }
    /// `{?x=Q1, ?SQ={P580: ...}}`
    std::string str() const;

    friend auto operator<=>(const Binding&, const Binding&) = default;
    friend bool operator==(const Binding&, const Binding&) = default;
};

struct EvalConfig {
    /// Stop after this many distinct bindings.
    std::optional<std::size_t> max_bindings;
    bool include_deprecated = false;
    /// brute_force_evaluate refuses KBs whose active domain exceeds this.
    std::size_t oracle_domain_limit = 12;
};

struct EvalResult {
    std::vector<Binding> bindings;  // sorted, distinct
    std::vector<std::string> diagnostics;
    bool truncated = false;
};

/// Quantification domains: the constants of the KB and of the formula, and
/// the attribute sets of visible statements, no-value facts and ground set
/// literals of the formula.
std::set<Value> object_domain(const KnowledgeBase& kb, const Formula& f);
std::vector<AttrSet> set_domain(const KnowledgeBase& kb, const Formula& f, const EvalConfig& cfg = {});

struct SafeRange {
    bool ok = true;
    std::vector<std::string> diagnostics;
};

/// Range-restriction analysis: every free variable and every quantified
/// variable must be bound by a positive relational, set or equality atom.
SafeRange check_safe_range(const Formula& f);

/// All bindings of free_variables(f) under which `f` holds. Throws EvalError
/// when `f` is not safe-range. Datatype errors make the offending atom false
/// and are reported as diagnostics.
EvalResult evaluate(const KnowledgeBase& kb, const Formula& f, const EvalConfig& cfg = {});

/// Truth of `f` under a binding total over its free variables, by direct
/// structural recursion without indexes. Throws EvalError on a partial binding.
bool holds(const KnowledgeBase& kb, const Formula& f, const Binding& b, const EvalConfig& cfg = {},
           std::vector<std::string>* diagnostics = nullptr);

/// Generate-and-test reference: enumerates candidate bindings over the
/// domains and keeps those satisfying `holds`. Throws EvalError when the KB's
/// active domain exceeds cfg.oracle_domain_limit.
EvalResult brute_force_evaluate(const KnowledgeBase& kb, const Formula& f, const EvalConfig& cfg = {});

/// A ground set literal `lit` denotes the attribute set `q` of a statement
/// when their qualifier pairs agree exactly and the bookkeeping pairs of
/// `lit` occur in `q`.
bool literal_matches(const AttrSet& lit, const AttrSet& q);

/// True iff `name` denotes a set variable (`?X...` or `?_...`).
bool is_set_variable(const std::string& name);

}  // namespace marshal
