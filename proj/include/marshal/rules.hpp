// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "marshal/formula.hpp"
#include "marshal/kb.hpp"

namespace marshal {

class RuleError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class RuleOrigin { Builtin, User };

/// Positive Horn rule `body -> head`. The body is a conjunction of
/// relational, set and equality atoms; the head is one relational atom whose
/// attribute set is copied from a body set variable (qualifiers only), given
/// as a literal, or empty when omitted.
struct Rule {
    std::string name;
    Formula body;
    Formula head;
    RuleOrigin origin = RuleOrigin::User;
};

/// Validates and splits an implication. Throws RuleError.
Rule make_rule(std::string name, const Formula& implication, RuleOrigin origin = RuleOrigin::User);
Rule parse_rule(std::string name, std::string_view text, const LabelMap& labels = LabelMap::builtin(),
                RuleOrigin origin = RuleOrigin::User);

std::string print_rule(const Rule& r, const PrintOptions& opts = {});

class RuleSet {
public:
    /// Throws RuleError on a duplicate name.
    void add(Rule r);
    /// Appends every rule of `other`; throws RuleError on a duplicate name.
    void extend(const RuleSet& other);
    bool remove(std::string_view name);

    const std::vector<Rule>& rules() const { return rules_; }
    const Rule* find(std::string_view name) const;
    std::size_t size() const { return rules_.size(); }
    bool empty() const { return rules_.empty(); }

private:
    std::vector<Rule> rules_;
};

struct OntologyOptions {
    /// Also treat `property_constraint(p, symmetric_constraint)` as a rule.
    bool symmetric_constraint_as_rule = true;
};

/// subclass_of transitivity, instance_of propagation, subproperty lifting
/// and the symmetric/transitive/reflexive property rules.
RuleSet builtin_ontology(const OntologyOptions& opts = {});

/// Rule blocks: `rule: <name>` header, formula body. Throws ParseError or RuleError.
RuleSet load_rules(std::string_view text, const LabelMap& labels = LabelMap::builtin(),
                   RuleOrigin origin = RuleOrigin::User);
RuleSet load_rules_file(const std::string& path, const LabelMap& labels = LabelMap::builtin());

struct ClosureOptions {
    bool include_deprecated = false;
    /// Delta statements per parallel work item.
    std::size_t chunk = 512;
    /// Safety valve; the fragment always terminates.
    std::optional<std::size_t> max_rounds;
};

struct ClosureStats {
    std::size_t rounds = 0;
    std::size_t derived = 0;
    std::map<std::string, std::size_t> per_rule;
};

/// Least fixpoint of `rules` over `kb` by semi-naive evaluation, matching
/// rule bodies in parallel. Derived statements have normal rank and carry a
/// Derivation naming the rule and the matched premises.
KnowledgeBase closure(const KnowledgeBase& kb, const RuleSet& rules, ClosureStats* stats = nullptr,
                      const ClosureOptions& opts = {});

/// Serial naive fixpoint that matches rule bodies with the formula
/// evaluator. Derivations name the rule but record no premises.
KnowledgeBase closure_reference(const KnowledgeBase& kb, const RuleSet& rules, ClosureStats* stats = nullptr,
                                const ClosureOptions& opts = {});

/// Dedup key of a statement: subject, property, value and qualifiers
/// without rank and reference mirrors.
struct StatementKey {
    Value subject;
    EntityId property;
    Value value;
    AttrSet qualifiers;

    static StatementKey of(const Statement& st);
    friend auto operator<=>(const StatementKey&, const StatementKey&) = default;
    friend bool operator==(const StatementKey&, const StatementKey&) = default;
};

struct DerivationNode {
    std::size_t statement = 0;  // index into kb.statements()
    std::string rule;           // empty for base statements
    std::vector<DerivationNode> premises;

    std::size_t depth() const;
};

/// Derivation tree of the statement with the given id. Throws RuleError on
/// an unknown id.
DerivationNode explain(const KnowledgeBase& kb, std::string_view statement_id);
std::string print_derivation(const KnowledgeBase& kb, const DerivationNode& node);

}  // namespace marshal
