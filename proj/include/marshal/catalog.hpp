// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#pragma once

#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "marshal/eval.hpp"
#include "marshal/formula.hpp"
#include "marshal/kb.hpp"

namespace marshal {

class CatalogError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class TemplateScope { Property, NonProperty };

/// One positive formulation of a template.
struct TemplateFormula {
    std::string label;  // distinguishes the formulae of multi-formula templates
    std::string text;   // as written in the catalog
    Formula positive;
    /// Variable whose value is the constrained property (`?p`, or `?q` for
    /// the qualifier branch of property scope).
    std::string property_var = "?p";
    /// Variables checked against the declaration's exceptions.
    std::vector<std::string> subject_vars;
    /// Two interchangeable variable groups; bindings that differ only by
    /// swapping them are reported once.
    std::vector<std::vector<std::string>> unordered;
    /// Off unless CheckConfig::variants is set.
    bool variant = false;
};

struct ConstraintTemplate {
    std::string key;   // `symmetric`
    std::string name;  // `symmetric constraint`
    EntityId type_id;  // Q21510862
    TemplateScope scope = TemplateScope::Property;
    std::vector<EntityId> required_params;
    std::vector<EntityId> optional_params;
    std::vector<TemplateFormula> formulas;

    /// `symmetric constraint (Q21510862)`
    std::string display() const;
};

/// Text of the shipped template library (catalog block format).
std::string_view builtin_catalog_text();

/// Parses catalog blocks. Throws ParseError or CatalogError.
std::vector<ConstraintTemplate> load_templates(std::string_view text, const LabelMap& labels = LabelMap::builtin());

/// The shipped library, parsed once.
const std::vector<ConstraintTemplate>& builtin_templates();

/// Lookup by key, name or type id text.
const ConstraintTemplate* find_template(const std::vector<ConstraintTemplate>& templates, std::string_view key);

enum class Severity { Mandatory, Normal, Suggestion };
std::string_view severity_name(Severity s);

struct ConstraintDeclaration {
    std::string statement_id;
    EntityId property;
    EntityId type_id;
    const ConstraintTemplate* tmpl = nullptr;  // null for unknown types
    AttrSet params;                            // the declaration's full attribute set
    Severity severity = Severity::Normal;
    std::set<Value> exceptions;
    Rank rank = Rank::Normal;
    bool valid = true;
    std::vector<std::string> diagnostics;
};

struct Extraction {
    /// One entry per `property_constraint` statement, valid or not.
    std::vector<ConstraintDeclaration> declarations;
    std::size_t valid = 0;
};

/// Reads every `property_constraint` statement whose subject is a property.
/// Unknown types, missing required parameters and deprecated rank make a
/// declaration invalid with a diagnostic.
Extraction extract_declarations(const KnowledgeBase& kb,
                                const std::vector<ConstraintTemplate>& templates = builtin_templates());

struct ViolationQuery {
    const TemplateFormula* formula = nullptr;
    Formula query;
};

/// Substitutes the declared property and attribute set into each positive
/// formula and negates it. Throws CatalogError when a derived query is not
/// safe-range.
std::vector<ViolationQuery> derive_violation_queries(const ConstraintDeclaration& decl, bool variants = false);

/// Violation query of a positive formula without declaration parameters.
Formula generic_violation_query(const TemplateFormula& f);

struct Violation {
    const ConstraintTemplate* tmpl = nullptr;
    std::string formula_label;
    std::optional<EntityId> property;  // declared property, or the `?p` binding
    std::string declaration_id;
    AttrSet params;
    Binding binding;
    std::optional<Value> subject;  // value of the first bound subject variable
    Severity severity = Severity::Normal;
    bool suppressed = false;
    std::string message;
    std::vector<std::string> diagnostics;
};

struct CheckConfig {
    EvalConfig eval;
    /// Template keys to run; empty runs every template.
    std::set<std::string> templates;
    bool variants = false;
    bool parallel = true;
};

struct CheckResult {
    std::vector<Violation> violations;  // report order
    /// Per-declaration problems: invalid declarations, skipped formulae,
    /// evaluation errors.
    std::vector<std::string> diagnostics;
    std::size_t declarations_checked = 0;
};

/// Runs every valid declaration's violation queries, one parallel worker
/// per declaration.
CheckResult check(const KnowledgeBase& kb, const std::vector<ConstraintDeclaration>& decls,
                  const CheckConfig& cfg = {});
/// Same result computed by a plain loop.
CheckResult check_serial(const KnowledgeBase& kb, const std::vector<ConstraintDeclaration>& decls,
                         const CheckConfig& cfg = {});

/// Runs the non-property templates, which need no declaration.
CheckResult check_nonproperty(const KnowledgeBase& kb, const CheckConfig& cfg = {},
                              const std::vector<ConstraintTemplate>& templates = builtin_templates());

/// Report order: template type, property, subject, binding, formula.
void sort_violations(std::vector<Violation>& vs);

/// Parse, implication shape, print/parse identity and safe range of every
/// formula. Returns the failures.
std::vector<std::string> catalog_self_test(const std::vector<ConstraintTemplate>& templates = builtin_templates());

}  // namespace marshal
