// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "marshal/labels.hpp"
#include "marshal/lexer.hpp"
#include "marshal/value.hpp"

namespace marshal {

class FormulaError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SetPair;

/// Object term, set term, or datatype function application.
///
/// Object variables are spelled `?x`, set variables `?X`; the parser
/// materializes the attribute set of an atom written without one as an
/// implicit set variable `?_A<n>`, which is existentially scoped to its atom.
struct Term {
    enum class Kind { Const, ObjVar, SetVar, SetLit, Apply };

    Kind kind = Kind::Const;
    Value constant;
    std::string name;  // variable name (with '?') or function name
    bool implicit = false;
    std::vector<SetPair> pairs;  // SetLit, sorted canonically
    std::vector<Term> args;      // Apply

    static Term constant_of(Value v);
    static Term obj_var(std::string name);
    static Term set_var(std::string name, bool implicit = false);
    static Term set_literal(std::vector<SetPair> pairs);
    static Term apply(std::string fn, std::vector<Term> args);
    /// Ground set literal denoting `s`.
    static Term set_of(const AttrSet& s);

    bool is_var() const { return kind == Kind::ObjVar || kind == Kind::SetVar; }
    bool is_set() const { return kind == Kind::SetVar || kind == Kind::SetLit; }
    bool is_ground() const;
};

struct SetPair {
    Term attr;
    Term value;
};

enum class AtomKind { Rel, SetMember, Eq, DtRel, True, False };

/// Reserved predicates that match side tables instead of statements.
inline constexpr std::string_view kNoValuePredicate = "no_value";
inline constexpr std::string_view kCommonsPredicate = "Commons_namespace";

struct Atom {
    AtomKind kind = AtomKind::True;
    Term predicate;          // Rel: constant entity or object variable (unused for builtins)
    std::string builtin;     // Rel: "no_value", "Commons_namespace" or empty
    std::string name;        // DtRel: relation name
    std::vector<Term> args;  // Rel: subject, object; SetMember: attr, value, set; Eq: lhs, rhs; DtRel: operands
    Term attrs;              // Rel: attribute set term
};

enum class FormulaKind { Atom, Not, And, Or, Implies, Exists, Forall, CountExists };

struct Formula {
    FormulaKind kind = FormulaKind::Atom;
    Atom atom;
    std::vector<Formula> children;
    std::string var;  // bound variable for quantifiers
    Term count;       // CountExists lower bound: integer constant or variable
    SourcePos pos;

    bool is_atom(AtomKind k) const { return kind == FormulaKind::Atom && atom.kind == k; }
};

// --- construction ----------------------------------------------------------

Formula make_atom(Atom a, SourcePos pos = {});
Formula make_rel(Term predicate, Term subject, Term object, Term attrs);
Formula make_not(Formula f);
/// Flattens nested conjunctions; a single child is returned as is.
Formula make_and(std::vector<Formula> children);
Formula make_or(std::vector<Formula> children);
Formula make_implies(Formula lhs, Formula rhs);
Formula make_exists(std::string var, Formula body);
Formula make_forall(std::string var, Formula body);
Formula make_count_exists(Term count, std::string var, Formula body);

// --- parsing and printing --------------------------------------------------

/// Throws ParseError with line/column and the expected-token set.
Formula parse_formula(std::string_view text, const LabelMap& labels = LabelMap::builtin(), SourcePos start = {});

struct PrintOptions {
    /// Write entity constants as backtick labels when the map knows them.
    const LabelMap* labels = nullptr;
};

std::string print_formula(const Formula& f, const PrintOptions& opts = {});
std::string print_term(const Term& t, const PrintOptions& opts = {});

/// AST equality ignoring source positions and implicit variable numbering.
bool structurally_equal(const Formula& a, const Formula& b);
bool structurally_equal(const Term& a, const Term& b);

// --- analysis and transformation ------------------------------------------

/// Free object and set variables. Implicit attribute-set variables are
/// bound at their atom and therefore never free.
std::set<std::string> free_variables(const Formula& f);
std::set<std::string> term_variables(const Term& t);
/// Names of the implicit attribute-set variables (`?_A<n>`).
std::set<std::string> implicit_variables(const Formula& f);
/// Every variable name that occurs anywhere, bound or free.
std::set<std::string> all_variables(const Formula& f);

/// Constants (including those inside set literals and function arguments).
std::set<Value> formula_constants(const Formula& f);
/// Ground set literals, as attribute sets.
std::vector<AttrSet> ground_set_literals(const Formula& f);

/// Negation pushed inward: ¬∧ → ∨¬, ¬∨ → ∧¬, ¬→ → ∧¬, ¬∀ → ∃¬, ¬¬ → id;
/// negated atoms and negated ∃ / ∃[k] are left as is.
Formula negate(const Formula& f);

/// Body → Head becomes Body ∧ negate(Head). Leading existentials produced by
/// the negation are lifted to free variables so violations report witnesses.
/// Throws FormulaError when `f` is not an implication.
Formula negate_to_violation_query(const Formula& f);

/// Replaces free occurrences of the named variables.
Formula substitute(const Formula& f, const std::map<std::string, Term>& replacement);

// --- block files -----------------------------------------------------------

/// One `---`-separated block of a catalog or rule file: `key: value` header
/// lines followed by the formula text.
struct FormulaBlock {
    std::map<std::string, std::string> headers;
    std::string body;
    SourcePos body_pos;
    int first_line = 1;

    const std::string* header(const std::string& key) const;
};

std::vector<FormulaBlock> parse_blocks(std::string_view text);

}  // namespace marshal
