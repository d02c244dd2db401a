// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "marshal/value.hpp"

namespace marshal {

class KbError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Rank : std::uint8_t { Preferred, Normal, Deprecated };

std::string_view rank_name(Rank r);
std::optional<Rank> rank_from_name(std::string_view name);
EntityId rank_entity(Rank r);

/// How a statement came to be in the KB: the rule that fired and the
/// statements (by index) that matched its body.
struct Derivation {
    std::string rule;
    std::vector<std::size_t> premises;
};

/// One instantiated relational atom `p(s, o)@SQ`.
struct Statement {
    std::string id;  // empty: assigned on insert
    Value subject;   // entity or anonymous constant
    EntityId property;
    Value value;
    AttrSet qualifiers;  // carries (@rank : r) and one (@reference : token) per reference
    Rank rank = Rank::Normal;
    std::vector<AnonId> references;
    std::optional<Derivation> derivation;
};

/// Builds a statement; KnowledgeBase::add_statement fills in the rank and
/// reference mirrors.
Statement make_statement(Value subject, EntityId property, Value value, AttrSet qualifiers = {},
                         Rank rank = Rank::Normal, std::vector<AnonId> references = {});

/// `no_value(p, s)@Q`. Like statements, Q carries the `(@rank : r)` mirror.
struct NoValueFact {
    EntityId property;
    Value subject;
    AttrSet qualifiers;
    Rank rank = Rank::Normal;

    friend auto operator<=>(const NoValueFact&, const NoValueFact&) = default;
    friend bool operator==(const NoValueFact&, const NoValueFact&) = default;
};

/// In-memory statement store with property, (property, subject) and
/// (property, value) indexes. Read-only use is safe from many threads.
class KnowledgeBase {
public:
    using Index = std::vector<std::uint32_t>;

    /// Throws KbError on duplicate id or malformed statement.
    const Statement& add_statement(Statement st);
    /// Returns false if an identical fact was already present.
    bool add_no_value(NoValueFact fact);
    void add_commons_namespace(std::string page, std::string ns);
    void set_label(EntityId id, std::string label) { labels_[id] = std::move(label); }

    AnonId fresh_anon() { return AnonId{next_anon_++}; }
    /// Ensures later fresh_anon() calls do not collide with `used`.
    void reserve_anon(AnonId used);

    const std::vector<Statement>& statements() const { return statements_; }
    std::size_t size() const { return statements_.size(); }
    const Statement* find(std::string_view id) const;
    std::optional<std::size_t> index_of(std::string_view id) const;

    /// Statements with the given property; deprecated ones only on request.
    std::vector<const Statement*> facts_for(const EntityId& property, bool include_deprecated = false) const;

    const Index& by_property(const EntityId& property) const;
    const Index& by_subject(const EntityId& property, const Value& subject) const;
    const Index& by_value(const EntityId& property, const Value& value) const;
    /// Properties that have at least one statement, in id order.
    std::vector<EntityId> properties() const;

    const std::vector<NoValueFact>& no_value_facts() const { return no_value_; }
    const std::map<std::string, std::string>& commons_namespaces() const { return commons_; }
    const std::map<EntityId, std::string>& labels() const { return labels_; }

    /// Every constant occurring in a statement, qualifier, or fact.
    const std::set<Value>& active_domain() const { return domain_; }

private:
    struct KeyHash {
        std::size_t operator()(const std::pair<EntityId, Value>& k) const {
            std::size_t h = std::hash<std::uint64_t>{}(k.first.id);
            hash_combine(h, k.second.hash());
            return h;
        }
    };
    struct EntityHash {
        std::size_t operator()(const EntityId& e) const {
            return std::hash<std::uint64_t>{}(e.id) * 3 + static_cast<std::size_t>(e.kind);
        }
    };

    void note_constants(const AttrSet& s);

    std::vector<Statement> statements_;
    std::unordered_map<std::string, std::uint32_t> ids_;
    std::unordered_map<EntityId, Index, EntityHash> by_property_;
    std::unordered_map<std::pair<EntityId, Value>, Index, KeyHash> by_subject_;
    std::unordered_map<std::pair<EntityId, Value>, Index, KeyHash> by_value_;
    std::vector<NoValueFact> no_value_;
    std::set<NoValueFact> no_value_seen_;
    std::map<std::string, std::string> commons_;
    std::map<EntityId, std::string> labels_;
    std::set<Value> domain_;
    std::uint64_t next_anon_ = 1;
};

}  // namespace marshal
