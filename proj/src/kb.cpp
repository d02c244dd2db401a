// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include "marshal/kb.hpp"

#include <algorithm>

namespace marshal {

namespace {

const KnowledgeBase::Index kEmpty;

}  // namespace

std::string_view rank_name(Rank r) {
    switch (r) {
        case Rank::Preferred: return "preferred";
        case Rank::Normal: return "normal";
        case Rank::Deprecated: return "deprecated";
    }
    return "normal";
}

std::optional<Rank> rank_from_name(std::string_view name) {
    if (name == "preferred") return Rank::Preferred;
    if (name == "normal") return Rank::Normal;
    if (name == "deprecated") return Rank::Deprecated;
    return std::nullopt;
}

EntityId rank_entity(Rank r) {
    switch (r) {
        case Rank::Preferred: return EntityId::pseudo(Pseudo::Preferred);
        case Rank::Normal: return EntityId::pseudo(Pseudo::Normal);
        case Rank::Deprecated: return EntityId::pseudo(Pseudo::Deprecated);
    }
    return EntityId::pseudo(Pseudo::Normal);
}

Statement make_statement(Value subject, EntityId property, Value value, AttrSet qualifiers, Rank rank,
                         std::vector<AnonId> references) {
    Statement st;
    st.subject = std::move(subject);
    st.property = property;
    st.value = std::move(value);
    st.qualifiers = std::move(qualifiers);
    st.rank = rank;
    st.references = std::move(references);
    return st;
}

void KnowledgeBase::reserve_anon(AnonId used) { next_anon_ = std::max(next_anon_, used.id + 1); }

void KnowledgeBase::note_constants(const AttrSet& s) {
    for (const auto& [a, v] : s) {
        domain_.insert(Value(a));
        domain_.insert(v);
        if (v.is_anon()) reserve_anon(v.anon());
    }
}

const Statement& KnowledgeBase::add_statement(Statement st) {
    if (!st.subject.is_entity() && !st.subject.is_anon())
        throw KbError("statement subject must be an entity or anonymous constant, got " +
                      std::string(st.subject.is_string() ? "a string" : "a literal"));
    if (st.id.empty()) {
        std::size_t n = statements_.size() + 1;
        do st.id = "s" + std::to_string(n++);
        while (ids_.count(st.id));
    }
    if (ids_.count(st.id)) throw KbError("duplicate statement id '" + st.id + "'");

    // Rank and references are mirrored into the attribute set.
    const EntityId rank_attr = EntityId::pseudo(Pseudo::Rank);
    for (const auto& [a, v] : st.qualifiers)
        if (a == rank_attr && !(v.is_entity() && v.entity() == rank_entity(st.rank)))
            throw KbError("statement '" + st.id + "': @rank qualifier disagrees with rank");
    st.qualifiers.insert(rank_attr, Value(rank_entity(st.rank)));
    for (const auto& r : st.references) st.qualifiers.insert(EntityId::pseudo(Pseudo::Reference), Value(r));

    auto idx = static_cast<std::uint32_t>(statements_.size());
    ids_.emplace(st.id, idx);
    by_property_[st.property].push_back(idx);
    by_subject_[{st.property, st.subject}].push_back(idx);
    by_value_[{st.property, st.value}].push_back(idx);

    domain_.insert(st.subject);
    domain_.insert(Value(st.property));
    domain_.insert(st.value);
    if (st.subject.is_anon()) reserve_anon(st.subject.anon());
    if (st.value.is_anon()) reserve_anon(st.value.anon());
    note_constants(st.qualifiers);

    statements_.push_back(std::move(st));
    return statements_.back();
}

bool KnowledgeBase::add_no_value(NoValueFact fact) {
    fact.qualifiers.insert(EntityId::pseudo(Pseudo::Rank), Value(rank_entity(fact.rank)));
    if (!no_value_seen_.insert(fact).second) return false;
    domain_.insert(Value(fact.property));
    domain_.insert(fact.subject);
    note_constants(fact.qualifiers);
    no_value_.push_back(std::move(fact));
    return true;
}

void KnowledgeBase::add_commons_namespace(std::string page, std::string ns) {
    domain_.insert(Value::string(page));
    domain_.insert(Value::string(ns));
    commons_[std::move(page)] = std::move(ns);
}

const Statement* KnowledgeBase::find(std::string_view id) const {
    auto idx = index_of(id);
    return idx ? &statements_[*idx] : nullptr;
}

std::optional<std::size_t> KnowledgeBase::index_of(std::string_view id) const {
    auto it = ids_.find(std::string(id));
    if (it == ids_.end()) return std::nullopt;
    return it->second;
}

std::vector<const Statement*> KnowledgeBase::facts_for(const EntityId& property, bool include_deprecated) const {
    std::vector<const Statement*> out;
    for (auto idx : by_property(property)) {
        const auto& st = statements_[idx];
        if (include_deprecated || st.rank != Rank::Deprecated) out.push_back(&st);
    }
    return out;
}

const KnowledgeBase::Index& KnowledgeBase::by_property(const EntityId& property) const {
    auto it = by_property_.find(property);
    return it == by_property_.end() ? kEmpty : it->second;
}

const KnowledgeBase::Index& KnowledgeBase::by_subject(const EntityId& property, const Value& subject) const {
    auto it = by_subject_.find({property, subject});
    return it == by_subject_.end() ? kEmpty : it->second;
}

const KnowledgeBase::Index& KnowledgeBase::by_value(const EntityId& property, const Value& value) const {
    auto it = by_value_.find({property, value});
    return it == by_value_.end() ? kEmpty : it->second;
}

std::vector<EntityId> KnowledgeBase::properties() const {
    std::vector<EntityId> out;
    out.reserve(by_property_.size());
    for (const auto& [p, idx] : by_property_) out.push_back(p);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace marshal
