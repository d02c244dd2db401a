// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

#include "marshal/value.hpp"

namespace marshal {

/// Alias table between readable labels (`instance_of`) and entity ids.
/// Spaces and underscores are interchangeable in lookups.
class LabelMap {
public:
    /// Wikidata ids for every name used by the shipped catalog and ontology.
    static const LabelMap& builtin();

    /// builtin() extended with the file named by MARSHAL_LABELS, if set.
    static LabelMap from_environment();

    void add(std::string label, EntityId id);
    /// Lines of `label = Q123`; `#` comments. Throws std::runtime_error.
    void load_file(const std::string& path);
    void load_text(std::string_view text);

    std::optional<EntityId> lookup(std::string_view label) const;
    std::optional<std::string> label_of(const EntityId& id) const;

    std::size_t size() const { return by_label_.size(); }
    const std::map<std::string, EntityId>& entries() const { return by_label_; }

private:
    std::map<std::string, EntityId> by_label_;
    std::map<EntityId, std::string> by_id_;
};

namespace wd {

// Properties.
inline const EntityId instance_of = P(31);
inline const EntityId subclass_of = P(279);
inline const EntityId subproperty_of = P(1647);
inline const EntityId of = P(642);
inline const EntityId union_of = P(2737);
inline const EntityId disjoint_union_of = P(2738);
inline const EntityId metasubclass_of = P(2445);
inline const EntityId property_constraint = P(2302);
inline const EntityId exception_to_constraint = P(2303);
inline const EntityId item_of_property_constraint = P(2305);
inline const EntityId property = P(2306);
inline const EntityId namespace_ = P(2307);
inline const EntityId class_ = P(2308);
inline const EntityId relation = P(2309);
inline const EntityId minimum_date = P(2310);
inline const EntityId maximum_date = P(2311);
inline const EntityId maximum_value = P(2312);
inline const EntityId minimum_value = P(2313);
inline const EntityId constraint_status = P(2316);
inline const EntityId format_as_regex = P(1793);
inline const EntityId separator = P(4155);
inline const EntityId property_scope = P(5314);

// Items.
inline const EntityId mandatory_constraint = Q(21502408);
inline const EntityId suggestion_constraint = Q(62026391);
inline const EntityId symmetric_property = Q(18647518);
inline const EntityId asymmetric_property = Q(18647519);
inline const EntityId transitive_property = Q(18647515);
inline const EntityId reflexive_property = Q(18647521);
inline const EntityId list_values_as_qualifiers = Q(23766486);

}  // namespace wd

}  // namespace marshal
