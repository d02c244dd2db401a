// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include "marshal/labels.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace marshal {

namespace {

std::string normalize(std::string_view label) {
    std::string out;
    out.reserve(label.size());
    for (char c : label) out.push_back(c == ' ' ? '_' : c);
    return out;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

constexpr const char* kBuiltinLabels = R"(
# properties
instance_of = P31
subclass_of = P279
subproperty_of = P1647
spouse = P26
child = P40
population = P1082
point_in_time = P585
start_time = P580
end_time = P582
date_of_birth = P569
date_of_death = P570
inception = P571
dissolved,_abolished_or_demolished_date = P576
ISBN-13 = P212
image = P18
of = P642
union_of = P2737
disjoint_union_of = P2738
metasubclass_of = P2445
property_constraint = P2302
exception_to_constraint = P2303
item_of_property_constraint = P2305
property = P2306
namespace = P2307
class = P2308
relation = P2309
minimum_date = P2310
maximum_date = P2311
maximum_value = P2312
minimum_value = P2313
constraint_status = P2316
format_as_a_regular_expression = P1793
separator = P4155
property_scope = P5314
# constraint types
Commons_link_constraint = Q21510852
allowed_entity_types_constraint = Q52004125
allowed_qualifiers_constraint = Q21510851
allowed_units_constraint = Q21514353
citation_needed_constraint = Q54554025
conflicts_with_constraint = Q21502838
contemporary_constraint = Q25796498
difference_within_range_constraint = Q21510854
distinct_values_constraint = Q21502410
format_constraint = Q21502404
integer_constraint = Q52848401
inverse_constraint = Q21510855
item_requires_statement_constraint = Q21503247
mandatory_qualifier_constraint = Q21510856
multi_value_constraint = Q21510857
no_bounds_constraint = Q51723761
none_of_constraint = Q52558054
one_of_constraint = Q21510859
property_scope_constraint = Q53869507
range_constraint = Q21510860
single_best_value_constraint = Q52060874
single_value_constraint = Q19474404
symmetric_constraint = Q21510862
type_constraint = Q21503250
value_requires_statement_constraint = Q21510864
value_type_constraint = Q21510865
# parameter values
mandatory_constraint = Q21502408
suggestion_constraint = Q62026391
relation_instance_of = Q21503252
relation_subclass_of = Q21514624
relation_instance_or_subclass_of = Q30208840
as_main_value = Q54828448
as_qualifiers = Q54828449
as_references = Q54828450
list_values_as_qualifiers = Q23766486
# ontology classes
symmetric_property = Q18647518
asymmetric_property = Q18647519
transitive_property = Q18647515
reflexive_property = Q18647521
human = Q5
)";

}  // namespace

const LabelMap& LabelMap::builtin() {
    static const LabelMap map = [] {
        LabelMap m;
        m.load_text(kBuiltinLabels);
        return m;
    }();
    return map;
}

LabelMap LabelMap::from_environment() {
    LabelMap m = builtin();
    if (const char* path = std::getenv("MARSHAL_LABELS"); path && *path) m.load_file(path);
    return m;
}

void LabelMap::add(std::string label, EntityId id) {
    auto key = normalize(label);
    by_label_[key] = id;
    by_id_.try_emplace(id, key);
}

void LabelMap::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open label file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    load_text(buf.str());
}

void LabelMap::load_text(std::string_view text) {
    int line_no = 0;
    while (!text.empty()) {
        auto nl = text.find('\n');
        auto line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.rfind('=');
        if (eq == std::string_view::npos)
            throw std::runtime_error("label table line " + std::to_string(line_no) + ": expected 'label = id'");
        auto id = EntityId::try_parse(trim(line.substr(eq + 1)));
        if (!id) throw std::runtime_error("label table line " + std::to_string(line_no) + ": bad entity id");
        add(std::string(trim(line.substr(0, eq))), *id);
    }
}

std::optional<EntityId> LabelMap::lookup(std::string_view label) const {
    auto it = by_label_.find(normalize(label));
    if (it == by_label_.end()) return std::nullopt;
    return it->second;
}

std::optional<std::string> LabelMap::label_of(const EntityId& id) const {
    auto it = by_id_.find(id);
    if (it == by_id_.end()) return std::nullopt;
    return it->second;
}

}  // namespace marshal
