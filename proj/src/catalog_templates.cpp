// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include "marshal/catalog.hpp"

namespace marshal {

// Positive formulations, one formula per block. Template-level headers are
// read from the first block of each template.
std::string_view builtin_catalog_text() {
    return R"CATALOG(
# --- existing property constraints ------------------------------------------

template: commons_link
name: Commons link constraint
type: Q21510852
scope: property
required: P2307
subject: ?s
label: page exists
`property_constraint`(?p, `Commons_link_constraint`)@?CQ & ?p(?s, ?o)
  -> exists ?n . Commons_namespace(?o, ?n)
---
template: commons_link
label: namespace
`property_constraint`(?p, `Commons_link_constraint`)@?CQ & (`namespace` : ?n) in ?CQ & ?p(?s, ?o)
  -> Commons_namespace(?o, ?n)
---
template: allowed_entity_types
name: allowed entity types constraint
type: Q52004125
scope: property
required: P2305
subject: ?s
`property_constraint`(?p, `allowed_entity_types_constraint`)@?CQ & ?p(?s, ?o)
  -> exists ?t . ((`item_of_property_constraint` : ?t) in ?CQ & `instance_of`(?s, ?t))
---
template: allowed_qualifiers
name: allowed qualifiers constraint
type: Q21510851
scope: property
optional: P2306
subject: ?s
`property_constraint`(?p, `allowed_qualifiers_constraint`)@?CQ & ?p(?s, ?o)@?SQ & (?q : ?v) in ?SQ
  -> (`property` : ?q) in ?CQ
---
template: allowed_units
name: allowed units constraint
type: Q21514353
scope: property
required: P2305
subject: ?s
`property_constraint`(?p, `allowed_units_constraint`)@?CQ & ?p(?s, ?o)
  -> exists ?u . ((`item_of_property_constraint` : ?u) in ?CQ & unit_holds(?u, ?o))
---
template: citation_needed
name: citation needed constraint
type: Q54554025
scope: property
subject: ?s
`property_constraint`(?p, `citation_needed_constraint`)@?CQ & ?p(?s, ?o)@?SQ
  -> exists ?r . (@reference : ?r) in ?SQ
---
template: conflicts_with
name: conflicts-with constraint
type: Q21502838
scope: property
required: P2306
optional: P2305
subject: ?s
label: any value
`property_constraint`(?p, `conflicts_with_constraint`)@?CQ & (`property` : ?p2) in ?CQ
  & !(exists ?cv . (`item_of_property_constraint` : ?cv) in ?CQ) & ?p(?s, ?o1)
  -> !(exists ?o2 . ?p2(?s, ?o2))
---
template: conflicts_with
label: listed value
`property_constraint`(?p, `conflicts_with_constraint`)@?CQ & (`property` : ?p2) in ?CQ
  & (`item_of_property_constraint` : ?cv) in ?CQ & ?p(?s, ?o1)
  -> !?p2(?s, ?cv)
---
template: contemporary
name: contemporary constraint
type: Q25796498
scope: property
subject: ?s
`property_constraint`(?p, `contemporary_constraint`)@?CQ & ?p(?s, ?o)
  -> ((forall ?st1 . !(`date_of_birth`(?s, ?st1) | `inception`(?s, ?st1) | `start_time`(?s, ?st1)
                       | `point_in_time`(?s, ?st1)))
      | (forall ?et2 . !(`date_of_death`(?o, ?et2) | `dissolved,_abolished_or_demolished_date`(?o, ?et2)
                         | `end_time`(?o, ?et2) | `point_in_time`(?o, ?et2)))
      | (exists ?st1, ?et2 . (less_than(?st1, ?et2) | overlaps(?st1, ?et2))
          & (`date_of_birth`(?s, ?st1) | `inception`(?s, ?st1) | `start_time`(?s, ?st1) | `point_in_time`(?s, ?st1))
          & (`date_of_death`(?o, ?et2) | `dissolved,_abolished_or_demolished_date`(?o, ?et2)
             | `end_time`(?o, ?et2) | `point_in_time`(?o, ?et2))))
   & ((forall ?st2 . !(`date_of_birth`(?o, ?st2) | `inception`(?o, ?st2) | `start_time`(?o, ?st2)
                       | `point_in_time`(?o, ?st2)))
      | (forall ?et1 . !(`date_of_death`(?s, ?et1) | `dissolved,_abolished_or_demolished_date`(?s, ?et1)
                         | `end_time`(?s, ?et1) | `point_in_time`(?s, ?et1)))
      | (exists ?st2, ?et1 . (less_than(?st2, ?et1) | overlaps(?st2, ?et1))
          & (`date_of_birth`(?o, ?st2) | `inception`(?o, ?st2) | `start_time`(?o, ?st2) | `point_in_time`(?o, ?st2))
          & (`date_of_death`(?s, ?et1) | `dissolved,_abolished_or_demolished_date`(?s, ?et1)
             | `end_time`(?s, ?et1) | `point_in_time`(?s, ?et1))))
---
template: difference_within_range
name: difference within range constraint
type: Q21510854
scope: property
required: P2306
optional: P2313 P2312
subject: ?s
label: minimum
`property_constraint`(?p, `difference_within_range_constraint`)@?CQ & (`property` : ?p2) in ?CQ
  & (`minimum_value` : ?min) in ?CQ & ?p(?s, ?o1) & ?p2(?s, ?o2)
  -> geq(difference(?o1, ?o2), ?min)
---
template: difference_within_range
label: maximum
`property_constraint`(?p, `difference_within_range_constraint`)@?CQ & (`property` : ?p2) in ?CQ
  & (`maximum_value` : ?max) in ?CQ & ?p(?s, ?o1) & ?p2(?s, ?o2)
  -> leq(difference(?o1, ?o2), ?max)
---
template: distinct_values
name: distinct values constraint
type: Q21502410
scope: property
subject: ?s1 ?s2
unordered: ?s1 ?o1 | ?s2 ?o2
`property_constraint`(?p, `distinct_values_constraint`) & ?p(?s1, ?o1) & ?p(?s2, ?o2) & ?s1 != ?s2
  -> ?o1 != ?o2
---
template: format
name: format constraint
type: Q21502404
scope: property
required: P1793
subject: ?s
`property_constraint`(?p, `format_constraint`)@?CQ & (`format_as_a_regular_expression` : ?regex) in ?CQ
  & ?p(?s, ?o)
  -> matches_regex(?o, ?regex)
---
template: integer
name: integer constraint
type: Q52848401
scope: property
subject: ?s
`property_constraint`(?p, `integer_constraint`) & ?p(?s, ?o) -> integer(?o)
---
template: inverse
name: inverse constraint
type: Q21510855
scope: property
required: P2306
subject: ?s
`property_constraint`(?p, `inverse_constraint`)@?CQ & (`property` : ?p2) in ?CQ & ?p(?s, ?o)
  -> ?p2(?o, ?s)
---
template: item_requires_statement
name: item requires statement constraint
type: Q21503247
scope: property
required: P2306
optional: P2305
subject: ?s
`property_constraint`(?p, `item_requires_statement_constraint`)@?CQ & (`property` : ?p2) in ?CQ & ?p(?s, ?o)
  -> (exists ?val . ((`item_of_property_constraint` : ?val) in ?CQ & ?p2(?s, ?val)))
     | (!(exists ?v . (`item_of_property_constraint` : ?v) in ?CQ) & (exists ?val . ?p2(?s, ?val)))
---
template: mandatory_qualifier
name: mandatory qualifier constraint
type: Q21510856
scope: property
required: P2306
subject: ?s
`property_constraint`(?p, `mandatory_qualifier_constraint`)@?CQ & (`property` : ?q) in ?CQ & ?p(?s, ?o)@?SQ
  -> exists ?v . (?q : ?v) in ?SQ
---
template: multi_value
name: multi-value constraint
type: Q21510857
scope: property
optional: @minimum_count
subject: ?s
label: plain
`property_constraint`(?p, `multi_value_constraint`) & ?p(?s, ?o1)
  -> exists ?o2 . (?p(?s, ?o2) & ?o1 != ?o2)
---
template: multi_value
label: minimum count
`property_constraint`(?p, `multi_value_constraint`)@?CQ & (@minimum_count : ?min) in ?CQ & ?p(?s, ?o1)
  -> exists[?min] ?o2 . ?p(?s, ?o2)
---
template: no_bounds
name: no bounds constraint
type: Q51723761
scope: property
subject: ?s
`property_constraint`(?p, `no_bounds_constraint`)@?CQ & ?p(?s, ?o) -> precise(?o)
---
template: none_of
name: none of constraint
type: Q52558054
scope: property
required: P2305
subject: ?s
`property_constraint`(?p, `none_of_constraint`)@?CQ & (`item_of_property_constraint` : ?v) in ?CQ
  -> !(exists ?s . ?p(?s, ?v))
---
template: one_of
name: one-of constraint
type: Q21510859
scope: property
required: P2305
subject: ?s
`property_constraint`(?p, `one_of_constraint`)@?CQ & ?p(?s, ?v) -> (`item_of_property_constraint` : ?v) in ?CQ
---
template: property_scope
name: property scope constraint
type: Q53869507
scope: property
required: P5314
subject: ?s
label: as main value
`property_constraint`(?p, `property_scope_constraint`)@?CQ & ?p(?s, ?o) & !`instance_of`(?s, @wikidata_reference)
  -> (`property_scope` : `as_main_value`) in ?CQ
---
template: property_scope
label: as qualifiers
property_var: ?q
`property_constraint`(?q, `property_scope_constraint`)@?CQ & ?p(?s, ?o)@?SQ & (?q : ?v) in ?SQ
  -> (`property_scope` : `as_qualifiers`) in ?CQ
---
template: property_scope
label: as references
`property_constraint`(?p, `property_scope_constraint`)@?CQ & ?p(?s, ?o) & `instance_of`(?s, @wikidata_reference)
  -> (`property_scope` : `as_references`) in ?CQ
---
template: range
name: range constraint
type: Q21510860
scope: property
optional: P2313 P2312 P2310 P2311
subject: ?s
label: minimum value
`property_constraint`(?p, `range_constraint`)@?CQ & (`minimum_value` : ?min) in ?CQ & ?p(?s, ?o) -> geq(?o, ?min)
---
template: range
label: maximum value
`property_constraint`(?p, `range_constraint`)@?CQ & (`maximum_value` : ?max) in ?CQ & ?p(?s, ?o) -> leq(?o, ?max)
---
template: range
label: minimum date
`property_constraint`(?p, `range_constraint`)@?CQ & (`minimum_date` : ?min) in ?CQ & ?p(?s, ?o) -> geq(?o, ?min)
---
template: range
label: maximum date
`property_constraint`(?p, `range_constraint`)@?CQ & (`maximum_date` : ?max) in ?CQ & ?p(?s, ?o) -> leq(?o, ?max)
---
template: single_best_value
name: single best value constraint
type: Q52060874
scope: property
optional: P4155
label: some preferred
`property_constraint`(?p, `single_best_value_constraint`)@?CQ
  -> exists ?s, ?o, ?SQ . (?p(?s, ?o)@?SQ & (@rank : @preferred) in ?SQ)
---
template: single_best_value
label: separated
subject: ?s
unordered: ?o1 ?SQ1 | ?o2 ?SQ2
`property_constraint`(?p, `single_best_value_constraint`)@?CQ & ?p(?s, ?o1)@?SQ1 & ?p(?s, ?o2)@?SQ2 & ?o1 != ?o2
  & (@rank : @preferred) in ?SQ1 & (@rank : @preferred) in ?SQ2
  -> exists ?sep, ?sepVal1, ?sepVal2 . ((`separator` : ?sep) in ?CQ & (?sep : ?sepVal1) in ?SQ1
                                        & (?sep : ?sepVal2) in ?SQ2 & ?sepVal1 != ?sepVal2)
---
template: single_value
name: single value constraint
type: Q19474404
scope: property
optional: P4155
subject: ?s
unordered: ?o1 ?SQ1 | ?o2 ?SQ2
`property_constraint`(?p, `single_value_constraint`)@?CQ & ?p(?s, ?o1)@?SQ1 & ?p(?s, ?o2)@?SQ2
  -> (?o1 = ?o2 & ?SQ1 = ?SQ2)
     | (`exception_to_constraint` : ?s) in ?CQ
     | (exists ?sep, ?sepVal1, ?sepVal2 . ((`separator` : ?sep) in ?CQ & (?sep : ?sepVal1) in ?SQ1
                                           & (?sep : ?sepVal2) in ?SQ2 & ?sepVal1 != ?sepVal2))
---
template: symmetric
name: symmetric constraint
type: Q21510862
scope: property
subject: ?x
label: plain
`property_constraint`(?p, `symmetric_constraint`) & ?p(?x, ?y) -> ?p(?y, ?x)
---
template: symmetric
label: same qualifiers
variant: yes
`property_constraint`(?p, `symmetric_constraint`) & ?p(?x, ?y)@?SQ -> ?p(?y, ?x)@?SQ
---
template: type
name: type constraint
type: Q21503250
scope: property
required: P2308 P2309
subject: ?s
label: instance of
`property_constraint`(?p, `type_constraint`)@?CQ & (`relation` : `relation_instance_of`) in ?CQ & ?p(?s, ?o)
  -> exists ?c . ((`class` : ?c) in ?CQ & `instance_of`(?s, ?c))
---
template: type
label: subclass of
`property_constraint`(?p, `type_constraint`)@?CQ & (`relation` : `relation_subclass_of`) in ?CQ & ?p(?s, ?o)
  -> exists ?c . ((`class` : ?c) in ?CQ & `subclass_of`(?s, ?c))
---
template: type
label: instance or subclass of
`property_constraint`(?p, `type_constraint`)@?CQ & (`relation` : `relation_instance_or_subclass_of`) in ?CQ
  & ?p(?s, ?o)
  -> exists ?c . ((`class` : ?c) in ?CQ & (`instance_of`(?s, ?c) | `subclass_of`(?s, ?c)))
---
template: value_requires_statement
name: value requires statement constraint
type: Q21510864
scope: property
required: P2306
optional: P2305
subject: ?s
`property_constraint`(?p, `value_requires_statement_constraint`)@?CQ & (`property` : ?p2) in ?CQ & ?p(?s, ?o)
  -> (exists ?val . ((`item_of_property_constraint` : ?val) in ?CQ & ?p2(?o, ?val)))
     | (!(exists ?v . (`item_of_property_constraint` : ?v) in ?CQ) & (exists ?val . ?p2(?o, ?val)))
---
template: value_type
name: value type constraint
type: Q21510865
scope: property
required: P2308 P2309
subject: ?s
label: instance of
`property_constraint`(?p, `value_type_constraint`)@?CQ & (`relation` : `relation_instance_of`) in ?CQ & ?p(?s, ?o)
  -> exists ?c . ((`class` : ?c) in ?CQ & `instance_of`(?o, ?c))
---
template: value_type
label: subclass of
`property_constraint`(?p, `value_type_constraint`)@?CQ & (`relation` : `relation_subclass_of`) in ?CQ & ?p(?s, ?o)
  -> exists ?c . ((`class` : ?c) in ?CQ & `subclass_of`(?o, ?c))
---
template: value_type
label: instance or subclass of
`property_constraint`(?p, `value_type_constraint`)@?CQ & (`relation` : `relation_instance_or_subclass_of`) in ?CQ
  & ?p(?s, ?o)
  -> exists ?c . ((`class` : ?c) in ?CQ & (`instance_of`(?o, ?c) | `subclass_of`(?o, ?c)))
---

# --- proposed property constraints ------------------------------------------

template: asymmetric
name: asymmetric property constraint
type: Q18647519
scope: non-property
subject: ?y
unordered: ?x | ?y
`instance_of`(?p, `asymmetric_property`) & ?p(?y, ?x) -> !?p(?x, ?y)
---
template: local_value_type
name: local value type constraint
type: @local_value_type_constraint
scope: property
required: @local_class P2308 P2309
subject: ?s
label: instance of
`property_constraint`(?p, @local_value_type_constraint)@?CQ & (@local_class : ?lc) in ?CQ
  & (`relation` : `relation_instance_of`) in ?CQ & ?p(?s, ?o) & `instance_of`(?s, ?lc)
  -> exists ?c . ((`class` : ?c) in ?CQ & `instance_of`(?o, ?c))
---
template: local_value_type
label: subclass of
`property_constraint`(?p, @local_value_type_constraint)@?CQ & (@local_class : ?lc) in ?CQ
  & (`relation` : `relation_subclass_of`) in ?CQ & ?p(?s, ?o) & `instance_of`(?s, ?lc)
  -> exists ?c . ((`class` : ?c) in ?CQ & `subclass_of`(?o, ?c))
---
template: local_value_type
label: instance or subclass of
`property_constraint`(?p, @local_value_type_constraint)@?CQ & (@local_class : ?lc) in ?CQ
  & (`relation` : `relation_instance_or_subclass_of`) in ?CQ & ?p(?s, ?o) & `instance_of`(?s, ?lc)
  -> exists ?c . ((`class` : ?c) in ?CQ & (`instance_of`(?o, ?c) | `subclass_of`(?o, ?c)))
---
template: essential_property
name: essential property constraint
type: @essential_property_constraint
scope: property
required: @local_class
subject: ?s
`property_constraint`(?p, @essential_property_constraint)@?CQ & (@local_class : ?lc) in ?CQ
  & `instance_of`(?s, ?lc)
  -> exists ?o . ?p(?s, ?o)
---

# --- non-property constraints -----------------------------------------------

template: union_of
name: union of
type: P2737
scope: non-property
subject: ?i
label: member of a part
`union_of`(?u, `list_values_as_qualifiers`)@?Q & `instance_of`(?i, ?u)
  -> exists ?c . ((`of` : ?c) in ?Q & `instance_of`(?i, ?c))
---
template: union_of
label: part implies union
`union_of`(?u, `list_values_as_qualifiers`)@?Q & (`of` : ?c) in ?Q & `instance_of`(?i, ?c)
  -> `instance_of`(?i, ?u)
---
template: disjoint_union_of
name: disjoint union of
type: P2738
scope: non-property
subject: ?i
label: member of exactly one part
`disjoint_union_of`(?u, `list_values_as_qualifiers`)@?Q & `instance_of`(?i, ?u)
  -> exists ?c1 . ((`of` : ?c1) in ?Q & `instance_of`(?i, ?c1)
                   & forall ?c2 . (((`of` : ?c2) in ?Q & `instance_of`(?i, ?c2)) -> ?c1 = ?c2))
---
template: disjoint_union_of
label: part implies union
`disjoint_union_of`(?u, `list_values_as_qualifiers`)@?Q & (`of` : ?c) in ?Q & `instance_of`(?i, ?c)
  -> `instance_of`(?i, ?u)
---
template: disjoint_with
name: disjoint with
type: @disjoint_with
scope: non-property
subject: ?i
@disjoint_with(?c1, ?c2) -> !(exists ?i . (`instance_of`(?i, ?c1) & `instance_of`(?i, ?c2)))
---
template: no_value
name: no value at all
type: @novalue
scope: non-property
subject: ?s
no_value(?p, ?s) -> !(exists ?o . ?p(?s, ?o))
---
template: no_value_same_qualifiers
name: no value with same qualifiers
type: @novalue
scope: non-property
subject: ?s
no_value(?p, ?s)@?Q -> !(exists ?o . ?p(?s, ?o)@?Q)
---
template: metasubclass_of
name: metasubclass of
type: P2445
scope: non-property
subject: ?c1
`metasubclass_of`(?m1, ?m2) & `instance_of`(?c1, ?m1)
  -> exists ?c2 . (`subclass_of`(?c1, ?c2) & `instance_of`(?c2, ?m2))
---
template: not_instance_and_subclass
name: not both instance and subclass
type: P31
scope: non-property
subject: ?i1
`instance_of`(?i1, ?i2) -> !`subclass_of`(?i1, ?i2)
---
template: no_subclass_loops
name: no subclass loops
type: P279
scope: non-property
subject: ?c1 ?c2
unordered: ?c1 | ?c2
`subclass_of`(?c1, ?c2) & ?c1 != ?c2 -> !`subclass_of`(?c2, ?c1)
)CATALOG";
}

}  // namespace marshal
