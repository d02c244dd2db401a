// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include "doctest.h"

#include "json.hpp"

#include "marshal/ingest.hpp"
#include "marshal/literal.hpp"
#include "support.hpp"

using namespace marshal;
using namespace marshal::testing;

namespace {

const char* const kEntity = R"({"type": "item", "id": "Q42",
  "labels": {"en": {"language": "en", "value": "Douglas Adams"}},
  "claims": {
    "P31": [{"id": "Q42$1", "type": "statement", "rank": "normal",
             "mainsnak": {"snaktype": "value", "property": "P31",
                          "datavalue": {"type": "wikibase-entityid", "value": {"entity-type": "item", "numeric-id": 5, "id": "Q5"}}},
             "references": [{"hash": "h1", "snaks": {"P248": [{"snaktype": "value", "property": "P248",
                 "datavalue": {"type": "wikibase-entityid", "value": {"entity-type": "item", "id": "Q36578"}}}]}}]}],
    "P569": [{"id": "Q42$2", "type": "statement", "rank": "preferred",
              "mainsnak": {"snaktype": "value", "property": "P569",
                           "datavalue": {"type": "time", "value": {"time": "+1952-03-11T00:00:00Z", "precision": 11,
                                         "calendarmodel": "http://www.wikidata.org/entity/Q1985727"}}}}],
    "P2048": [{"id": "Q42$3", "type": "statement", "rank": "normal",
               "mainsnak": {"snaktype": "value", "property": "P2048",
                            "datavalue": {"type": "quantity", "value": {"amount": "+1.96", "unit": "http://www.wikidata.org/entity/Q11573",
                                          "lowerBound": "+1.95", "upperBound": "+1.97"}}},
               "qualifiers": {"P585": [{"snaktype": "value", "property": "P585",
                   "datavalue": {"type": "time", "value": {"time": "+2000-00-00T00:00:00Z", "precision": 9}}}]}}],
    "P1477": [{"id": "Q42$4", "type": "statement", "rank": "normal",
               "mainsnak": {"snaktype": "value", "property": "P1477",
                            "datavalue": {"type": "monolingualtext", "value": {"text": "Douglas Noel Adams", "language": "en"}}}}],
    "P40": [{"id": "Q42$5", "type": "statement", "rank": "normal", "mainsnak": {"snaktype": "novalue", "property": "P40"}}],
    "P3373": [{"id": "Q42$6", "type": "statement", "rank": "deprecated", "mainsnak": {"snaktype": "somevalue", "property": "P3373"}}],
    "P214": [{"id": "Q42$7", "type": "statement", "rank": "normal",
              "mainsnak": {"snaktype": "value", "property": "P214", "datavalue": {"type": "string", "value": "113230702"}},
              "qualifiers": {"P1810": [{"snaktype": "somevalue", "property": "P1810"}],
                             "P580": [{"snaktype": "novalue", "property": "P580"}]}}]
  }})";

}  // namespace

TEST_CASE("Wikibase JSON snaks") {
    IngestStats stats;
    KnowledgeBase kb = load_wikidata_json(kEntity, &stats);
    CHECK(stats.entities == 1);
    CHECK(stats.claims == 5);
    CHECK(stats.no_value == 1);
    CHECK(stats.some_value == 2);  // main snak and qualifier
    CHECK(stats.references == 1);
    CHECK(stats.reference_statements == 2);
    CHECK(stats.statements == stats.claims + stats.reference_statements);
    CHECK(stats.statements == kb.size());
    auto skips = stats.skip_counts();
    CHECK(skips["unsupported_datatype"] == 1);
    CHECK(skips["novalue_qualifier"] == 1);
    CHECK(kb.labels().at(Q(42)) == "Douglas Adams");

    const Statement* p31 = kb.find("Q42$1");
    REQUIRE(p31 != nullptr);
    CHECK(p31->value == Value(Q(5)));
    REQUIRE(p31->references.size() == 1);
    Value ref(p31->references[0]);
    CHECK(kb.by_subject(wd::instance_of, ref).size() == 1);

    const Statement* born = kb.find("Q42$2");
    REQUIRE(born != nullptr);
    CHECK(born->rank == Rank::Preferred);
    CHECK(born->value == Value(day(1952, 3, 11)));

    const Statement* height = kb.find("Q42$3");
    REQUIRE(height != nullptr);
    const Quantity& q = height->value.quantity_value();
    CHECK(q.amount == Decimal::parse("1.96"));
    CHECK(q.unit == Q(11573));
    CHECK(q.lower == Decimal::parse("1.95"));
    CHECK(height->qualifiers.contains(P(585), Value(year(2000))));

    const Statement* sibling = kb.find("Q42$6");
    REQUIRE(sibling != nullptr);
    CHECK(sibling->value.is_anon());
    CHECK(sibling->rank == Rank::Deprecated);

    REQUIRE(kb.no_value_facts().size() == 1);
    CHECK(kb.no_value_facts()[0].property == P(40));

    const Statement* viaf = kb.find("Q42$7");
    REQUIRE(viaf != nullptr);
    CHECK(viaf->qualifiers.values_of(P(1810)).front().is_anon());
    CHECK_FALSE(viaf->qualifiers.has_attr(P(580)));
}

TEST_CASE("reference synthesis can be turned off") {
    JsonOptions opts;
    opts.synthesize_references = false;
    IngestStats stats;
    KnowledgeBase kb = load_wikidata_json(kEntity, &stats, opts);
    CHECK(stats.reference_statements == 0);
    CHECK(kb.size() == stats.claims);
    CHECK(kb.find("Q42$1")->references.size() == 1);
}

TEST_CASE("dump-shaped streams") {
    std::string dump = std::string("[\n") + R"({"type": "item", "id": "Q1", "claims": {}},)" + "\n" +
                       R"({"type": "item", "id": "Q2", "claims": {"P31": [{"mainsnak": )" +
                       R"({"snaktype": "value", "property": "P31", "datavalue": {"type": "wikibase-entityid", "value": {"id": "Q5"}}}}]}},)" +
                       "\n" + R"({"type": "item", "id": "Q3", "claims": )" + "\n" + "]\n";
    IngestStats stats;
    KnowledgeBase kb;
    std::istringstream in(dump);
    load_wikidata_json(in, kb, stats);
    CHECK(stats.entities == 2);
    CHECK(kb.size() == 1);
    CHECK(stats.skip_counts()["malformed_document"] == 1);

    std::istringstream corrupt("[\n\x01\x02garbage\n]\n");
    KnowledgeBase kb2;
    IngestStats s2;
    CHECK_THROWS_AS(load_wikidata_json(corrupt, kb2, s2), IngestError);
}

TEST_CASE("native grammar") {
    IngestStats stats;
    KnowledgeBase kb = load_native(R"(
# comment
P1(Q1, Q2)   # trailing comment
P1(Q1, Q2)
P2(_:b1, "x") @ {P3: _:b1} rank=preferred refs=[_:b2]
no_value(P4, Q1) rank=deprecated
commons_ns("a.jpg", "File")
)", &stats);
    CHECK(kb.size() == 2);
    CHECK(stats.duplicates == 1);
    const Statement& st = kb.statements()[1];
    CHECK(st.subject.is_anon());
    CHECK(st.qualifiers.contains(P(3), st.subject));
    CHECK(st.rank == Rank::Preferred);
    CHECK(st.references.size() == 1);
    CHECK(kb.no_value_facts().at(0).rank == Rank::Deprecated);
    CHECK(kb.commons_namespaces().at("a.jpg") == "File");

    try {
        load_native("P1(Q1, Q2)\nP1(Q1 Q2)\n");
        FAIL("expected an error");
    } catch (const IngestError& e) {
        CHECK(std::string(e.what()).find(":2:") != std::string::npos);
    }
    CHECK_THROWS_AS(load_native("P1(Q1, Q2) rank=sideways\n"), IngestError);
    CHECK_THROWS_AS(load_native("frobnicate(Q1)\n"), IngestError);
}

TEST_CASE("only identical lines are duplicates") {
    IngestStats stats;
    KnowledgeBase kb = load_native("P279(Q300, Q301)\nP279(Q301, Q300)\nP1(Q1, \"a#b\")\nP1(Q1, \"a#c\")\n"
                                   "P1(Q1, \"a#b\")  # same again\n",
                                   &stats);
    CHECK(kb.size() == 4);
    CHECK(stats.duplicates == 1);
}

TEST_CASE("export round-trips") {
    KnowledgeBase kb = load_native(read_file(fixture_path("all_value_kinds.kb")));
    std::string text = export_native(kb);
    KnowledgeBase back = load_native(text);
    CHECK(canonical_facts(back) == canonical_facts(kb));
    CHECK(export_native(back) == text);

    KnowledgeBase json = load_wikidata_json(kEntity);
    CHECK(canonical_facts(load_native(export_native(json))) == canonical_facts(json));
}

TEST_CASE("merge keeps anonymous constants apart") {
    KnowledgeBase a = load_native("P1(Q1, _:b1)\n");
    KnowledgeBase b = load_native("P1(Q2, _:b1)\n");
    KnowledgeBase m = merge(a, b);
    REQUIRE(m.size() == 2);
    CHECK(m.statements()[0].value != m.statements()[1].value);
    std::set<std::string> ids;
    for (const auto& st : m.statements()) CHECK(ids.insert(st.id).second);
    auto facts = canonical_facts(m);
    CHECK(facts.size() == 2);
}

TEST_CASE("file formats by extension") {
    IngestStats stats;
    KnowledgeBase kb;
    load_file(fixture_path("wikidata_slice.json"), "", kb, stats);
    CHECK(stats.entities == 100);
    CHECK(stats.statements == kb.size());
    CHECK(stats.statements == stats.claims + stats.reference_statements);
    KnowledgeBase nat;
    IngestStats s2;
    load_file(fixture_path("all_value_kinds.kb"), "", nat, s2);
    CHECK(nat.size() == 9);
    KnowledgeBase missing;
    CHECK_THROWS_AS(load_file("/nonexistent/file.kb", "", missing, s2), IngestError);
}
