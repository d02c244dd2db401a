// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#include "marshal/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "json.hpp"

#include "marshal/lexer.hpp"
#include "marshal/literal.hpp"

namespace marshal {

using nlohmann::json;

std::map<std::string, std::size_t> IngestStats::skip_counts() const {
    std::map<std::string, std::size_t> out;
    for (const auto& s : skipped) ++out[s.reason];
    return out;
}

IngestStats& IngestStats::operator+=(const IngestStats& o) {
    entities += o.entities;
    statements += o.statements;
    claims += o.claims;
    reference_statements += o.reference_statements;
    qualifiers += o.qualifiers;
    references += o.references;
    no_value += o.no_value;
    some_value += o.some_value;
    commons += o.commons;
    duplicates += o.duplicates;
    skipped.insert(skipped.end(), o.skipped.begin(), o.skipped.end());
    return *this;
}

// --- Wikibase JSON ------------------------------------------------------------

namespace {

struct Skip {
    std::string reason;
    std::string detail;
};

const json* member(const json& j, const char* key) {
    if (!j.is_object()) return nullptr;
    auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
}

std::string string_member(const json& j, const char* key) {
    const json* m = member(j, key);
    return m && m->is_string() ? m->get<std::string>() : std::string();
}

std::optional<EntityId> entity_from_uri(const std::string& uri) {
    auto slash = uri.rfind('/');
    return EntityId::try_parse(slash == std::string::npos ? uri : uri.substr(slash + 1));
}

Decimal parse_amount(std::string s) {
    if (!s.empty() && s[0] == '+') s.erase(0, 1);
    return Decimal::parse(s);
}

struct SnakResult {
    enum Kind { Val, NoValue, SomeValue, Skipped } kind = Skipped;
    EntityId property;
    Value value;
    Skip skip;
};

class JsonLoader {
public:
    JsonLoader(KnowledgeBase& kb, IngestStats& stats, const JsonOptions& opts) : kb_(kb), stats_(stats), opts_(opts) {}

    void document(const json& doc, const std::string& where) {
        if (!doc.is_object()) {
            stats_.skipped.push_back({"malformed_document", where, "not a JSON object"});
            return;
        }
        std::string id = string_member(doc, "id");
        auto subject = EntityId::try_parse(id);
        if (!subject || subject->kind == EntityKind::Pseudo) {
            stats_.skipped.push_back({"unsupported_entity_type", where, id.empty() ? "missing id" : id});
            return;
        }
        ++stats_.entities;
        if (opts_.labels)
            if (const json* labels = member(doc, "labels"))
                if (const json* en = member(*labels, "en")) {
                    std::string v = string_member(*en, "value");
                    if (!v.empty()) kb_.set_label(*subject, v);
                }
        const json* claims = member(doc, "claims");
        if (!claims) claims = member(doc, "statements");
        if (!claims || !claims->is_object()) return;
        for (const auto& [pid, list] : claims->items()) {
            if (!list.is_array()) {
                stats_.skipped.push_back({"malformed_claim", id + "/" + pid, "claim list is not an array"});
                continue;
            }
            for (const auto& claim : list) this->claim(*subject, pid, claim);
        }
    }

private:
    SnakResult snak(const json& s) {
        SnakResult r;
        auto prop = EntityId::try_parse(string_member(s, "property"));
        if (!prop || !prop->is_property()) {
            r.skip = {"malformed_snak", "missing property"};
            return r;
        }
        r.property = *prop;
        std::string type = string_member(s, "snaktype");
        if (type == "novalue") {
            r.kind = SnakResult::NoValue;
            return r;
        }
        if (type == "somevalue") {
            r.kind = SnakResult::SomeValue;
            r.value = kb_.fresh_anon();
            return r;
        }
        const json* dv = member(s, "datavalue");
        if (type != "value" || !dv) {
            r.skip = {"malformed_snak", "snaktype '" + type + "'"};
            return r;
        }
        std::string vtype = string_member(*dv, "type");
        const json* v = member(*dv, "value");
        if (!v) {
            r.skip = {"malformed_snak", "datavalue without value"};
            return r;
        }
        try {
            if (vtype == "wikibase-entityid") {
                std::string eid = string_member(*v, "id");
                if (eid.empty()) {
                    std::string et = string_member(*v, "entity-type");
                    const json* num = member(*v, "numeric-id");
                    if (num && num->is_number_integer())
                        eid = (et == "property" ? "P" : et == "item" ? "Q" : "?") + std::to_string(num->get<long long>());
                }
                auto e = EntityId::try_parse(eid);
                if (!e || e->kind == EntityKind::Pseudo) {
                    r.skip = {"unsupported_datatype", "entity value '" + eid + "'"};
                    return r;
                }
                r.value = *e;
            } else if (vtype == "string") {
                if (!v->is_string()) throw std::invalid_argument("string value is not a string");
                r.value = Value::string(v->get<std::string>());
            } else if (vtype == "quantity") {
                Quantity q;
                q.amount = parse_amount(string_member(*v, "amount"));
                std::string unit = string_member(*v, "unit");
                if (!unit.empty() && unit != "1") {
                    q.unit = entity_from_uri(unit);
                    if (!q.unit) throw std::invalid_argument("unit '" + unit + "'");
                }
                if (const json* lo = member(*v, "lowerBound"); lo && lo->is_string()) q.lower = parse_amount(*lo);
                if (const json* hi = member(*v, "upperBound"); hi && hi->is_string()) q.upper = parse_amount(*hi);
                r.value = q;
            } else if (vtype == "time") {
                const json* prec = member(*v, "precision");
                int p = prec && prec->is_number_integer() ? prec->get<int>() : 11;
                r.value = parse_time_literal(string_member(*v, "time") + "/" + std::to_string(p));
            } else {
                r.skip = {"unsupported_datatype", vtype.empty() ? "missing datavalue type" : vtype};
                return r;
            }
        } catch (const std::exception& e) {
            r.skip = {"malformed_value", e.what()};
            return r;
        }
        r.kind = SnakResult::Val;
        return r;
    }

    void claim(const EntityId& subject, const std::string& pid, const json& c) {
        const std::string where = subject.str() + "/" + pid;
        const json* main = member(c, "mainsnak");
        if (!main) {
            stats_.skipped.push_back({"malformed_claim", where, "missing mainsnak"});
            return;
        }
        SnakResult m = snak(*main);
        if (m.kind == SnakResult::Skipped) {
            stats_.skipped.push_back({m.skip.reason, where, m.skip.detail});
            return;
        }
        Rank rank = Rank::Normal;
        if (std::string rn = string_member(c, "rank"); !rn.empty()) {
            auto r = rank_from_name(rn);
            if (!r) {
                stats_.skipped.push_back({"malformed_claim", where, "rank '" + rn + "'"});
                return;
            }
            rank = *r;
        }
        AttrSet quals;
        std::size_t nquals = 0;
        if (const json* qs = member(c, "qualifiers"); qs && qs->is_object()) {
            for (const auto& [qpid, snaks] : qs->items()) {
                if (!snaks.is_array()) continue;
                for (const auto& s : snaks) {
                    SnakResult q = snak(s);
                    if (q.kind == SnakResult::Val || q.kind == SnakResult::SomeValue) {
                        if (q.kind == SnakResult::SomeValue) ++stats_.some_value;
                        if (quals.insert(q.property, q.value)) ++nquals;
                    } else if (q.kind == SnakResult::NoValue) {
                        stats_.skipped.push_back({"novalue_qualifier", where + "/" + qpid, ""});
                    } else {
                        stats_.skipped.push_back({q.skip.reason, where + "/" + qpid, q.skip.detail});
                    }
                }
            }
        }
        if (m.kind == SnakResult::NoValue) {
            if (kb_.add_no_value({m.property, Value(subject), quals, rank})) ++stats_.no_value;
            stats_.qualifiers += nquals;
            return;
        }
        if (m.kind == SnakResult::SomeValue) ++stats_.some_value;

        std::vector<AnonId> refs;
        std::vector<Statement> ref_statements;
        if (const json* rs = member(c, "references"); rs && rs->is_array()) {
            for (const auto& ref : *rs) {
                AnonId token = kb_.fresh_anon();
                refs.push_back(token);
                ++stats_.references;
                if (!opts_.synthesize_references) continue;
                ref_statements.push_back(make_statement(Value(token), wd::instance_of,
                                                        Value(EntityId::pseudo(Pseudo::WikidataReference))));
                const json* snaks = member(ref, "snaks");
                if (!snaks || !snaks->is_object()) continue;
                for (const auto& [rpid, list] : snaks->items()) {
                    if (!list.is_array()) continue;
                    for (const auto& s : list) {
                        SnakResult r = snak(s);
                        if (r.kind == SnakResult::Val || r.kind == SnakResult::SomeValue)
                            ref_statements.push_back(make_statement(Value(token), r.property, r.value));
                        else if (r.kind == SnakResult::Skipped)
                            stats_.skipped.push_back({r.skip.reason, where + "/ref/" + rpid, r.skip.detail});
                    }
                }
            }
        }
        Statement st = make_statement(Value(subject), m.property, m.value, quals, rank, refs);
        std::string cid = string_member(c, "id");
        if (!cid.empty() && !kb_.find(cid)) st.id = cid;
        try {
            kb_.add_statement(std::move(st));
        } catch (const KbError& e) {
            stats_.skipped.push_back({"malformed_claim", where, e.what()});
            return;
        }
        ++stats_.claims;
        ++stats_.statements;
        stats_.qualifiers += nquals;
        for (auto& rs : ref_statements) {
            kb_.add_statement(std::move(rs));
            ++stats_.reference_statements;
            ++stats_.statements;
        }
    }

    KnowledgeBase& kb_;
    IngestStats& stats_;
    const JsonOptions& opts_;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r' || s.front() == '\n'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r' || s.back() == '\n'))
        s.remove_suffix(1);
    return s;
}

}  // namespace

void load_wikidata_json(std::istream& in, KnowledgeBase& kb, IngestStats& stats, const JsonOptions& opts) {
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw IngestError("read error");
    JsonLoader loader(kb, stats, opts);

    json whole = json::parse(text, nullptr, false);
    if (!whole.is_discarded()) {
        if (whole.is_array()) {
            for (std::size_t i = 0; i < whole.size(); ++i) loader.document(whole[i], "document " + std::to_string(i + 1));
        } else if (const json* ents = member(whole, "entities"); ents && ents->is_object()) {
            for (const auto& [k, doc] : ents->items()) loader.document(doc, k);
        } else if (whole.is_object()) {
            loader.document(whole, "document 1");
        } else if (!whole.is_null()) {
            throw IngestError("top-level JSON value is neither an entity nor an array");
        }
        return;
    }
    // One document per line, as in the dump files.
    std::istringstream lines(text);
    std::string line;
    int n = 0;
    while (std::getline(lines, line)) {
        ++n;
        std::string_view t = trim(line);
        if (t.empty() || t == "[" || t == "]") continue;
        if (t.back() == ',') t.remove_suffix(1);
        if (t.front() != '{')
            throw IngestError("line " + std::to_string(n) + ": expected an entity document, stream is corrupt");
        json doc = json::parse(t, nullptr, false);
        if (doc.is_discarded()) {
            stats.skipped.push_back({"malformed_document", "line " + std::to_string(n), "invalid JSON"});
            continue;
        }
        loader.document(doc, "line " + std::to_string(n));
    }
}

KnowledgeBase load_wikidata_json(std::string_view text, IngestStats* stats, const JsonOptions& opts) {
    KnowledgeBase kb;
    IngestStats local;
    std::istringstream in{std::string(text)};
    load_wikidata_json(in, kb, stats ? *stats : local, opts);
    return kb;
}

// --- native format ------------------------------------------------------------

namespace {

AttrSet parse_attr_block(TokenCursor& cur, const LabelMap& labels, const AnonResolver& anon) {
    AttrSet out;
    cur.expect(Tok::LBrace);
    if (cur.accept(Tok::RBrace)) return out;
    do {
        Token a = cur.next();
        if (a.kind != Tok::Entity && a.kind != Tok::Label) cur.fail("expected attribute", {"entity", "label"});
        EntityId attr = resolve_entity(a, labels);
        cur.expect(Tok::Colon);
        out.insert(attr, parse_value(cur, labels, anon));
    } while (cur.accept(Tok::Comma));
    cur.expect(Tok::RBrace);
    return out;
}

/// `rank=<r>` and `refs=<n>|[...]` in any order.
void parse_trailer(TokenCursor& cur, Rank& rank, std::vector<AnonId>& refs, KnowledgeBase& kb,
                   const AnonResolver& anon, bool allow_refs) {
    while (cur.at(Tok::Ident)) {
        if (cur.at_ident("rank")) {
            cur.next();
            cur.expect(Tok::Eq);
            Token r = cur.expect(Tok::Ident);
            auto rk = rank_from_name(r.text);
            if (!rk) cur.fail("unknown rank '" + r.text + "'", {"preferred", "normal", "deprecated"});
            rank = *rk;
        } else if (allow_refs && cur.at_ident("refs")) {
            cur.next();
            cur.expect(Tok::Eq);
            if (cur.accept(Tok::LBracket)) {
                if (!cur.accept(Tok::RBracket)) {
                    do refs.push_back(anon(cur.expect(Tok::Anon).text));
                    while (cur.accept(Tok::Comma));
                    cur.expect(Tok::RBracket);
                }
            } else {
                Token n = cur.expect(Tok::Number);
                long k = std::stol(n.text);
                if (k < 0) cur.fail("negative reference count");
                for (long i = 0; i < k; ++i) refs.push_back(kb.fresh_anon());
            }
        } else {
            cur.fail("unexpected '" + cur.peek().text + "'", {"rank=", "refs="});
        }
    }
}

std::string string_arg(TokenCursor& cur) { return cur.expect(Tok::String).text; }

}  // namespace

void load_native(std::istream& in, KnowledgeBase& kb, IngestStats& stats, const LabelMap& labels,
                 const std::string& source_name) {
    std::unordered_map<std::string, AnonId> anons;
    AnonResolver anon = [&](const std::string& name) {
        auto it = anons.find(name);
        if (it != anons.end()) return it->second;
        AnonId a = kb.fresh_anon();
        anons.emplace(name, a);
        return a;
    };
    std::set<std::string> seen;
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ++n;
        std::vector<Token> toks;
        try {
            toks = tokenize(line, SourcePos{n, 1});
        } catch (const ParseError& e) {
            throw IngestError(source_name + ":" + std::to_string(e.pos().line) + ":" + std::to_string(e.pos().column) +
                              ": " + e.detail());
        }
        if (toks.size() <= 1) continue;  // blank or comment
        std::string key;
        for (const auto& t : toks) {
            key += std::to_string(static_cast<int>(t.kind));
            key += ':';
            key += t.text;
            key += '\x1f';
        }
        if (!seen.insert(std::move(key)).second) {
            ++stats.duplicates;
            continue;
        }
        TokenCursor cur(std::move(toks));
        try {
            if (cur.at_ident("commons_ns")) {
                cur.next();
                cur.expect(Tok::LParen);
                std::string page = string_arg(cur);
                cur.expect(Tok::Comma);
                std::string ns = string_arg(cur);
                cur.expect(Tok::RParen);
                cur.expect(Tok::End);
                kb.add_commons_namespace(page, ns);
                ++stats.commons;
            } else if (cur.at_ident("no_value")) {
                cur.next();
                cur.expect(Tok::LParen);
                Token p = cur.next();
                if (p.kind != Tok::Entity && p.kind != Tok::Label) cur.fail("expected property", {"entity", "label"});
                NoValueFact f;
                f.property = resolve_entity(p, labels);
                if (!f.property.is_property()) cur.fail("no_value needs a property");
                cur.expect(Tok::Comma);
                f.subject = parse_value(cur, labels, anon);
                cur.expect(Tok::RParen);
                if (cur.accept(Tok::At)) f.qualifiers = parse_attr_block(cur, labels, anon);
                std::vector<AnonId> none;
                parse_trailer(cur, f.rank, none, kb, anon, false);
                cur.expect(Tok::End);
                stats.qualifiers += f.qualifiers.size();
                if (kb.add_no_value(std::move(f))) ++stats.no_value;
            } else {
                Token p = cur.next();
                if (p.kind != Tok::Entity && p.kind != Tok::Label)
                    cur.fail("expected a fact", {"entity", "label", "no_value", "commons_ns"});
                EntityId prop = resolve_entity(p, labels);
                if (!prop.is_property()) cur.fail("predicate " + prop.str() + " is not a property");
                cur.expect(Tok::LParen);
                Value s = parse_value(cur, labels, anon);
                cur.expect(Tok::Comma);
                Value v = parse_value(cur, labels, anon);
                cur.expect(Tok::RParen);
                AttrSet q;
                if (cur.accept(Tok::At)) q = parse_attr_block(cur, labels, anon);
                for (const auto& [a, _] : q)
                    if (is_bookkeeping(a)) cur.fail("write rank and references as rank= and refs=");
                Rank rank = Rank::Normal;
                std::vector<AnonId> refs;
                parse_trailer(cur, rank, refs, kb, anon, true);
                cur.expect(Tok::End);
                stats.qualifiers += q.size();
                stats.references += refs.size();
                try {
                    kb.add_statement(make_statement(std::move(s), prop, std::move(v), std::move(q), rank, refs));
                } catch (const KbError& e) {
                    throw IngestError(source_name + ":" + std::to_string(n) + ": " + e.what());
                }
                ++stats.statements;
                ++stats.claims;
            }
        } catch (const ParseError& e) {
            throw IngestError(source_name + ":" + std::to_string(e.pos().line) + ":" + std::to_string(e.pos().column) +
                              ": " + e.detail());
        } catch (const std::invalid_argument& e) {
            throw IngestError(source_name + ":" + std::to_string(n) + ": " + e.what());
        }
    }
    if (in.bad()) throw IngestError(source_name + ": read error");
}

KnowledgeBase load_native(std::string_view text, IngestStats* stats, const LabelMap& labels) {
    KnowledgeBase kb;
    IngestStats local;
    std::istringstream in{std::string(text)};
    load_native(in, kb, stats ? *stats : local, labels);
    return kb;
}

void load_file(const std::string& path, const std::string& format, KnowledgeBase& kb, IngestStats& stats,
               const LabelMap& labels) {
    std::string fmt = format;
    if (fmt.empty()) {
        auto ends = [&](std::string_view suf) {
            return path.size() >= suf.size() && path.compare(path.size() - suf.size(), suf.size(), suf) == 0;
        };
        fmt = ends(".json") || ends(".jsonl") || ends(".ndjson") ? "json" : "native";
    }
    if (fmt != "json" && fmt != "native") throw IngestError(path + ": unknown format '" + fmt + "'");
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestError(path + ": cannot open");
    if (fmt == "json") {
        try {
            load_wikidata_json(in, kb, stats);
        } catch (const IngestError& e) {
            throw IngestError(path + ": " + e.what());
        }
    } else {
        load_native(in, kb, stats, labels, path);
    }
}

// --- merge, export ------------------------------------------------------------

namespace {

Value remap(const Value& v, const std::function<AnonId(AnonId)>& f) { return v.is_anon() ? Value(f(v.anon())) : v; }

AttrSet remap(const AttrSet& s, const std::function<AnonId(AnonId)>& f) {
    AttrSet out;
    for (const auto& [a, v] : s) out.insert(a, remap(v, f));
    return out;
}

std::string format_refs(const std::vector<AnonId>& refs) {
    std::string out = "[";
    for (std::size_t i = 0; i < refs.size(); ++i) out += (i ? ", " : "") + format_value(Value(refs[i]));
    return out + "]";
}

std::string native_line(const Statement& st) {
    std::string out = st.property.str() + "(" + format_value(st.subject) + ", " + format_value(st.value) + ")";
    AttrSet q = st.qualifiers.qualifiers_only();
    if (!q.empty()) out += " @ " + format_attrset(q);
    if (st.rank != Rank::Normal) out += " rank=" + std::string(rank_name(st.rank));
    if (!st.references.empty()) out += " refs=" + format_refs(st.references);
    return out;
}

std::string native_line(const NoValueFact& f) {
    std::string out = "no_value(" + f.property.str() + ", " + format_value(f.subject) + ")";
    AttrSet q = f.qualifiers.qualifiers_only();
    if (!q.empty()) out += " @ " + format_attrset(q);
    if (f.rank != Rank::Normal) out += " rank=" + std::string(rank_name(f.rank));
    return out;
}

std::string quote(const std::string& s) { return format_value(Value::string(s)); }

}  // namespace

KnowledgeBase merge(const KnowledgeBase& a, const KnowledgeBase& b) {
    KnowledgeBase out;
    auto keep = [&](AnonId x) {
        out.reserve_anon(x);
        return x;
    };
    auto copy = [&](const KnowledgeBase& src, const std::function<AnonId(AnonId)>& f, std::size_t offset) {
        for (const auto& st : src.statements()) {
            Statement c = st;
            c.subject = remap(st.subject, f);
            c.value = remap(st.value, f);
            c.qualifiers = remap(st.qualifiers, f);
            for (auto& r : c.references) r = f(r);
            if (c.derivation)
                for (auto& p : c.derivation->premises) p += offset;
            if (out.find(c.id)) c.id.clear();
            out.add_statement(std::move(c));
        }
        for (const auto& nv : src.no_value_facts()) {
            NoValueFact c = nv;
            c.subject = remap(nv.subject, f);
            c.qualifiers = remap(nv.qualifiers, f);
            out.add_no_value(std::move(c));
        }
        for (const auto& [page, ns] : src.commons_namespaces()) out.add_commons_namespace(page, ns);
        for (const auto& [id, label] : src.labels()) out.set_label(id, label);
    };
    copy(a, keep, 0);
    // Reserve every anonymous constant of `a` before relabeling those of `b`.
    for (const auto& v : a.active_domain())
        if (v.is_anon()) out.reserve_anon(v.anon());
    for (const auto& st : a.statements())
        for (const auto& r : st.references) out.reserve_anon(r);
    std::map<AnonId, AnonId> fresh;
    auto relabel = [&](AnonId x) {
        auto it = fresh.find(x);
        if (it != fresh.end()) return it->second;
        AnonId y = out.fresh_anon();
        fresh.emplace(x, y);
        return y;
    };
    copy(b, relabel, a.size());
    return out;
}

void export_native(const KnowledgeBase& kb, std::ostream& out) {
    out << "# marshal native KB: " << kb.size() << " statements, " << kb.no_value_facts().size()
        << " no-value facts, " << kb.commons_namespaces().size() << " Commons pages\n";
    for (const auto& st : kb.statements()) out << native_line(st) << '\n';
    for (const auto& f : kb.no_value_facts()) out << native_line(f) << '\n';
    for (const auto& [page, ns] : kb.commons_namespaces()) out << "commons_ns(" << quote(page) << ", " << quote(ns) << ")\n";
    out.flush();
    if (!out) throw IngestError("write failed");
}

std::string export_native(const KnowledgeBase& kb) {
    std::ostringstream out;
    export_native(kb, out);
    return out.str();
}

std::vector<std::string> canonical_facts(const KnowledgeBase& kb) {
    std::map<AnonId, AnonId> order;
    auto f = [&](AnonId x) {
        auto it = order.find(x);
        if (it != order.end()) return it->second;
        AnonId y{order.size() + 1};
        order.emplace(x, y);
        return y;
    };
    std::vector<std::string> out;
    for (const auto& st : kb.statements()) {
        Statement c = st;
        c.subject = remap(st.subject, f);
        c.value = remap(st.value, f);
        c.qualifiers = remap(st.qualifiers, f);
        for (auto& r : c.references) r = f(r);
        out.push_back(native_line(c));
    }
    for (const auto& nv : kb.no_value_facts()) {
        NoValueFact c = nv;
        c.subject = remap(nv.subject, f);
        c.qualifiers = remap(nv.qualifiers, f);
        out.push_back(native_line(c));
    }
    for (const auto& [page, ns] : kb.commons_namespaces()) out.push_back("commons_ns(" + quote(page) + ", " + quote(ns) + ")");
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace marshal
