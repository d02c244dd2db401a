// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The Marshal Authors

#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "marshal/kb.hpp"
#include "marshal/labels.hpp"

namespace marshal {

/// Unreadable input: stream-level corruption, native syntax errors, I/O.
class IngestError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// One claim, qualifier or document left out of the KB.
struct SkipRecord {
    std::string reason;  // machine-readable code, e.g. `unsupported_datatype`
    std::string where;   // `Q42/P625`, `line 7`
    std::string detail;
};

struct IngestStats {
    std::size_t entities = 0;
    /// Statements added to the KB: accepted claims plus synthesized
    /// reference statements.
    std::size_t statements = 0;
    std::size_t claims = 0;
    std::size_t reference_statements = 0;
    std::size_t qualifiers = 0;
    std::size_t references = 0;
    std::size_t no_value = 0;
    std::size_t some_value = 0;
    std::size_t commons = 0;
    std::size_t duplicates = 0;
    std::vector<SkipRecord> skipped;

    /// Skip counts by reason code.
    std::map<std::string, std::size_t> skip_counts() const;
    IngestStats& operator+=(const IngestStats& other);
};

struct JsonOptions {
    /// Give each reference an anonymous subject typed
    /// `instance_of(r, @wikidata_reference)` carrying its value snaks.
    bool synthesize_references = true;
    /// Record English labels on the KB.
    bool labels = true;
};

/// Wikibase entity JSON: a JSON array, one document per line (dump shape,
/// trailing commas allowed), a single entity, or `{"entities": {...}}`.
/// Malformed documents are skipped with a record; unreadable streams throw.
void load_wikidata_json(std::istream& in, KnowledgeBase& kb, IngestStats& stats, const JsonOptions& opts = {});
KnowledgeBase load_wikidata_json(std::string_view text, IngestStats* stats = nullptr, const JsonOptions& opts = {});

/// Native text format, one fact per line:
///   P26(Q1, Q2) @ {P580: 2000-01-01/11} rank=preferred refs=[_:b1]
///   no_value(P40, Q1) @ {...} rank=normal
///   commons_ns("Douglas Adams.jpg", "File")
/// `refs=<n>` creates n fresh reference tokens. `_:b<n>` names are local to
/// one input and relabeled on load. Identical lines collapse. Throws
/// IngestError with the line number on a syntax error.
void load_native(std::istream& in, KnowledgeBase& kb, IngestStats& stats, const LabelMap& labels = LabelMap::builtin(),
                 const std::string& source_name = "<native>");
KnowledgeBase load_native(std::string_view text, IngestStats* stats = nullptr,
                          const LabelMap& labels = LabelMap::builtin());

/// Loads `path`, picking the format from `format` ("json", "native") or,
/// when empty, from the file extension (`.json`, `.jsonl`, `.ndjson` are JSON).
void load_file(const std::string& path, const std::string& format, KnowledgeBase& kb, IngestStats& stats,
               const LabelMap& labels = LabelMap::builtin());

/// Union of both KBs. Anonymous constants of `b` are relabeled so they
/// cannot collide with those of `a`; clashing statement ids are reassigned.
KnowledgeBase merge(const KnowledgeBase& a, const KnowledgeBase& b);

/// Writes the native format with a header comment. Throws IngestError on a
/// write failure.
void export_native(const KnowledgeBase& kb, std::ostream& out);
std::string export_native(const KnowledgeBase& kb);

/// Statement multiset up to anonymous-constant and id relabeling: each
/// statement and fact is rendered with anonymous constants numbered by first
/// occurrence, then sorted.
std::vector<std::string> canonical_facts(const KnowledgeBase& kb);

}  // namespace marshal
