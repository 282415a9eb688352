#ifndef LQKIT_REGISTRY_HPP
#define LQKIT_REGISTRY_HPP

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lqkit/tsv.hpp"
#include "lqkit/types.hpp"

namespace lqkit {

enum class ResourceClass { High, Low };

inline std::string_view resource_class_name(ResourceClass r) {
    return r == ResourceClass::High ? "High" : "Low";
}

inline std::optional<ResourceClass> parse_resource_class(std::string_view s) {
    const std::string v = ascii_lower(s);
    if (v == "high") return ResourceClass::High;
    if (v == "low") return ResourceClass::Low;
    return std::nullopt;
}

// One registry row. `code` is the treebank-style primary key
// ("Urdu-UDTB"); `base_language` groups treebanks of one language so that
// analyses phrased in terms of languages can resolve them.
struct LanguageRecord {
    std::string code;
    std::string name;
    std::string base_language;
    std::string script;
    std::string family;
    std::string subfamily;
    ResourceClass resource_class = ResourceClass::Low;
    // model-family id -> was this language part of that model's pre-training set
    std::map<std::string, bool> pretrain_coverage;

    bool pretrained_in(std::string_view model) const {
        const auto it = pretrain_coverage.find(std::string(model));
        return it != pretrain_coverage.end() && it->second;
    }
};

enum class ScriptRelation { Same, Close, Dissimilar };

inline std::string_view script_relation_name(ScriptRelation r) {
    switch (r) {
        case ScriptRelation::Same: return "Same";
        case ScriptRelation::Close: return "Close";
        case ScriptRelation::Dissimilar: return "Dissimilar";
    }
    return "?";
}

inline std::optional<ScriptRelation> parse_script_relation(std::string_view s) {
    const std::string v = ascii_lower(s);
    if (v == "same") return ScriptRelation::Same;
    if (v == "close") return ScriptRelation::Close;
    if (v == "dissimilar") return ScriptRelation::Dissimilar;
    return std::nullopt;
}

// `defaulted` marks pairs that were absent from the relation table and fell
// back to Dissimilar, so downstream consumers can tell data from default.
struct ScriptRelationResult {
    ScriptRelation relation = ScriptRelation::Dissimilar;
    bool defaulted = false;
};

// Symmetric script-pair relations. Identical script names are Same by rule
// and need no table entry.
class ScriptRelationTable {
public:
    void add(std::string script_a, std::string script_b, ScriptRelation relation) {
        if (script_a.empty() || script_b.empty())
            throw DomainError("registry: script names in a relation row must be non-empty");
        auto key = make_key(std::move(script_a), std::move(script_b));
        const auto it = entries_.find(key);
        if (it != entries_.end() && it->second != relation)
            throw DomainError("registry: conflicting relation for scripts '" + key.first +
                              "' and '" + key.second + "'");
        entries_.emplace(std::move(key), relation);
    }

    ScriptRelationResult lookup(std::string_view script_a, std::string_view script_b) const {
        if (script_a == script_b) return {ScriptRelation::Same, false};
        const auto it = entries_.find(make_key(std::string(script_a), std::string(script_b)));
        if (it == entries_.end()) return {ScriptRelation::Dissimilar, true};
        return {it->second, false};
    }

    std::size_t size() const { return entries_.size(); }

private:
    static std::pair<std::string, std::string> make_key(std::string a, std::string b) {
        if (b < a) std::swap(a, b);
        return {std::move(a), std::move(b)};
    }

    std::map<std::pair<std::string, std::string>, ScriptRelation> entries_;
};

// Sparse symmetric language-pair similarity in [0,1]. Absent pairs are
// unknown, not zero; the diagonal is fixed at 1.
class LexicalSimilarityMatrix {
public:
    void set(std::string lang_a, std::string lang_b, double value) {
        if (value < 0.0 || value > 1.0)
            throw DomainError("registry: lexical similarity must lie in [0,1]");
        if (lang_a == lang_b && value != 1.0)
            throw DomainError("registry: lexical similarity of a language with itself is 1");
        auto key = make_key(std::move(lang_a), std::move(lang_b));
        const auto it = entries_.find(key);
        if (it != entries_.end() && it->second != value)
            throw DomainError("registry: conflicting lexical similarity for '" + key.first +
                              "' and '" + key.second + "'");
        entries_.emplace(std::move(key), value);
    }

    std::optional<double> get(std::string_view lang_a, std::string_view lang_b) const {
        if (lang_a == lang_b) return 1.0;
        const auto it = entries_.find(make_key(std::string(lang_a), std::string(lang_b)));
        if (it == entries_.end()) return std::nullopt;
        return it->second;
    }

    std::size_t size() const { return entries_.size(); }

private:
    static std::pair<std::string, std::string> make_key(std::string a, std::string b) {
        if (b < a) std::swap(a, b);
        return {std::move(a), std::move(b)};
    }

    std::map<std::pair<std::string, std::string>, double> entries_;
};

// Immutable after load; safe for concurrent readers.
class Registry {
public:
    void add(LanguageRecord record) {
        if (record.code.empty())
            throw DomainError("registry: language code must be non-empty");
        if (record.script.empty() || record.family.empty() || record.subfamily.empty())
            throw DomainError("registry: script, family, and subfamily must be non-empty for '" +
                              record.code + "'");
        if (by_code_.contains(record.code))
            throw DomainError("registry: duplicate code '" + record.code + "'");
        if (record.base_language.empty()) record.base_language = base_of(record.code);
        by_code_.emplace(record.code, records_.size());
        by_base_[record.base_language].push_back(records_.size());
        records_.push_back(std::move(record));
    }

    std::size_t size() const { return records_.size(); }
    const std::vector<LanguageRecord>& records() const { return records_; }

    // Resolves a treebank code, a "UD_"-prefixed code, or a base-language
    // name (first treebank of that language in file order). Null if unknown.
    const LanguageRecord* find(std::string_view id) const {
        if (const auto it = by_code_.find(std::string(id)); it != by_code_.end())
            return &records_[it->second];
        if (id.starts_with("UD_")) {
            if (const auto it = by_code_.find(std::string(id.substr(3))); it != by_code_.end())
                return &records_[it->second];
        }
        if (const auto it = by_base_.find(std::string(id)); it != by_base_.end())
            return &records_[it->second.front()];
        return nullptr;
    }

    const LanguageRecord& require(std::string_view id) const {
        const LanguageRecord* rec = find(id);
        if (!rec) throw LookupError("registry: unknown language '" + std::string(id) + "'");
        return *rec;
    }

    std::vector<const LanguageRecord*> with_base(std::string_view base) const {
        std::vector<const LanguageRecord*> out;
        if (const auto it = by_base_.find(std::string(base)); it != by_base_.end())
            for (std::size_t i : it->second) out.push_back(&records_[i]);
        return out;
    }

    void set_script_relations(ScriptRelationTable table) { relations_ = std::move(table); }
    const ScriptRelationTable& script_relations() const { return relations_; }

    static std::string base_of(std::string_view code) {
        const std::size_t dash = code.find('-');
        return std::string(dash == std::string_view::npos ? code : code.substr(0, dash));
    }

private:
    std::vector<LanguageRecord> records_;
    std::map<std::string, std::size_t> by_code_;
    std::map<std::string, std::vector<std::size_t>> by_base_;
    ScriptRelationTable relations_;
};

struct RegistryStats {
    std::size_t script_count = 0;
    std::size_t family_count = 0;
    std::size_t subfamily_count = 0;
};

inline RegistryStats registry_stats(const Registry& registry) {
    std::set<std::string> scripts, families, subfamilies;
    for (const auto& rec : registry.records()) {
        scripts.insert(rec.script);
        families.insert(rec.family);
        subfamilies.insert(rec.subfamily);
    }
    return {scripts.size(), families.size(), subfamilies.size()};
}

// Relation between the scripts of two languages. Identical script names are
// Same; otherwise the registry's relation table decides, defaulting to
// Dissimilar for unlisted pairs.
inline ScriptRelationResult script_relation(const Registry& registry, std::string_view lang_a,
                                            std::string_view lang_b) {
    const LanguageRecord& a = registry.require(lang_a);
    const LanguageRecord& b = registry.require(lang_b);
    return registry.script_relations().lookup(a.script, b.script);
}

inline std::optional<double> lexical_similarity(const LexicalSimilarityMatrix& matrix,
                                                std::string_view lang_a, std::string_view lang_b) {
    return matrix.get(lang_a, lang_b);
}

namespace detail {
inline const std::vector<std::string> kRegistryHeader = {
    "code",          "name",          "base_language",  "script",
    "family",        "subfamily",     "resource_class", "pretrain:bert",
    "pretrain:mbert", "pretrain:canine", "pretrain:pixel"};
}

inline Registry load_registry(const std::string& path) {
    tsv::Reader reader(path);
    reader.expect_header(detail::kRegistryHeader, "registry");
    Registry registry;
    tsv::Row row;
    while (reader.next(row)) {
        if (row.fields.size() != detail::kRegistryHeader.size())
            throw ParseError("registry: '" + path + "' line " + std::to_string(row.line) +
                                 ": expected " + std::to_string(detail::kRegistryHeader.size()) +
                                 " fields, got " + std::to_string(row.fields.size()),
                             row.line);
        LanguageRecord rec;
        rec.code = row.fields[0];
        rec.name = row.fields[1];
        rec.base_language = row.fields[2];
        rec.script = row.fields[3];
        rec.family = row.fields[4];
        rec.subfamily = row.fields[5];
        const auto klass = parse_resource_class(row.fields[6]);
        if (!klass)
            throw ParseError("registry: '" + path + "' line " + std::to_string(row.line) +
                                 ": bad resource class '" + row.fields[6] + "'",
                             row.line);
        rec.resource_class = *klass;
        static const char* kModels[] = {"bert", "mbert", "canine", "pixel"};
        for (std::size_t i = 0; i < 4; ++i) {
            const std::string& flag = row.fields[7 + i];
            if (flag != "0" && flag != "1")
                throw ParseError("registry: '" + path + "' line " + std::to_string(row.line) +
                                     ": pretrain flag must be 0 or 1, got '" + flag + "'",
                                 row.line);
            rec.pretrain_coverage[kModels[i]] = flag == "1";
        }
        try {
            registry.add(std::move(rec));
        } catch (const DomainError& e) {
            throw ParseError(std::string(e.what()) + " (line " + std::to_string(row.line) + ")",
                             row.line);
        }
    }
    return registry;
}

inline ScriptRelationTable load_script_relations(const std::string& path) {
    tsv::Reader reader(path);
    reader.expect_header({"script_a", "script_b", "relation"}, "registry");
    ScriptRelationTable table;
    tsv::Row row;
    while (reader.next(row)) {
        if (row.fields.size() != 3)
            throw ParseError("registry: '" + path + "' line " + std::to_string(row.line) +
                                 ": expected 3 fields",
                             row.line);
        const auto relation = parse_script_relation(row.fields[2]);
        if (!relation)
            throw ParseError("registry: '" + path + "' line " + std::to_string(row.line) +
                                 ": bad relation '" + row.fields[2] + "'",
                             row.line);
        table.add(row.fields[0], row.fields[1], *relation);
    }
    return table;
}

inline LexicalSimilarityMatrix load_lexical_similarity(const std::string& path) {
    tsv::Reader reader(path);
    reader.expect_header({"lang_a", "lang_b", "value"}, "registry");
    LexicalSimilarityMatrix matrix;
    tsv::Row row;
    while (reader.next(row)) {
        if (row.fields.size() != 3)
            throw ParseError("registry: '" + path + "' line " + std::to_string(row.line) +
                                 ": expected 3 fields",
                             row.line);
        const auto value = tsv::parse_double(row.fields[2]);
        if (!value)
            throw ParseError("registry: '" + path + "' line " + std::to_string(row.line) +
                                 ": bad similarity value '" + row.fields[2] + "'",
                             row.line);
        try {
            matrix.set(row.fields[0], row.fields[1], *value);
        } catch (const DomainError& e) {
            throw ParseError(std::string(e.what()) + " (line " + std::to_string(row.line) + ")",
                             row.line);
        }
    }
    return matrix;
}

}  // namespace lqkit

#endif
