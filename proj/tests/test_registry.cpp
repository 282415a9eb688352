#include <catch_amalgamated.hpp>

#include <set>

#include "helpers.hpp"
#include "lqkit/registry.hpp"
#include "lqkit/tsv.hpp"

using namespace lqkit;
using testutil::data_path;

namespace {

Registry bundled_registry() {
    Registry reg = load_registry(data_path("target_languages.tsv"));
    reg.set_script_relations(load_script_relations(data_path("script_relations.tsv")));
    return reg;
}

const std::string kRegistryHeaderLine =
    "code\tname\tbase_language\tscript\tfamily\tsubfamily\tresource_class\t"
    "pretrain:bert\tpretrain:mbert\tpretrain:canine\tpretrain:pixel\n";

std::string registry_row(const std::string& code, const std::string& script = "Latin",
                         const std::string& family = "Indo-European",
                         const std::string& subfamily = "Germanic") {
    return code + "\t" + code + "\t" + Registry::base_of(code) + "\t" + script + "\t" + family +
           "\t" + subfamily + "\tLow\t0\t0\t0\t0\n";
}

}  // namespace

TEST_CASE("bundled registry loads 123 distinct entries") {
    CHECK(bundled_registry().size() == 123);
}

TEST_CASE("empty file with a valid header loads an empty registry") {
    testutil::TempDir dir;
    const std::string path = dir.file("empty.tsv");
    testutil::write_file(path, kRegistryHeaderLine);
    CHECK(load_registry(path).size() == 0);
}

TEST_CASE("duplicate code is rejected and named") {
    testutil::TempDir dir;
    const std::string path = dir.file("dup.tsv");
    testutil::write_file(path, kRegistryHeaderLine + registry_row("Urdu-UDTB", "Arabic",
                                                                  "Indo-European", "Indo-Aryan") +
                                   registry_row("Urdu-UDTB", "Arabic", "Indo-European",
                                                "Indo-Aryan"));
    CHECK_THROWS_WITH(load_registry(path), Catch::Matchers::ContainsSubstring("Urdu-UDTB"));
}

TEST_CASE("bundled registry spans 19 scripts, 13 families, 28 subfamilies") {
    const RegistryStats stats = registry_stats(bundled_registry());
    CHECK(stats.script_count == 19);
    CHECK(stats.family_count == 13);
    CHECK(stats.subfamily_count == 28);
}

TEST_CASE("single-language registry counts one of everything") {
    Registry reg;
    LanguageRecord rec;
    rec.code = "Xx-TB";
    rec.name = "Xx";
    rec.script = "Latin";
    rec.family = "F";
    rec.subfamily = "S";
    reg.add(rec);
    const RegistryStats stats = registry_stats(reg);
    CHECK(stats.script_count == 1);
    CHECK(stats.family_count == 1);
    CHECK(stats.subfamily_count == 1);
}

TEST_CASE("stats are invariant under row reordering") {
    // Rewrite the bundled file with its data rows reversed and compare.
    tsv::Reader reader(data_path("target_languages.tsv"));
    tsv::Row row;
    std::vector<std::string> lines;
    while (reader.next(row)) lines.push_back(tsv::join(row.fields));
    std::reverse(lines.begin() + 1, lines.end());  // keep the header first

    testutil::TempDir dir;
    const std::string path = dir.file("reversed.tsv");
    std::string content;
    for (const auto& line : lines) content += line;
    testutil::write_file(path, content);

    const Registry original = bundled_registry();
    const Registry reversed = load_registry(path);
    CHECK(reversed.size() == original.size());
    const RegistryStats a = registry_stats(original);
    const RegistryStats b = registry_stats(reversed);
    CHECK(a.script_count == b.script_count);
    CHECK(a.family_count == b.family_count);
    CHECK(a.subfamily_count == b.subfamily_count);
}

TEST_CASE("identical scripts relate as Same") {
    const Registry reg = bundled_registry();
    const ScriptRelationResult rel = script_relation(reg, "Arabic", "Persian");
    CHECK(rel.relation == ScriptRelation::Same);
    CHECK_FALSE(rel.defaulted);
}

TEST_CASE("listed script pairs use the bundled relation table") {
    const Registry reg = bundled_registry();
    const ScriptRelationResult hebrew = script_relation(reg, "Arabic", "Hebrew");
    CHECK(hebrew.relation == ScriptRelation::Close);
    CHECK_FALSE(hebrew.defaulted);
    const ScriptRelationResult maltese = script_relation(reg, "Arabic", "Maltese");
    CHECK(maltese.relation == ScriptRelation::Dissimilar);
    CHECK_FALSE(maltese.defaulted);
}

TEST_CASE("unlisted script pairs default to Dissimilar and say so") {
    const Registry reg = bundled_registry();
    const ScriptRelationResult rel = script_relation(reg, "Korean", "Tamil");
    CHECK(rel.relation == ScriptRelation::Dissimilar);
    CHECK(rel.defaulted);
}

TEST_CASE("every script relates to itself as Same") {
    const Registry reg = bundled_registry();
    std::set<std::string> scripts;
    for (const auto& rec : reg.records()) scripts.insert(rec.script);
    for (const auto& script : scripts) {
        const ScriptRelationResult rel = reg.script_relations().lookup(script, script);
        CHECK(rel.relation == ScriptRelation::Same);
    }
}

TEST_CASE("script relation lookups are symmetric") {
    const Registry reg = bundled_registry();
    const auto& table = reg.script_relations();
    CHECK(table.lookup("Arabic", "Hebrew").relation == table.lookup("Hebrew", "Arabic").relation);
    CHECK(table.lookup("Arabic", "Latin").relation == table.lookup("Latin", "Arabic").relation);
}

TEST_CASE("script relation with an unknown language is an error") {
    const Registry reg = bundled_registry();
    CHECK_THROWS_AS(script_relation(reg, "Arabic", "NotALanguage"), LookupError);
}

TEST_CASE("relation table rejects conflicting entries") {
    ScriptRelationTable table;
    table.add("A", "B", ScriptRelation::Close);
    CHECK_THROWS_AS(table.add("B", "A", ScriptRelation::Dissimilar), DomainError);
    CHECK_NOTHROW(table.add("A", "B", ScriptRelation::Close));  // re-adding the same is fine
}

TEST_CASE("bundled lexical similarities match the published values") {
    const LexicalSimilarityMatrix matrix =
        load_lexical_similarity(data_path("lexical_similarity.tsv"));
    CHECK(matrix.get("English", "French") == 0.27);
    CHECK(matrix.get("English", "Russian") == 0.24);
    CHECK_FALSE(matrix.get("English", "Italian").has_value());
}

TEST_CASE("lexical similarity is symmetric for every bundled pair") {
    const LexicalSimilarityMatrix matrix =
        load_lexical_similarity(data_path("lexical_similarity.tsv"));
    tsv::Reader reader(data_path("lexical_similarity.tsv"));
    std::vector<std::string> header = {"lang_a", "lang_b", "value"};
    reader.expect_header(header, "test");
    tsv::Row row;
    std::size_t pairs = 0;
    while (reader.next(row)) {
        ++pairs;
        const double value = *tsv::parse_double(row.fields[2]);
        CHECK(matrix.get(row.fields[0], row.fields[1]) == value);
        CHECK(matrix.get(row.fields[1], row.fields[0]) == value);
    }
    CHECK(pairs == matrix.size());
}

TEST_CASE("lexical similarity diagonal is one and bounds are enforced") {
    LexicalSimilarityMatrix matrix;
    CHECK(matrix.get("Anything", "Anything") == 1.0);
    CHECK_THROWS_AS(matrix.set("A", "B", 1.2), DomainError);
    CHECK_THROWS_AS(matrix.set("A", "B", -0.1), DomainError);
    CHECK_THROWS_AS(matrix.set("A", "A", 0.5), DomainError);
    matrix.set("A", "B", 0.4);
    CHECK_THROWS_AS(matrix.set("B", "A", 0.5), DomainError);  // conflicting value
}

TEST_CASE("find resolves treebank codes, prefixed ids, and base languages") {
    const Registry reg = bundled_registry();
    REQUIRE(reg.find("Urdu-UDTB") != nullptr);
    CHECK(reg.find("UD_Urdu-UDTB") == reg.find("Urdu-UDTB"));
    REQUIRE(reg.find("Urdu") != nullptr);
    CHECK(reg.find("Urdu")->code == "Urdu-UDTB");
    CHECK(reg.find("NotALanguage") == nullptr);
    CHECK_THROWS_AS(reg.require("NotALanguage"), LookupError);
}

TEST_CASE("base languages group their treebanks") {
    const Registry reg = bundled_registry();
    const auto english = reg.with_base("English");
    CHECK(english.size() >= 2);
    for (const auto* rec : english) CHECK(rec->base_language == "English");
}

TEST_CASE("records with empty metadata are rejected") {
    Registry reg;
    LanguageRecord rec;
    rec.code = "Xx-TB";
    rec.name = "Xx";
    rec.script = "";
    rec.family = "F";
    rec.subfamily = "S";
    CHECK_THROWS_AS(reg.add(rec), DomainError);
    rec.script = "Latin";
    rec.code = "";
    CHECK_THROWS_AS(reg.add(rec), DomainError);
}

TEST_CASE("pretrain flags outside zero and one fail the load") {
    testutil::TempDir dir;
    const std::string path = dir.file("badflag.tsv");
    testutil::write_file(path, kRegistryHeaderLine +
                                   "Xx-TB\tXx\tXx\tLatin\tF\tS\tLow\t0\t2\t0\t0\n");
    CHECK_THROWS_AS(load_registry(path), ParseError);
}

TEST_CASE("study sources are marked high-resource with known coverage") {
    const Registry reg = bundled_registry();
    for (const auto& lang : testutil::study_languages())
        CHECK(reg.require(lang).resource_class == ResourceClass::High);
    const LanguageRecord& coptic = reg.require("Coptic");
    CHECK_FALSE(coptic.pretrained_in("bert"));
    CHECK_FALSE(coptic.pretrained_in("mbert"));
    CHECK_FALSE(coptic.pretrained_in("canine"));
    CHECK_FALSE(coptic.pretrained_in("pixel"));
    const LanguageRecord& english = reg.require("English");
    CHECK(english.pretrained_in("bert"));
    CHECK(english.pretrained_in("mbert"));
    CHECK(english.pretrained_in("canine"));
    CHECK(english.pretrained_in("pixel"));
}
