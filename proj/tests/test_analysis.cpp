#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "helpers.hpp"
#include "lqkit/analysis.hpp"

using namespace lqkit;
using testutil::data_path;

namespace {

struct CellSpec {
    std::string source;
    std::string target;
    double lq;
};

LqMatrix make_matrix(const std::vector<std::string>& sources,
                     const std::vector<std::string>& targets,
                     const std::vector<CellSpec>& cells) {
    LqMatrix matrix;
    matrix.model = "m";
    matrix.steps = 10;
    matrix.sources = sources;
    matrix.targets = targets;
    matrix.source_set_hash = source_set_digest(sources);
    for (const auto& spec : cells) {
        LqResult res;
        res.model = matrix.model;
        res.task = matrix.task;
        res.source = spec.source;
        res.target = spec.target;
        res.steps = matrix.steps;
        res.lq = spec.lq;
        res.source_set_hash = matrix.source_set_hash;
        matrix.cells.emplace(std::make_pair(spec.source, spec.target), std::move(res));
    }
    return matrix;
}

Registry bundled_registry() {
    Registry reg = load_registry(data_path("target_languages.tsv"));
    reg.set_script_relations(load_script_relations(data_path("script_relations.tsv")));
    return reg;
}

// Straight-line evaluation of one golden-grid quotient, independent of the
// matrix code path.
double brute_lq(const ScoreStore& store, const std::string& source, const std::string& target) {
    double sum = 0.0;
    for (const auto& s : testutil::study_languages())
        sum += *store.get({"PIXEL", Task::Pos, s, target, 0});
    const double za = sum / 9.0;
    const double z0 = *store.get({"PIXEL", Task::Pos, source, target, 0});
    const double f = *store.get({"PIXEL", Task::Pos, source, target, 10});
    return (f - za) * (f + z0) / (za + kDefaultEpsilon);
}

}  // namespace

TEST_CASE("rank_targets orders by quotient descending with dense ranks") {
    const LqMatrix matrix = make_matrix({"S"}, {"A", "B", "C"},
                                        {{"S", "A", 0.5}, {"S", "B", 0.2}, {"S", "C", 0.9}});
    const RankedList list = rank_targets(matrix, "S");
    REQUIRE(list.entries.size() == 3);
    CHECK(list.entries[0].language == "C");
    CHECK(list.entries[0].rank == 1);
    CHECK(list.entries[1].language == "A");
    CHECK(list.entries[1].rank == 2);
    CHECK(list.entries[2].language == "B");
    CHECK(list.entries[2].rank == 3);
}

TEST_CASE("equal quotients break ties by language code and keep ranks dense") {
    const LqMatrix matrix = make_matrix({"S"}, {"B", "A", "C"},
                                        {{"S", "B", 0.5}, {"S", "A", 0.5}, {"S", "C", 0.1}});
    const RankedList list = rank_targets(matrix, "S");
    REQUIRE(list.entries.size() == 3);
    CHECK(list.entries[0].language == "A");
    CHECK(list.entries[1].language == "B");
    CHECK(list.entries[2].language == "C");
    CHECK(list.entries[0].rank == 1);
    CHECK(list.entries[1].rank == 2);
    CHECK(list.entries[2].rank == 3);
}

TEST_CASE("unknown fixed language is an error") {
    const LqMatrix matrix = make_matrix({"S"}, {"A"}, {{"S", "A", 0.5}});
    CHECK_THROWS_AS(rank_targets(matrix, "X"), LookupError);
    CHECK_THROWS_AS(rank_sources(matrix, "X"), LookupError);
}

TEST_CASE("golden grid ranking for the English source matches brute force") {
    const ScoreStore store = testutil::load_grid_store();
    const auto& langs = testutil::study_languages();
    const LqMatrix matrix = compute_lq_matrix(store, "PIXEL", Task::Pos, langs, langs, 10);
    const RankedList list = rank_targets(matrix, "English");
    REQUIRE(list.entries.size() == 9);

    std::vector<std::pair<double, std::string>> expected;
    for (const auto& target : langs)
        expected.emplace_back(brute_lq(store, "English", target), target);
    std::sort(expected.begin(), expected.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(list.entries[i].language == expected[i].second);
        CHECK(list.entries[i].lq == expected[i].first);
        CHECK(list.entries[i].rank == static_cast<int>(i) + 1);
    }

    const auto position = [&](const std::string& lang) {
        for (std::size_t i = 0; i < list.entries.size(); ++i)
            if (list.entries[i].language == lang) return i;
        FAIL("language missing from ranking");
        return std::size_t{0};
    };
    CHECK(position("Vietnamese") < position("Coptic"));
}

TEST_CASE("published Arabic-source quotients rank Persian first and Maltese last") {
    std::vector<LqResult> pixel;
    for (const auto& res : load_published_lq(data_path("published_lq_arabic_source.tsv")))
        if (res.model == "PIXEL") pixel.push_back(res);
    const LqMatrix matrix = matrix_from_results(pixel);
    const RankedList list = rank_targets(matrix, "Arabic");
    REQUIRE(list.entries.size() == 4);
    CHECK(list.entries[0].language == "Persian");
    CHECK(list.entries[0].lq == 42.8);
    CHECK(list.entries[1].language == "Hebrew");
    CHECK(list.entries[2].language == "Urdu");
    CHECK(list.entries[3].language == "Maltese");
    CHECK(list.entries[3].lq == 1.5);
    CHECK(list.entries[3].rank == 4);
}

TEST_CASE("a single-source matrix ranks that source first") {
    const LqMatrix matrix = make_matrix({"S"}, {"T"}, {{"S", "T", 0.3}});
    const RankedList list = rank_sources(matrix, "T");
    REQUIRE(list.entries.size() == 1);
    CHECK(list.entries[0].language == "S");
    CHECK(list.entries[0].rank == 1);
}

TEST_CASE("ranks are a permutation of one through n") {
    const auto& langs = testutil::study_languages();
    const LqMatrix matrix =
        compute_lq_matrix(testutil::load_grid_store(), "PIXEL", Task::Pos, langs, langs, 10);
    for (const auto& source : langs) {
        const RankedList list = rank_targets(matrix, source);
        std::vector<int> ranks;
        for (const auto& entry : list.entries) ranks.push_back(entry.rank);
        std::sort(ranks.begin(), ranks.end());
        for (std::size_t i = 0; i < ranks.size(); ++i)
            CHECK(ranks[i] == static_cast<int>(i) + 1);
    }
}

TEST_CASE("target rankings survive uniform rescaling of all raw scores") {
    tsv::Reader reader(data_path("pixel_pos_crossgrid.tsv"));
    tsv::Row row;
    std::string scaled_content;
    bool header = true;
    while (reader.next(row)) {
        if (header) {
            header = false;
            scaled_content += tsv::join(row.fields);
            continue;
        }
        row.fields[6] = tsv::format_double(*tsv::parse_double(row.fields[6]) * 0.5);
        scaled_content += tsv::join(row.fields);
    }
    testutil::TempDir dir;
    const std::string path = dir.file("scaled.tsv");
    testutil::write_file(path, scaled_content);
    ScoreStore scaled_store;
    import_results(scaled_store, path);

    const auto& langs = testutil::study_languages();
    // Covariance is exact only at epsilon zero; every average is positive
    // here so zero is safe.
    const LqMatrix base = compute_lq_matrix(testutil::load_grid_store(), "PIXEL", Task::Pos,
                                            langs, langs, 10, 0.0);
    const LqMatrix scaled =
        compute_lq_matrix(scaled_store, "PIXEL", Task::Pos, langs, langs, 10, 0.0);
    for (const auto& source : langs) {
        const RankedList a = rank_targets(base, source);
        const RankedList b = rank_targets(scaled, source);
        REQUIRE(a.entries.size() == b.entries.size());
        for (std::size_t i = 0; i < a.entries.size(); ++i)
            CHECK(a.entries[i].language == b.entries[i].language);
    }
}

TEST_CASE("model comparison reproduces the published Urdu ordering") {
    std::vector<LqResult> urdu;
    for (const auto& res : load_published_lq(data_path("published_lq_hindi_source.tsv")))
        if (res.target == "Urdu") urdu.push_back(res);
    const ModelComparison comparison = model_compare(urdu);
    REQUIRE(comparison.rows.size() == 3);
    CHECK(comparison.rows[0].model == "mBERT");
    CHECK(comparison.rows[0].lq == 102.2);
    CHECK(comparison.rows[1].model == "CANINE");
    CHECK(comparison.rows[1].lq == 96.1);
    CHECK(comparison.rows[2].model == "PIXEL");
    CHECK(comparison.rows[2].lq == -0.4);
}

TEST_CASE("model comparison guards its comparability preconditions") {
    LqResult a;
    a.model = "m1";
    a.source = "S";
    a.target = "T";
    a.steps = 10;
    a.lq = 0.5;
    LqResult b = a;
    b.model = "m2";

    SECTION("equal quotients order by model id") {
        const ModelComparison cmp = model_compare({b, a});
        CHECK(cmp.rows[0].model == "m1");
        CHECK(cmp.rows[1].model == "m2");
    }
    SECTION("different adaptation budgets refuse to compare") {
        b.steps = 50;
        CHECK_THROWS_AS(model_compare({a, b}), ComparisonError);
    }
    SECTION("different pairs refuse to compare") {
        b.target = "U";
        CHECK_THROWS_AS(model_compare({a, b}), ComparisonError);
    }
    SECTION("different average bases refuse to compare") {
        b.source_set_hash = 123;
        CHECK_THROWS_AS(model_compare({a, b}), ComparisonError);
    }
    SECTION("a model appearing twice is an error") {
        b.model = "m1";
        CHECK_THROWS_AS(model_compare({a, b}), ComparisonError);
    }
    SECTION("an empty list is an error") {
        CHECK_THROWS_AS(model_compare({}), ComparisonError);
    }
}

TEST_CASE("reassembling published rows into a matrix guards mixed bases") {
    const std::vector<LqResult> rows =
        load_published_lq(data_path("published_lq_hindi_source.tsv"));
    CHECK_THROWS_AS(matrix_from_results(rows), ComparisonError);  // three models mixed
    std::vector<LqResult> pixel;
    for (const auto& res : rows)
        if (res.model == "PIXEL") pixel.push_back(res);
    const LqMatrix matrix = matrix_from_results(pixel);
    CHECK(matrix.cells.size() == 2);
    CHECK(matrix.cell("Hindi", "Urdu")->lq == -0.4);

    std::vector<LqResult> tampered = pixel;
    tampered[1].source_set_hash = 1;
    CHECK_THROWS_AS(matrix_from_results(tampered), ComparisonError);
    std::vector<LqResult> duplicated = {pixel[0], pixel[0]};
    CHECK_THROWS_AS(matrix_from_results(duplicated), DomainError);
    CHECK_THROWS_AS(matrix_from_results({}), DomainError);
}

TEST_CASE("per-source averages cover present cells only") {
    const LqMatrix matrix =
        make_matrix({"S", "Empty"}, {"A", "B"}, {{"S", "A", 0.2}, {"S", "B", 0.4}});
    const std::map<std::string, double> means = average_lq_by_source(matrix);
    REQUIRE(means.size() == 1);
    CHECK(means.at("S") == Catch::Approx(0.3).margin(1e-15));
    CHECK_FALSE(means.contains("Empty"));
}

TEST_CASE("a uniformly weakest source has the minimum average") {
    std::vector<std::string> sources = {"Amharic"};
    std::vector<std::string> targets;
    for (int i = 1; i < 12; ++i) sources.push_back("L" + std::to_string(i));
    for (int j = 0; j < 12; ++j) targets.push_back("T" + std::to_string(j));
    std::vector<CellSpec> cells;
    for (std::size_t i = 0; i < sources.size(); ++i)
        for (std::size_t j = 0; j < targets.size(); ++j) {
            const double lq = sources[i] == "Amharic"
                                  ? -0.5 - 0.01 * static_cast<double>(j)
                                  : 0.1 * static_cast<double>((i + j) % 7) - 0.2;
            cells.push_back({sources[i], targets[j], lq});
        }
    const LqMatrix matrix = make_matrix(sources, targets, cells);
    const std::map<std::string, double> means = average_lq_by_source(matrix);
    REQUIRE(means.size() == 12);

    // Independent means straight from the fixture.
    std::map<std::string, double> sums;
    std::map<std::string, int> counts;
    for (const auto& cell : cells) {
        sums[cell.source] += cell.lq;
        ++counts[cell.source];
    }
    std::string argmin;
    double best = 1e9;
    for (const auto& [source, sum] : sums) {
        const double mean = sum / counts[source];
        CHECK(means.at(source) == Catch::Approx(mean).margin(1e-15));
        if (mean < best) {
            best = mean;
            argmin = source;
        }
    }
    CHECK(argmin == "Amharic");
    for (const auto& [source, mean] : means)
        if (source != "Amharic") CHECK(mean > means.at("Amharic"));
}

TEST_CASE("per-source averages ignore cell insertion order") {
    std::vector<LqResult> rows;
    for (const auto& res : load_published_lq(data_path("published_lq_arabic_source.tsv")))
        if (res.model == "CANINE") rows.push_back(res);
    const auto forward = average_lq_by_source(matrix_from_results(rows));
    std::reverse(rows.begin(), rows.end());
    const auto backward = average_lq_by_source(matrix_from_results(rows));
    CHECK(forward == backward);
}

TEST_CASE("script grouping splits cleanly on a synthetic fixture") {
    Registry reg;
    const auto add_lang = [&](const std::string& code, const std::string& script) {
        LanguageRecord rec;
        rec.code = code;
        rec.name = code;
        rec.script = script;
        rec.family = "F";
        rec.subfamily = "S";
        reg.add(rec);
    };
    add_lang("Src", "Latin");
    add_lang("SameA", "Latin");
    add_lang("SameB", "Latin");
    add_lang("DiffA", "Hangul");
    add_lang("DiffB", "Hangul");
    const LqMatrix matrix = make_matrix({"Src"}, {"SameA", "SameB", "DiffA", "DiffB"},
                                        {{"Src", "SameA", 1.0},
                                         {"Src", "SameB", 1.0},
                                         {"Src", "DiffA", 0.0},
                                         {"Src", "DiffB", 0.0}});
    const GroupComparison cmp = group_by_script(matrix, reg, "Src");
    CHECK(cmp.same_script.count == 2);
    CHECK(cmp.same_script.mean == 1.0);
    CHECK(cmp.same_script.median == 1.0);
    CHECK(cmp.different_script.count == 2);
    CHECK(cmp.different_script.mean == 0.0);
    CHECK(cmp.same_script.count + cmp.different_script.count == matrix.cells.size());
}

TEST_CASE("an empty group reports zero count and absent stats") {
    Registry reg;
    LanguageRecord a;
    a.code = "Src";
    a.name = "Src";
    a.script = "Latin";
    a.family = "F";
    a.subfamily = "S";
    reg.add(a);
    LanguageRecord b = a;
    b.code = "T";
    b.name = "T";
    b.script = "Hangul";
    reg.add(b);
    const LqMatrix matrix = make_matrix({"Src"}, {"T"}, {{"Src", "T", 0.25}});
    const GroupComparison cmp = group_by_script(matrix, reg, "Src");
    CHECK(cmp.same_script.count == 0);
    CHECK_FALSE(cmp.same_script.mean.has_value());
    CHECK_FALSE(cmp.same_script.median.has_value());
    CHECK(cmp.different_script.count == 1);
    CHECK(cmp.different_script.mean == 0.25);
}

TEST_CASE("golden grid grouping for English matches brute force") {
    const ScoreStore store = testutil::load_grid_store();
    const auto& langs = testutil::study_languages();
    const LqMatrix matrix = compute_lq_matrix(store, "PIXEL", Task::Pos, langs, langs, 10);
    const Registry reg = bundled_registry();
    const GroupComparison cmp = group_by_script(matrix, reg, "English");

    // Independent recomputation: partition the eight non-self targets by
    // script relation, then take plain means and the sorted median.
    std::vector<double> same, different;
    for (const auto& target : langs) {
        if (target == "English") continue;
        const double lq = brute_lq(store, "English", target);
        if (script_relation(reg, "English", target).relation == ScriptRelation::Same)
            same.push_back(lq);
        else
            different.push_back(lq);
    }
    REQUIRE(same.size() == 1);  // Vietnamese is the only Latin-script target here
    REQUIRE(different.size() == 7);
    CHECK(cmp.same_script.count == 1);
    CHECK(cmp.different_script.count == 7);
    CHECK(*cmp.same_script.mean == same[0]);
    double sum = 0.0;
    for (double v : different) sum += v;
    CHECK(*cmp.different_script.mean == Catch::Approx(sum / 7.0).margin(1e-15));
    std::sort(different.begin(), different.end());
    CHECK(*cmp.different_script.median == different[3]);
    CHECK(*cmp.same_script.mean < 0.0);  // English->Vietnamese sits below the average here
}

TEST_CASE("the self pair joins neither script group") {
    Registry reg;
    LanguageRecord a;
    a.code = "Src";
    a.name = "Src";
    a.script = "Latin";
    a.family = "F";
    a.subfamily = "S";
    reg.add(a);
    const LqMatrix matrix = make_matrix({"Src"}, {"Src"}, {{"Src", "Src", 5.0}});
    const GroupComparison cmp = group_by_script(matrix, reg, "Src");
    CHECK(cmp.same_script.count == 0);
    CHECK(cmp.different_script.count == 0);
}

TEST_CASE("tied values share an averaged rank") {
    const std::vector<double> ranks = average_ranks({0.1, 0.4, 0.4, 0.9});
    REQUIRE(ranks.size() == 4);
    CHECK(ranks[0] == 1.0);
    CHECK(ranks[1] == 2.5);
    CHECK(ranks[2] == 2.5);
    CHECK(ranks[3] == 4.0);
}

TEST_CASE("rank correlation hits the monotone extremes") {
    const std::vector<double> x = {0.1, 0.2, 0.3, 0.4};
    const std::vector<double> up = {1.0, 2.0, 7.0, 9.0};
    const std::vector<double> down = {9.0, 7.0, 2.0, 1.0};
    CHECK(spearman(x, up) == Catch::Approx(1.0).margin(1e-12));
    CHECK(spearman(x, down) == Catch::Approx(-1.0).margin(1e-12));
    CHECK(spearman(x, x) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("rank correlation matches the classic formula on distinct values") {
    const std::vector<double> x = {0.1, 0.4, 0.2, 0.9, 0.5};
    const std::vector<double> y = {0.3, 0.1, 0.25, 0.8, 0.7};
    // No ties, so rho = 1 - 6*sum(d^2)/(n(n^2-1)) applies directly.
    const std::vector<double> rx = average_ranks(x);
    const std::vector<double> ry = average_ranks(y);
    double d2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) d2 += (rx[i] - ry[i]) * (rx[i] - ry[i]);
    const double oracle = 1.0 - 6.0 * d2 / (5.0 * (25.0 - 1.0));
    CHECK(oracle == 0.6);
    CHECK(spearman(x, y) == Catch::Approx(oracle).margin(1e-12));
}

TEST_CASE("correlation guards degenerate series") {
    CHECK_THROWS_AS(pearson({1.0, 2.0}, {1.0}), DomainError);
    CHECK_THROWS_AS(pearson({1.0}, {2.0}), DomainError);
    CHECK_THROWS_AS(pearson({1.0, 1.0, 1.0}, {1.0, 2.0, 3.0}), DomainError);
}

TEST_CASE("lexical correlation pairs quotients with similarities per target") {
    LexicalSimilarityMatrix lexical;
    lexical.set("S", "A", 0.1);
    lexical.set("S", "B", 0.5);
    lexical.set("S", "C", 0.9);
    const LqMatrix matrix = make_matrix({"S"}, {"A", "B", "C", "S"},
                                        {{"S", "A", -0.2},
                                         {"S", "B", 0.1},
                                         {"S", "C", 0.4},
                                         {"S", "S", 9.0}});
    const CorrelationResult rho = correlate_lexical(matrix, lexical, "S");
    CHECK(rho.n_pairs == 3);  // the self pair stays out
    CHECK(rho.value == Catch::Approx(1.0).margin(1e-12));
    const CorrelationResult r =
        correlate_lexical(matrix, lexical, "S", CorrelationKind::Pearson);
    CHECK(r.kind == CorrelationKind::Pearson);
    CHECK(r.n_pairs == 3);
}

TEST_CASE("fewer than three overlapping targets refuse to correlate") {
    LexicalSimilarityMatrix lexical;
    lexical.set("S", "A", 0.1);
    lexical.set("S", "B", 0.5);
    const LqMatrix matrix =
        make_matrix({"S"}, {"A", "B", "C"},
                    {{"S", "A", -0.2}, {"S", "B", 0.1}, {"S", "C", 0.4}});
    CHECK_THROWS_AS(correlate_lexical(matrix, lexical, "S"), DomainError);
}

TEST_CASE("rank correlation stays within its bounds on random data") {
    std::mt19937 rng(4242);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> x, y;
        for (int i = 0; i < 8; ++i) {
            x.push_back(unit(rng));
            y.push_back(unit(rng));
        }
        const double rho = spearman(x, y);
        CHECK(rho >= -1.0 - 1e-12);
        CHECK(rho <= 1.0 + 1e-12);
    }
}
