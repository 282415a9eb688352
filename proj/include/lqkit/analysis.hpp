#ifndef LQKIT_ANALYSIS_HPP
#define LQKIT_ANALYSIS_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lqkit/lq.hpp"
#include "lqkit/registry.hpp"
#include "lqkit/types.hpp"

namespace lqkit {

enum class RankDirection { TargetsGivenSource, SourcesGivenTarget };

struct RankedEntry {
    std::string language;
    double lq = 0.0;
    int rank = 0;  // 1 is best; ties broken by language code, so ranks are 1..n
};

struct RankedList {
    std::string model;
    Task task = Task::Pos;
    int steps = 0;
    RankDirection direction = RankDirection::TargetsGivenSource;
    std::string fixed_language;
    std::vector<RankedEntry> entries;
};

namespace detail {
inline void sort_and_rank(std::vector<RankedEntry>& entries) {
    std::sort(entries.begin(), entries.end(), [](const RankedEntry& a, const RankedEntry& b) {
        if (a.lq != b.lq) return a.lq > b.lq;
        return a.language < b.language;
    });
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i].rank = static_cast<int>(i) + 1;
}
}  // namespace detail

// All computed cells for one source, best target first. Equal quotients
// order by target code, so the ranking is a total order with ranks 1..n.
inline RankedList rank_targets(const LqMatrix& matrix, const std::string& source) {
    if (std::find(matrix.sources.begin(), matrix.sources.end(), source) == matrix.sources.end())
        throw LookupError("analysis: source '" + source + "' is not in the matrix");
    RankedList list;
    list.model = matrix.model;
    list.task = matrix.task;
    list.steps = matrix.steps;
    list.direction = RankDirection::TargetsGivenSource;
    list.fixed_language = source;
    for (const auto& target : matrix.targets)
        if (const LqResult* cell = matrix.cell(source, target))
            list.entries.push_back({target, cell->lq, 0});
    detail::sort_and_rank(list.entries);
    return list;
}

inline RankedList rank_sources(const LqMatrix& matrix, const std::string& target) {
    if (std::find(matrix.targets.begin(), matrix.targets.end(), target) == matrix.targets.end())
        throw LookupError("analysis: target '" + target + "' is not in the matrix");
    RankedList list;
    list.model = matrix.model;
    list.task = matrix.task;
    list.steps = matrix.steps;
    list.direction = RankDirection::SourcesGivenTarget;
    list.fixed_language = target;
    for (const auto& source : matrix.sources)
        if (const LqResult* cell = matrix.cell(source, target))
            list.entries.push_back({source, cell->lq, 0});
    detail::sort_and_rank(list.entries);
    return list;
}

// Reassembles externally reported quotients into a matrix so the ranking
// and grouping operations apply to them. All results must agree on model,
// task, steps, and average basis; cells carry no component scores.
inline LqMatrix matrix_from_results(const std::vector<LqResult>& results) {
    if (results.empty()) throw DomainError("analysis: no quotient records given");
    LqMatrix matrix;
    matrix.model = results.front().model;
    matrix.task = results.front().task;
    matrix.steps = results.front().steps;
    matrix.source_set_hash = results.front().source_set_hash;
    for (const auto& res : results) {
        if (res.model != matrix.model)
            throw ComparisonError("analysis: mixed models in one matrix ('" + matrix.model +
                                  "' vs '" + res.model + "')");
        if (res.task != matrix.task || res.steps != matrix.steps)
            throw ComparisonError("analysis: mixed task or adaptation budget in one matrix");
        if (res.source_set_hash != matrix.source_set_hash)
            throw ComparisonError(
                "analysis: quotients with different source-set bases are not comparable");
        if (std::find(matrix.sources.begin(), matrix.sources.end(), res.source) ==
            matrix.sources.end())
            matrix.sources.push_back(res.source);
        if (std::find(matrix.targets.begin(), matrix.targets.end(), res.target) ==
            matrix.targets.end())
            matrix.targets.push_back(res.target);
        const auto [it, inserted] = matrix.cells.emplace(std::make_pair(res.source, res.target),
                                                         res);
        if (!inserted)
            throw DomainError("analysis: duplicate quotient for pair " + res.source + "->" +
                              res.target);
    }
    return matrix;
}

// Mean quotient per source over that source's computed cells. Sources with
// no cells are absent from the result.
inline std::map<std::string, double> average_lq_by_source(const LqMatrix& matrix) {
    std::map<std::string, double> sums;
    std::map<std::string, std::size_t> counts;
    for (const auto& [key, cell] : matrix.cells) {
        sums[key.first] += cell.lq;
        ++counts[key.first];
    }
    std::map<std::string, double> means;
    for (const auto& [source, sum] : sums)
        means.emplace(source, sum / static_cast<double>(counts.at(source)));
    return means;
}

struct GroupStats {
    std::size_t count = 0;
    std::optional<double> mean;
    std::optional<double> median;
};

struct GroupComparison {
    std::string predicate;
    GroupStats same_script;
    GroupStats different_script;
};

namespace detail {
inline GroupStats summarize(std::vector<double> values) {
    GroupStats stats;
    stats.count = values.size();
    if (values.empty()) return stats;
    double sum = 0.0;
    for (double v : values) sum += v;
    stats.mean = sum / static_cast<double>(values.size());
    std::sort(values.begin(), values.end());
    const std::size_t mid = values.size() / 2;
    stats.median = values.size() % 2 == 1 ? values[mid] : (values[mid - 1] + values[mid]) / 2.0;
    return stats;
}
}  // namespace detail

// Splits one source's computed cells by whether the target shares the
// source's script (relation Same vs anything else). The source-to-itself
// cell is not a transfer and is left out of both groups.
inline GroupComparison group_by_script(const LqMatrix& matrix, const Registry& registry,
                                       const std::string& source) {
    if (std::find(matrix.sources.begin(), matrix.sources.end(), source) == matrix.sources.end())
        throw LookupError("analysis: source '" + source + "' is not in the matrix");
    std::vector<double> same, different;
    for (const auto& target : matrix.targets) {
        if (target == source) continue;
        const LqResult* cell = matrix.cell(source, target);
        if (!cell) continue;
        const ScriptRelationResult rel = script_relation(registry, source, target);
        (rel.relation == ScriptRelation::Same ? same : different).push_back(cell->lq);
    }
    GroupComparison comparison;
    comparison.predicate = "target script same as '" + source + "' script";
    comparison.same_script = detail::summarize(std::move(same));
    comparison.different_script = detail::summarize(std::move(different));
    return comparison;
}

enum class CorrelationKind { Spearman, Pearson };

struct CorrelationResult {
    CorrelationKind kind = CorrelationKind::Spearman;
    double value = 0.0;
    std::size_t n_pairs = 0;
};

// Ranks with ties averaged: values {3, 1, 3} rank as {2.5, 1, 2.5}.
inline std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = shared;
        i = j + 1;
    }
    return ranks;
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw DomainError("analysis: series lengths differ");
    const std::size_t n = x.size();
    if (n < 2) throw DomainError("analysis: correlation needs at least 2 points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw DomainError("analysis: correlation undefined for a constant series");
    return sxy / std::sqrt(sxx * syy);
}

inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson(average_ranks(x), average_ranks(y));
}

// Rank correlation between one source's quotients and that source's
// lexical similarity to each target, over targets that have both numbers.
// The source-to-itself cell is excluded, matching group_by_script.
inline CorrelationResult correlate_lexical(const LqMatrix& matrix,
                                           const LexicalSimilarityMatrix& lexical,
                                           const std::string& source,
                                           CorrelationKind kind = CorrelationKind::Spearman) {
    if (std::find(matrix.sources.begin(), matrix.sources.end(), source) == matrix.sources.end())
        throw LookupError("analysis: source '" + source + "' is not in the matrix");
    std::vector<double> lq_values, sim_values;
    for (const auto& target : matrix.targets) {
        if (target == source) continue;
        const LqResult* cell = matrix.cell(source, target);
        if (!cell) continue;
        const auto sim = lexical.get(source, target);
        if (!sim) continue;
        lq_values.push_back(cell->lq);
        sim_values.push_back(*sim);
    }
    if (lq_values.size() < 3)
        throw DomainError("analysis: only " + std::to_string(lq_values.size()) +
                          " targets have both a quotient and a lexical similarity; need 3");
    CorrelationResult result;
    result.kind = kind;
    result.n_pairs = lq_values.size();
    result.value = kind == CorrelationKind::Spearman ? spearman(lq_values, sim_values)
                                                     : pearson(lq_values, sim_values);
    return result;
}

struct ModelComparisonRow {
    std::string model;
    double lq = 0.0;
};

struct ModelComparison {
    std::string source;
    std::string target;
    Task task = Task::Pos;
    int steps = 0;
    std::vector<ModelComparisonRow> rows;  // best quotient first
};

// Side-by-side quotients of several models on one transfer pair. Results
// must agree on pair, task, adaptation budget, and average basis; anything
// else would compare numbers that do not mean the same thing.
inline ModelComparison model_compare(const std::vector<LqResult>& results) {
    if (results.empty()) throw ComparisonError("analysis: nothing to compare");
    ModelComparison comparison;
    comparison.source = results.front().source;
    comparison.target = results.front().target;
    comparison.task = results.front().task;
    comparison.steps = results.front().steps;
    const std::uint64_t basis = results.front().source_set_hash;
    for (const auto& res : results) {
        if (res.source != comparison.source || res.target != comparison.target)
            throw ComparisonError("analysis: quotients for different pairs (" + comparison.source +
                                  "->" + comparison.target + " vs " + res.source + "->" +
                                  res.target + ")");
        if (res.task != comparison.task)
            throw ComparisonError("analysis: quotients for different tasks");
        if (res.steps != comparison.steps)
            throw ComparisonError("analysis: quotients with different adaptation budgets (" +
                                  std::to_string(comparison.steps) + " vs " +
                                  std::to_string(res.steps) + " steps)");
        if (res.source_set_hash != basis)
            throw ComparisonError(
                "analysis: quotients with different source-set bases are not comparable");
        for (const auto& row : comparison.rows)
            if (row.model == res.model)
                throw ComparisonError("analysis: model '" + res.model + "' appears twice");
        comparison.rows.push_back({res.model, res.lq});
    }
    std::sort(comparison.rows.begin(), comparison.rows.end(),
              [](const ModelComparisonRow& a, const ModelComparisonRow& b) {
                  if (a.lq != b.lq) return a.lq > b.lq;
                  return a.model < b.model;
              });
    return comparison;
}

}  // namespace lqkit

#endif
