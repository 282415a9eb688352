#ifndef LQKIT_LQ_HPP
#define LQKIT_LQ_HPP

#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lqkit/scores.hpp"
#include "lqkit/tsv.hpp"
#include "lqkit/types.hpp"

namespace lqkit {

inline constexpr double kDefaultEpsilon = 1e-9;

namespace detail {
inline void check_lq_operand(double v, const char* name) {
    if (!std::isfinite(v) || v < 0.0)
        throw DomainError(std::string("lq: ") + name + " must be a finite non-negative number");
}
}  // namespace detail

// Transfer quotient of one source->target pair:
//
//   (few - avg) * (few + zero) / (avg + epsilon)
//
// where `zero` and `few` are the pair's scores before and after brief
// adaptation and `avg` is the mean zero-shot score of the whole source set
// on the same target. Positive iff adaptation beats the source-set
// baseline. Operands are scale-free: quotient(k*f, k*z, k*a) == k *
// quotient(f, z, a) when epsilon is 0, so fraction and percent inputs give
// proportional results.
inline double learning_quotient(double few_shot, double zero_shot, double zero_shot_avg,
                                double epsilon = kDefaultEpsilon) {
    detail::check_lq_operand(few_shot, "few-shot score");
    detail::check_lq_operand(zero_shot, "zero-shot score");
    detail::check_lq_operand(zero_shot_avg, "zero-shot average");
    if (!std::isfinite(epsilon) || epsilon < 0.0)
        throw DomainError("lq: epsilon must be a finite non-negative number");
    const double denom = zero_shot_avg + epsilon;
    if (denom == 0.0) throw DomainError("lq: zero-shot average and epsilon are both zero");
    return (few_shot - zero_shot_avg) * (few_shot + zero_shot) / denom;
}

// Algebraically equal reformulation at epsilon == 0:
//
//   f * ((f + z) / a) - f * (1 + z / f)
//
// Kept as a cross-check for the closed form above; needs f > 0 and a > 0
// because both appear as divisors here.
inline double learning_quotient_simplified(double few_shot, double zero_shot,
                                           double zero_shot_avg) {
    detail::check_lq_operand(few_shot, "few-shot score");
    detail::check_lq_operand(zero_shot, "zero-shot score");
    detail::check_lq_operand(zero_shot_avg, "zero-shot average");
    if (few_shot == 0.0) throw DomainError("lq: simplified form needs a non-zero few-shot score");
    if (zero_shot_avg == 0.0)
        throw DomainError("lq: simplified form needs a non-zero zero-shot average");
    return few_shot * ((few_shot + zero_shot) / zero_shot_avg) -
           few_shot * (1.0 + zero_shot / few_shot);
}

struct LqInputs {
    double few_shot = 0.0;
    double zero_shot = 0.0;
    double zero_shot_avg = 0.0;
    double epsilon = kDefaultEpsilon;
};

// One quotient with enough context to rank, audit, or compare it.
// `inputs` is absent for externally published values where only the
// quotient itself is known. `source_set_hash` fingerprints the basis of
// the zero-shot average; quotients are only comparable when it matches.
struct LqResult {
    std::string model;
    Task task = Task::Pos;
    std::string source;
    std::string target;
    int steps = 0;
    double lq = 0.0;
    std::optional<LqInputs> inputs;
    std::uint64_t source_set_hash = 0;
    std::optional<std::size_t> coverage;
    std::optional<int> printed_rank;
};

// Quotient for one pair, with the zero-shot average assembled from the
// store over `sources`. With `require_full_coverage`, any source missing a
// zero-shot record is an error; otherwise the average runs over the
// sources that have one and `coverage` records how many that was.
inline LqResult lq_for_pair(const ScoreStore& store, const std::string& model, Task task,
                            const std::vector<std::string>& sources, const std::string& source,
                            const std::string& target, int steps,
                            double epsilon = kDefaultEpsilon,
                            bool require_full_coverage = false) {
    const TransferProfile profile = transfer_profile(store, model, task, sources, target, steps);
    if (require_full_coverage && profile.coverage != sources.size())
        throw LookupError("lq: zero-shot coverage " + std::to_string(profile.coverage) + "/" +
                          std::to_string(sources.size()) + " for target '" + target + "'");
    if (!profile.zero_shot_avg)
        throw LookupError("lq: no zero-shot scores for target '" + target + "' under model '" +
                          model + "'");
    const auto it = profile.per_source.find(source);
    if (it == profile.per_source.end())
        throw LookupError("lq: source '" + source + "' is not in the source set");
    if (!it->second.zero_shot)
        throw LookupError("lq: missing zero-shot score for " +
                          ScoreStore::describe({model, task, source, target, 0}));
    if (!it->second.few_shot)
        throw LookupError("lq: missing few-shot score for " +
                          ScoreStore::describe({model, task, source, target, steps}));

    LqResult result;
    result.model = model;
    result.task = task;
    result.source = source;
    result.target = target;
    result.steps = steps;
    result.inputs = LqInputs{*it->second.few_shot, *it->second.zero_shot, *profile.zero_shot_avg,
                             epsilon};
    result.lq = learning_quotient(*it->second.few_shot, *it->second.zero_shot,
                                  *profile.zero_shot_avg, epsilon);
    result.source_set_hash = source_set_digest(sources);
    result.coverage = profile.coverage;
    return result;
}

// Source x target grid of quotients for one model, task, and step count.
// Axis orders are preserved as given. Pairs lacking a zero- or few-shot
// record have no cell; the zero-shot averages still use every record that
// exists for the target.
struct LqMatrix {
    std::string model;
    Task task = Task::Pos;
    int steps = 0;
    double epsilon = kDefaultEpsilon;
    std::vector<std::string> sources;
    std::vector<std::string> targets;
    std::map<std::pair<std::string, std::string>, LqResult> cells;  // (source, target)
    std::uint64_t source_set_hash = 0;

    const LqResult* cell(const std::string& source, const std::string& target) const {
        const auto it = cells.find({source, target});
        return it == cells.end() ? nullptr : &it->second;
    }
};

inline LqMatrix compute_lq_matrix(const ScoreStore& store, const std::string& model, Task task,
                                  const std::vector<std::string>& sources,
                                  const std::vector<std::string>& targets, int steps,
                                  double epsilon = kDefaultEpsilon) {
    if (targets.empty()) throw DomainError("lq: target set must be non-empty");
    LqMatrix matrix;
    matrix.model = model;
    matrix.task = task;
    matrix.steps = steps;
    matrix.epsilon = epsilon;
    matrix.sources = sources;
    matrix.targets = targets;
    matrix.source_set_hash = source_set_digest(sources);
    for (const auto& target : targets) {
        const TransferProfile profile = transfer_profile(store, model, task, sources, target, steps);
        if (!profile.zero_shot_avg) continue;
        for (const auto& source : sources) {
            const SourceScores& entry = profile.per_source.at(source);
            if (!entry.zero_shot || !entry.few_shot) continue;
            LqResult result;
            result.model = model;
            result.task = task;
            result.source = source;
            result.target = target;
            result.steps = steps;
            result.inputs = LqInputs{*entry.few_shot, *entry.zero_shot, *profile.zero_shot_avg,
                                     epsilon};
            result.lq = learning_quotient(*entry.few_shot, *entry.zero_shot,
                                          *profile.zero_shot_avg, epsilon);
            result.source_set_hash = matrix.source_set_hash;
            result.coverage = profile.coverage;
            matrix.cells.emplace(std::make_pair(source, target), std::move(result));
        }
    }
    return matrix;
}

// Flat export, one row per computed cell, sorted by (target, source).
inline void write_matrix_tsv(const LqMatrix& matrix, std::ostream& out) {
    out << "source\ttarget\tzero_shot\tfew_shot\tzero_shot_avg\tlq\tcoverage\n";
    std::map<std::pair<std::string, std::string>, const LqResult*> ordered;
    for (const auto& [key, result] : matrix.cells)
        ordered.emplace(std::make_pair(key.second, key.first), &result);
    for (const auto& [key, result] : ordered) {
        const LqInputs& in = *result->inputs;
        out << key.second << '\t' << key.first << '\t' << tsv::format_double(in.zero_shot) << '\t'
            << tsv::format_double(in.few_shot) << '\t' << tsv::format_double(in.zero_shot_avg)
            << '\t' << tsv::format_double(result->lq) << '\t'
            << (result->coverage ? std::to_string(*result->coverage) : std::string("-")) << '\n';
    }
}

namespace detail {
inline const std::vector<std::string> kPublishedLqHeader = {"model", "task",        "source",
                                                            "target", "steps",      "lq",
                                                            "printed_rank"};
}

// Reads externally reported quotients. These carry no component scores, so
// `inputs` stays empty; a `#sources=` pragma (comma-separated) pins the
// basis their averages were computed over. Quotient values keep the file's
// scale.
inline std::vector<LqResult> load_published_lq(const std::string& path) {
    tsv::Reader reader(path);
    reader.expect_header(detail::kPublishedLqHeader, "lq");
    std::vector<LqResult> results;
    tsv::Row row;
    while (reader.next(row)) {
        if (row.fields.size() != detail::kPublishedLqHeader.size())
            throw ParseError("lq: '" + path + "' line " + std::to_string(row.line) +
                                 ": expected " +
                                 std::to_string(detail::kPublishedLqHeader.size()) + " fields",
                             row.line);
        LqResult res;
        res.model = row.fields[0];
        const auto task = parse_task(row.fields[1]);
        if (!task)
            throw ParseError("lq: '" + path + "' line " + std::to_string(row.line) +
                                 ": unknown task '" + row.fields[1] + "'",
                             row.line);
        res.task = *task;
        res.source = row.fields[2];
        res.target = row.fields[3];
        const auto steps = tsv::parse_int(row.fields[4]);
        if (!steps || *steps < 0)
            throw ParseError("lq: '" + path + "' line " + std::to_string(row.line) +
                                 ": bad steps '" + row.fields[4] + "'",
                             row.line);
        res.steps = static_cast<int>(*steps);
        const auto lq = tsv::parse_double(row.fields[5]);
        if (!lq)
            throw ParseError("lq: '" + path + "' line " + std::to_string(row.line) +
                                 ": bad quotient '" + row.fields[5] + "'",
                             row.line);
        res.lq = *lq;
        if (row.fields[6] != "-") {
            const auto rank = tsv::parse_int(row.fields[6]);
            if (!rank || *rank < 1)
                throw ParseError("lq: '" + path + "' line " + std::to_string(row.line) +
                                     ": bad rank '" + row.fields[6] + "'",
                                 row.line);
            res.printed_rank = static_cast<int>(*rank);
        }
        results.push_back(std::move(res));
    }
    if (const auto sources = reader.pragma("sources")) {
        const std::uint64_t hash = source_set_digest(tsv::parse_list(*sources));
        for (auto& res : results) res.source_set_hash = hash;
    }
    return results;
}

}  // namespace lqkit

#endif
