#ifndef LQKIT_SCORES_HPP
#define LQKIT_SCORES_HPP

#include <compare>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lqkit/tsv.hpp"
#include "lqkit/types.hpp"

namespace lqkit {

// steps == 0 means zero-shot; steps > 0 means evaluated after that many
// few-shot adaptation steps on the target.
struct ScoreKey {
    std::string model;
    Task task = Task::Pos;
    std::string source;
    std::string target;
    int steps = 0;

    auto operator<=>(const ScoreKey&) const = default;
};

struct EvalRecord {
    ScoreKey key;
    MetricKind metric = MetricKind::Accuracy;
    double score = 0.0;  // fraction in [0,1]
};

struct RejectedRow {
    int line = 0;
    std::string reason;
};

struct IngestReport {
    std::size_t accepted = 0;
    std::vector<RejectedRow> rejected;
};

// Keyed evaluation results. Re-adding an identical record is a no-op;
// adding a conflicting score for an existing key is an error, so stores
// built from overlapping files stay consistent.
class ScoreStore {
public:
    void add(EvalRecord record) {
        validate(record);
        const auto it = records_.find(record.key);
        if (it != records_.end()) {
            if (it->second.score != record.score || it->second.metric != record.metric)
                throw DomainError("scores: conflicting record for " + describe(record.key));
            return;
        }
        records_.emplace(record.key, std::move(record));
    }

    std::optional<double> get(const ScoreKey& key) const {
        const auto it = records_.find(key);
        if (it == records_.end()) return std::nullopt;
        return it->second.score;
    }

    const EvalRecord* find(const ScoreKey& key) const {
        const auto it = records_.find(key);
        return it == records_.end() ? nullptr : &it->second;
    }

    std::size_t size() const { return records_.size(); }

    // Iteration follows key order, so exports are deterministic.
    const std::map<ScoreKey, EvalRecord>& records() const { return records_; }

    // Distinct values present in the store, in first-seen order. Useful for
    // defaulting a grid to "whatever the file talks about".
    std::vector<std::string> models_seen() const { return seen_models_; }
    std::vector<std::string> sources_seen() const { return seen_sources_; }
    std::vector<std::string> targets_seen() const { return seen_targets_; }

    static void validate(const EvalRecord& record) {
        if (record.key.model.empty() || record.key.source.empty() || record.key.target.empty())
            throw DomainError("scores: model, source, and target must be non-empty");
        if (record.key.steps < 0)
            throw DomainError("scores: steps must be >= 0 for " + describe(record.key));
        if (record.score < 0.0 || record.score > 1.0)
            throw DomainError("scores: score outside [0,1] for " + describe(record.key));
        if (record.metric != metric_for(record.key.task))
            throw DomainError("scores: metric '" + std::string(metric_name(record.metric)) +
                              "' does not match task for " + describe(record.key));
    }

    static std::string describe(const ScoreKey& key) {
        return key.model + "/" + std::string(task_name(key.task)) + " " + key.source + "->" +
               key.target + " steps=" + std::to_string(key.steps);
    }

    void note_seen(const EvalRecord& record) {
        remember(seen_models_, record.key.model);
        remember(seen_sources_, record.key.source);
        remember(seen_targets_, record.key.target);
    }

private:
    static void remember(std::vector<std::string>& seen, const std::string& value) {
        for (const auto& v : seen)
            if (v == value) return;
        seen.push_back(value);
    }

    std::map<ScoreKey, EvalRecord> records_;
    std::vector<std::string> seen_models_;
    std::vector<std::string> seen_sources_;
    std::vector<std::string> seen_targets_;
};

namespace detail {

inline const std::vector<std::string> kScoreHeader = {"model", "task",  "source", "target",
                                                      "steps", "metric", "score"};

struct ParsedScoreRow {
    EvalRecord record;
    std::optional<std::string> error;
};

inline ParsedScoreRow parse_score_row(const tsv::Row& row, bool percent) {
    ParsedScoreRow out;
    if (row.fields.size() != kScoreHeader.size()) {
        out.error = "expected " + std::to_string(kScoreHeader.size()) + " fields, got " +
                    std::to_string(row.fields.size());
        return out;
    }
    EvalRecord rec;
    rec.key.model = row.fields[0];
    const auto task = parse_task(row.fields[1]);
    if (!task) {
        out.error = "unknown task '" + row.fields[1] + "'";
        return out;
    }
    rec.key.task = *task;
    rec.key.source = row.fields[2];
    rec.key.target = row.fields[3];
    const auto steps = tsv::parse_int(row.fields[4]);
    if (!steps || *steps < 0) {
        out.error = "bad steps '" + row.fields[4] + "'";
        return out;
    }
    rec.key.steps = static_cast<int>(*steps);
    const auto metric = parse_metric(row.fields[5]);
    if (!metric) {
        out.error = "unknown metric '" + row.fields[5] + "'";
        return out;
    }
    rec.metric = *metric;
    const auto score = tsv::parse_double(row.fields[6]);
    if (!score) {
        out.error = "bad score '" + row.fields[6] + "'";
        return out;
    }
    rec.score = percent ? *score / 100.0 : *score;
    if (rec.score < 0.0 || rec.score > 1.0) {
        out.error = "score outside " + std::string(percent ? "[0,100]" : "[0,1]") + ": '" +
                    row.fields[6] + "'";
        return out;
    }
    if (rec.metric != metric_for(rec.key.task)) {
        out.error = "metric '" + row.fields[5] + "' does not match task '" + row.fields[1] + "'";
        return out;
    }
    out.record = std::move(rec);
    return out;
}

}  // namespace detail

// Forgiving reader: bad rows are reported, good rows land in the store.
// `percent` treats the score column as [0,100] and rescales.
inline IngestReport ingest_file(ScoreStore& store, const std::string& path, bool percent = false) {
    tsv::Reader reader(path);
    reader.expect_header(detail::kScoreHeader, "scores");
    IngestReport report;
    tsv::Row row;
    while (reader.next(row)) {
        auto parsed = detail::parse_score_row(row, percent);
        if (parsed.error) {
            report.rejected.push_back({row.line, *parsed.error});
            continue;
        }
        if (store.find(parsed.record.key)) {
            report.rejected.push_back(
                {row.line, "duplicate of existing record " + ScoreStore::describe(parsed.record.key)});
            continue;
        }
        try {
            store.add(parsed.record);
            store.note_seen(parsed.record);
            ++report.accepted;
        } catch (const DomainError& e) {
            report.rejected.push_back({row.line, e.what()});
        }
    }
    return report;
}

// Strict reader: the first bad row aborts the load with a ParseError naming
// the line. Leaves the store untouched on failure.
inline std::size_t import_results(ScoreStore& store, const std::string& path,
                                  bool percent = false) {
    tsv::Reader reader(path);
    reader.expect_header(detail::kScoreHeader, "scores");
    std::vector<EvalRecord> staged;
    std::set<ScoreKey> staged_keys;
    tsv::Row row;
    while (reader.next(row)) {
        auto parsed = detail::parse_score_row(row, percent);
        if (parsed.error)
            throw ParseError("scores: '" + path + "' line " + std::to_string(row.line) + ": " +
                                 *parsed.error,
                             row.line);
        if (!staged_keys.insert(parsed.record.key).second)
            throw ParseError("scores: '" + path + "' line " + std::to_string(row.line) +
                                 ": duplicate key " + ScoreStore::describe(parsed.record.key),
                             row.line);
        if (store.find(parsed.record.key))
            throw ParseError("scores: '" + path + "' line " + std::to_string(row.line) +
                                 ": duplicate of existing record " +
                                 ScoreStore::describe(parsed.record.key),
                             row.line);
        staged.push_back(std::move(parsed.record));
    }
    for (auto& rec : staged) {
        store.add(rec);
        store.note_seen(rec);
    }
    return staged.size();
}

inline void export_scores(const ScoreStore& store, std::ostream& out) {
    out << tsv::join(detail::kScoreHeader);
    for (const auto& [key, rec] : store.records()) {
        out << key.model << '\t' << task_name(key.task) << '\t' << key.source << '\t' << key.target
            << '\t' << key.steps << '\t' << metric_name(rec.metric) << '\t'
            << tsv::format_double(rec.score) << '\n';
    }
}

// Per-source view of one model/task/target column: the zero-shot and
// few-shot scores that exist, plus the zero-shot average over the source
// set. `coverage` counts sources that contributed a zero-shot score.
struct SourceScores {
    std::optional<double> zero_shot;
    std::optional<double> few_shot;
};

struct TransferProfile {
    std::vector<std::string> source_set;  // as given, order preserved
    std::map<std::string, SourceScores> per_source;
    std::optional<double> zero_shot_avg;
    std::size_t coverage = 0;
};

// Collects the scores feeding one target's quotient computation. The
// zero-shot average runs over exactly the sources that have a zero-shot
// record; callers decide whether partial coverage is acceptable.
inline TransferProfile transfer_profile(const ScoreStore& store, const std::string& model,
                                        Task task, const std::vector<std::string>& sources,
                                        const std::string& target, int steps) {
    if (sources.empty()) throw DomainError("scores: source set must be non-empty");
    TransferProfile profile;
    profile.source_set = sources;
    double sum = 0.0;
    for (const auto& source : sources) {
        SourceScores entry;
        entry.zero_shot = store.get({model, task, source, target, 0});
        entry.few_shot = store.get({model, task, source, target, steps});
        if (entry.zero_shot) {
            sum += *entry.zero_shot;
            ++profile.coverage;
        }
        if (profile.per_source.contains(source))
            throw DomainError("scores: duplicate source '" + source + "' in source set");
        profile.per_source.emplace(source, entry);
    }
    if (profile.coverage > 0) profile.zero_shot_avg = sum / static_cast<double>(profile.coverage);
    return profile;
}

// transfer_profile, with an empty profile promoted to an error: a target
// no source has ever been evaluated on zero-shot has no average to offer.
inline TransferProfile build_profile(const ScoreStore& store, const std::string& model, Task task,
                                     const std::string& target,
                                     const std::vector<std::string>& sources, int steps) {
    TransferProfile profile = transfer_profile(store, model, task, sources, target, steps);
    if (profile.coverage == 0)
        throw LookupError("scores: no zero-shot scores for target '" + target + "' under model '" +
                          model + "'");
    return profile;
}

}  // namespace lqkit

#endif
