#ifndef LQKIT_HARNESS_HPP
#define LQKIT_HARNESS_HPP

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lqkit/registry.hpp"
#include "lqkit/scores.hpp"
#include "lqkit/tsv.hpp"
#include "lqkit/types.hpp"

namespace lqkit {

enum class RunPhase { SourceFinetune, FewShot };

inline std::string_view phase_name(RunPhase p) {
    return p == RunPhase::SourceFinetune ? "source_finetune" : "few_shot";
}

inline std::optional<RunPhase> parse_phase(std::string_view s) {
    if (s == "source_finetune") return RunPhase::SourceFinetune;
    if (s == "few_shot") return RunPhase::FewShot;
    return std::nullopt;
}

inline constexpr int kTrainBatchSize = 32;
inline constexpr int kSourceFinetuneSteps = 15000;
inline constexpr double kLearningRate = 5e-5;
inline constexpr int kMaxSeqLen = 256;

struct Hyperparams {
    int train_batch_size = kTrainBatchSize;
    int max_steps = 0;
    // set for full fine-tuning runs; few-shot runs are too short to stop early
    std::optional<bool> early_stopping;
    double learning_rate = kLearningRate;
    int max_seq_len = kMaxSeqLen;
    MetricKind eval_metric = MetricKind::Accuracy;
};

// One run to hand to an external training system. `language` is the
// fine-tuning source for SourceFinetune and the adaptation target for
// FewShot; a FewShot run names the SourceFinetune it adapts in parent_run.
struct RunManifest {
    std::string id;
    std::string model;
    Task task = Task::Pos;
    RunPhase phase = RunPhase::SourceFinetune;
    std::string language;
    std::string parent_run;  // empty for SourceFinetune
    Hyperparams hyperparams;
};

// Two-phase protocol: every model is fully fine-tuned on every source per
// task, then each of those checkpoints is adapted to every target for a
// handful of steps. Emits all fine-tune manifests first, then the few-shot
// manifests that reference them.
inline std::vector<RunManifest> generate_manifests(const std::vector<std::string>& models,
                                                   const std::vector<Task>& tasks,
                                                   const std::vector<std::string>& sources,
                                                   const std::vector<std::string>& targets,
                                                   int c) {
    if (models.empty() || tasks.empty() || sources.empty() || targets.empty())
        throw DomainError("harness: models, tasks, sources, and targets must all be non-empty");
    if (c <= 0) throw DomainError("harness: few-shot step count must be positive");
    const auto check_unique = [](const std::vector<std::string>& values, const char* what) {
        std::set<std::string> seen(values.begin(), values.end());
        if (seen.size() != values.size())
            throw DomainError(std::string("harness: duplicate ") + what + " in input set");
    };
    check_unique(models, "model");
    check_unique(sources, "source");
    check_unique(targets, "target");

    std::vector<RunManifest> manifests;
    manifests.reserve(tasks.size() * models.size() * sources.size() * (1 + targets.size()));
    for (const Task task : tasks)
        for (const auto& model : models)
            for (const auto& source : sources) {
                RunManifest m;
                m.id = "ft:" + model + ":" + std::string(task_name(task)) + ":" + source;
                m.model = model;
                m.task = task;
                m.phase = RunPhase::SourceFinetune;
                m.language = source;
                m.hyperparams.max_steps = kSourceFinetuneSteps;
                m.hyperparams.early_stopping = true;
                m.hyperparams.eval_metric = metric_for(task);
                manifests.push_back(std::move(m));
            }
    for (const Task task : tasks)
        for (const auto& model : models)
            for (const auto& source : sources)
                for (const auto& target : targets) {
                    RunManifest m;
                    m.id = "fs:" + model + ":" + std::string(task_name(task)) + ":" + source +
                           ":" + target + ":c" + std::to_string(c);
                    m.model = model;
                    m.task = task;
                    m.phase = RunPhase::FewShot;
                    m.language = target;
                    m.parent_run = "ft:" + model + ":" + std::string(task_name(task)) + ":" +
                                   source;
                    m.hyperparams.max_steps = c;
                    m.hyperparams.eval_metric = metric_for(task);
                    manifests.push_back(std::move(m));
                }
    return manifests;
}

namespace detail {
inline const std::vector<std::string> kManifestHeader = {
    "id",        "model",      "task",           "phase",
    "language",  "parent_run", "train_batch_size", "max_steps",
    "early_stopping", "learning_rate", "max_seq_len", "eval_metric"};
}

inline void write_manifests(const std::vector<RunManifest>& manifests, std::ostream& out) {
    out << tsv::join(detail::kManifestHeader);
    for (const auto& m : manifests) {
        out << m.id << '\t' << m.model << '\t' << task_name(m.task) << '\t' << phase_name(m.phase)
            << '\t' << m.language << '\t' << (m.parent_run.empty() ? "-" : m.parent_run) << '\t'
            << m.hyperparams.train_batch_size << '\t' << m.hyperparams.max_steps << '\t'
            << (m.hyperparams.early_stopping ? (*m.hyperparams.early_stopping ? "1" : "0") : "-")
            << '\t' << tsv::format_double(m.hyperparams.learning_rate) << '\t'
            << m.hyperparams.max_seq_len << '\t' << metric_name(m.hyperparams.eval_metric)
            << '\n';
    }
}

inline std::vector<RunManifest> load_manifests(const std::string& path) {
    tsv::Reader reader(path);
    reader.expect_header(detail::kManifestHeader, "harness");
    std::vector<RunManifest> manifests;
    std::set<std::string> ids;
    tsv::Row row;
    while (reader.next(row)) {
        const auto fail = [&](const std::string& why) -> ParseError {
            return ParseError("harness: '" + path + "' line " + std::to_string(row.line) + ": " +
                                  why,
                              row.line);
        };
        if (row.fields.size() != detail::kManifestHeader.size())
            throw fail("expected " + std::to_string(detail::kManifestHeader.size()) + " fields");
        RunManifest m;
        m.id = row.fields[0];
        m.model = row.fields[1];
        const auto task = parse_task(row.fields[2]);
        if (!task) throw fail("unknown task '" + row.fields[2] + "'");
        m.task = *task;
        const auto phase = parse_phase(row.fields[3]);
        if (!phase) throw fail("unknown phase '" + row.fields[3] + "'");
        m.phase = *phase;
        m.language = row.fields[4];
        if (row.fields[5] != "-") m.parent_run = row.fields[5];
        if (m.phase == RunPhase::FewShot && m.parent_run.empty())
            throw fail("few-shot manifest without a parent run");
        if (m.phase == RunPhase::SourceFinetune && !m.parent_run.empty())
            throw fail("fine-tune manifest must not have a parent run");
        const auto batch = tsv::parse_int(row.fields[6]);
        if (!batch || *batch <= 0) throw fail("bad batch size '" + row.fields[6] + "'");
        m.hyperparams.train_batch_size = static_cast<int>(*batch);
        const auto steps = tsv::parse_int(row.fields[7]);
        if (!steps || *steps <= 0) throw fail("bad max steps '" + row.fields[7] + "'");
        m.hyperparams.max_steps = static_cast<int>(*steps);
        if (row.fields[8] == "-")
            m.hyperparams.early_stopping = std::nullopt;
        else if (row.fields[8] == "0" || row.fields[8] == "1")
            m.hyperparams.early_stopping = row.fields[8] == "1";
        else
            throw fail("bad early stopping flag '" + row.fields[8] + "'");
        const auto lr = tsv::parse_double(row.fields[9]);
        if (!lr || *lr <= 0.0) throw fail("bad learning rate '" + row.fields[9] + "'");
        m.hyperparams.learning_rate = *lr;
        const auto seq = tsv::parse_int(row.fields[10]);
        if (!seq || *seq <= 0) throw fail("bad sequence length '" + row.fields[10] + "'");
        m.hyperparams.max_seq_len = static_cast<int>(*seq);
        const auto metric = parse_metric(row.fields[11]);
        if (!metric) throw fail("unknown metric '" + row.fields[11] + "'");
        m.hyperparams.eval_metric = *metric;
        if (!ids.insert(m.id).second) throw fail("duplicate manifest id '" + m.id + "'");
        manifests.push_back(std::move(m));
    }
    return manifests;
}

// Score bonus applied when every set predicate matches the pair's
// metadata. Languages missing from the registry match no predicate.
struct AffinityRule {
    std::optional<std::string> model;
    std::optional<ScriptRelation> script_relation;
    std::optional<bool> same_family;
    double bonus = 0.0;
};

// Stand-in for the external training system: scores are made up, but made
// up the same way every time. Difficulty dampens a language's scores;
// affinity rules reward pairs whose metadata matches; jitter (off unless
// configured) adds seed-keyed noise so scores are not artificially tied.
struct MockRunnerConfig {
    std::uint64_t seed = 0;
    double base_difficulty = 0.5;
    std::map<std::string, double> difficulty;  // per-language override
    double few_shot_gain = 0.05;
    double jitter_amplitude = 0.0;
    std::vector<AffinityRule> rules;
};

inline MockRunnerConfig load_mock_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("harness: cannot open '" + path + "'");
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("harness: '" + path + "': " + e.what());
    }
    const auto fail = [&](const std::string& why) -> ParseError {
        return ParseError("harness: '" + path + "': " + why);
    };
    if (!doc.is_object()) throw fail("top level must be an object");
    MockRunnerConfig config;
    const auto fraction = [&](const nlohmann::json& v, const char* what) -> double {
        if (!v.is_number()) throw fail(std::string(what) + " must be a number");
        const double d = v.get<double>();
        if (d < 0.0 || d > 1.0) throw fail(std::string(what) + " must lie in [0,1]");
        return d;
    };
    for (const auto& [key, value] : doc.items()) {
        if (key == "seed") {
            if (!value.is_number_unsigned()) throw fail("seed must be a non-negative integer");
            config.seed = value.get<std::uint64_t>();
        } else if (key == "base_difficulty") {
            config.base_difficulty = fraction(value, "base_difficulty");
        } else if (key == "difficulty") {
            if (!value.is_object()) throw fail("difficulty must map language to fraction");
            for (const auto& [lang, d] : value.items())
                config.difficulty.emplace(lang, fraction(d, "difficulty entry"));
        } else if (key == "few_shot_gain") {
            config.few_shot_gain = fraction(value, "few_shot_gain");
        } else if (key == "jitter_amplitude") {
            config.jitter_amplitude = fraction(value, "jitter_amplitude");
            if (config.jitter_amplitude > 0.5) throw fail("jitter_amplitude must be at most 0.5");
        } else if (key == "affinity_rules") {
            if (!value.is_array()) throw fail("affinity_rules must be an array");
            for (const auto& entry : value) {
                if (!entry.is_object()) throw fail("each affinity rule must be an object");
                AffinityRule rule;
                for (const auto& [rkey, rvalue] : entry.items()) {
                    if (rkey == "bonus") {
                        if (!rvalue.is_number()) throw fail("rule bonus must be a number");
                        rule.bonus = rvalue.get<double>();
                        if (rule.bonus < -1.0 || rule.bonus > 1.0)
                            throw fail("rule bonus must lie in [-1,1]");
                    } else if (rkey == "model") {
                        if (!rvalue.is_string()) throw fail("rule model must be a string");
                        rule.model = rvalue.get<std::string>();
                    } else if (rkey == "script_relation") {
                        if (!rvalue.is_string()) throw fail("rule script_relation must be a string");
                        const auto rel = parse_script_relation(rvalue.get<std::string>());
                        if (!rel)
                            throw fail("bad script_relation '" + rvalue.get<std::string>() + "'");
                        rule.script_relation = *rel;
                    } else if (rkey == "same_family") {
                        if (!rvalue.is_boolean()) throw fail("rule same_family must be a boolean");
                        rule.same_family = rvalue.get<bool>();
                    } else {
                        throw fail("unknown affinity rule key '" + rkey + "'");
                    }
                }
                config.rules.push_back(std::move(rule));
            }
        } else {
            throw fail("unknown config key '" + key + "'");
        }
    }
    return config;
}

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Uniform in [-amplitude, amplitude], a pure function of (seed, key).
inline double keyed_jitter(std::uint64_t seed, std::string_view key, double amplitude) {
    if (amplitude == 0.0) return 0.0;
    const std::uint64_t h = splitmix64(seed ^ fnv1a64(key));
    const double unit = static_cast<double>(h >> 11) * 0x1.0p-53;  // [0,1)
    return (2.0 * unit - 1.0) * amplitude;
}

inline double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

}  // namespace detail

// Synthesizes one zero-shot and one few-shot record per few-shot manifest,
// in manifest order. Pure function of (manifests, config, registry
// metadata): no clocks, no global RNG state.
inline std::vector<EvalRecord> mock_run(const std::vector<RunManifest>& manifests,
                                        const MockRunnerConfig& config, const Registry& registry) {
    std::map<std::string, const RunManifest*> by_id;
    for (const auto& m : manifests) by_id.emplace(m.id, &m);

    const auto difficulty_of = [&](const std::string& lang) {
        const auto it = config.difficulty.find(lang);
        return it == config.difficulty.end() ? config.base_difficulty : it->second;
    };

    std::vector<EvalRecord> records;
    for (const auto& m : manifests) {
        if (m.phase != RunPhase::FewShot) continue;
        const auto parent = by_id.find(m.parent_run);
        if (parent == by_id.end())
            throw DomainError("harness: manifest '" + m.id + "' references missing parent '" +
                              m.parent_run + "'");
        const std::string& source = parent->second->language;
        const std::string& target = m.language;

        double bonus = 0.0;
        const LanguageRecord* src_rec = registry.find(source);
        const LanguageRecord* tgt_rec = registry.find(target);
        for (const auto& rule : config.rules) {
            if (rule.model && *rule.model != m.model) continue;
            if (rule.script_relation || rule.same_family) {
                if (!src_rec || !tgt_rec) continue;
                if (rule.script_relation &&
                    registry.script_relations().lookup(src_rec->script, tgt_rec->script).relation !=
                        *rule.script_relation)
                    continue;
                if (rule.same_family && (src_rec->family == tgt_rec->family) != *rule.same_family)
                    continue;
            }
            bonus += rule.bonus;
        }

        const double base = 1.0 - difficulty_of(target);
        const double zero = detail::clamp01(
            base + 0.5 * bonus +
            detail::keyed_jitter(config.seed, m.id + ":zero", config.jitter_amplitude));
        const double few = detail::clamp01(
            base + bonus + config.few_shot_gain +
            detail::keyed_jitter(config.seed, m.id + ":few", config.jitter_amplitude));

        EvalRecord zero_rec;
        zero_rec.key = {m.model, m.task, source, target, 0};
        zero_rec.metric = metric_for(m.task);
        zero_rec.score = zero;
        records.push_back(std::move(zero_rec));

        EvalRecord few_rec;
        few_rec.key = {m.model, m.task, source, target, m.hyperparams.max_steps};
        few_rec.metric = metric_for(m.task);
        few_rec.score = few;
        records.push_back(std::move(few_rec));
    }
    return records;
}

}  // namespace lqkit

#endif
