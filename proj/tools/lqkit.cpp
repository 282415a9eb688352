// Command-line front end: ingest scores, compute and analyze transfer
// quotients, recommend model classes, generate experiment manifests, run
// the mock scorer, and render report tables.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lqkit/analysis.hpp"
#include "lqkit/harness.hpp"
#include "lqkit/lq.hpp"
#include "lqkit/recommend.hpp"
#include "lqkit/registry.hpp"
#include "lqkit/report.hpp"
#include "lqkit/scores.hpp"
#include "lqkit/tsv.hpp"
#include "lqkit/types.hpp"

namespace {

using namespace lqkit;

// Shared flag bundles -------------------------------------------------------

struct ScoreArgs {
    std::vector<std::string> files;
    bool percent = false;
};

void add_score_args(CLI::App& cmd, ScoreArgs& args, bool required = true) {
    auto* opt = cmd.add_option("--scores", args.files, "score file(s) to load");
    if (required) opt->required();
    cmd.add_flag("--percent", args.percent, "score column is 0-100 instead of 0-1");
}

ScoreStore load_scores(const ScoreArgs& args) {
    ScoreStore store;
    for (const auto& file : args.files) import_results(store, file, args.percent);
    return store;
}

struct RegistryArg {
    std::string path;
};

void add_registry_arg(CLI::App& cmd, RegistryArg& arg) {
    cmd.add_option("--registry", arg.path, "language registry file")
        ->envname("LQKIT_REGISTRY");
}

Registry load_registry_checked(const RegistryArg& arg, const std::string& relations_path) {
    if (arg.path.empty())
        throw Error("cli: no registry file; pass --registry or set LQKIT_REGISTRY");
    Registry registry = load_registry(arg.path);
    if (!relations_path.empty()) registry.set_script_relations(load_script_relations(relations_path));
    return registry;
}

struct MetricArgs {
    std::string model;
    std::string task_str = "pos";
    int steps = 10;
    double epsilon = kDefaultEpsilon;
    std::vector<std::string> sources;
};

void add_metric_args(CLI::App& cmd, MetricArgs& args, bool model_required = true) {
    auto* model = cmd.add_option("--model", args.model, "model id");
    if (model_required) model->required();
    cmd.add_option("--task", args.task_str, "task: pos, dep, or ner")
        ->default_val(std::string("pos"));
    cmd.add_option("--steps", args.steps, "few-shot adaptation steps (c)")
        ->default_val(10)
        ->check(CLI::NonNegativeNumber);
    cmd.add_option("--epsilon", args.epsilon, "quotient denominator guard")
        ->default_val(kDefaultEpsilon)
        ->check(CLI::NonNegativeNumber);
    cmd.add_option("--sources", args.sources,
                   "source set for the zero-shot average (default: every source the "
                   "loaded scores mention for this model and task)")
        ->delimiter(',');
}

// Quotients are defined for an adaptation budget of at least one step;
// raw-score report shapes may still ask for the steps=0 block.
void require_positive_steps(const MetricArgs& args) {
    if (args.steps <= 0) throw Error("cli: --steps must be positive when computing quotients");
}

Task parse_task_checked(const std::string& s) {
    const auto task = parse_task(s);
    if (!task) throw Error("cli: unknown task '" + s + "'");
    return *task;
}

Scale parse_scale_checked(const std::string& s) {
    const auto scale = parse_scale(s);
    if (!scale) throw Error("cli: unknown scale '" + s + "'");
    return *scale;
}

// Distinct sources/targets with a record for (model, task), in the order
// the score files first mentioned them. Keeps rendered tables in the same
// layout as the ingested data.
std::vector<std::string> sources_present(const ScoreStore& store, const std::string& model,
                                         Task task) {
    std::set<std::string> present;
    for (const auto& [key, rec] : store.records())
        if (key.model == model && key.task == task) present.insert(key.source);
    std::vector<std::string> out;
    for (const auto& source : store.sources_seen())
        if (present.contains(source)) out.push_back(source);
    return out;
}

std::vector<std::string> targets_present(const ScoreStore& store, const std::string& model,
                                         Task task) {
    std::set<std::string> present;
    for (const auto& [key, rec] : store.records())
        if (key.model == model && key.task == task) present.insert(key.target);
    std::vector<std::string> out;
    for (const auto& target : store.targets_seen())
        if (present.contains(target)) out.push_back(target);
    return out;
}

std::vector<std::string> resolve_sources(const ScoreStore& store, const MetricArgs& args,
                                         Task task) {
    if (!args.sources.empty()) return args.sources;
    std::vector<std::string> sources = sources_present(store, args.model, task);
    if (sources.empty())
        throw Error("cli: no scores for model '" + args.model + "' on task '" +
                    std::string(task_name(task)) + "'");
    return sources;
}

void write_text(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cli: cannot open '" + out_path + "' for writing");
    out << text;
    out.flush();
    if (!out) throw Error("cli: failed writing '" + out_path + "'");
}

std::vector<LqResult> load_published_filtered(const std::string& path, const std::string& model,
                                              std::optional<Task> task, std::optional<int> steps) {
    std::vector<LqResult> all = load_published_lq(path);
    std::vector<LqResult> out;
    for (auto& res : all) {
        if (!model.empty() && res.model != model) continue;
        if (task && res.task != *task) continue;
        if (steps && res.steps != *steps) continue;
        out.push_back(std::move(res));
    }
    if (out.empty()) throw Error("cli: no rows in '" + path + "' match the given filters");
    return out;
}

// Subcommands ----------------------------------------------------------------

int cmd_ingest(const ScoreArgs& score_args, const std::string& out_path) {
    ScoreStore store;
    std::size_t accepted = 0, rejected = 0;
    std::string diagnostics;
    for (const auto& file : score_args.files) {
        const IngestReport report = ingest_file(store, file, score_args.percent);
        accepted += report.accepted;
        rejected += report.rejected.size();
        for (const auto& rej : report.rejected)
            diagnostics += file + " line " + std::to_string(rej.line) + ": rejected: " +
                           rej.reason + "\n";
    }
    std::string summary = diagnostics + "accepted " + std::to_string(accepted) + ", rejected " +
                          std::to_string(rejected) + "\n";
    std::cout << summary;
    if (!out_path.empty()) {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw Error("cli: cannot open '" + out_path + "' for writing");
        export_scores(store, out);
    }
    return 0;
}

int cmd_validate(const ScoreArgs& score_args) {
    ScoreStore store;
    std::size_t total = 0;
    for (const auto& file : score_args.files) total += import_results(store, file, score_args.percent);
    std::cout << "ok: " << total << " records\n";
    return 0;
}

int cmd_lq(const ScoreArgs& score_args, const MetricArgs& metric_args, const std::string& source,
           const std::string& target, const std::string& scale_str) {
    require_positive_steps(metric_args);
    const Task task = parse_task_checked(metric_args.task_str);
    const ScoreStore store = load_scores(score_args);
    const std::vector<std::string> sources = resolve_sources(store, metric_args, task);
    const LqResult result = lq_for_pair(store, metric_args.model, task, sources, source, target,
                                        metric_args.steps, metric_args.epsilon);
    const double factor = parse_scale_checked(scale_str) == Scale::Percent ? 100.0 : 1.0;
    const LqInputs& in = *result.inputs;
    std::cout << "lq = " << tsv::format_double(result.lq * factor) << " (" << scale_str << " scale)\n"
              << "  few_shot = " << tsv::format_double(in.few_shot * factor)
              << ", zero_shot = " << tsv::format_double(in.zero_shot * factor)
              << ", zero_shot_avg = " << tsv::format_double(in.zero_shot_avg * factor) << "\n"
              << "  coverage " << *result.coverage << "/" << sources.size() << " sources\n";
    return 0;
}

int cmd_rank(const ScoreArgs& score_args, const MetricArgs& metric_args,
             const std::string& published, const std::string& direction,
             const std::string& fixed, const std::string& scale_str, const std::string& out_path) {
    require_positive_steps(metric_args);
    const Task task = parse_task_checked(metric_args.task_str);
    if (direction != "targets" && direction != "sources")
        throw Error("cli: --direction must be 'targets' or 'sources'");
    LqMatrix matrix;
    if (!published.empty()) {
        matrix = matrix_from_results(
            load_published_filtered(published, metric_args.model, task, metric_args.steps));
    } else {
        if (score_args.files.empty())
            throw Error("cli: rank needs --scores or --published");
        const ScoreStore store = load_scores(score_args);
        const std::vector<std::string> sources = resolve_sources(store, metric_args, task);
        matrix = compute_lq_matrix(store, metric_args.model, task, sources,
                                   targets_present(store, metric_args.model, task),
                                   metric_args.steps, metric_args.epsilon);
    }
    const RankedList list =
        direction == "targets" ? rank_targets(matrix, fixed) : rank_sources(matrix, fixed);
    TableSpec spec = table_spec(TableShape::SourceToTargets, parse_scale_checked(scale_str));
    write_text(render_ranked_list(list, spec), out_path);
    return 0;
}

int cmd_compare(const ScoreArgs& score_args, const std::string& published,
                const std::vector<std::string>& models, const MetricArgs& metric_args,
                const std::string& source, const std::string& target,
                const std::string& scale_str, const std::string& out_path) {
    require_positive_steps(metric_args);
    const Task task = parse_task_checked(metric_args.task_str);
    std::vector<LqResult> results;
    if (!published.empty()) {
        for (auto& res : load_published_filtered(published, "", task, metric_args.steps))
            if (res.source == source && res.target == target) results.push_back(std::move(res));
    } else {
        if (score_args.files.empty() || models.empty())
            throw Error("cli: compare needs --published, or --scores with --models");
        const ScoreStore store = load_scores(score_args);
        for (const auto& model : models) {
            MetricArgs per_model = metric_args;
            per_model.model = model;
            const std::vector<std::string> sources = resolve_sources(store, per_model, task);
            results.push_back(lq_for_pair(store, model, task, sources, source, target,
                                          metric_args.steps, metric_args.epsilon));
        }
    }
    const ModelComparison comparison = model_compare(results);
    TableSpec spec = table_spec(TableShape::PairModelComparison, parse_scale_checked(scale_str));
    write_text(render_model_comparison(comparison, spec), out_path);
    return 0;
}

int cmd_group(const ScoreArgs& score_args, const MetricArgs& metric_args,
              const std::string& published, const RegistryArg& registry_arg,
              const std::string& relations_path, const std::string& source,
              const std::string& scale_str, const std::string& out_path) {
    require_positive_steps(metric_args);
    const Task task = parse_task_checked(metric_args.task_str);
    const Registry registry = load_registry_checked(registry_arg, relations_path);
    LqMatrix matrix;
    if (!published.empty()) {
        matrix = matrix_from_results(
            load_published_filtered(published, metric_args.model, task, metric_args.steps));
    } else {
        if (score_args.files.empty())
            throw Error("cli: group needs --scores or --published");
        const ScoreStore store = load_scores(score_args);
        const std::vector<std::string> sources = resolve_sources(store, metric_args, task);
        matrix = compute_lq_matrix(store, metric_args.model, task, sources,
                                   targets_present(store, metric_args.model, task),
                                   metric_args.steps, metric_args.epsilon);
    }
    const GroupComparison comparison = group_by_script(matrix, registry, source);
    TableSpec spec = table_spec(TableShape::GroupBars, parse_scale_checked(scale_str));
    write_text(render_group_comparison(comparison, spec), out_path);
    return 0;
}

int cmd_correlate(const ScoreArgs& score_args, const MetricArgs& metric_args,
                  const std::string& lexical_path, const std::string& source,
                  const std::string& method) {
    require_positive_steps(metric_args);
    const Task task = parse_task_checked(metric_args.task_str);
    if (method != "spearman" && method != "pearson")
        throw Error("cli: --method must be 'spearman' or 'pearson'");
    const ScoreStore store = load_scores(score_args);
    const std::vector<std::string> sources = resolve_sources(store, metric_args, task);
    const LqMatrix matrix = compute_lq_matrix(store, metric_args.model, task, sources,
                                              targets_present(store, metric_args.model, task),
                                              metric_args.steps, metric_args.epsilon);
    const LexicalSimilarityMatrix lexical = load_lexical_similarity(lexical_path);
    const CorrelationResult result = correlate_lexical(
        matrix, lexical, source,
        method == "spearman" ? CorrelationKind::Spearman : CorrelationKind::Pearson);
    std::cout << method << " = " << tsv::format_double(result.value) << " over " << result.n_pairs
              << " pairs\n";
    return 0;
}

std::optional<bool> parse_yesno(const std::string& s) {
    const std::string v = ascii_lower(s);
    if (v == "yes" || v == "true" || v == "1") return true;
    if (v == "no" || v == "false" || v == "0") return false;
    return std::nullopt;
}

bool parse_yesno_checked(const std::string& s, const char* flag) {
    const auto v = parse_yesno(s);
    if (!v) throw Error(std::string("cli: ") + flag + " must be yes or no, got '" + s + "'");
    return *v;
}

int cmd_recommend(const RegistryArg& registry_arg, const std::string& relations_path,
                  const std::string& target, const std::string& task_str,
                  const std::string& resource, const std::string& visual,
                  const std::string& related, const std::string& semantic,
                  const std::string& seen, const std::string& order_str) {
    BranchOrder order = BranchOrder::UnseenBeforeVisual;
    if (order_str == "visual-first")
        order = BranchOrder::VisualBeforeUnseen;
    else if (order_str != "unseen-first")
        throw Error("cli: --order must be 'unseen-first' or 'visual-first'");

    RecommendationQuery query;
    if (!target.empty()) {
        const Registry registry = load_registry_checked(registry_arg, relations_path);
        const SuggestedQuery suggested =
            suggest_query(registry, target, parse_task_checked(task_str));
        query = suggested.query;
        std::cout << "query prefilled for target '" << target << "':\n";
        std::cout << "  resource = " << resource_class_name(query.target_resource) << "\n";
        std::cout << "  visually similar high-resource candidates:";
        if (suggested.assist.visually_similar_candidates.empty()) std::cout << " none";
        for (const auto& c : suggested.assist.visually_similar_candidates) std::cout << ' ' << c;
        std::cout << "\n  related covered candidates:";
        if (suggested.assist.related_covered_candidates.empty()) std::cout << " none";
        for (const auto& c : suggested.assist.related_covered_candidates) std::cout << ' ' << c;
        std::cout << "\n";
    } else if (resource.empty()) {
        throw Error("cli: recommend needs --target, or explicit query flags (--resource ...)");
    }
    if (!resource.empty()) {
        const std::string v = ascii_lower(resource);
        const auto klass = parse_resource_class(v);
        if (!klass) throw Error("cli: --resource must be 'high' or 'low'");
        query.target_resource = *klass;
    }
    if (!visual.empty())
        query.visually_similar_high_resource_exists = parse_yesno_checked(visual, "--visual-similar");
    if (!related.empty())
        query.related_high_resource_in_pretraining =
            parse_yesno_checked(related, "--related-pretrained");
    if (!semantic.empty()) {
        const std::string v = ascii_lower(semantic);
        if (v == "high")
            query.semantic_dependency = SemanticDependency::High;
        else if (v == "low")
            query.semantic_dependency = SemanticDependency::Low;
        else
            throw Error("cli: --semantic must be 'high' or 'low'");
    }
    if (!seen.empty())
        query.source_seen_in_pretraining = parse_yesno_checked(seen, "--seen-pretraining");

    std::cout << render_recommendation(recommend(query, order));
    return 0;
}

int cmd_manifest(const std::vector<std::string>& models, const std::vector<std::string>& tasks,
                 const std::vector<std::string>& sources, const std::vector<std::string>& targets,
                 int steps, const std::string& out_path) {
    std::vector<Task> parsed_tasks;
    for (const auto& t : tasks) parsed_tasks.push_back(parse_task_checked(t));
    const std::vector<RunManifest> manifests =
        generate_manifests(models, parsed_tasks, sources, targets, steps);
    if (out_path.empty()) {
        write_manifests(manifests, std::cout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw Error("cli: cannot open '" + out_path + "' for writing");
        write_manifests(manifests, out);
    }
    std::cout << "generated " << manifests.size() << " manifests\n";
    return 0;
}

int cmd_mock(const std::string& manifests_path, const std::string& config_path,
             const RegistryArg& registry_arg, const std::string& relations_path,
             const std::string& out_path) {
    const std::vector<RunManifest> manifests = load_manifests(manifests_path);
    const MockRunnerConfig config = load_mock_config(config_path);
    const Registry registry = load_registry_checked(registry_arg, relations_path);
    const std::vector<EvalRecord> records = mock_run(manifests, config, registry);
    ScoreStore store;
    for (const auto& rec : records) store.add(rec);
    if (out_path.empty()) {
        export_scores(store, std::cout);
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw Error("cli: cannot open '" + out_path + "' for writing");
        export_scores(store, out);
    }
    std::cout << "mock run produced " << records.size() << " records\n";
    return 0;
}

int cmd_report(const std::string& shape_str, const ScoreArgs& score_args,
               const MetricArgs& metric_args, const std::string& published,
               const RegistryArg& registry_arg, const std::string& relations_path,
               const std::vector<std::string>& models, const std::string& source,
               const std::string& target, const std::vector<std::string>& targets_opt,
               const std::string& scale_str, int precision, const std::string& out_path,
               const std::string& plot_path) {
    const Scale scale = parse_scale_checked(scale_str);
    const Task task = parse_task_checked(metric_args.task_str);

    const auto require_model = [&]() {
        if (metric_args.model.empty())
            throw Error("cli: report " + shape_str + " needs --model");
    };
    const auto computed_matrix = [&]() {
        require_positive_steps(metric_args);
        const ScoreStore store = load_scores(score_args);
        const std::vector<std::string> sources = resolve_sources(store, metric_args, task);
        const std::vector<std::string> targets =
            targets_opt.empty() ? targets_present(store, metric_args.model, task) : targets_opt;
        return compute_lq_matrix(store, metric_args.model, task, sources, targets,
                                 metric_args.steps, metric_args.epsilon);
    };
    const auto finish_spec = [&](TableShape shape) {
        TableSpec spec = table_spec(shape, scale);
        if (precision > 0) spec.precision = precision;
        return spec;
    };

    if (shape_str == "matrix") {
        require_model();
        const ScoreStore store = load_scores(score_args);
        const std::vector<std::string> sources = resolve_sources(store, metric_args, task);
        const std::vector<std::string> targets =
            targets_opt.empty() ? targets_present(store, metric_args.model, task) : targets_opt;
        const ScoreGrid grid = make_score_grid(store, metric_args.model, task, sources, targets,
                                               metric_args.steps);
        write_text(render_score_grid(grid, finish_spec(TableShape::ZeroFewMatrix)), out_path);
        return 0;
    }
    if (shape_str == "fewshot") {
        if (models.empty()) throw Error("cli: report fewshot needs --models");
        const ScoreStore store = load_scores(score_args);
        std::vector<std::string> targets = targets_opt;
        if (targets.empty()) {
            std::set<std::string> present;
            for (const auto& [key, rec] : store.records())
                if (key.task == task && key.source == source && key.steps == metric_args.steps)
                    present.insert(key.target);
            for (const auto& t : store.targets_seen())
                if (present.contains(t)) targets.push_back(t);
        }
        const FewShotTable table =
            make_few_shot_table(store, task, source, models, targets, metric_args.steps);
        write_text(render_few_shot_table(table, finish_spec(TableShape::FewShotAccuracy)),
                   out_path);
        return 0;
    }
    if (shape_str == "comparison") {
        if (published.empty()) throw Error("cli: report comparison needs --published");
        std::vector<LqResult> results;
        for (auto& res : load_published_filtered(published, "", task, metric_args.steps))
            if (res.source == source && res.target == target) results.push_back(std::move(res));
        write_text(render_model_comparison(model_compare(results),
                                           finish_spec(TableShape::PairModelComparison)),
                   out_path);
        return 0;
    }
    if (shape_str == "group") {
        require_model();
        const Registry registry = load_registry_checked(registry_arg, relations_path);
        const GroupComparison comparison = group_by_script(computed_matrix(), registry, source);
        write_text(render_group_comparison(comparison, finish_spec(TableShape::GroupBars)),
                   out_path);
        if (!plot_path.empty()) {
            std::vector<std::pair<std::string, double>> series;
            if (comparison.same_script.mean)
                series.emplace_back("same-script", *comparison.same_script.mean);
            if (comparison.different_script.mean)
                series.emplace_back("different-script", *comparison.different_script.mean);
            emit_plot_data(series, plot_path);
        }
        return 0;
    }
    if (shape_str == "source-averages") {
        require_model();
        const std::map<std::string, double> averages = average_lq_by_source(computed_matrix());
        write_text(render_source_averages(averages, finish_spec(TableShape::SourceAverages)),
                   out_path);
        if (!plot_path.empty()) {
            std::vector<std::pair<std::string, double>> series(averages.begin(), averages.end());
            emit_plot_data(series, plot_path);
        }
        return 0;
    }
    throw Error("cli: unknown report shape '" + shape_str +
                "'; expected matrix, fewshot, comparison, group, or source-averages");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transfer-quotient toolkit"};
    app.require_subcommand(1);
    app.failure_message(CLI::FailureMessage::help);

    // ingest
    auto* ingest = app.add_subcommand("ingest", "load score files leniently, report rejects");
    ScoreArgs ingest_scores;
    std::string ingest_out;
    add_score_args(*ingest, ingest_scores);
    ingest->add_option("--out", ingest_out, "write the merged store to this file");

    // validate
    auto* validate = app.add_subcommand("validate", "load score files strictly");
    ScoreArgs validate_scores;
    add_score_args(*validate, validate_scores);

    // lq
    auto* lq = app.add_subcommand("lq", "quotient for one source->target pair");
    ScoreArgs lq_scores;
    MetricArgs lq_metric;
    std::string lq_source, lq_target, lq_scale = "fraction";
    add_score_args(*lq, lq_scores);
    add_metric_args(*lq, lq_metric);
    lq->add_option("--source", lq_source, "source language")->required();
    lq->add_option("--target", lq_target, "target language")->required();
    lq->add_option("--scale", lq_scale, "fraction or percent")->default_val(std::string("fraction"));

    // rank
    auto* rank = app.add_subcommand("rank", "rank targets (or sources) by quotient");
    ScoreArgs rank_scores;
    MetricArgs rank_metric;
    std::string rank_published, rank_direction = "targets", rank_fixed, rank_scale = "percent",
                rank_out;
    add_score_args(*rank, rank_scores, false);
    add_metric_args(*rank, rank_metric);
    rank->add_option("--published", rank_published, "ranked quotients from a published file");
    rank->add_option("--direction", rank_direction, "targets or sources")
        ->default_val(std::string("targets"));
    rank->add_option("--fixed", rank_fixed, "the language held fixed")->required();
    rank->add_option("--scale", rank_scale, "fraction or percent")->default_val(std::string("percent"));
    rank->add_option("--out", rank_out, "write the table to this file");

    // compare
    auto* compare = app.add_subcommand("compare", "models side by side on one pair");
    ScoreArgs compare_scores;
    MetricArgs compare_metric;
    std::vector<std::string> compare_models;
    std::string compare_published, compare_source, compare_target, compare_scale = "percent",
                compare_out;
    add_score_args(*compare, compare_scores, false);
    compare->add_option("--models", compare_models, "models to compare (computed mode)")
        ->delimiter(',');
    compare->add_option("--task", compare_metric.task_str, "task: pos, dep, or ner")
        ->default_val(std::string("pos"));
    compare->add_option("--steps", compare_metric.steps, "few-shot adaptation steps (c)")
        ->default_val(10)
        ->check(CLI::PositiveNumber);
    compare->add_option("--epsilon", compare_metric.epsilon, "quotient denominator guard")
        ->default_val(kDefaultEpsilon)
        ->check(CLI::NonNegativeNumber);
    compare->add_option("--sources", compare_metric.sources, "source set override")->delimiter(',');
    compare->add_option("--published", compare_published, "published quotient file");
    compare->add_option("--source", compare_source, "source language")->required();
    compare->add_option("--target", compare_target, "target language")->required();
    compare->add_option("--scale", compare_scale, "fraction or percent")
        ->default_val(std::string("percent"));
    compare->add_option("--out", compare_out, "write the table to this file");

    // group
    auto* group = app.add_subcommand("group", "same-script vs different-script quotients");
    ScoreArgs group_scores;
    MetricArgs group_metric;
    RegistryArg group_registry;
    std::string group_published, group_relations, group_source, group_scale = "percent", group_out;
    add_score_args(*group, group_scores, false);
    add_metric_args(*group, group_metric);
    add_registry_arg(*group, group_registry);
    group->add_option("--relations", group_relations, "script-relation file");
    group->add_option("--published", group_published, "published quotient file");
    group->add_option("--source", group_source, "source language")->required();
    group->add_option("--scale", group_scale, "fraction or percent")->default_val(std::string("percent"));
    group->add_option("--out", group_out, "write the table to this file");

    // correlate
    auto* correlate = app.add_subcommand("correlate", "quotients vs lexical similarity");
    ScoreArgs correlate_scores;
    MetricArgs correlate_metric;
    std::string correlate_lexical_path, correlate_source, correlate_method = "spearman";
    add_score_args(*correlate, correlate_scores);
    add_metric_args(*correlate, correlate_metric);
    correlate->add_option("--lexical", correlate_lexical_path, "lexical similarity file")
        ->required();
    correlate->add_option("--source", correlate_source, "source language")->required();
    correlate->add_option("--method", correlate_method, "spearman or pearson")
        ->default_val(std::string("spearman"));

    // recommend
    auto* recommend_cmd = app.add_subcommand("recommend", "model class for a transfer scenario");
    RegistryArg recommend_registry;
    std::string rec_target, rec_task = "pos", rec_resource, rec_visual, rec_related, rec_semantic,
                rec_seen, rec_order = "unseen-first", rec_relations;
    add_registry_arg(*recommend_cmd, recommend_registry);
    recommend_cmd->add_option("--relations", rec_relations, "script-relation file");
    recommend_cmd->add_option("--target", rec_target, "prefill the query for this language");
    recommend_cmd->add_option("--task", rec_task, "task for prefilling")
        ->default_val(std::string("pos"));
    recommend_cmd->add_option("--resource", rec_resource, "target resource class: high or low");
    recommend_cmd->add_option("--visual-similar", rec_visual,
                              "visually similar high-resource language exists: yes or no");
    recommend_cmd->add_option("--related-pretrained", rec_related,
                              "related high-resource language in pretraining: yes or no");
    recommend_cmd->add_option("--semantic", rec_semantic, "task semantic dependency: high or low");
    recommend_cmd->add_option("--seen-pretraining", rec_seen,
                              "target covered by multilingual pretraining: yes or no");
    recommend_cmd->add_option("--order", rec_order, "unseen-first or visual-first")
        ->default_val(std::string("unseen-first"));

    // manifest
    auto* manifest = app.add_subcommand("manifest", "emit experiment run manifests");
    std::vector<std::string> man_models, man_tasks, man_sources, man_targets;
    int man_steps = 10;
    std::string man_out;
    manifest->add_option("--models", man_models, "model ids")->required()->delimiter(',');
    manifest->add_option("--tasks", man_tasks, "tasks")->required()->delimiter(',');
    manifest->add_option("--sources", man_sources, "source languages")->required()->delimiter(',');
    manifest->add_option("--targets", man_targets, "target languages")->required()->delimiter(',');
    manifest->add_option("--steps", man_steps, "few-shot adaptation steps (c)")
        ->default_val(10)
        ->check(CLI::PositiveNumber);
    manifest->add_option("--out", man_out, "write manifests to this file");

    // mock
    auto* mock = app.add_subcommand("mock", "synthesize scores for a manifest file");
    RegistryArg mock_registry;
    std::string mock_manifests, mock_config, mock_relations, mock_out;
    mock->add_option("--manifests", mock_manifests, "manifest file")->required();
    mock->add_option("--config", mock_config, "mock runner config (JSON)")->required();
    add_registry_arg(*mock, mock_registry);
    mock->add_option("--relations", mock_relations, "script-relation file");
    mock->add_option("--out", mock_out, "write scores to this file");

    // report
    auto* report = app.add_subcommand("report", "render a table");
    ScoreArgs report_scores;
    MetricArgs report_metric;
    RegistryArg report_registry;
    std::vector<std::string> report_models, report_targets;
    std::string report_shape, report_published, report_relations, report_source, report_target,
                report_scale = "percent", report_out, report_plot;
    int report_precision = 0;
    report->add_option("--shape", report_shape,
                       "matrix, fewshot, comparison, group, or source-averages")
        ->required();
    add_score_args(*report, report_scores, false);
    add_metric_args(*report, report_metric, false);
    add_registry_arg(*report, report_registry);
    report->add_option("--relations", report_relations, "script-relation file");
    report->add_option("--published", report_published, "published quotient file");
    report->add_option("--models", report_models, "models for the fewshot shape")->delimiter(',');
    report->add_option("--source", report_source, "source language");
    report->add_option("--target", report_target, "target language");
    report->add_option("--targets", report_targets, "target order override")->delimiter(',');
    report->add_option("--scale", report_scale, "fraction or percent")
        ->default_val(std::string("percent"));
    report->add_option("--precision", report_precision, "decimal places")->check(CLI::PositiveNumber);
    report->add_option("--out", report_out, "write the table to this file");
    report->add_option("--plot-out", report_plot, "also write label/value plot data here");

    CLI11_PARSE(app, argc, argv);

    try {
        if (ingest->parsed()) return cmd_ingest(ingest_scores, ingest_out);
        if (validate->parsed()) return cmd_validate(validate_scores);
        if (lq->parsed()) return cmd_lq(lq_scores, lq_metric, lq_source, lq_target, lq_scale);
        if (rank->parsed())
            return cmd_rank(rank_scores, rank_metric, rank_published, rank_direction, rank_fixed,
                            rank_scale, rank_out);
        if (compare->parsed())
            return cmd_compare(compare_scores, compare_published, compare_models, compare_metric,
                               compare_source, compare_target, compare_scale, compare_out);
        if (group->parsed())
            return cmd_group(group_scores, group_metric, group_published, group_registry,
                             group_relations, group_source, group_scale, group_out);
        if (correlate->parsed())
            return cmd_correlate(correlate_scores, correlate_metric, correlate_lexical_path,
                                 correlate_source, correlate_method);
        if (recommend_cmd->parsed())
            return cmd_recommend(recommend_registry, rec_relations, rec_target, rec_task,
                                 rec_resource, rec_visual, rec_related, rec_semantic, rec_seen,
                                 rec_order);
        if (manifest->parsed())
            return cmd_manifest(man_models, man_tasks, man_sources, man_targets, man_steps,
                                man_out);
        if (mock->parsed())
            return cmd_mock(mock_manifests, mock_config, mock_registry, mock_relations, mock_out);
        if (report->parsed())
            return cmd_report(report_shape, report_scores, report_metric, report_published,
                              report_registry, report_relations, report_models, report_source,
                              report_target, report_targets, report_scale, report_precision,
                              report_out, report_plot);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::cerr << "error: no subcommand\n";
    return 1;
}
