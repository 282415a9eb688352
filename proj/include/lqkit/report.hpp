#ifndef LQKIT_REPORT_HPP
#define LQKIT_REPORT_HPP

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "lqkit/analysis.hpp"
#include "lqkit/lq.hpp"
#include "lqkit/recommend.hpp"
#include "lqkit/scores.hpp"
#include "lqkit/types.hpp"

namespace lqkit {

enum class TableShape {
    PairModelComparison,  // one transfer pair, one row per model
    SourceToTargets,      // one fixed language, ranked rows
    FewShotAccuracy,      // targets x models, raw few-shot scores
    ZeroFewMatrix,        // targets x sources, raw scores at one step count
    GroupBars,            // script-group summary rows
    SourceAverages,       // per-source mean quotient rows
};

enum class Scale { Fraction, Percent };

inline std::string_view scale_name(Scale s) { return s == Scale::Fraction ? "fraction" : "percent"; }

inline std::optional<Scale> parse_scale(std::string_view s) {
    const std::string v = ascii_lower(s);
    if (v == "fraction") return Scale::Fraction;
    if (v == "percent") return Scale::Percent;
    return std::nullopt;
}

struct TableSpec {
    TableShape shape = TableShape::ZeroFewMatrix;
    Scale scale = Scale::Percent;
    int precision = 1;
};

// Percent prints match the one-decimal style of score tables; fraction
// prints keep three decimals.
inline TableSpec table_spec(TableShape shape, Scale scale = Scale::Percent) {
    return {shape, scale, scale == Scale::Percent ? 1 : 3};
}

namespace detail {

inline void check_spec(const TableSpec& spec, TableShape expected, const char* what) {
    if (spec.shape != expected)
        throw DomainError(std::string("report: table spec shape does not fit ") + what);
    if (spec.precision < 1) throw DomainError("report: precision must be at least 1");
}

// Fixed-point decimal at the requested scale. A value that rounds to zero
// prints without a sign, so tiny negatives do not render as "-0.0".
inline std::string format_scaled(double value, const TableSpec& spec) {
    const double scaled = spec.scale == Scale::Percent ? value * 100.0 : value;
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", spec.precision, scaled);
    std::string text(buf);
    if (text.find_first_of("123456789") == std::string::npos && text.front() == '-')
        text.erase(0, 1);
    return text;
}

inline std::string markdown_row(const std::vector<std::string>& cells) {
    std::string row = "|";
    for (const auto& cell : cells) {
        row += ' ';
        row += cell;
        row += " |";
    }
    row += '\n';
    return row;
}

inline std::string markdown_separator(std::size_t columns) {
    std::string row = "|";
    for (std::size_t i = 0; i < columns; ++i) row += "---|";
    row += '\n';
    return row;
}

}  // namespace detail

// Raw score grid for one model, task, and step count: rows are targets,
// columns are sources, missing pairs have no cell.
struct ScoreGrid {
    std::string model;
    Task task = Task::Pos;
    int steps = 0;
    std::vector<std::string> sources;
    std::vector<std::string> targets;
    std::map<std::pair<std::string, std::string>, double> cells;  // (source, target)
};

inline ScoreGrid make_score_grid(const ScoreStore& store, const std::string& model, Task task,
                                 const std::vector<std::string>& sources,
                                 const std::vector<std::string>& targets, int steps) {
    ScoreGrid grid;
    grid.model = model;
    grid.task = task;
    grid.steps = steps;
    grid.sources = sources;
    grid.targets = targets;
    for (const auto& source : sources)
        for (const auto& target : targets)
            if (const auto score = store.get({model, task, source, target, steps}))
                grid.cells.emplace(std::make_pair(source, target), *score);
    return grid;
}

inline std::string render_score_grid(const ScoreGrid& grid, const TableSpec& spec) {
    detail::check_spec(spec, TableShape::ZeroFewMatrix, "a score grid");
    std::vector<std::string> header = {"target"};
    header.insert(header.end(), grid.sources.begin(), grid.sources.end());
    std::string out = detail::markdown_row(header) + detail::markdown_separator(header.size());
    for (const auto& target : grid.targets) {
        std::vector<std::string> cells = {target};
        for (const auto& source : grid.sources) {
            const auto it = grid.cells.find({source, target});
            cells.push_back(it == grid.cells.end() ? "-" : detail::format_scaled(it->second, spec));
        }
        out += detail::markdown_row(cells);
    }
    return out;
}

// Raw few-shot scores for one source and task: rows are targets, columns
// are models.
struct FewShotTable {
    Task task = Task::Pos;
    std::string source;
    int steps = 0;
    std::vector<std::string> models;
    std::vector<std::string> targets;
    std::map<std::pair<std::string, std::string>, double> cells;  // (model, target)
};

inline FewShotTable make_few_shot_table(const ScoreStore& store, Task task,
                                        const std::string& source,
                                        const std::vector<std::string>& models,
                                        const std::vector<std::string>& targets, int steps) {
    FewShotTable table;
    table.task = task;
    table.source = source;
    table.steps = steps;
    table.models = models;
    table.targets = targets;
    for (const auto& model : models)
        for (const auto& target : targets)
            if (const auto score = store.get({model, task, source, target, steps}))
                table.cells.emplace(std::make_pair(model, target), *score);
    return table;
}

inline std::string render_few_shot_table(const FewShotTable& table, const TableSpec& spec) {
    detail::check_spec(spec, TableShape::FewShotAccuracy, "a few-shot table");
    std::vector<std::string> header = {"target"};
    header.insert(header.end(), table.models.begin(), table.models.end());
    std::string out = detail::markdown_row(header) + detail::markdown_separator(header.size());
    for (const auto& target : table.targets) {
        std::vector<std::string> cells = {target};
        for (const auto& model : table.models) {
            const auto it = table.cells.find({model, target});
            cells.push_back(it == table.cells.end() ? "-"
                                                    : detail::format_scaled(it->second, spec));
        }
        out += detail::markdown_row(cells);
    }
    return out;
}

inline std::string render_model_comparison(const ModelComparison& comparison,
                                           const TableSpec& spec) {
    detail::check_spec(spec, TableShape::PairModelComparison, "a model comparison");
    std::string out = detail::markdown_row({"model", "lq", "rank"}) + detail::markdown_separator(3);
    int rank = 0;
    for (const auto& row : comparison.rows)
        out += detail::markdown_row(
            {row.model, detail::format_scaled(row.lq, spec), std::to_string(++rank)});
    return out;
}

inline std::string render_ranked_list(const RankedList& list, const TableSpec& spec) {
    detail::check_spec(spec, TableShape::SourceToTargets, "a ranked list");
    std::string out =
        detail::markdown_row({"language", "lq", "rank"}) + detail::markdown_separator(3);
    for (const auto& entry : list.entries)
        out += detail::markdown_row(
            {entry.language, detail::format_scaled(entry.lq, spec), std::to_string(entry.rank)});
    return out;
}

inline std::string render_group_comparison(const GroupComparison& comparison,
                                           const TableSpec& spec) {
    detail::check_spec(spec, TableShape::GroupBars, "a group comparison");
    std::string out = detail::markdown_row({"group", "count", "mean_lq", "median_lq"}) +
                      detail::markdown_separator(4);
    const auto row = [&](const char* name, const GroupStats& stats) {
        out += detail::markdown_row(
            {name, std::to_string(stats.count),
             stats.mean ? detail::format_scaled(*stats.mean, spec) : std::string("-"),
             stats.median ? detail::format_scaled(*stats.median, spec) : std::string("-")});
    };
    row("same-script", comparison.same_script);
    row("different-script", comparison.different_script);
    return out;
}

inline std::string render_source_averages(const std::map<std::string, double>& averages,
                                          const TableSpec& spec) {
    detail::check_spec(spec, TableShape::SourceAverages, "source averages");
    std::string out = detail::markdown_row({"source", "mean_lq"}) + detail::markdown_separator(2);
    for (const auto& [source, mean] : averages)
        out += detail::markdown_row({source, detail::format_scaled(mean, spec)});
    return out;
}

inline std::string render_recommendation(const Recommendation& rec) {
    std::string out = "recommendation: ";
    out += model_class_name(rec.model_class);
    out += '\n';
    for (const auto& node : rec.trace) {
        out += "  ";
        out += node.node;
        out += " = ";
        out += node.branch;
        out += ": ";
        out += node.rationale;
        out += '\n';
    }
    return out;
}

// Two-column series for external plotting tools: label<TAB>value rows
// sorted by label, full double fidelity, no header.
inline void emit_plot_data(std::vector<std::pair<std::string, double>> series,
                           std::ostream& out) {
    if (series.empty()) throw DomainError("report: plot series must be non-empty");
    std::sort(series.begin(), series.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < series.size(); ++i)
        if (series[i].first == series[i - 1].first)
            throw DomainError("report: duplicate plot label '" + series[i].first + "'");
    for (const auto& [label, value] : series)
        out << label << '\t' << tsv::format_double(value) << '\n';
}

inline void emit_plot_data(const std::vector<std::pair<std::string, double>>& series,
                           const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("report: cannot open '" + path + "' for writing");
    emit_plot_data(series, static_cast<std::ostream&>(out));
    out.flush();
    if (!out) throw Error("report: failed writing '" + path + "'");
}

}  // namespace lqkit

#endif
