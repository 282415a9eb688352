#ifndef LQKIT_TSV_HPP
#define LQKIT_TSV_HPP

#include <charconv>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lqkit/types.hpp"

namespace lqkit::tsv {

inline std::vector<std::string> split(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.emplace_back(line.substr(start));
            break;
        }
        fields.emplace_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return fields;
}

inline std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) out += '\t';
        out += fields[i];
    }
    out += '\n';
    return out;
}

inline std::optional<double> parse_double(std::string_view s) {
    double v = 0;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) return std::nullopt;
    return v;
}

inline std::optional<long> parse_int(std::string_view s) {
    long v = 0;
    const char* end = s.data() + s.size();
    auto [p, ec] = std::from_chars(s.data(), end, v);
    if (ec != std::errc() || p != end) return std::nullopt;
    return v;
}

// Shortest decimal form that round-trips to the same double.
inline std::string format_double(double v) {
    char buf[32];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

struct Row {
    int line = 0;  // 1-based line number in the file
    std::vector<std::string> fields;
};

// Line-oriented reader for tab-separated files. '#'-prefixed lines are
// comments; pragma lines ("#key=value") are collected for the caller.
class Reader {
public:
    explicit Reader(const std::string& path) : path_(path), in_(path) {
        if (!in_) throw Error("io: cannot open '" + path + "'");
    }

    const std::string& path() const { return path_; }
    const std::vector<std::pair<std::string, std::string>>& pragmas() const { return pragmas_; }

    // First pragma with this key among the lines read so far.
    std::optional<std::string> pragma(std::string_view key) const {
        for (const auto& [k, v] : pragmas_)
            if (k == key) return v;
        return std::nullopt;
    }

    // Reads the next data row; strips a trailing '\r'; skips blank and
    // comment lines. Returns false at end of file.
    bool next(Row& row) {
        std::string line;
        while (std::getline(in_, line)) {
            ++lineno_;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.empty()) continue;
            if (line[0] == '#') {
                const std::size_t eq = line.find('=');
                if (eq != std::string::npos)
                    pragmas_.emplace_back(line.substr(1, eq - 1), line.substr(eq + 1));
                continue;
            }
            row.line = lineno_;
            row.fields = split(line);
            return true;
        }
        return false;
    }

    // Reads the header row and checks it names exactly `expected`.
    void expect_header(const std::vector<std::string>& expected, std::string_view module) {
        Row row;
        if (!next(row))
            throw ParseError(std::string(module) + ": '" + path_ + "' is missing its header row");
        if (row.fields != expected) {
            std::string want;
            for (const auto& f : expected) want += (want.empty() ? "" : ", ") + f;
            throw ParseError(std::string(module) + ": '" + path_ +
                                 "' header mismatch (expected: " + want + ")",
                             row.line);
        }
    }

private:
    std::string path_;
    std::ifstream in_;
    int lineno_ = 0;
    std::vector<std::pair<std::string, std::string>> pragmas_;
};

inline std::vector<std::string> parse_list(std::string_view s, char sep = ',') {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= s.size()) {
        const std::size_t p = s.find(sep, start);
        std::string_view item =
            p == std::string_view::npos ? s.substr(start) : s.substr(start, p - start);
        while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
        while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
        if (!item.empty()) out.emplace_back(item);
        if (p == std::string_view::npos) break;
        start = p + 1;
    }
    return out;
}

}  // namespace lqkit::tsv

#endif
