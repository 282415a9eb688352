#ifndef LQKIT_TYPES_HPP
#define LQKIT_TYPES_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lqkit {

enum class Task { Pos, Dep, Ner };
enum class MetricKind { Accuracy, Las };

inline std::string_view task_name(Task t) {
    switch (t) {
        case Task::Pos: return "POS";
        case Task::Dep: return "DEP";
        case Task::Ner: return "NER";
    }
    return "?";
}

inline std::string_view metric_name(MetricKind m) {
    return m == MetricKind::Accuracy ? "accuracy" : "las";
}

inline std::string ascii_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

inline std::optional<Task> parse_task(std::string_view s) {
    const std::string t = ascii_lower(s);
    if (t == "pos") return Task::Pos;
    if (t == "dep") return Task::Dep;
    if (t == "ner") return Task::Ner;
    return std::nullopt;
}

inline std::optional<MetricKind> parse_metric(std::string_view s) {
    const std::string m = ascii_lower(s);
    if (m == "accuracy") return MetricKind::Accuracy;
    if (m == "las") return MetricKind::Las;
    return std::nullopt;
}

// The metric each task is evaluated with.
inline MetricKind metric_for(Task t) {
    return t == Task::Dep ? MetricKind::Las : MetricKind::Accuracy;
}

// Base error for everything the library raises. Messages are prefixed with
// the subsystem that produced them ("registry: ...", "scores: ...").
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed input file; carries the offending line when known.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, int line = 0) : Error(msg), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// A language, score, or matrix cell that should exist does not.
class LookupError : public Error {
public:
    using Error::Error;
};

// Inputs outside an operation's mathematical domain.
class DomainError : public Error {
public:
    using Error::Error;
};

// Results that are not comparable (different pair, step count, or source-set basis).
class ComparisonError : public Error {
public:
    using Error::Error;
};

inline std::uint64_t fnv1a64(std::string_view s, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

// Order-independent digest of a source set. Two LQ values may only be
// compared when their digests match.
inline std::uint64_t source_set_digest(std::vector<std::string> sources) {
    std::sort(sources.begin(), sources.end());
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const auto& s : sources) {
        h = fnv1a64(s, h);
        h = fnv1a64("\x1f", h);
    }
    return h;
}

}  // namespace lqkit

#endif
