#ifndef LQKIT_RECOMMEND_HPP
#define LQKIT_RECOMMEND_HPP

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "lqkit/registry.hpp"
#include "lqkit/types.hpp"

namespace lqkit {

enum class ModelClass {
    MultilingualTokenBased,
    CharacterBased,
    PixelBased,
    MonolingualWithTransliteration,
    AdvancedMultilingual,  // token- or character-based; target is strong enough for either
};

inline std::string_view model_class_name(ModelClass c) {
    switch (c) {
        case ModelClass::MultilingualTokenBased: return "MultilingualTokenBased";
        case ModelClass::CharacterBased: return "CharacterBased";
        case ModelClass::PixelBased: return "PixelBased";
        case ModelClass::MonolingualWithTransliteration: return "MonolingualWithTransliteration";
        case ModelClass::AdvancedMultilingual: return "AdvancedMultilingual";
    }
    return "?";
}

enum class SemanticDependency { High, Low };

inline std::string_view semantic_dependency_name(SemanticDependency s) {
    return s == SemanticDependency::High ? "High" : "Low";
}

// Every field must be set explicitly; suggest_query exists to prefill them
// from registry data when the caller has a concrete target language.
struct RecommendationQuery {
    ResourceClass target_resource = ResourceClass::Low;
    bool visually_similar_high_resource_exists = false;
    bool related_high_resource_in_pretraining = false;
    SemanticDependency semantic_dependency = SemanticDependency::High;
    bool source_seen_in_pretraining = false;
};

struct TraceNode {
    std::string node;       // which consideration was checked
    std::string branch;     // which way it went
    std::string rationale;  // why that branch leads where it does
};

struct Recommendation {
    ModelClass model_class = ModelClass::MonolingualWithTransliteration;
    std::vector<TraceNode> trace;
};

// The two defensible orderings of the unseen-pretraining check against the
// visual-similarity check; nothing pins one as the truth, so both are
// selectable. UnseenBeforeVisual is the default: a model that never saw
// the target's writing system at all has nothing for visual transfer to
// attach to.
enum class BranchOrder { UnseenBeforeVisual, VisualBeforeUnseen };

namespace detail {

inline bool check_resource(const RecommendationQuery& q, Recommendation& rec) {
    if (q.target_resource == ResourceClass::High) {
        rec.trace.push_back({"target-resource", "High",
                             "a well-resourced target supports the strongest multilingual models "
                             "directly, token- or character-based"});
        rec.model_class = ModelClass::AdvancedMultilingual;
        return true;
    }
    rec.trace.push_back(
        {"target-resource", "Low", "a low-resource target needs a transfer-aware choice"});
    return false;
}

inline bool check_unseen(const RecommendationQuery& q, Recommendation& rec) {
    if (!q.source_seen_in_pretraining) {
        rec.trace.push_back({"pretraining-coverage", "unseen",
                             "a language absent from pretraining gives multilingual models nothing "
                             "to anchor on; transliterate into a covered high-resource language "
                             "and use its monolingual model"});
        rec.model_class = ModelClass::MonolingualWithTransliteration;
        return true;
    }
    rec.trace.push_back({"pretraining-coverage", "seen",
                         "the language is covered by multilingual pretraining, so multilingual "
                         "transfer is viable"});
    return false;
}

inline bool check_visual(const RecommendationQuery& q, Recommendation& rec) {
    if (q.visually_similar_high_resource_exists) {
        rec.trace.push_back({"visual-similarity", "found",
                             "a visually similar high-resource language lets glyph-level transfer "
                             "carry over; pixel models are built to exploit that"});
        rec.model_class = ModelClass::PixelBased;
        return true;
    }
    rec.trace.push_back({"visual-similarity", "none",
                         "no visually similar high-resource language to exploit"});
    return false;
}

}  // namespace detail

// Deterministic mapping from the five considerations to a model class.
// Total over the query space; the trace records every consideration in the
// order it was checked, and its last node names the decision.
inline Recommendation recommend(const RecommendationQuery& query,
                                BranchOrder order = BranchOrder::UnseenBeforeVisual) {
    Recommendation rec;
    if (detail::check_resource(query, rec)) return rec;
    if (order == BranchOrder::UnseenBeforeVisual) {
        if (detail::check_unseen(query, rec)) return rec;
        if (detail::check_visual(query, rec)) return rec;
    } else {
        if (detail::check_visual(query, rec)) return rec;
        if (detail::check_unseen(query, rec)) return rec;
    }
    if (query.related_high_resource_in_pretraining) {
        rec.trace.push_back({"related-coverage", "found",
                             "a related high-resource language inside the pretraining set can "
                             "donate its representations"});
        if (query.semantic_dependency == SemanticDependency::High) {
            rec.trace.push_back({"semantic-dependency", "High",
                                 "meaning-heavy tasks favor token-level multilingual models"});
            rec.model_class = ModelClass::MultilingualTokenBased;
        } else {
            rec.trace.push_back({"semantic-dependency", "Low",
                                 "form-heavy tasks favor character-level models"});
            rec.model_class = ModelClass::CharacterBased;
        }
        return rec;
    }
    rec.trace.push_back({"related-coverage", "none",
                         "no related high-resource language inside the pretraining set"});
    rec.trace.push_back({"fallback", "default",
                         "with no stronger signal, transliteration into a covered high-resource "
                         "language is the safe default"});
    rec.model_class = ModelClass::MonolingualWithTransliteration;
    return rec;
}

struct DecisionRow {
    RecommendationQuery query;
    Recommendation recommendation;
};

// All 32 query combinations with their outcome, for auditing the mapping.
inline std::vector<DecisionRow> enumerate_decision_table(
    BranchOrder order = BranchOrder::UnseenBeforeVisual) {
    std::vector<DecisionRow> rows;
    rows.reserve(32);
    for (int bits = 0; bits < 32; ++bits) {
        RecommendationQuery q;
        q.target_resource = (bits & 16) ? ResourceClass::High : ResourceClass::Low;
        q.visually_similar_high_resource_exists = (bits & 8) != 0;
        q.related_high_resource_in_pretraining = (bits & 4) != 0;
        q.semantic_dependency = (bits & 2) ? SemanticDependency::High : SemanticDependency::Low;
        q.source_seen_in_pretraining = (bits & 1) != 0;
        rows.push_back({q, recommend(q, order)});
    }
    return rows;
}

// The registry's multilingual coverage columns; these are the models whose
// pretraining sets matter for the coverage-driven considerations.
inline const std::vector<std::string>& multilingual_model_ids() {
    static const std::vector<std::string> ids = {"canine", "mbert"};
    return ids;
}

// What the registry could contribute to a query: the evidence behind each
// prefilled field. Hints never override anything the caller sets.
struct QueryAssist {
    std::vector<std::string> visually_similar_candidates;  // High-resource, same script
    std::vector<std::string> related_covered_candidates;   // High-resource kin in pretraining
    std::map<std::string, bool> pretrain_coverage;         // the target's own coverage row
};

struct SuggestedQuery {
    RecommendationQuery query;
    QueryAssist assist;
};

// Prefills a query for a concrete target from registry data: resource
// class from its record, visual similarity from a scan for High-resource
// languages sharing its script, coverage flags from the multilingual
// models' pretraining columns. Semantic dependency defaults by task:
// parsing leans on form, tagging and entity labeling lean on meaning.
inline SuggestedQuery suggest_query(const Registry& registry, const std::string& target_lang,
                                    Task task) {
    const LanguageRecord& target = registry.require(target_lang);
    SuggestedQuery out;
    out.query.target_resource = target.resource_class;
    out.query.semantic_dependency =
        task == Task::Dep ? SemanticDependency::Low : SemanticDependency::High;
    out.assist.pretrain_coverage = target.pretrain_coverage;

    bool seen = false;
    for (const auto& model : multilingual_model_ids()) seen = seen || target.pretrained_in(model);
    out.query.source_seen_in_pretraining = seen;

    for (const auto& rec : registry.records()) {
        if (rec.base_language == target.base_language) continue;
        if (rec.resource_class != ResourceClass::High) continue;
        const ScriptRelationResult rel =
            registry.script_relations().lookup(target.script, rec.script);
        if (rel.relation == ScriptRelation::Same) {
            if (out.assist.visually_similar_candidates.empty() ||
                out.assist.visually_similar_candidates.back() != rec.base_language)
                out.assist.visually_similar_candidates.push_back(rec.base_language);
        }
        if (rec.family == target.family) {
            bool covered = false;
            for (const auto& model : multilingual_model_ids())
                covered = covered || rec.pretrained_in(model);
            if (covered && (out.assist.related_covered_candidates.empty() ||
                            out.assist.related_covered_candidates.back() != rec.base_language))
                out.assist.related_covered_candidates.push_back(rec.base_language);
        }
    }
    out.query.visually_similar_high_resource_exists =
        !out.assist.visually_similar_candidates.empty();
    out.query.related_high_resource_in_pretraining =
        !out.assist.related_covered_candidates.empty();
    return out;
}

}  // namespace lqkit

#endif
