#include "purpose/arbitration.hpp"

#include <algorithm>
#include <cmath>

namespace purpose {

namespace {

std::vector<const Purpose*> prescriptive(const std::vector<Purpose>& intended) {
    std::vector<const Purpose*> out;
    for (const auto& p : intended)
        if (p.polarity == Polarity::Prescriptive) out.push_back(&p);
    if (out.empty()) throw Error(ErrorKind::EmptyIntentionSet, "no prescriptive intended purpose to select");
    std::sort(out.begin(), out.end(), [](const Purpose* a, const Purpose* b) { return a->id < b->id; });
    return out;
}

double urgency_utility(const MotivationReadout& readout, const PurposeId& id) {
    auto it = readout.utility.find(id);
    if (it == readout.utility.end()) throw Error(ErrorKind::UtilityOutOfRange, "no readout utility for " + id);
    if (!(it->second > 0.0 && it->second < 1.0))
        throw Error(ErrorKind::UtilityOutOfRange, "utility of " + id + " is " + std::to_string(it->second) + ", outside (0,1)");
    return it->second;
}

/// First maximum in ascending-id order.
template <typename Score>
PurposeId argmax(const std::vector<const Purpose*>& candidates, Score score) {
    const Purpose* best = nullptr;
    double best_score = 0.0;
    for (const Purpose* p : candidates) {
        const double s = score(*p);
        if (!best || s > best_score) {
            best = p;
            best_score = s;
        }
    }
    return best->id;
}

}  // namespace

std::string_view to_string(ArbitrationRule rule) {
    switch (rule) {
        case ArbitrationRule::Hierarchical: return "hierarchical";
        case ArbitrationRule::Urgency: return "urgency";
        case ArbitrationRule::Softmax: return "softmax";
        case ArbitrationRule::Motivational: return "motivational";
    }
    return "motivational";
}

ArbitrationRule parse_rule(const std::string& name) {
    for (auto r : {ArbitrationRule::Hierarchical, ArbitrationRule::Urgency, ArbitrationRule::Softmax, ArbitrationRule::Motivational})
        if (to_string(r) == name) return r;
    throw Error(ErrorKind::ValidationError, "unknown arbitration rule " + name);
}

PurposeId select_hierarchical(const std::vector<Purpose>& intended, const ArbitrationConfig&) {
    return argmax(prescriptive(intended), [](const Purpose& p) { return p.priority; });
}

PurposeId select_urgency(const std::vector<Purpose>& intended, const MotivationReadout& readout, const ArbitrationConfig&) {
    const auto candidates = prescriptive(intended);
    for (const Purpose* p : candidates) urgency_utility(readout, p->id);
    return argmax(candidates, [&](const Purpose& p) { return p.priority * (1.0 - urgency_utility(readout, p.id)); });
}

Distribution softmax_distribution(const std::vector<Purpose>& intended, const MotivationReadout& readout,
                                  const ArbitrationConfig& cfg) {
    if (!(cfg.temperature > 0.0)) throw Error(ErrorKind::ValidationError, "softmax temperature must be positive");
    const auto candidates = prescriptive(intended);
    std::vector<double> scores;
    double top = -INFINITY;
    for (const Purpose* p : candidates) {
        scores.push_back(p->priority * (1.0 - urgency_utility(readout, p->id)) / cfg.temperature);
        top = std::max(top, scores.back());
    }
    double total = 0.0;
    for (double& s : scores) {
        s = std::exp(s - top);
        total += s;
    }
    Distribution out;
    for (std::size_t i = 0; i < candidates.size(); ++i) out[candidates[i]->id] = scores[i] / total;
    return out;
}

GoalId select_motivational(const MotivationalSpace& mspace, const std::vector<Goal>& candidates,
                           const OutcomePredictor& predict, const ArbitrationConfig&) {
    if (candidates.empty()) throw Error(ErrorKind::EmptyIntentionSet, "no candidate goals");
    std::vector<const Goal*> ordered;
    for (const auto& g : candidates) ordered.push_back(&g);
    std::sort(ordered.begin(), ordered.end(), [](const Goal* a, const Goal* b) { return a->id < b->id; });
    const Goal* best = nullptr;
    double best_score = 0.0;
    for (const Goal* g : ordered) {
        auto point = predict(*g);
        if (!point) throw Error(ErrorKind::UnpredictableCandidate, "no predicted motivational point for " + g->id);
        const double s = composite_utility(mspace, *point);
        if (!best || s > best_score) {
            best = g;
            best_score = s;
        }
    }
    return best->id;
}

std::vector<std::string> proscriptive_dominance_warnings(const std::vector<Purpose>& purposes, const ArbitrationConfig& cfg) {
    double top = 0.0;
    for (const auto& p : purposes)
        if (p.polarity == Polarity::Prescriptive) top = std::max(top, std::abs(p.priority));
    std::vector<std::string> out;
    for (const auto& p : purposes)
        if (p.polarity == Polarity::Proscriptive && std::abs(p.priority) < cfg.proscriptive_factor * top)
            out.push_back("proscriptive purpose " + p.id + " has |priority| " + std::to_string(std::abs(p.priority)) +
                          " below " + std::to_string(cfg.proscriptive_factor) + " x " + std::to_string(top));
    return out;
}

}  // namespace purpose
