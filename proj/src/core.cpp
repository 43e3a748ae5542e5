#include "purpose/core.hpp"

#include <cmath>

namespace purpose {

std::string_view to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::UnknownState: return "UnknownState";
        case ErrorKind::UnknownAction: return "UnknownAction";
        case ErrorKind::MalformedRow: return "MalformedRow";
        case ErrorKind::UncoveredState: return "UncoveredState";
        case ErrorKind::UnknownObservation: return "UnknownObservation";
        case ErrorKind::MixedSignSupport: return "MixedSignSupport";
        case ErrorKind::EmptySupport: return "EmptySupport";
        case ErrorKind::EmptyMission: return "EmptyMission";
        case ErrorKind::UnknownEncodingPoint: return "UnknownEncodingPoint";
        case ErrorKind::DimensionMismatch: return "DimensionMismatch";
        case ErrorKind::PointOutsideSupport: return "PointOutsideSupport";
        case ErrorKind::DuplicateGoalKey: return "DuplicateGoalKey";
        case ErrorKind::EmptyIntentionSet: return "EmptyIntentionSet";
        case ErrorKind::UtilityOutOfRange: return "UtilityOutOfRange";
        case ErrorKind::UnpredictableCandidate: return "UnpredictableCandidate";
        case ErrorKind::Unsolvable: return "Unsolvable";
        case ErrorKind::SubgoalTimeout: return "SubgoalTimeout";
        case ErrorKind::UnnormalizedDistribution: return "UnnormalizedDistribution";
        case ErrorKind::SupportViolation: return "SupportViolation";
        case ErrorKind::IncompleteModel: return "IncompleteModel";
        case ErrorKind::HorizonTooShort: return "HorizonTooShort";
        case ErrorKind::TraceDidNotSucceed: return "TraceDidNotSucceed";
        case ErrorKind::ParseError: return "ParseError";
        case ErrorKind::ValidationError: return "ValidationError";
        case ErrorKind::IoError: return "IoError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message, int detail)
    : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind), detail_(detail) {}

std::string sample(const Distribution& dist, Rng& rng) {
    const double u = uniform01(rng);
    double acc = 0.0;
    const std::string* last = nullptr;
    for (const auto& [key, p] : dist) {
        if (p <= 0.0) continue;
        acc += p;
        last = &key;
        if (u < acc) return key;
    }
    if (!last) throw Error(ErrorKind::MalformedRow, "cannot sample from an empty distribution");
    return *last;
}

bool is_normalized(const Distribution& dist) {
    if (dist.empty()) return false;
    double total = 0.0;
    for (const auto& [key, p] : dist) {
        if (!std::isfinite(p) || p < 0.0 || p > 1.0) return false;
        total += p;
    }
    return std::abs(total - 1.0) <= kProbabilityTolerance;
}

void require_normalized(const Distribution& dist, ErrorKind kind, const std::string& what) {
    if (!is_normalized(dist)) {
        double total = 0.0;
        for (const auto& [key, p] : dist) total += p;
        throw Error(kind, what + " is not a probability table (sum " + std::to_string(total) + ")");
    }
}

std::set<std::string> support_of(const Distribution& dist) {
    std::set<std::string> out;
    for (const auto& [key, p] : dist)
        if (p > 0.0) out.insert(key);
    return out;
}

std::string join(const std::set<std::string>& items, const std::string& sep) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += sep;
        out += item;
    }
    return out;
}

}  // namespace purpose
