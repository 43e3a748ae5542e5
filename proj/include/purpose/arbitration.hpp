#ifndef PURPOSE_ARBITRATION_HPP
#define PURPOSE_ARBITRATION_HPP

#include <functional>
#include <optional>

#include "purpose/grounding.hpp"

namespace purpose {

enum class ArbitrationRule { Hierarchical, Urgency, Softmax, Motivational };

std::string_view to_string(ArbitrationRule rule);
ArbitrationRule parse_rule(const std::string& name);

struct ArbitrationConfig {
    ArbitrationRule rule = ArbitrationRule::Motivational;
    double temperature = 1.0;
    std::uint64_t seed = 0;
    /// Required ratio of proscriptive to prescriptive priority magnitude.
    double proscriptive_factor = 10.0;
};

struct MotivationReadout {
    std::map<PurposeId, PointId> active_point;
    std::map<PurposeId, double> utility;
};

/// Predicted motivational point after achieving a goal (one entry per component).
using OutcomePredictor = std::function<std::optional<std::vector<PointId>>(const Goal&)>;

PurposeId select_hierarchical(const std::vector<Purpose>& intended, const ArbitrationConfig& cfg);
PurposeId select_urgency(const std::vector<Purpose>& intended, const MotivationReadout& readout, const ArbitrationConfig& cfg);
Distribution softmax_distribution(const std::vector<Purpose>& intended, const MotivationReadout& readout,
                                  const ArbitrationConfig& cfg);
GoalId select_motivational(const MotivationalSpace& mspace, const std::vector<Goal>& candidates,
                           const OutcomePredictor& predict, const ArbitrationConfig& cfg);

/// Warnings for proscriptive purposes whose |priority| is below factor x max prescriptive |priority|.
std::vector<std::string> proscriptive_dominance_warnings(const std::vector<Purpose>& purposes, const ArbitrationConfig& cfg);

}  // namespace purpose

#endif
