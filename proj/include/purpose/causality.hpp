#ifndef PURPOSE_CAUSALITY_HPP
#define PURPOSE_CAUSALITY_HPP

#include "purpose/alignment.hpp"

namespace purpose {

/// Goal key under which baseline policies store their rows.
inline const GoalId kBaselineKey = "baseline";

ActionPolicy idle_policy(const Domain& domain, const SensorModel& sensor, const ActionId& idle);
ActionPolicy uniform_policy(const Domain& domain, const SensorModel& sensor);

struct InterventionSpec {
    Goal do_goal;
    std::vector<Goal> chain;  ///< subgoals pursued before do_goal
    ActionPolicy baseline;    ///< rows keyed by kBaselineKey
    std::string baseline_name = "idle";
    int horizon = 1;
    /// Trajectory-tree size above which sampling replaces enumeration.
    long long enumeration_limit = 1000000;
    int samples = 20000;
};

struct Ac2Result {
    bool holds = false;
    bool deterministic = false;
    bool exact = true;
    double p_do = 0.0;
    double p_baseline = 0.0;
    double se_do = 0.0;
    double se_baseline = 0.0;
    /// Probability that some visited state surely satisfies Y.
    double p_do_any = 0.0;
    double p_baseline_any = 0.0;
    long long nodes = 0;
    std::string baseline;
};

using CostTable = std::map<ActionId, double>;

struct Ac3Result {
    bool holds = false;
    double executed_cost = 0.0;
    double minimal_cost = 0.0;
    bool integer_costs = true;
};

struct CausalVerdict {
    bool ac1 = false;
    Ac2Result ac2;
    Ac3Result ac3;
    bool overall = false;
    std::vector<std::string> notes;
};

bool ac1_existence(const AlignmentModel& model);

/// Probability of the human purpose event at trace end under do(goal) versus the baseline.
Ac2Result ac2_counterfactual(const AlignmentModel& model, const InterventionSpec& spec, Rng& rng);

Ac3Result ac3_minimality(const AlignmentModel& model, const History& executed, const CostTable& costs = {});

/// Intervention on the first binding's goal and chain with the given baseline; horizon = timeout x links.
InterventionSpec default_intervention(const AlignmentModel& model, const std::string& baseline, bool with_chain);

CausalVerdict causal_verdict(const AlignmentModel& model, const InterventionSpec& spec, Rng& rng, const CostTable& costs = {});

}  // namespace purpose

#endif
