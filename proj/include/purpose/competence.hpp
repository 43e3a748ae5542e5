#ifndef PURPOSE_COMPETENCE_HPP
#define PURPOSE_COMPETENCE_HPP

#include <deque>
#include <functional>
#include <optional>

#include "purpose/grounding.hpp"

namespace purpose {

struct GoalConditionedTask {
    DomainId domain;
    Goal goal;
    double gamma = 0.95;
    int timeout = 25;
    double success_threshold = 0.5;
};

/// Stochastic table (observation, goal id) -> distribution over choices.
class PolicyTable {
public:
    void set(const ObservationId& o, const GoalId& g, Distribution row);
    bool has(const ObservationId& o, const GoalId& g) const { return table_.count({o, g}) > 0; }
    /// Throws IncompleteModel when the row is missing.
    const Distribution& row(const ObservationId& o, const GoalId& g) const;
    std::string draw(const ObservationId& o, const GoalId& g, Rng& rng) const;
    /// Most probable choice, ties by ascending id.
    std::string greedy(const ObservationId& o, const GoalId& g) const;
    bool deterministic() const;
    void merge(const PolicyTable& other);
    const std::map<std::pair<ObservationId, GoalId>, Distribution>& table() const { return table_; }

private:
    std::map<std::pair<ObservationId, GoalId>, Distribution> table_;
};

/// Low-level policy: rows are distributions over actions.
struct ActionPolicy : PolicyTable {};
/// Goal selector: rows are distributions over subgoal ids.
struct GoalSelectorPolicy : PolicyTable {};

struct PolicyBundle {
    std::optional<GoalSelectorPolicy> selector;
    ActionPolicy actions;
};

int pseudo_reward(const ObservationId& observation, const Goal& goal);

struct LearnerConfig {
    int budget_steps = 50000;
    double alpha = 0.5;
    double epsilon = 0.3;
    std::uint64_t seed = 0;
};

/// Tabular Q-learning on the pseudo-reward with exploring starts. Throws Unsolvable.
ActionPolicy learn_policy(const GoalConditionedTask& task, const Domain& domain, const SensorModel& sensor,
                          const LearnerConfig& cfg);

bool enabled(const Goal& subgoal, const StateId& state, const Domain& domain, const SensorModel& sensor, int timeout);

/// Per-(state, action) cost; action count when empty.
using CostFn = std::function<double(const StateId&, const ActionId&)>;

/// Minimal (expected) cost to reach `targets`, never entering `forbidden`; absent key = unreachable.
/// Dijkstra on deterministic domains, value iteration over almost-surely-winning states otherwise.
std::map<StateId, double> min_cost_to_reach(const Domain& domain, const std::set<StateId>& targets,
                                            const std::set<StateId>& forbidden = {}, const CostFn& cost = {});

/// Observation-keyed policy that follows min_cost_to_reach; rows for every observation of the domain.
ActionPolicy plan_policy(const Goal& goal, const Domain& domain, const SensorModel& sensor,
                         const std::set<StateId>& forbidden = {});

struct PursuitResult {
    History trace{HistoryKind::StateAction};
    bool success = false;
    StateId end_state;
    int steps = 0;
};

/// Runs the policy for one goal until an observation in the goal or `timeout` actions.
PursuitResult pursue(const Goal& goal, const ActionPolicy& policy, const Domain& domain, const SensorModel& sensor,
                     const StateId& start, int timeout, Rng& rng);

struct ChainResult {
    History trace{HistoryKind::StateAction};
    bool success = false;
    /// One entry per link (subgoals then final); nullopt when satisfied without acting.
    std::vector<std::optional<Window>> windows;
    std::vector<GoalId> links;
};

/// Pursues each subgoal then the final goal. Throws SubgoalTimeout with detail = 1-based failed link.
ChainResult execute_chain(const std::vector<Goal>& chain, const Goal& final, const ActionPolicy& policy, const Domain& domain,
                          const SensorModel& sensor, const StateId& start, int timeout, Rng& rng);

/// Lets the goal selector choose subgoals until the final goal is observed or `max_links` pursuits ran.
ChainResult execute_with_selector(const GoalSelectorPolicy& selector, const ActionPolicy& policy, const Goal& final,
                                  const std::map<GoalId, Goal>& goals, const Domain& domain, const SensorModel& sensor,
                                  const StateId& start, int timeout, int max_links, Rng& rng);

/// Sliding-window success rates per goal.
class CompetenceTracker {
public:
    CompetenceTracker(int window, int lag);

    void record(const GoalId& goal, bool success);
    /// Success rate over the `window` attempts ending `offset` attempts ago (0 without attempts).
    double competence(const GoalId& goal, int offset = 0) const;
    double delta(const GoalId& goal) const;
    int window() const { return window_; }
    int lag() const { return lag_; }

private:
    int window_;
    int lag_;
    std::map<GoalId, std::vector<bool>> attempts_;
};

double competence_gain(const CompetenceTracker& tracker, const Distribution& goal_distribution);

struct BeliefState {
    Distribution prior;
    Distribution posterior;
};

/// KL(posterior || prior) in nats.
double information_gain(const BeliefState& belief);

/// Mean goal-conditioned return (1 on success within timeout) over sampled goals and initial states.
double evaluate_extrinsic(const PolicyBundle& bundle, const Distribution& goal_sampler, const std::map<GoalId, Goal>& goals,
                          const Domain& domain, const SensorModel& sensor, int episodes, int timeout, Rng& rng);

/// Heuristic utility of an active point: minus normalized axis distance to the nearest support point
/// for product spaces, support membership (1/0) otherwise.
double expected_encoding_utility(const EncodingSpace& space, const Purpose& purpose, const PointId& active);

}  // namespace purpose

#endif
