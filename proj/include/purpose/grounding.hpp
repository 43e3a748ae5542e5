#ifndef PURPOSE_GROUNDING_HPP
#define PURPOSE_GROUNDING_HPP

#include <optional>

#include "purpose/perception.hpp"
#include "purpose/purposes.hpp"

namespace purpose {

/// Observation-level grounding of a purpose point (or of the whole support) in one domain.
struct Goal {
    GoalId id;
    AgentId owner;
    PurposeId purpose_id;
    DomainId domain_id;
    std::set<ObservationId> points;
    std::optional<PointId> source_point;  ///< nullopt: whole purpose
    std::map<ObservationId, double> utility_per_point;
    bool intention_flag = false;

    bool ungroundable() const { return points.empty(); }
};

struct StateGoal {
    AgentId owner;
    PurposeId purpose_id;
    DomainId domain_id;
    std::set<StateId> states;
};

/// Canonical id: "purpose@domain#point" or "purpose@domain".
GoalId goal_id(const PurposeId& purpose, const DomainId& domain, const std::optional<PointId>& point);

Goal ground_point(const Purpose& purpose, const PointId& point, const ObservationEncoder& encoder);
Goal ground_purpose(const Purpose& purpose, const ObservationEncoder& encoder);

/// Goal over explicit observations (subgoals, audit fixtures); utilities left empty.
Goal make_goal(GoalId id, AgentId owner, PurposeId purpose, DomainId domain, std::set<ObservationId> points);

StateGoal state_goal(const Goal& goal, const SensorModel& sensor);

struct GoalIndex {
    std::map<PurposeId, std::vector<Goal>> by_purpose;
    std::map<DomainId, std::vector<Goal>> by_domain;
    std::vector<Goal> all;
};

GoalIndex goal_index(const std::vector<Goal>& goals);

}  // namespace purpose

#endif
