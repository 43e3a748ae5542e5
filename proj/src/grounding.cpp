#include "purpose/grounding.hpp"

#include <tuple>

namespace purpose {

namespace {

void require_matching(const Purpose& purpose, const ObservationEncoder& encoder) {
    if (encoder.owner() != purpose.owner || encoder.space_id() != purpose.space_id)
        throw Error(ErrorKind::ValidationError, "encoder " + encoder.owner() + "/" + encoder.space_id() +
                                                    " does not belong to purpose " + purpose.id);
}

Goal goal_shell(const Purpose& purpose, const ObservationEncoder& encoder, const std::optional<PointId>& point) {
    Goal g;
    g.id = goal_id(purpose.id, encoder.domain(), point);
    g.owner = purpose.owner;
    g.purpose_id = purpose.id;
    g.domain_id = encoder.domain();
    g.source_point = point;
    g.intention_flag = purpose.intention_flag;
    return g;
}

}  // namespace

GoalId goal_id(const PurposeId& purpose, const DomainId& domain, const std::optional<PointId>& point) {
    return point ? purpose + "@" + domain + "#" + *point : purpose + "@" + domain;
}

Goal ground_point(const Purpose& purpose, const PointId& point, const ObservationEncoder& encoder) {
    require_matching(purpose, encoder);
    if (!purpose.support.count(point)) throw Error(ErrorKind::PointOutsideSupport, point + " is not in the support of " + purpose.id);
    Goal g = goal_shell(purpose, encoder, point);
    g.points = decode(encoder, point);
    for (const auto& o : g.points) g.utility_per_point[o] = purpose.utility(point);
    return g;
}

Goal ground_purpose(const Purpose& purpose, const ObservationEncoder& encoder) {
    require_matching(purpose, encoder);
    Goal g = goal_shell(purpose, encoder, std::nullopt);
    for (const auto& [o, e] : encoder.table())
        if (purpose.support.count(e)) {
            g.points.insert(o);
            g.utility_per_point[o] = purpose.utility(e);
        }
    return g;
}

Goal make_goal(GoalId id, AgentId owner, PurposeId purpose, DomainId domain, std::set<ObservationId> points) {
    Goal g;
    g.id = std::move(id);
    g.owner = std::move(owner);
    g.purpose_id = std::move(purpose);
    g.domain_id = std::move(domain);
    g.points = std::move(points);
    return g;
}

StateGoal state_goal(const Goal& goal, const SensorModel& sensor) {
    if (goal.owner != sensor.owner())
        throw Error(ErrorKind::ValidationError, "goal " + goal.id + " belongs to " + goal.owner + ", sensor to " + sensor.owner());
    StateGoal out{goal.owner, goal.purpose_id, goal.domain_id, {}};
    const std::set<DomainId> filter{goal.domain_id};
    for (const auto& o : goal.points) {
        auto states = preimage(sensor, o, filter);
        out.states.insert(states.begin(), states.end());
    }
    return out;
}

GoalIndex goal_index(const std::vector<Goal>& goals) {
    GoalIndex index;
    std::set<std::tuple<PurposeId, DomainId, std::string>> keys;
    for (const auto& g : goals) {
        const std::string point = g.source_point ? "#" + *g.source_point : "";
        if (!keys.emplace(g.purpose_id, g.domain_id, point).second)
            throw Error(ErrorKind::DuplicateGoalKey, "goal " + g.id + " repeats (" + g.purpose_id + ", " + g.domain_id + ")");
        index.by_purpose[g.purpose_id].push_back(g);
        index.by_domain[g.domain_id].push_back(g);
        index.all.push_back(g);
    }
    return index;
}

}  // namespace purpose
