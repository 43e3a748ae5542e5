#ifndef PURPOSE_PERCEPTION_HPP
#define PURPOSE_PERCEPTION_HPP

#include <optional>

#include "purpose/world.hpp"

namespace purpose {

/// State-to-observation layer of one agent over a set of domains.
class SensorModel {
public:
    /// `covered` lists the states of every covered domain; state ids must be unique across domains.
    SensorModel(AgentId owner, std::set<ObservationId> observations,
                std::map<DomainId, std::set<StateId>> covered, std::map<StateId, Row> map);

    const AgentId& owner() const { return owner_; }
    const std::set<ObservationId>& observations() const { return observations_; }
    const std::map<StateId, Row>& map() const { return map_; }
    const std::map<DomainId, std::set<StateId>>& covered() const { return covered_; }
    std::set<DomainId> covered_domains() const;

    bool covers(const StateId& s) const { return map_.count(s) > 0; }
    const Row& row(const StateId& s) const;
    const DomainId& domain_of(const StateId& s) const;
    bool deterministic() const;

private:
    AgentId owner_;
    std::set<ObservationId> observations_;
    std::map<DomainId, std::set<StateId>> covered_;
    std::map<StateId, Row> map_;
    std::map<StateId, DomainId> domain_of_;
    std::map<ObservationId, std::vector<StateId>> sources_;  ///< states able to emit each observation, ascending

    friend std::set<StateId> preimage(const SensorModel&, const ObservationId&, const std::optional<std::set<DomainId>>&);
};

ObservationId observe(const SensorModel& sensor, const StateId& state, Rng& rng);

std::set<StateId> preimage(const SensorModel& sensor, const ObservationId& observation,
                           const std::optional<std::set<DomainId>>& domain_filter = std::nullopt);

std::set<ObservationId> observe_set(const SensorModel& sensor, const std::set<StateId>& states);

}  // namespace purpose

#endif
