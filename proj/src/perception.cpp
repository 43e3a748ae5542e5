#include "purpose/perception.hpp"

namespace purpose {

SensorModel::SensorModel(AgentId owner, std::set<ObservationId> observations,
                         std::map<DomainId, std::set<StateId>> covered, std::map<StateId, Row> map)
    : owner_(std::move(owner)), observations_(std::move(observations)), covered_(std::move(covered)), map_(std::move(map)) {
    for (const auto& [d, states] : covered_)
        for (const auto& s : states) {
            if (!domain_of_.emplace(s, d).second)
                throw Error(ErrorKind::ValidationError, "state " + s + " appears in two covered domains");
            if (!map_.count(s)) throw Error(ErrorKind::UncoveredState, s + " has no row in the " + owner_ + " sensor");
        }
    for (const auto& [s, row] : map_) {
        if (!domain_of_.count(s)) throw Error(ErrorKind::UnknownState, s + " is not in a covered domain of the " + owner_ + " sensor");
        if (!row.deterministic())
            require_normalized(std::get<Distribution>(row.value), ErrorKind::MalformedRow, "sensor row of " + s);
        for (const auto& [o, p] : row.distribution())
            if (!observations_.count(o)) throw Error(ErrorKind::UnknownObservation, o + " emitted by " + s);
        for (const auto& o : row.support()) sources_[o].push_back(s);
    }
}

std::set<DomainId> SensorModel::covered_domains() const {
    std::set<DomainId> out;
    for (const auto& [d, states] : covered_) out.insert(d);
    return out;
}

const Row& SensorModel::row(const StateId& s) const {
    auto it = map_.find(s);
    if (it == map_.end()) throw Error(ErrorKind::UncoveredState, s + " for the " + owner_ + " sensor");
    return it->second;
}

const DomainId& SensorModel::domain_of(const StateId& s) const {
    auto it = domain_of_.find(s);
    if (it == domain_of_.end()) throw Error(ErrorKind::UncoveredState, s + " for the " + owner_ + " sensor");
    return it->second;
}

bool SensorModel::deterministic() const {
    for (const auto& [s, row] : map_)
        if (row.support().size() > 1) return false;
    return true;
}

ObservationId observe(const SensorModel& sensor, const StateId& state, Rng& rng) { return sensor.row(state).draw(rng); }

std::set<StateId> preimage(const SensorModel& sensor, const ObservationId& observation,
                           const std::optional<std::set<DomainId>>& domain_filter) {
    if (!sensor.observations().count(observation))
        throw Error(ErrorKind::UnknownObservation, observation + " for the " + sensor.owner() + " sensor");
    std::set<StateId> out;
    auto it = sensor.sources_.find(observation);
    if (it == sensor.sources_.end()) return out;
    for (const auto& s : it->second)
        if (!domain_filter || domain_filter->count(sensor.domain_of(s))) out.insert(out.end(), s);
    return out;
}

std::set<ObservationId> observe_set(const SensorModel& sensor, const std::set<StateId>& states) {
    std::set<ObservationId> out;
    for (const auto& s : states) {
        auto sup = sensor.row(s).support();
        out.insert(sup.begin(), sup.end());
    }
    return out;
}

}  // namespace purpose
