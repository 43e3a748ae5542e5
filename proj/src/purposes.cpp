#include "purpose/purposes.hpp"

#include <cmath>

namespace purpose {

namespace {

constexpr char kAxisSeparator = '|';

std::string compose_values(const std::vector<std::string>& values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += kAxisSeparator;
        out += values[i];
    }
    return out;
}

}  // namespace

EncodingSpace::EncodingSpace(std::string id, AgentId owner, std::set<PointId> points)
    : id_(std::move(id)), owner_(std::move(owner)), points_(std::move(points)) {
    if (points_.empty()) throw Error(ErrorKind::ValidationError, "encoding space " + id_ + " has no points");
}

EncodingSpace::EncodingSpace(std::string id, AgentId owner, std::vector<Axis> dims)
    : id_(std::move(id)), owner_(std::move(owner)), dims_(std::move(dims)) {
    if (dims_->empty()) throw Error(ErrorKind::ValidationError, "encoding space " + id_ + " has no axes");
    std::vector<std::vector<std::string>> partial{{}};
    for (const auto& axis : *dims_) {
        if (axis.values.empty()) throw Error(ErrorKind::ValidationError, "axis " + axis.name + " of " + id_ + " is empty");
        std::set<std::string> distinct(axis.values.begin(), axis.values.end());
        if (distinct.size() != axis.values.size())
            throw Error(ErrorKind::ValidationError, "axis " + axis.name + " of " + id_ + " repeats a value");
        for (const auto& v : axis.values)
            if (v.find(kAxisSeparator) != std::string::npos)
                throw Error(ErrorKind::ValidationError, "axis value " + v + " contains the separator");
        std::vector<std::vector<std::string>> grown;
        for (const auto& prefix : partial)
            for (const auto& v : axis.values) {
                auto p = prefix;
                p.push_back(v);
                grown.push_back(std::move(p));
            }
        partial = std::move(grown);
    }
    for (auto& parts : partial) {
        PointId p = compose_values(parts);
        points_.insert(p);
        parts_.emplace(p, std::move(parts));
    }
}

const std::vector<std::string>& EncodingSpace::decompose(const PointId& p) const {
    auto it = parts_.find(p);
    if (it == parts_.end()) throw Error(ErrorKind::UnknownEncodingPoint, p + " in product space " + id_);
    return it->second;
}

PointId EncodingSpace::compose(const std::vector<std::string>& values) const {
    if (!dims_ || values.size() != dims_->size())
        throw Error(ErrorKind::DimensionMismatch, "point arity does not match space " + id_);
    PointId p = compose_values(values);
    if (!points_.count(p)) throw Error(ErrorKind::UnknownEncodingPoint, p + " in space " + id_);
    return p;
}

double UtilityFunction::operator()(const PointId& p) const {
    auto it = table.find(p);
    if (it == table.end()) throw Error(ErrorKind::UnknownEncodingPoint, p + " has no utility in " + space_id);
    return it->second;
}

std::string_view to_string(PurposeKind kind) {
    switch (kind) {
        case PurposeKind::Need: return "need";
        case PurposeKind::Mission: return "mission";
        case PurposeKind::Human: return "human";
    }
    return "need";
}

std::string_view to_string(Polarity polarity) {
    return polarity == Polarity::Prescriptive ? "prescriptive" : "proscriptive";
}

Purpose purpose_from_utility(PurposeId id, const EncodingSpace& space, UtilityFunction utility, const PurposeMeta& meta) {
    if (utility.space_id != space.id())
        throw Error(ErrorKind::ValidationError, "utility of " + id + " belongs to space " + utility.space_id);
    for (const auto& p : space.points())
        if (!utility.table.count(p)) throw Error(ErrorKind::UnknownEncodingPoint, "utility of " + id + " misses point " + p);
    Purpose out;
    bool positive = false;
    bool negative = false;
    for (const auto& [p, u] : utility.table) {
        if (!space.contains(p)) throw Error(ErrorKind::UnknownEncodingPoint, p + " in utility of " + id);
        if (!std::isfinite(u)) throw Error(ErrorKind::ValidationError, "utility of " + id + " at " + p + " is not finite");
        if (u != 0.0) out.support.insert(p);
        positive |= u > 0.0;
        negative |= u < 0.0;
    }
    if (positive && negative) throw Error(ErrorKind::MixedSignSupport, "purpose " + id + " mixes positive and negative utilities");
    if (out.support.empty()) throw Error(ErrorKind::EmptySupport, "purpose " + id + " has all-zero utility");
    if (meta.intention_flag && meta.intended_domains.empty())
        throw Error(ErrorKind::ValidationError, "intended purpose " + id + " names no domain");
    out.id = std::move(id);
    out.owner = space.owner();
    out.space_id = space.id();
    out.kind = meta.kind;
    out.polarity = positive ? Polarity::Prescriptive : Polarity::Proscriptive;
    out.utility = std::move(utility);
    out.priority = meta.priority;
    out.intention_flag = meta.intention_flag;
    out.intended_domains = meta.intended_domains;
    out.ground_truth = meta.ground_truth;
    return out;
}

AlignmentMap::AlignmentMap(const EncodingSpace& human_space, const EncodingSpace& robot_space, std::map<PointId, PointId> table)
    : human_space_(human_space.id()), robot_space_(robot_space.id()), table_(std::move(table)) {
    for (const auto& m : robot_space.points())
        if (!table_.count(m)) throw Error(ErrorKind::IncompleteModel, "alignment map misses robot point " + m);
    for (const auto& [m, e] : table_) {
        if (!robot_space.contains(m)) throw Error(ErrorKind::UnknownEncodingPoint, m + " in alignment map");
        if (!human_space.contains(e)) throw Error(ErrorKind::UnknownEncodingPoint, e + " in alignment map");
    }
}

const PointId& AlignmentMap::to_human(const PointId& robot_point) const {
    auto it = table_.find(robot_point);
    if (it == table_.end()) throw Error(ErrorKind::UnknownEncodingPoint, robot_point + " in alignment map");
    return it->second;
}

std::set<PointId> AlignmentMap::inverse(const PointId& human_point) const {
    std::set<PointId> out;
    for (const auto& [m, e] : table_)
        if (e == human_point) out.insert(m);
    return out;
}

Purpose derive_mission(PurposeId id, const Purpose& human_purpose, const AlignmentMap& map,
                       const EncodingSpace& robot_space, const PurposeMeta& meta) {
    if (map.human_space() != human_purpose.space_id || map.robot_space() != robot_space.id())
        throw Error(ErrorKind::ValidationError, "alignment map does not connect " + robot_space.id() + " to " + human_purpose.space_id);
    UtilityFunction utility{robot_space.id(), {}};
    bool any = false;
    for (const auto& m : robot_space.points()) {
        const PointId& e = map.to_human(m);
        const bool hit = human_purpose.support.count(e) > 0;
        utility.table[m] = hit ? human_purpose.utility(e) : 0.0;
        any |= hit;
    }
    if (!any) throw Error(ErrorKind::EmptyMission, "no robot point of " + robot_space.id() + " maps into " + human_purpose.id);
    PurposeMeta mission_meta = meta;
    mission_meta.kind = PurposeKind::Mission;
    return purpose_from_utility(std::move(id), robot_space, std::move(utility), mission_meta);
}

ObservationEncoder::ObservationEncoder(AgentId owner, const EncodingSpace& space, DomainId domain,
                                       std::map<ObservationId, PointId> table)
    : owner_(std::move(owner)), space_id_(space.id()), domain_(std::move(domain)), table_(std::move(table)), points_(space.points()) {
    for (const auto& [o, p] : table_) {
        if (!space.contains(p)) throw Error(ErrorKind::UnknownEncodingPoint, p + " for observation " + o + " in " + space_id_);
        inverse_[p].insert(o);
    }
}

PointId encode(const ObservationEncoder& encoder, const ObservationId& observation) {
    auto it = encoder.table().find(observation);
    if (it == encoder.table().end())
        throw Error(ErrorKind::UnknownObservation, observation + " for encoder " + encoder.owner() + "/" + encoder.space_id());
    return it->second;
}

std::set<ObservationId> decode(const ObservationEncoder& encoder, const PointId& point) {
    if (!encoder.points_.count(point)) throw Error(ErrorKind::UnknownEncodingPoint, point + " in " + encoder.space_id());
    auto it = encoder.inverse_.find(point);
    return it == encoder.inverse_.end() ? std::set<ObservationId>{} : it->second;
}

double composite_utility(const MotivationalSpace& mspace, const std::vector<PointId>& point) {
    if (point.size() != mspace.components.size())
        throw Error(ErrorKind::DimensionMismatch, "point has " + std::to_string(point.size()) + " components, space has " +
                                                      std::to_string(mspace.components.size()));
    double total = 0.0;
    for (std::size_t i = 0; i < point.size(); ++i) {
        const auto& table = mspace.components[i].utility.table;
        auto it = table.find(point[i]);
        if (it == table.end())
            throw Error(ErrorKind::DimensionMismatch, point[i] + " is not a point of " + mspace.components[i].space_id);
        total += mspace.components[i].priority * it->second;
    }
    return total;
}

std::vector<Purpose> intention_set(const std::vector<Purpose>& purposes) {
    std::vector<Purpose> out;
    for (const auto& p : purposes)
        if (p.intention_flag) out.push_back(p);
    return out;
}

}  // namespace purpose
