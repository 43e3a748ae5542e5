#ifndef PURPOSE_PURPOSES_HPP
#define PURPOSE_PURPOSES_HPP

#include <optional>

#include "purpose/core.hpp"

namespace purpose {

/// Named axis of a product encoding space.
struct Axis {
    std::string name;
    std::vector<std::string> values;
};

/// Finite set of encoding points; optionally a product of axes with points "v1|v2|...".
class EncodingSpace {
public:
    EncodingSpace(std::string id, AgentId owner, std::set<PointId> points);
    EncodingSpace(std::string id, AgentId owner, std::vector<Axis> dims);

    const std::string& id() const { return id_; }
    const AgentId& owner() const { return owner_; }
    const std::set<PointId>& points() const { return points_; }
    const std::optional<std::vector<Axis>>& dims() const { return dims_; }
    bool contains(const PointId& p) const { return points_.count(p) > 0; }

    /// Axis values of a product point; throws UnknownEncodingPoint.
    const std::vector<std::string>& decompose(const PointId& p) const;
    /// Point id assembled from axis values; throws DimensionMismatch.
    PointId compose(const std::vector<std::string>& values) const;

private:
    std::string id_;
    AgentId owner_;
    std::set<PointId> points_;
    std::optional<std::vector<Axis>> dims_;
    std::map<PointId, std::vector<std::string>> parts_;
};

struct UtilityFunction {
    std::string space_id;
    std::map<PointId, double> table;

    double operator()(const PointId& p) const;
};

enum class PurposeKind { Need, Mission, Human };
enum class Polarity { Prescriptive, Proscriptive };

std::string_view to_string(PurposeKind kind);
std::string_view to_string(Polarity polarity);

/// Caller-supplied attributes of a purpose.
struct PurposeMeta {
    PurposeKind kind = PurposeKind::Need;
    double priority = 1.0;
    bool intention_flag = false;
    std::set<DomainId> intended_domains;
    bool ground_truth = false;
};

struct Purpose {
    PurposeId id;
    AgentId owner;
    std::string space_id;
    PurposeKind kind = PurposeKind::Need;
    Polarity polarity = Polarity::Prescriptive;
    std::set<PointId> support;
    UtilityFunction utility;
    double priority = 1.0;
    bool intention_flag = false;
    std::set<DomainId> intended_domains;
    bool ground_truth = false;
};

Purpose purpose_from_utility(PurposeId id, const EncodingSpace& space, UtilityFunction utility, const PurposeMeta& meta);

/// Robot-point to human-point map between two encoding spaces.
class AlignmentMap {
public:
    AlignmentMap(const EncodingSpace& human_space, const EncodingSpace& robot_space, std::map<PointId, PointId> table);

    const std::string& human_space() const { return human_space_; }
    const std::string& robot_space() const { return robot_space_; }
    const std::map<PointId, PointId>& table() const { return table_; }
    const PointId& to_human(const PointId& robot_point) const;
    std::set<PointId> inverse(const PointId& human_point) const;

private:
    std::string human_space_;
    std::string robot_space_;
    std::map<PointId, PointId> table_;
};

Purpose derive_mission(PurposeId id, const Purpose& human_purpose, const AlignmentMap& map,
                       const EncodingSpace& robot_space, const PurposeMeta& meta);

/// Observation-to-point table of one agent for one purpose space and domain.
class ObservationEncoder {
public:
    ObservationEncoder(AgentId owner, const EncodingSpace& space, DomainId domain, std::map<ObservationId, PointId> table);

    const AgentId& owner() const { return owner_; }
    const std::string& space_id() const { return space_id_; }
    const DomainId& domain() const { return domain_; }
    const std::map<ObservationId, PointId>& table() const { return table_; }
    const std::set<PointId>& space_points() const { return points_; }

private:
    AgentId owner_;
    std::string space_id_;
    DomainId domain_;
    std::map<ObservationId, PointId> table_;
    std::set<PointId> points_;
    std::map<PointId, std::set<ObservationId>> inverse_;

    friend std::set<ObservationId> decode(const ObservationEncoder&, const PointId&);
};

PointId encode(const ObservationEncoder& encoder, const ObservationId& observation);
std::set<ObservationId> decode(const ObservationEncoder& encoder, const PointId& point);

struct MotivationComponent {
    std::string space_id;
    double priority = 1.0;
    UtilityFunction utility;
};

/// Product of the robot's purpose spaces with a priority-weighted composite utility.
struct MotivationalSpace {
    AgentId robot;
    std::vector<MotivationComponent> components;
};

/// Sum of priority-weighted component utilities; one point per component.
double composite_utility(const MotivationalSpace& mspace, const std::vector<PointId>& point);

std::vector<Purpose> intention_set(const std::vector<Purpose>& purposes);

}  // namespace purpose

#endif
