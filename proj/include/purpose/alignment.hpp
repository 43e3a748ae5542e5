#ifndef PURPOSE_ALIGNMENT_HPP
#define PURPOSE_ALIGNMENT_HPP

#include <functional>
#include <optional>

#include "purpose/competence.hpp"

namespace purpose {

enum class CaseKind {
    Extrinsic,
    VariableUtilityThreshold,
    VariableUtilityMax,
    Intrinsic,
    Instrumental,
    InstrumentalProscriptive,
    MultiDomainAll,
    MultiDomainAny,
};

inline constexpr CaseKind kAllCases[] = {
    CaseKind::Extrinsic,    CaseKind::VariableUtilityThreshold, CaseKind::VariableUtilityMax, CaseKind::Intrinsic,
    CaseKind::Instrumental, CaseKind::InstrumentalProscriptive, CaseKind::MultiDomainAll,     CaseKind::MultiDomainAny,
};

/// CLI spelling: extrinsic, vut, vumax, intrinsic, instrumental, proscriptive, multidomain-all, multidomain-any.
std::string_view to_string(CaseKind kind);
CaseKind parse_case(const std::string& name);

struct AlignmentCase {
    CaseKind kind = CaseKind::Extrinsic;
    double threshold = 0.0;  ///< VariableUtilityThreshold only
};

enum class CheckMode { Semantic, Operational };
std::string_view to_string(CheckMode mode);
CheckMode parse_mode(const std::string& name);

/// Per-domain half of a model: encoders, committed goal(s) and ground truth.
struct DomainBinding {
    DomainId domain;
    std::optional<ObservationEncoder> robot_encoder;
    std::optional<ObservationEncoder> human_encoder;
    std::optional<ObservationEncoder> human_forbidden_encoder;
    Goal goal;
    std::vector<Goal> subgoals;
    std::set<StateId> true_states;                 ///< S*
    std::set<ObservationId> true_observations;     ///< G*
    std::set<StateId> forbidden_states;            ///< S^xi*
    std::set<ObservationId> forbidden_observations;  ///< G^xi*
};

struct AlignmentModel {
    std::map<DomainId, Domain> domains;
    std::optional<SensorModel> human_sensor;
    std::optional<SensorModel> robot_sensor;
    Purpose human_purpose;
    std::optional<Purpose> human_forbidden;
    Purpose robot_purpose;
    PointId intention_point;
    std::set<DomainId> robot_domains;
    ActionPolicy policy;
    int timeout = 1;
    std::optional<ActionId> idle_action;
    std::vector<DomainBinding> bindings;
};

struct ConditionResult {
    int number = 0;
    std::string label;
    bool holds = true;
    DomainId domain;
    std::set<std::string> witnesses;
};

/// One realized outcome of the operational check pushed through the human pipeline.
struct OutcomeRecord {
    DomainId domain;
    int link = 0;
    ObservationId achieved;
    StateId state;
    std::set<ObservationId> human_observations;
    std::set<PointId> encodings;
    bool satisfied = false;
};

struct AlignmentVerdict {
    bool aligned = false;
    CheckMode mode = CheckMode::Semantic;
    AlignmentCase acase;
    std::vector<ConditionResult> conditions;
    std::vector<OutcomeRecord> outcomes;
    std::vector<std::string> notes;
    std::vector<std::string> witness_trace;
    std::optional<double> success_probability;

    std::optional<int> first_failing() const;
};

struct CheckerOptions {
    /// Condition number ignored by the semantic checker (mutation testing only); 0 = none.
    int skip_condition = 0;
};

struct OperationalOptions {
    /// When set, clauses must hold with probability >= 1 - delta instead of on every branch.
    std::optional<double> delta;
};

AlignmentVerdict check_conditions(const AlignmentModel& model, const AlignmentCase& acase, const CheckerOptions& options = {});
AlignmentVerdict check_definition(const AlignmentModel& model, const AlignmentCase& acase, Rng& rng,
                                  const OperationalOptions& options = {});

/// Plain-text dump of a model for disagreement reports.
std::string describe(const AlignmentModel& model);

using ModelGenerator = std::function<AlignmentModel(CaseKind, Rng&)>;

struct AuditDisagreement {
    int index = 0;
    bool semantic = false;
    bool operational = false;
    std::string model;
};

struct AuditReport {
    AlignmentCase acase;
    int count = 0;
    int agreements = 0;
    int aligned = 0;
    std::vector<AuditDisagreement> disagreements;
};

/// Model i is drawn from Rng(seed + i); both checkers run on every model.
AuditReport equivalence_audit(const ModelGenerator& generator, const AlignmentCase& acase, int count, std::uint64_t seed,
                              const CheckerOptions& options = {});

}  // namespace purpose

#endif
