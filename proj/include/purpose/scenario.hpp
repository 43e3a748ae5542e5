#ifndef PURPOSE_SCENARIO_HPP
#define PURPOSE_SCENARIO_HPP

#include <compare>
#include <filesystem>
#include <optional>

#include "purpose/arbitration.hpp"
#include "purpose/causality.hpp"

namespace purpose {

inline constexpr int kSchemaVersion = 1;
inline constexpr int kReportFormatVersion = 1;

struct EncoderKey {
    AgentId owner;
    std::string space;
    DomainId domain;
    std::string context;  ///< empty: applies in every context

    auto operator<=>(const EncoderKey&) const = default;
};

/// How a purpose becomes a candidate goal during arbitration.
enum class GroundingMode { BestPoint, Whole };

struct PurposeEntry {
    Purpose purpose;
    /// (human purpose id, alignment map id) when the purpose is a derived mission.
    std::optional<std::pair<PurposeId, std::string>> derived_from;
    bool active = true;
    GroundingMode grounding = GroundingMode::BestPoint;
};

struct PhaseSpec {
    int first_trial = 1;
    int last_trial = 1;
    std::map<PurposeId, double> priorities;
    std::vector<PurposeId> add;
    std::vector<PurposeId> remove;
};

struct TrialSpec {
    std::string context;
    DomainId domain;
    std::set<StateId> start;  ///< empty: the domain's initial states
};

struct BindingSpec {
    DomainId domain;
    std::string robot_space;
    std::string human_space;
    std::optional<std::string> forbidden_space;
    std::optional<std::set<ObservationId>> goal;  ///< default: grounding of the intention point
    std::vector<std::pair<GoalId, std::set<ObservationId>>> subgoals;
    std::set<StateId> true_states;
    std::set<ObservationId> true_observations;
    std::set<StateId> forbidden_states;
    std::set<ObservationId> forbidden_observations;
};

struct AlignmentSection {
    PurposeId human_purpose;
    std::optional<PurposeId> human_forbidden;
    PurposeId robot_purpose;
    PointId point;
    std::set<DomainId> robot_domains;
    int timeout = 1;
    std::optional<ActionId> idle_action;
    std::string context;
    std::vector<BindingSpec> bindings;
    bool planned_policy = true;
};

struct CheckSpec {
    int after_phase = 1;
    std::optional<AlignmentCase> acase;
    std::vector<CheckMode> modes;
    std::optional<std::string> causality_baseline;
};

struct ScenarioSpec {
    std::string name;
    std::uint64_t seed = 0;
    std::vector<Domain> domains;
    std::map<DomainId, ActionId> idle_actions;
    std::vector<SensorModel> sensors;
    std::vector<EncodingSpace> spaces;
    std::map<EncoderKey, ObservationEncoder> encoders;
    std::map<std::string, AlignmentMap> maps;
    std::vector<PurposeEntry> purposes;
    ActionPolicy policy;
    std::optional<GoalSelectorPolicy> selector;
    std::optional<LearnerConfig> learner;
    ArbitrationConfig arbitration;
    int trial_timeout = 30;
    std::vector<PhaseSpec> phases;
    std::vector<TrialSpec> trials;
    std::optional<AlignmentSection> alignment;
    std::vector<CheckSpec> checks;

    const Domain& domain(const DomainId& id) const;
    const SensorModel& sensor(const AgentId& owner) const;
    const EncodingSpace& space(const std::string& id) const;
    const PurposeEntry& purpose(const PurposeId& id) const;
    /// Encoder for the context, falling back to the context-free one.
    const ObservationEncoder& encoder(const AgentId& owner, const std::string& space, const DomainId& domain,
                                      const std::string& context) const;
};

/// Parses and validates; ParseError carries line/column, ValidationError the element.
ScenarioSpec parse_scenario(const std::string& text);
ScenarioSpec load_scenario(const std::filesystem::path& path);
std::string emit_scenario(const ScenarioSpec& spec);
/// Cross-reference and phase checks; throws ValidationError.
void validate(const ScenarioSpec& spec);
/// Non-fatal findings (proscriptive dominance, external fulfilment).
std::vector<std::string> scenario_warnings(const ScenarioSpec& spec);

AlignmentModel build_alignment_model(const ScenarioSpec& spec);

struct CandidateRecord {
    GoalId goal;
    PurposeId purpose;
    bool feasible = false;
    StateId predicted_end;
    std::vector<PointId> predicted_point;
    double score = 0.0;
};

struct TrialRecord {
    int index = 0;
    int phase = 0;
    std::string context;
    DomainId domain;
    StateId start;
    std::vector<PurposeId> intended;
    std::vector<CandidateRecord> candidates;
    std::optional<GoalId> selected;
    std::optional<PurposeId> selected_purpose;
    std::vector<StateId> states;
    std::vector<ActionId> actions;
    bool success = false;
    std::map<PurposeId, int> proscribed_visits;
};

struct CheckRecord {
    int after_phase = 0;
    std::vector<AlignmentVerdict> verdicts;
    std::optional<CausalVerdict> causality;
};

struct LearningCurve {
    GoalId goal;
    std::vector<double> success_rate;
};

struct ReportDocument {
    int format_version = kReportFormatVersion;
    std::string scenario_name;
    std::string scenario_digest;
    std::uint64_t seed = 0;
    std::vector<TrialRecord> trials;
    std::vector<CheckRecord> checks;
    std::vector<LearningCurve> learning_curves;
    std::vector<std::string> warnings;
};

/// Executes the schedule (optionally only the first `max_trials`).
ReportDocument run_trials(const ScenarioSpec& spec, Rng& rng, std::optional<int> max_trials = std::nullopt);

enum class ReportFormat { Json, Text };

std::string render_report(const ReportDocument& report, ReportFormat format);
void emit_report(const ReportDocument& report, const std::filesystem::path& path, ReportFormat format);

std::string render_verdict(const AlignmentVerdict& verdict, ReportFormat format);
std::string render_causal(const CausalVerdict& verdict, ReportFormat format);
std::string render_audit(const AuditReport& report, ReportFormat format);

/// 64-bit FNV-1a of the text, as 16 hex digits.
std::string digest(const std::string& text);

}  // namespace purpose

#endif
