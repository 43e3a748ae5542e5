#ifndef PURPOSE_MODEL_GENERATOR_HPP
#define PURPOSE_MODEL_GENERATOR_HPP

#include "purpose/alignment.hpp"

namespace purpose {

/// Small deterministic alignment models: |S| <= 12, |O| <= 8 per agent, |E| <= 6 per space.
/// The robot sensor is injective up to bisimilar twin states, so the shortest-path policies
/// installed here succeed exactly where the goal is reachable.
AlignmentModel generate_random_model(CaseKind kind, Rng& rng);

/// Draws Extrinsic models until both checkers call one aligned.
AlignmentModel generate_aligned_extrinsic(Rng& rng);

/// Breaks exactly one Extrinsic condition (1..4) of an aligned model; nullopt if the model offers no handle.
std::optional<AlignmentModel> mutate_condition(const AlignmentModel& aligned, int condition, Rng& rng);

/// Threshold used for the VariableUtilityThreshold case by the audit tools.
inline constexpr double kAuditThreshold = 0.5;

}  // namespace purpose

#endif
