#ifndef PURPOSE_ERROR_HPP
#define PURPOSE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace purpose {

enum class ErrorKind {
    UnknownState,
    UnknownAction,
    MalformedRow,
    UncoveredState,
    UnknownObservation,
    MixedSignSupport,
    EmptySupport,
    EmptyMission,
    UnknownEncodingPoint,
    DimensionMismatch,
    PointOutsideSupport,
    DuplicateGoalKey,
    EmptyIntentionSet,
    UtilityOutOfRange,
    UnpredictableCandidate,
    Unsolvable,
    SubgoalTimeout,
    UnnormalizedDistribution,
    SupportViolation,
    IncompleteModel,
    HorizonTooShort,
    TraceDidNotSucceed,
    ParseError,
    ValidationError,
    IoError,
};

std::string_view to_string(ErrorKind kind);

/// Every library failure. `detail` carries the failed link for SubgoalTimeout.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message, int detail = -1);

    ErrorKind kind() const noexcept { return kind_; }
    int detail() const noexcept { return detail_; }

private:
    ErrorKind kind_;
    int detail_;
};

}  // namespace purpose

#endif
