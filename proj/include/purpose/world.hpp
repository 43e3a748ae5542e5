#ifndef PURPOSE_WORLD_HPP
#define PURPOSE_WORLD_HPP

#include <optional>
#include <utility>
#include <variant>

#include "purpose/core.hpp"

namespace purpose {

/// A transition or sensor row: a single outcome or a probability table.
struct Row {
    std::variant<std::string, Distribution> value;

    bool deterministic() const { return std::holds_alternative<std::string>(value); }
    /// Outcomes with nonzero probability.
    std::set<std::string> support() const;
    /// Probability table view (a deterministic row becomes a point mass).
    Distribution distribution() const;
    std::string draw(Rng& rng) const;
};

using TransitionTable = std::map<std::pair<StateId, ActionId>, Row>;

/// Finite domain with a total transition table. Immutable once built.
class Domain {
public:
    Domain(DomainId id, std::set<StateId> states, std::set<ActionId> actions, TransitionTable transition,
           std::set<StateId> initial_states);

    const DomainId& id() const { return id_; }
    const std::set<StateId>& states() const { return states_; }
    const std::set<ActionId>& actions() const { return actions_; }
    const std::set<StateId>& initial_states() const { return initial_states_; }
    const TransitionTable& transition() const { return transition_; }

    bool has_state(const StateId& s) const { return states_.count(s) > 0; }
    bool has_action(const ActionId& a) const { return actions_.count(a) > 0; }
    bool deterministic() const;

    /// Row for (s, a); throws UnknownState / UnknownAction.
    const Row& row(const StateId& s, const ActionId& a) const;
    std::set<StateId> successors(const StateId& s, const ActionId& a) const;

private:
    DomainId id_;
    std::set<StateId> states_;
    std::set<ActionId> actions_;
    TransitionTable transition_;
    std::set<StateId> initial_states_;
};

StateId step(const Domain& domain, const StateId& state, const ActionId& action, Rng& rng);

/// States reachable with nonzero probability by some action sequence of length <= horizon.
std::set<StateId> reachable(const Domain& domain, const std::set<StateId>& from, int horizon);

enum class HistoryKind { StateAction, ObservationAction, StateOnly, ObservationOnly, ActionOnly };

enum class EntryKind { State, Observation, Action };

struct HistoryEntry {
    EntryKind kind;
    std::string id;

    bool operator==(const HistoryEntry&) const = default;
};

/// Subgoal episode marker (start step, duration).
struct Window {
    int start = 0;
    int length = 1;

    bool operator==(const Window&) const = default;
};

/// Typed trajectory. Alternation is checked on every append.
class History {
public:
    explicit History(HistoryKind kind, std::optional<Window> window = std::nullopt);

    void append(EntryKind kind, const std::string& id);
    HistoryKind kind() const { return kind_; }
    const std::vector<HistoryEntry>& entries() const { return entries_; }
    const std::optional<Window>& window() const { return window_; }
    void set_window(Window window);

    std::vector<std::string> ids(EntryKind kind) const;
    /// Number of action entries.
    int action_count() const;

private:
    EntryKind expected_next() const;

    HistoryKind kind_;
    std::vector<HistoryEntry> entries_;
    std::optional<Window> window_;
};

}  // namespace purpose

#endif
