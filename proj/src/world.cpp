#include "purpose/world.hpp"

#include <deque>

namespace purpose {

std::set<std::string> Row::support() const {
    if (deterministic()) return {std::get<std::string>(value)};
    return support_of(std::get<Distribution>(value));
}

Distribution Row::distribution() const {
    if (deterministic()) return {{std::get<std::string>(value), 1.0}};
    return std::get<Distribution>(value);
}

std::string Row::draw(Rng& rng) const {
    if (deterministic()) return std::get<std::string>(value);
    return sample(std::get<Distribution>(value), rng);
}

Domain::Domain(DomainId id, std::set<StateId> states, std::set<ActionId> actions, TransitionTable transition,
               std::set<StateId> initial_states)
    : id_(std::move(id)),
      states_(std::move(states)),
      actions_(std::move(actions)),
      transition_(std::move(transition)),
      initial_states_(std::move(initial_states)) {
    if (states_.empty()) throw Error(ErrorKind::ValidationError, "domain " + id_ + " has no states");
    if (actions_.empty()) throw Error(ErrorKind::ValidationError, "domain " + id_ + " has no actions");
    for (const auto& [key, row] : transition_) {
        if (!states_.count(key.first))
            throw Error(ErrorKind::UnknownState, "transition source " + key.first + " in domain " + id_);
        if (!actions_.count(key.second))
            throw Error(ErrorKind::UnknownAction, "transition action " + key.second + " in domain " + id_);
        const std::string where = "row (" + key.first + ", " + key.second + ") of domain " + id_;
        if (!row.deterministic()) require_normalized(std::get<Distribution>(row.value), ErrorKind::MalformedRow, where);
        for (const auto& [next, p] : row.distribution())
            if (!states_.count(next)) throw Error(ErrorKind::UnknownState, "target " + next + " in " + where);
    }
    for (const auto& s : states_)
        for (const auto& a : actions_)
            if (!transition_.count({s, a}))
                throw Error(ErrorKind::MalformedRow, "missing row (" + s + ", " + a + ") in domain " + id_);
    if (initial_states_.empty()) throw Error(ErrorKind::ValidationError, "domain " + id_ + " has no initial states");
    for (const auto& s : initial_states_)
        if (!states_.count(s)) throw Error(ErrorKind::UnknownState, "initial state " + s + " in domain " + id_);
}

bool Domain::deterministic() const {
    for (const auto& [key, row] : transition_)
        if (!row.deterministic() && row.support().size() > 1) return false;
    return true;
}

const Row& Domain::row(const StateId& s, const ActionId& a) const {
    if (!states_.count(s)) throw Error(ErrorKind::UnknownState, s + " in domain " + id_);
    if (!actions_.count(a)) throw Error(ErrorKind::UnknownAction, a + " in domain " + id_);
    return transition_.at({s, a});
}

std::set<StateId> Domain::successors(const StateId& s, const ActionId& a) const { return row(s, a).support(); }

StateId step(const Domain& domain, const StateId& state, const ActionId& action, Rng& rng) {
    const Row& r = domain.row(state, action);
    if (!r.deterministic() && !is_normalized(std::get<Distribution>(r.value)))
        throw Error(ErrorKind::MalformedRow, "row (" + state + ", " + action + ")");
    return r.draw(rng);
}

std::set<StateId> reachable(const Domain& domain, const std::set<StateId>& from, int horizon) {
    for (const auto& s : from)
        if (!domain.has_state(s)) throw Error(ErrorKind::UnknownState, s + " in domain " + domain.id());
    std::set<StateId> seen = from;
    std::vector<StateId> frontier(from.begin(), from.end());
    for (int t = 0; t < horizon && !frontier.empty(); ++t) {
        std::vector<StateId> next;
        for (const auto& s : frontier)
            for (const auto& a : domain.actions())
                for (const auto& n : domain.successors(s, a))
                    if (seen.insert(n).second) next.push_back(n);
        frontier = std::move(next);
    }
    return seen;
}

History::History(HistoryKind kind, std::optional<Window> window) : kind_(kind) {
    if (window) set_window(*window);
}

void History::set_window(Window window) {
    if (window.start < 0 || window.length < 1)
        throw Error(ErrorKind::ValidationError, "history window needs start >= 0 and length >= 1");
    window_ = window;
}

EntryKind History::expected_next() const {
    const bool even = entries_.size() % 2 == 0;
    switch (kind_) {
        case HistoryKind::StateAction: return even ? EntryKind::State : EntryKind::Action;
        case HistoryKind::ObservationAction: return even ? EntryKind::Observation : EntryKind::Action;
        case HistoryKind::StateOnly: return EntryKind::State;
        case HistoryKind::ObservationOnly: return EntryKind::Observation;
        case HistoryKind::ActionOnly: return EntryKind::Action;
    }
    return EntryKind::State;
}

void History::append(EntryKind kind, const std::string& id) {
    if (kind != expected_next())
        throw Error(ErrorKind::ValidationError, "history entry " + id + " breaks the alternation of its kind");
    entries_.push_back({kind, id});
}

std::vector<std::string> History::ids(EntryKind kind) const {
    std::vector<std::string> out;
    for (const auto& e : entries_)
        if (e.kind == kind) out.push_back(e.id);
    return out;
}

int History::action_count() const { return static_cast<int>(ids(EntryKind::Action).size()); }

}  // namespace purpose
