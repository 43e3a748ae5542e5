#ifndef PURPOSE_CORE_HPP
#define PURPOSE_CORE_HPP

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "purpose/error.hpp"

namespace purpose {

using StateId = std::string;
using ActionId = std::string;
using ObservationId = std::string;
using PointId = std::string;
using DomainId = std::string;
using PurposeId = std::string;
using GoalId = std::string;
using AgentId = std::string;

using Rng = std::mt19937_64;

/// Finite probability table keyed by identifier.
using Distribution = std::map<std::string, double>;

inline constexpr double kProbabilityTolerance = 1e-9;

/// Uniform draw in [0,1) from the top 53 bits; identical on every standard library.
inline double uniform01(Rng& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [lo, hi].
inline int uniform_int(Rng& rng, int lo, int hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo + 1);
    return lo + static_cast<int>(rng() % span);
}

/// Samples a key with the table's probabilities (ascending key order).
std::string sample(const Distribution& dist, Rng& rng);

/// Throws `kind` unless entries lie in [0,1] and sum to 1 within tolerance.
void require_normalized(const Distribution& dist, ErrorKind kind, const std::string& what);

bool is_normalized(const Distribution& dist);

/// Keys with strictly positive mass.
std::set<std::string> support_of(const Distribution& dist);

std::string join(const std::set<std::string>& items, const std::string& sep = ",");

template <typename T>
bool is_subset(const std::set<T>& a, const std::set<T>& b) {
    for (const auto& x : a)
        if (!b.count(x)) return false;
    return true;
}

template <typename T>
std::set<T> set_difference(const std::set<T>& a, const std::set<T>& b) {
    std::set<T> out;
    for (const auto& x : a)
        if (!b.count(x)) out.insert(x);
    return out;
}

template <typename T>
std::set<T> set_intersection(const std::set<T>& a, const std::set<T>& b) {
    std::set<T> out;
    for (const auto& x : a)
        if (b.count(x)) out.insert(x);
    return out;
}

}  // namespace purpose

#endif
