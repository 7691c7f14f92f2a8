#pragma once

// User sets as bitmasks: bit k-1 stands for user k (users are 1-based).

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace secagg {

using UserSet = std::uint32_t;

inline int set_size(UserSet s) { return std::popcount(s); }

inline bool set_contains(UserSet s, int user) { return (s >> (user - 1)) & 1u; }

inline bool set_subset(UserSet inner, UserSet outer) { return (inner & ~outer) == 0; }

inline UserSet full_set(int users) { return users >= 32 ? ~UserSet{0} : (UserSet{1} << users) - 1; }

inline UserSet set_of(const std::vector<int>& members) {
    UserSet s = 0;
    for (int u : members) {
        if (u < 1 || u > 32) throw std::out_of_range("user id outside [1, 32]");
        s |= UserSet{1} << (u - 1);
    }
    return s;
}

/// Ascending member list of a set.
inline std::vector<int> set_members(UserSet s) {
    std::vector<int> out;
    for (int u = 1; s != 0; ++u, s >>= 1)
        if (s & 1u) out.push_back(u);
    return out;
}

/// Position of a user within the ascending member order, 0-based.
inline int set_position(UserSet s, int user) {
    if (!set_contains(s, user)) throw std::invalid_argument("user not in set");
    UserSet below = s & ((UserSet{1} << (user - 1)) - 1);
    return std::popcount(below);
}

inline std::string set_to_string(UserSet s) {
    std::string out = "{";
    bool first = true;
    for (int u : set_members(s)) {
        if (!first) out += ",";
        out += std::to_string(u);
        first = false;
    }
    return out + "}";
}

/// All subsets of [1..users] with at least min_size members, ascending by mask.
inline std::vector<UserSet> sets_of_size_at_least(int users, int min_size) {
    std::vector<UserSet> out;
    UserSet full = full_set(users);
    for (UserSet s = 0; ; ++s) {
        if (std::popcount(s) >= min_size) out.push_back(s);
        if (s == full) break;
    }
    return out;
}

/// All subsets of [1..users] with at most max_size members, ascending by mask.
/// Includes the empty set.
inline std::vector<UserSet> sets_of_size_at_most(int users, int max_size) {
    std::vector<UserSet> out;
    UserSet full = full_set(users);
    for (UserSet s = 0; ; ++s) {
        if (std::popcount(s) <= max_size) out.push_back(s);
        if (s == full) break;
    }
    return out;
}

/// All subsets of `outer` with at least min_size members, ascending by mask.
inline std::vector<UserSet> subsets_of_size_at_least(UserSet outer, int min_size) {
    std::vector<UserSet> out;
    // Standard submask walk visits masks in descending order; collect then reverse.
    UserSet s = outer;
    for (;;) {
        if (std::popcount(s) >= min_size) out.push_back(s);
        if (s == 0) break;
        s = (s - 1) & outer;
    }
    for (std::size_t i = 0, j = out.size(); i + 1 < j; ++i, --j) std::swap(out[i], out[j - 1]);
    return out;
}

}  // namespace secagg
