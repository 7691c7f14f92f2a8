#pragma once

// Session parameter set and the feasibility gate. A session aggregates the
// inputs of `users` clients; the server may start round two once any
// `min_responders` round-one messages arrived, and the result stays private
// against the server colluding with up to `max_colluders` clients. Such a
// session exists exactly when min_responders > max_colluders.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"
#include "sets.hpp"

namespace secagg {

/// Parameter sets that violate the existence condition (or its side
/// constraints) are rejected with this error; the message states the rule.
struct infeasible_error : std::runtime_error {
    explicit infeasible_error(const std::string& rule) : std::runtime_error(rule) {}
};

/// Enumeration work exceeded the configured budget.
struct budget_error : std::runtime_error {
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

struct SessionParams {
    int users = 0;           // K
    int min_responders = 0;  // U, round-two start threshold
    int max_colluders = 0;   // T
    int grouping = 1;        // B, base symbols per effective symbol
    long input_len = 0;      // L, per-user input length in base-field symbols

    std::shared_ptr<const Field> base_field;
    /// Field the sharing arithmetic runs in: GF(q^B). Same object as
    /// base_field when grouping == 1.
    std::shared_ptr<const Field> eff_field;

    int eff_len = 0;  // L/B, input length in effective symbols
    int blocks = 0;   // eff_len / (U - T), independently shared column blocks

    /// Round-two payload length in base-field symbols: L / (U - T).
    int share_len_base() const { return grouping * blocks; }
    /// Round-two payload length in effective symbols.
    int share_len_eff() const { return blocks; }
    int secret_rows() const { return min_responders - max_colluders; }  // rows of a block that carry the mask sum

    std::vector<UserSet> qualifying_sets() const {
        return sets_of_size_at_least(users, min_responders);
    }

    static SessionParams make(int users, int min_responders, int max_colluders,
                              std::shared_ptr<const Field> base_field, int grouping = 1,
                              long input_len = 0, bool allow_large = false) {
        if (!base_field) throw std::invalid_argument("base field required");
        if (users < 2)
            throw infeasible_error("at least two users are required; got " + std::to_string(users));
        if (min_responders < 1 || min_responders > users - 1)
            throw infeasible_error("response threshold must lie in [1, K-1]; got U=" +
                                   std::to_string(min_responders) + " with K=" + std::to_string(users));
        if (max_colluders < 0 || max_colluders > users - 2)
            throw infeasible_error("collusion threshold must lie in [0, K-2]; got T=" +
                                   std::to_string(max_colluders) + " with K=" + std::to_string(users));
        if (min_responders <= max_colluders)
            throw infeasible_error(
                "no scheme exists unless the response threshold exceeds the collusion "
                "threshold (U > T); got U=" + std::to_string(min_responders) +
                ", T=" + std::to_string(max_colluders));
        if (users > 20 && !allow_large)
            throw std::invalid_argument(
                "refusing K > 20 (share tables grow with the number of qualifying sets); "
                "pass the large-session override to proceed");
        if (grouping < 1) throw std::invalid_argument("grouping factor must be at least 1");

        SessionParams sp;
        sp.users = users;
        sp.min_responders = min_responders;
        sp.max_colluders = max_colluders;
        sp.grouping = grouping;
        sp.base_field = std::move(base_field);

        // The sharing matrices need K + U distinct points in the effective field.
        unsigned __int128 qb = 1;
        bool overflow = false;
        for (int i = 0; i < grouping; ++i) {
            qb *= sp.base_field->size();
            if (qb > (static_cast<unsigned __int128>(1) << 32)) { overflow = true; break; }
        }
        if (!overflow && qb < static_cast<unsigned __int128>(users + min_responders))
            throw infeasible_error(
                "effective field too small: q^B = " + std::to_string(static_cast<std::uint64_t>(qb)) +
                " < K + U = " + std::to_string(users + min_responders) +
                "; increase the field size or the grouping factor");
        sp.eff_field = grouping == 1
                           ? sp.base_field
                           : std::make_shared<const Field>(extension_field(*sp.base_field, static_cast<unsigned>(grouping)));

        int spread = min_responders - max_colluders;
        if (input_len == 0) input_len = static_cast<long>(grouping) * spread;
        if (input_len <= 0 || input_len % (static_cast<long>(grouping) * spread) != 0)
            throw std::invalid_argument("input length must be a positive multiple of (U-T)*B; got L=" +
                                        std::to_string(input_len));
        sp.input_len = input_len;
        sp.eff_len = static_cast<int>(input_len / grouping);
        sp.blocks = sp.eff_len / spread;
        return sp;
    }
};

}  // namespace secagg
