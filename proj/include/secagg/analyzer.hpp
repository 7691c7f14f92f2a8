#pragma once

// Exact verification of the protocol's information-theoretic claims.
//
// Every protocol variable is affine in the ground symbols (inputs, masks,
// noise), and the ground symbols are i.i.d. uniform, so the entropy of any
// tuple of variables equals the rank of its coefficient matrix, in
// effective-field symbol units. Conditional mutual information reduces to
//
//   I(A; B | C) = rank(A,C) + rank(B,C) - rank(A,B,C) - rank(C),
//
// always a nonnegative integer. A second, independent route computes the
// same quantity by brute force: enumerate every ground assignment, tabulate
// exact joint counts, and evaluate the MI sum with integer arithmetic. The
// two routes share no code beyond the field, which is the point.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "dealer.hpp"
#include "field.hpp"
#include "linear.hpp"
#include "ratio.hpp"
#include "session.hpp"
#include "sets.hpp"

namespace secagg {

/// Entropy of a bundle in effective-field symbols.
inline long entropy(const Field& f, const VariableBundle& b) {
    return static_cast<long>(bundle_rank(f, b));
}

/// I(A; B | C) in effective-field symbols via the rank identity.
inline long conditional_mi(const Field& f, const VariableBundle& a, const VariableBundle& b,
                           const VariableBundle& c) {
    long r_ac = static_cast<long>(joint_rank(f, {&a, &c}));
    long r_bc = static_cast<long>(joint_rank(f, {&b, &c}));
    long r_abc = static_cast<long>(joint_rank(f, {&a, &b, &c}));
    long r_c = static_cast<long>(joint_rank(f, {&c}));
    return r_ac + r_bc - r_abc - r_c;
}

// ---- bundle builders over a scheme ----------------------------------------

inline VariableBundle inputs_bundle(const Scheme& s) {
    VariableBundle b{"inputs", {}};
    for (int k = 1; k <= s.params.users; ++k)
        for (int l = 0; l < s.params.eff_len; ++l)
            b.rows.push_back(LinearExpr::of_symbol(s.symbols(), s.input_symbol(k, l)));
    return b;
}

inline VariableBundle sum_inputs_bundle(const Scheme& s, UserSet v) {
    VariableBundle b{"sum_inputs" + set_to_string(v), {}};
    for (int l = 0; l < s.params.eff_len; ++l) {
        LinearExpr e(s.symbols());
        for (int k : set_members(v)) e.add_term(*s.params.eff_field, s.input_symbol(k, l), 1);
        b.rows.push_back(e);
    }
    return b;
}

inline VariableBundle masks_bundle(const Scheme& s, UserSet users) {
    VariableBundle b{"masks" + set_to_string(users), {}};
    for (int k : set_members(users))
        for (int l = 0; l < s.params.eff_len; ++l)
            b.rows.push_back(LinearExpr::of_symbol(s.symbols(), s.mask_symbol(k, l)));
    return b;
}

inline VariableBundle sum_masks_bundle(const Scheme& s, UserSet v) {
    VariableBundle b{"sum_masks" + set_to_string(v), {}};
    for (int l = 0; l < s.params.eff_len; ++l) {
        LinearExpr e(s.symbols());
        for (int k : set_members(v)) e.add_term(*s.params.eff_field, s.mask_symbol(k, l), 1);
        b.rows.push_back(e);
    }
    return b;
}

inline VariableBundle noise_bundle(const Scheme& s, UserSet v) {
    VariableBundle b{"noise" + set_to_string(v), {}};
    std::size_t si = s.set_index(v);
    for (std::size_t j = 0; j < s.noise_len(); ++j)
        b.rows.push_back(LinearExpr::of_symbol(s.symbols(), s.noise_symbol(si, static_cast<int>(j))));
    return b;
}

/// Round-1 messages of all K users: X_k = W_k + S_k, coordinate-wise.
inline VariableBundle round1_bundle(const Scheme& s) {
    VariableBundle b{"round1", {}};
    const Field& f = *s.params.eff_field;
    for (int k = 1; k <= s.params.users; ++k)
        for (int l = 0; l < s.params.eff_len; ++l) {
            LinearExpr e(s.symbols());
            e.add_term(f, s.input_symbol(k, l), 1);
            e.add_term(f, s.mask_symbol(k, l), 1);
            b.rows.push_back(e);
        }
    return b;
}

/// Round-2 messages of every member of survivor set v (all are observable;
/// a missing answer is a delayed packet, not an unsent one).
inline VariableBundle round2_bundle(const Scheme& s, UserSet v) {
    VariableBundle b{"round2" + set_to_string(v), {}};
    std::size_t si = s.set_index(v);
    std::vector<int> members = set_members(v);
    for (std::size_t pos = 0; pos < members.size(); ++pos) {
        const auto& share = s.share_expr(si, static_cast<int>(pos));
        b.rows.insert(b.rows.end(), share.begin(), share.end());
    }
    return b;
}

inline VariableBundle transcript_bundle(const Scheme& s, UserSet v) {
    VariableBundle b = round1_bundle(s);
    b.name = "transcript" + set_to_string(v);
    b.append(round2_bundle(s, v));
    return b;
}

/// Everything user k was dealt, as rows: its mask, then each share it holds.
inline VariableBundle holdings_bundle(const Scheme& s, UserSet users) {
    VariableBundle b{"holdings" + set_to_string(users), {}};
    for (int k : set_members(users)) {
        std::vector<LinearExpr> rows = s.holdings_rows(k);
        b.rows.insert(b.rows.end(), rows.begin(), rows.end());
    }
    return b;
}

/// What the server legitimately learns plus what colluders contribute: the
/// survivors' input sum, and the colluders' inputs and dealt randomness.
inline VariableBundle adversary_condition_bundle(const Scheme& s, UserSet v, UserSet colluders) {
    VariableBundle b = sum_inputs_bundle(s, v);
    b.name = "condition" + set_to_string(v) + set_to_string(colluders);
    for (int k : set_members(colluders))
        for (int l = 0; l < s.params.eff_len; ++l)
            b.rows.push_back(LinearExpr::of_symbol(s.symbols(), s.input_symbol(k, l)));
    b.append(holdings_bundle(s, colluders));
    return b;
}

// ---- exhaustive enumeration oracle -----------------------------------------

/// Brute-force I(A; B | C): enumerate all q^num_symbols ground assignments,
/// count joint value tuples exactly, and evaluate the MI sum. Returns an
/// exact rational in field-symbol units (log base q). Affine bundles over
/// uniform grounds make every count a power of q, so each term's logarithm
/// is an integer; a non-power count would mean a non-affine input and is
/// rejected. Budget is the maximum number of states.
inline Ratio exhaustive_mi_oracle(const Field& f, std::size_t num_symbols, const VariableBundle& a,
                                  const VariableBundle& b, const VariableBundle& c,
                                  std::uint64_t budget = 100000000ull) {
    unsigned __int128 states128 = 1;
    for (std::size_t i = 0; i < num_symbols; ++i) {
        states128 *= f.size();
        if (states128 > budget)
            throw budget_error("exhaustive oracle needs more than " + std::to_string(budget) + " states");
    }
    const std::uint64_t states = static_cast<std::uint64_t>(states128);
    const std::uint64_t q = f.size();
    const unsigned width = f.width_bytes();

    std::vector<const LinearExpr*> rows;
    for (const LinearExpr& e : a.rows) rows.push_back(&e);
    for (const LinearExpr& e : b.rows) rows.push_back(&e);
    for (const LinearExpr& e : c.rows) rows.push_back(&e);
    const std::size_t na = a.rows.size(), nb = b.rows.size(), nc = c.rows.size();

    // Per-symbol update lists for incremental evaluation along the odometer.
    std::vector<std::vector<std::pair<std::size_t, felem>>> col_terms(num_symbols);
    std::vector<felem> vals(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r]->coeff.size() != num_symbols)
            throw std::invalid_argument("bundle row does not match the symbol count");
        vals[r] = rows[r]->constant;
        for (std::size_t i = 0; i < num_symbols; ++i)
            if (rows[r]->coeff[i] != 0) col_terms[i].emplace_back(r, rows[r]->coeff[i]);
    }

    std::unordered_map<std::string, std::uint64_t> abc_counts;
    std::string key(rows.size() * width, '\0');
    std::vector<felem> ground(num_symbols, 0);
    for (std::uint64_t step = 0;; ++step) {
        for (std::size_t r = 0; r < rows.size(); ++r) {
            felem v = vals[r];
            for (unsigned by = 0; by < width; ++by) {
                key[r * width + by] = static_cast<char>(v & 0xff);
                v >>= 8;
            }
        }
        ++abc_counts[key];
        if (step + 1 == states) break;
        std::size_t i = 0;
        for (;;) {
            felem old = ground[i];
            felem next = old + 1 < q ? old + 1 : 0;
            ground[i] = next;
            felem delta = f.sub(next, old);
            for (const auto& [r, coef] : col_terms[i]) vals[r] = f.add(vals[r], f.mul(coef, delta));
            if (next != 0) break;
            ++i;
        }
    }

    const std::size_t ba = na * width, bb = nb * width, bc = nc * width;
    std::unordered_map<std::string, std::uint64_t> ac_counts, bc_counts, c_counts;
    for (const auto& [k, n] : abc_counts) {
        ac_counts[k.substr(0, ba) + k.substr(ba + bb, bc)] += n;
        bc_counts[k.substr(ba, bb + bc)] += n;
        c_counts[k.substr(ba + bb, bc)] += n;
    }

    auto log_q = [q](std::uint64_t n) {
        long e = 0;
        while (n > 1) {
            if (n % q != 0) throw std::logic_error("joint count is not a power of the field size");
            n /= q;
            ++e;
        }
        return e;
    };

    std::int64_t acc = 0;
    for (const auto& [k, n] : abc_counts) {
        long e = log_q(n) + log_q(c_counts[k.substr(ba + bb, bc)]) -
                 log_q(ac_counts[k.substr(0, ba) + k.substr(ba + bb, bc)]) -
                 log_q(bc_counts[k.substr(ba, bb + bc)]);
        acc += static_cast<std::int64_t>(n) * e;
    }
    return Ratio(acc, static_cast<std::int64_t>(states));
}

// ---- verification sweeps ----------------------------------------------------

struct SecurityCase {
    UserSet survivors = 0;
    UserSet colluders = 0;
    long mi = 0;  // effective symbols; must be 0
};

struct SecurityReport {
    std::vector<SecurityCase> cases;
    bool all_zero() const {
        for (const SecurityCase& c : cases)
            if (c.mi != 0) return false;
        return true;
    }
    long max_mi() const {
        long m = 0;
        for (const SecurityCase& c : cases)
            if (c.mi > m) m = c.mi;
        return m;
    }
};

/// Sweep every qualifying survivor set and every collusion set of size at
/// most T (including the empty one): the transcript plus the colluders' data
/// must reveal nothing about the inputs beyond the survivors' sum.
inline SecurityReport verify_security(const Scheme& s, long budget = 100000) {
    const Field& f = *s.params.eff_field;
    std::vector<UserSet> collusions = sets_of_size_at_most(s.params.users, s.params.max_colluders);
    long pairs = static_cast<long>(s.qual_sets.size()) * static_cast<long>(collusions.size());
    if (pairs > budget)
        throw budget_error("security sweep needs " + std::to_string(pairs) +
                           " cases, over the budget of " + std::to_string(budget));
    SecurityReport rep;
    VariableBundle a = inputs_bundle(s);
    for (UserSet v : s.qual_sets) {
        VariableBundle b = transcript_bundle(s, v);
        for (UserSet t : collusions) {
            VariableBundle c = adversary_condition_bundle(s, v, t);
            rep.cases.push_back({v, t, conditional_mi(f, a, b, c)});
        }
    }
    return rep;
}

struct RateReport {
    long round1_len = 0;  // base symbols per user, round 1
    long round2_len = 0;  // base symbols per user, round 2
    long input_len = 0;
    Ratio r1, r2;
    bool r1_optimal = false;  // equals 1
    bool r2_optimal = false;  // equals 1/(U-T)
};

inline RateReport verify_rates(const SessionParams& sp) {
    RateReport r;
    r.round1_len = sp.input_len;
    r.round2_len = sp.share_len_base();
    r.input_len = sp.input_len;
    r.r1 = Ratio(r.round1_len, sp.input_len);
    r.r2 = Ratio(r.round2_len, sp.input_len);
    r.r1_optimal = r.r1 == Ratio(1, 1);
    r.r2_optimal = r.r2 == Ratio(1, sp.min_responders - sp.max_colluders);
    return r;
}

struct IdentityCase {
    std::string id;
    UserSet colluders = 0;  // the T-set
    UserSet other = 0;      // the disjoint set, or the survivor set for noise identities
    long expected = 0;
    long got = 0;
    bool pass() const { return expected == got; }
};

struct IdentityReport {
    std::vector<IdentityCase> cases;
    bool all_pass() const {
        for (const IdentityCase& c : cases)
            if (!c.pass()) return false;
        return true;
    }
};

/// Rank identities behind the security proof, in effective symbols. For any
/// collusion set of size at most T, disjoint set D, and qualifying set V:
///   holdings.count:  H(Z_T) = |T| * (eff_len + blocks * #sets containing a fixed user)
///   holdings.indep:  H(Z_T | S_D) = H(Z_T)
///   masks.cond:      H(S_D | Z_T) = |D| * eff_len
///   noise.cond.sum:  H(N_V | sum_masks(V), Z_T) = blocks * (T - |T intersect V|)
///   noise.cond.all:  H(N_V | all masks, Z_T)    = blocks * (T - |T intersect V|)
inline IdentityReport verify_independence_identities(const Scheme& s, long budget = 100000) {
    const Field& f = *s.params.eff_field;
    const SessionParams& sp = s.params;
    IdentityReport rep;

    long cases = 0;
    for (UserSet t : sets_of_size_at_most(sp.users, sp.max_colluders))
        cases += 1 + 2 * (1L << (sp.users - set_size(t))) + 2 * static_cast<long>(s.qual_sets.size());
    if (cases > budget)
        throw budget_error("identity sweep needs " + std::to_string(cases) +
                           " cases, over the budget of " + std::to_string(budget));

    long sets_per_user = 0;  // number of qualifying sets containing a fixed user
    for (UserSet v : s.qual_sets)
        if (set_contains(v, 1)) ++sets_per_user;
    const long z_count = sp.eff_len + sp.blocks * sets_per_user;

    auto cond_rank = [&f](const VariableBundle& x, const VariableBundle& given) {
        return static_cast<long>(joint_rank(f, {&x, &given})) -
               static_cast<long>(joint_rank(f, {&given}));
    };

    for (UserSet t : sets_of_size_at_most(sp.users, sp.max_colluders)) {
        VariableBundle zt = holdings_bundle(s, t);
        long h_zt = static_cast<long>(bundle_rank(f, zt));
        rep.cases.push_back({"holdings.count", t, 0, static_cast<long>(set_size(t)) * z_count, h_zt});

        UserSet complement = full_set(sp.users) & ~t;
        for (UserSet d : subsets_of_size_at_least(complement, 0)) {
            VariableBundle sd = masks_bundle(s, d);
            rep.cases.push_back({"holdings.indep", t, d, h_zt, cond_rank(zt, sd)});
            rep.cases.push_back({"masks.cond", t, d,
                                 static_cast<long>(set_size(d)) * sp.eff_len, cond_rank(sd, zt)});
        }

        for (UserSet v : s.qual_sets) {
            long expected = sp.blocks * (sp.max_colluders - set_size(t & v));
            VariableBundle nv = noise_bundle(s, v);
            VariableBundle given_sum = sum_masks_bundle(s, v);
            given_sum.append(zt);
            rep.cases.push_back({"noise.cond.sum", t, v, expected, cond_rank(nv, given_sum)});
            VariableBundle given_all = masks_bundle(s, full_set(sp.users));
            given_all.append(zt);
            rep.cases.push_back({"noise.cond.all", t, v, expected, cond_rank(nv, given_all)});
        }
    }
    return rep;
}

}  // namespace secagg
