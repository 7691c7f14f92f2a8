#pragma once

// Correlated-randomness dealer. Per session it samples one additive mask
// vector per user plus one noise vector per qualifying survivor set, and
// hands every member of a qualifying set one share of the set's masked mask
// sum. Alongside the sampled values it keeps the full linear representation
// of every share over the ground symbols, which is what the verification
// side consumes.
//
// Canonical construction for a qualifying set V with n = |V| members, in
// ascending member order: stack the block of the members' mask sum (U - T
// rows) on top of the set's noise block (T rows) and multiply by the
// canonical n x U Cauchy matrix. Any U rows of that matrix are invertible,
// which is exactly what the decoder needs, and any T rows reveal nothing of
// the mask sum, which is what security needs.

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

#include "field.hpp"
#include "linear.hpp"
#include "matrix.hpp"
#include "rng.hpp"
#include "session.hpp"
#include "sets.hpp"
#include "ratio.hpp"

namespace secagg {

struct SchemeOptions {
    /// Replace the Cauchy sharing matrices by the fixed ones of the
    /// structured K=3 variant (requires K=3, U=2, T=0, one block of
    /// effective length 2).
    bool structured = false;
    /// Keep the sharing matrices but feed zero instead of the noise block.
    /// Breaks security; exists so the analyzer's alarms can be exercised.
    bool zero_noise = false;
};

/// Linear representation of the dealt randomness: registry of ground
/// symbols, one sharing matrix per qualifying set, and each share as an
/// affine expression. Values are sampled separately (see deal()).
class Scheme {
public:
    SessionParams params;
    SchemeOptions options;
    std::shared_ptr<const SymbolRegistry> registry;
    std::vector<UserSet> qual_sets;
    std::vector<Matrix> sharing;  // per set: |V| x U over the effective field

    static std::shared_ptr<const Scheme> build(const SessionParams& sp, const SchemeOptions& opt = {}) {
        auto s = std::make_shared<Scheme>();
        s->params = sp;
        s->options = opt;
        s->qual_sets = sp.qualifying_sets();

        auto reg = std::make_shared<SymbolRegistry>(sp.eff_field);
        for (int k = 1; k <= sp.users; ++k)
            for (int l = 0; l < sp.eff_len; ++l)
                reg->add({SymbolKind::input, k, 0, l});
        for (int k = 1; k <= sp.users; ++k)
            for (int l = 0; l < sp.eff_len; ++l)
                reg->add({SymbolKind::self_mask, k, 0, l});
        for (UserSet v : s->qual_sets)
            for (int b = 0; b < sp.blocks; ++b)
                for (int t = 0; t < sp.max_colluders; ++t)
                    reg->add({SymbolKind::noise, 0, v, b * sp.max_colluders + t});
        s->registry = reg;

        const Field& f = *sp.eff_field;
        if (opt.structured) {
            if (sp.users != 3 || sp.min_responders != 2 || sp.max_colluders != 0 ||
                sp.eff_len != 2 || sp.blocks != 1)
                throw std::invalid_argument(
                    "structured variant requires K=3, U=2, T=0 and effective input length 2");
            for (UserSet v : s->qual_sets) {
                if (set_size(v) == 2) {
                    s->sharing.push_back(Matrix::identity(f, 2));
                } else {
                    Matrix m(f, 3, 2);
                    m.at(0, 0) = 1;
                    m.at(1, 0) = 1; m.at(1, 1) = 1;
                    m.at(2, 1) = 1;
                    s->sharing.push_back(m);
                }
            }
        } else {
            for (UserSet v : s->qual_sets)
                s->sharing.push_back(canonical_cauchy(f, static_cast<std::size_t>(set_size(v)),
                                                      static_cast<std::size_t>(sp.min_responders)));
        }

        s->build_share_exprs();
        return s;
    }

    std::size_t symbols() const { return registry->size(); }

    std::size_t set_index(UserSet v) const {
        for (std::size_t i = 0; i < qual_sets.size(); ++i)
            if (qual_sets[i] == v) return i;
        throw std::invalid_argument("set " + set_to_string(v) + " is not a qualifying set");
    }

    // Registry layout: inputs, then self masks, then noise (set-major).
    std::size_t input_symbol(int user, int coord) const {
        return static_cast<std::size_t>(user - 1) * params.eff_len + static_cast<std::size_t>(coord);
    }
    std::size_t mask_symbol(int user, int coord) const {
        return static_cast<std::size_t>(params.users) * params.eff_len +
               static_cast<std::size_t>(user - 1) * params.eff_len + static_cast<std::size_t>(coord);
    }
    std::size_t noise_symbol(std::size_t set_idx, int coord) const {
        return 2 * static_cast<std::size_t>(params.users) * params.eff_len +
               set_idx * noise_len() + static_cast<std::size_t>(coord);
    }
    std::size_t noise_len() const {
        return static_cast<std::size_t>(params.max_colluders) * params.blocks;
    }

    /// Share expression for the member at `position` (ascending order) of
    /// qualifying set `set_idx`; one expression per block.
    const std::vector<LinearExpr>& share_expr(std::size_t set_idx, int position) const {
        return share_exprs_.at(set_idx).at(static_cast<std::size_t>(position));
    }

    /// All of user k's randomness as bundle rows: mask coordinates first,
    /// then every share the user holds, sets ascending.
    std::vector<LinearExpr> holdings_rows(int user) const {
        std::vector<LinearExpr> rows;
        for (int l = 0; l < params.eff_len; ++l)
            rows.push_back(LinearExpr::of_symbol(symbols(), mask_symbol(user, l)));
        for (std::size_t si = 0; si < qual_sets.size(); ++si) {
            if (!set_contains(qual_sets[si], user)) continue;
            const auto& share = share_expr(si, set_position(qual_sets[si], user));
            rows.insert(rows.end(), share.begin(), share.end());
        }
        return rows;
    }

private:
    void build_share_exprs() {
        const Field& f = *params.eff_field;
        const int spread = params.secret_rows();
        share_exprs_.resize(qual_sets.size());
        for (std::size_t si = 0; si < qual_sets.size(); ++si) {
            UserSet v = qual_sets[si];
            std::vector<int> members = set_members(v);
            const Matrix& m = sharing[si];
            share_exprs_[si].assign(members.size(), {});
            for (std::size_t pos = 0; pos < members.size(); ++pos) {
                share_exprs_[si][pos].reserve(static_cast<std::size_t>(params.blocks));
                for (int b = 0; b < params.blocks; ++b) {
                    LinearExpr e(symbols());
                    for (int j = 0; j < spread; ++j) {
                        felem c = m.at(pos, static_cast<std::size_t>(j));
                        if (c == 0) continue;
                        for (int k : members)
                            e.add_term(f, mask_symbol(k, b * spread + j), c);
                    }
                    if (!options.zero_noise) {
                        for (int t = 0; t < params.max_colluders; ++t) {
                            felem c = m.at(pos, static_cast<std::size_t>(spread + t));
                            if (c != 0)
                                e.add_term(f, noise_symbol(si, b * params.max_colluders + t), c);
                        }
                    }
                    share_exprs_[si][pos].push_back(std::move(e));
                }
            }
        }
    }

    std::vector<std::vector<std::vector<LinearExpr>>> share_exprs_;
};

/// Concrete sampled values of the ground symbols the dealer controls.
struct SeedSet {
    std::vector<std::vector<felem>> self_masks;  // per user: eff_len effective symbols
    std::vector<std::vector<felem>> noise;       // per qualifying set: T * blocks symbols
};

/// One user's dealt randomness: the mask vector plus one share per
/// qualifying set containing the user, ascending by set mask.
struct UserRandomness {
    std::vector<felem> self_mask;                                // effective symbols
    std::vector<std::pair<UserSet, std::vector<felem>>> shares;  // payload per set, blocks symbols

    const std::vector<felem>& share_for(UserSet v) const {
        for (const auto& s : shares)
            if (s.first == v) return s.second;
        throw std::invalid_argument("no share for set " + set_to_string(v));
    }
};

struct DealerOutput {
    std::shared_ptr<const Scheme> scheme;
    SeedSet seeds;
    std::vector<UserRandomness> users;  // index k-1 for user k
};

/// Evaluate the scheme at freshly sampled seeds. Sampling order is fixed
/// (masks user-major, then noise set-major), so equal seeds give equal
/// outputs byte for byte.
inline DealerOutput deal(const SessionParams& sp, Rng& rng, const SchemeOptions& opt = {}) {
    DealerOutput out;
    out.scheme = Scheme::build(sp, opt);
    const Scheme& s = *out.scheme;
    const Field& f = *sp.eff_field;

    out.seeds.self_masks.reserve(static_cast<std::size_t>(sp.users));
    for (int k = 0; k < sp.users; ++k)
        out.seeds.self_masks.push_back(rng.uniform_vec(f, static_cast<std::size_t>(sp.eff_len)));
    out.seeds.noise.reserve(s.qual_sets.size());
    for (std::size_t si = 0; si < s.qual_sets.size(); ++si)
        out.seeds.noise.push_back(rng.uniform_vec(f, s.noise_len()));

    std::vector<felem> ground(s.symbols(), 0);
    for (int k = 1; k <= sp.users; ++k)
        for (int l = 0; l < sp.eff_len; ++l)
            ground[s.mask_symbol(k, l)] = out.seeds.self_masks[static_cast<std::size_t>(k - 1)][static_cast<std::size_t>(l)];
    for (std::size_t si = 0; si < s.qual_sets.size(); ++si)
        for (std::size_t j = 0; j < s.noise_len(); ++j)
            ground[s.noise_symbol(si, static_cast<int>(j))] = out.seeds.noise[si][j];

    out.users.resize(static_cast<std::size_t>(sp.users));
    for (int k = 1; k <= sp.users; ++k) {
        UserRandomness& ur = out.users[static_cast<std::size_t>(k - 1)];
        ur.self_mask = out.seeds.self_masks[static_cast<std::size_t>(k - 1)];
        for (std::size_t si = 0; si < s.qual_sets.size(); ++si) {
            UserSet v = s.qual_sets[si];
            if (!set_contains(v, k)) continue;
            const auto& exprs = s.share_expr(si, set_position(v, k));
            std::vector<felem> payload(exprs.size());
            for (std::size_t b = 0; b < exprs.size(); ++b) payload[b] = exprs[b].eval(f, ground);
            ur.shares.emplace_back(v, std::move(payload));
        }
    }
    return out;
}

/// Fixed-matrix variant for K=3, U=2, T=0 with effective input length 2:
/// pair sets share through the identity, the full set through the 3 x 2
/// matrix ((1,0),(1,1),(0,1)). Decoding still works for every schedule, and
/// users 1 and 3 hold one effective symbol less entropy than the canonical
/// construction.
inline DealerOutput deal_structured_k3(const SessionParams& sp, Rng& rng) {
    SchemeOptions opt;
    opt.structured = true;
    return deal(sp, rng, opt);
}

struct RandomnessReport {
    std::vector<long> per_user;  // entropy of user k's holdings, base-q-ary symbols
    long total = 0;              // entropy of all holdings jointly
    std::vector<Ratio> per_user_rate;  // per_user / L
    Ratio total_rate;                  // total / L
};

/// Entropies are coefficient ranks over the effective field, converted to
/// base-field symbol units by the grouping factor.
inline RandomnessReport randomness_report(const Scheme& s) {
    const Field& f = *s.params.eff_field;
    RandomnessReport r;
    VariableBundle all{"holdings", {}};
    for (int k = 1; k <= s.params.users; ++k) {
        VariableBundle zk{"holdings", s.holdings_rows(k)};
        long h = static_cast<long>(bundle_rank(f, zk)) * s.params.grouping;
        r.per_user.push_back(h);
        r.per_user_rate.emplace_back(h, s.params.input_len);
        all.append(zk);
    }
    r.total = static_cast<long>(bundle_rank(f, all)) * s.params.grouping;
    r.total_rate = Ratio(r.total, s.params.input_len);
    return r;
}

inline RandomnessReport randomness_report(const DealerOutput& out) {
    return randomness_report(*out.scheme);
}

}  // namespace secagg
