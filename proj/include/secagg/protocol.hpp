#pragma once

// Two-round aggregation protocol.
//
// Round 1: every user sends its input plus its additive mask, symbol-wise in
// the base field. Round 2: the server announces the survivor set V (the
// users whose round-1 messages arrived); every member answers with its dealt
// share for V. Any U round-2 answers let the server cancel the masks: the
// corresponding U rows of the sharing matrix form an invertible system whose
// solution contains the members' mask sum, and subtracting it from the sum
// of the round-1 messages leaves exactly the sum of the members' inputs.
//
// Per-user round-1 cost is L base symbols; round-2 cost is L/(U-T) symbols,
// regardless of which users dropped.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "dealer.hpp"
#include "field.hpp"
#include "matrix.hpp"
#include "session.hpp"
#include "sets.hpp"

namespace secagg {

struct InputVector {
    std::vector<felem> w;  // input_len base-field symbols
};

struct Round1Message {
    int sender = 0;
    std::vector<felem> payload;  // input_len base-field symbols
};

struct Round2Message {
    int sender = 0;
    UserSet survivor_set = 0;
    std::vector<felem> payload;  // share_len_base() base-field symbols
};

/// Who reached round 1 (survivors) and whose round-2 answers arrived.
struct DropoutSchedule {
    UserSet survivors = 0;   // U1: users whose round-1 messages arrived
    UserSet responders = 0;  // U2 subset of U1: users whose round-2 messages arrived
};

struct Transcript {
    std::uint32_t session_id = 0;
    UserSet survivors = 0;
    UserSet responders = 0;
    std::vector<Round1Message> round1;  // all K users; dropouts are delayed, not absent
    std::vector<Round2Message> round2;  // all members of the survivor set
};

struct SessionResult {
    std::vector<felem> decoded_sum;  // input_len base-field symbols
    Transcript transcript;
};

inline Round1Message encode_round1(const SessionParams& sp, int user, const InputVector& input,
                                   const UserRandomness& ur) {
    if (user < 1 || user > sp.users) throw std::invalid_argument("user id out of range");
    if (static_cast<long>(input.w.size()) != sp.input_len)
        throw std::invalid_argument("input length mismatch");
    std::vector<felem> mask_base = sp.grouping == 1
                                       ? ur.self_mask
                                       : group_unpack_vec(*sp.base_field, static_cast<unsigned>(sp.grouping), ur.self_mask);
    Round1Message msg;
    msg.sender = user;
    msg.payload.resize(input.w.size());
    for (std::size_t i = 0; i < input.w.size(); ++i)
        msg.payload[i] = sp.base_field->add(input.w[i], mask_base[i]);
    return msg;
}

inline Round2Message encode_round2(const SessionParams& sp, int user, UserSet survivors,
                                   const UserRandomness& ur) {
    if (!set_contains(survivors, user))
        throw std::invalid_argument("user " + std::to_string(user) + " is not in the announced set " +
                                    set_to_string(survivors));
    if (set_size(survivors) < sp.min_responders)
        throw std::invalid_argument("announced set " + set_to_string(survivors) +
                                    " is below the response threshold");
    Round2Message msg;
    msg.sender = user;
    msg.survivor_set = survivors;
    const std::vector<felem>& share = ur.share_for(survivors);  // effective symbols
    msg.payload = sp.grouping == 1
                      ? share
                      : group_unpack_vec(*sp.base_field, static_cast<unsigned>(sp.grouping), share);
    return msg;
}

/// Recover the survivors' input sum from the survivors' round-1 messages and
/// at least U round-2 answers. The decoder uses the U lowest-id responders;
/// any U would give the same result. `scheme` is needed only for non-default
/// sharing matrices; the canonical ones are rebuilt from the parameters.
inline std::vector<felem> server_decode(const SessionParams& sp, UserSet survivors,
                                        const std::vector<Round1Message>& round1,
                                        const std::vector<Round2Message>& round2,
                                        const Scheme* scheme = nullptr) {
    const Field& f = *sp.eff_field;
    std::vector<int> members = set_members(survivors);
    if (static_cast<int>(members.size()) < sp.min_responders)
        throw std::invalid_argument("survivor set below the response threshold");

    std::map<int, const Round1Message*> x_by_sender;
    for (const Round1Message& m : round1) x_by_sender[m.sender] = &m;
    std::vector<felem> sum_x(static_cast<std::size_t>(sp.eff_len), 0);
    for (int k : members) {
        auto it = x_by_sender.find(k);
        if (it == x_by_sender.end())
            throw std::invalid_argument("missing round-1 message from user " + std::to_string(k));
        if (static_cast<long>(it->second->payload.size()) != sp.input_len)
            throw std::invalid_argument("round-1 payload length mismatch");
        std::vector<felem> xe = sp.grouping == 1
                                    ? it->second->payload
                                    : group_pack_vec(*sp.base_field, static_cast<unsigned>(sp.grouping), it->second->payload);
        for (int l = 0; l < sp.eff_len; ++l)
            sum_x[static_cast<std::size_t>(l)] = f.add(sum_x[static_cast<std::size_t>(l)], xe[static_cast<std::size_t>(l)]);
    }

    // Ascending responder list; the first U define the subsystem to invert.
    std::map<int, const Round2Message*> y_by_sender;
    for (const Round2Message& m : round2) {
        if (m.survivor_set != survivors)
            throw std::invalid_argument("round-2 message for a different survivor set");
        if (!set_contains(survivors, m.sender))
            throw std::invalid_argument("round-2 message from a non-survivor");
        y_by_sender[m.sender] = &m;
    }
    if (static_cast<int>(y_by_sender.size()) < sp.min_responders)
        throw std::invalid_argument("fewer round-2 answers than the response threshold");

    Matrix full = scheme ? scheme->sharing[scheme->set_index(survivors)]
                         : canonical_cauchy(f, members.size(), static_cast<std::size_t>(sp.min_responders));
    std::vector<std::size_t> rows;
    Matrix rhs(f, static_cast<std::size_t>(sp.min_responders), static_cast<std::size_t>(sp.blocks));
    for (const auto& [sender, msg] : y_by_sender) {
        if (static_cast<int>(rows.size()) == sp.min_responders) break;
        if (static_cast<int>(msg->payload.size()) != sp.share_len_base())
            throw std::invalid_argument("round-2 payload length mismatch");
        std::vector<felem> ye = sp.grouping == 1
                                    ? msg->payload
                                    : group_pack_vec(*sp.base_field, static_cast<unsigned>(sp.grouping), msg->payload);
        for (int b = 0; b < sp.blocks; ++b)
            rhs.at(rows.size(), static_cast<std::size_t>(b)) = ye[static_cast<std::size_t>(b)];
        rows.push_back(static_cast<std::size_t>(set_position(survivors, sender)));
    }

    std::vector<std::size_t> all_cols(static_cast<std::size_t>(sp.min_responders));
    for (std::size_t j = 0; j < all_cols.size(); ++j) all_cols[j] = j;
    Matrix stacked = full.submatrix(rows, all_cols).solve(rhs);

    // Top U-T rows of each block column hold the members' mask sum.
    const int spread = sp.secret_rows();
    std::vector<felem> sum_w(static_cast<std::size_t>(sp.eff_len));
    for (int b = 0; b < sp.blocks; ++b)
        for (int j = 0; j < spread; ++j) {
            std::size_t l = static_cast<std::size_t>(b * spread + j);
            sum_w[l] = f.sub(sum_x[l], stacked.at(static_cast<std::size_t>(j), static_cast<std::size_t>(b)));
        }
    return sp.grouping == 1 ? sum_w
                            : group_unpack_vec(*sp.base_field, static_cast<unsigned>(sp.grouping), sum_w);
}

/// Run one full session under a dropout schedule. All K users emit round-1
/// messages and all survivors emit round-2 messages (drops are delayed
/// deliveries, and anything sent is considered observable); the decoder sees
/// only what the schedule says arrived.
inline SessionResult run_session(const SessionParams& sp, const std::vector<InputVector>& inputs,
                                 const DealerOutput& dealt, const DropoutSchedule& sched,
                                 std::uint32_t session_id = 0) {
    if (static_cast<int>(inputs.size()) != sp.users)
        throw std::invalid_argument("need one input vector per user");
    if (!set_subset(sched.survivors, full_set(sp.users)) || sched.survivors == 0)
        throw std::invalid_argument("survivor set out of range");
    if (!set_subset(sched.responders, sched.survivors))
        throw std::invalid_argument("responders must be survivors");
    if (set_size(sched.survivors) < sp.min_responders)
        throw std::invalid_argument("survivor set below the response threshold");
    if (set_size(sched.responders) < sp.min_responders)
        throw std::invalid_argument("responder set below the response threshold");

    SessionResult res;
    res.transcript.session_id = session_id;
    res.transcript.survivors = sched.survivors;
    res.transcript.responders = sched.responders;

    for (int k = 1; k <= sp.users; ++k)
        res.transcript.round1.push_back(encode_round1(sp, k, inputs[static_cast<std::size_t>(k - 1)],
                                                      dealt.users[static_cast<std::size_t>(k - 1)]));
    for (int k : set_members(sched.survivors))
        res.transcript.round2.push_back(encode_round2(sp, k, sched.survivors,
                                                      dealt.users[static_cast<std::size_t>(k - 1)]));

    std::vector<Round1Message> arrived1;
    for (const Round1Message& m : res.transcript.round1)
        if (set_contains(sched.survivors, m.sender)) arrived1.push_back(m);
    std::vector<Round2Message> arrived2;
    for (const Round2Message& m : res.transcript.round2)
        if (set_contains(sched.responders, m.sender)) arrived2.push_back(m);

    res.decoded_sum = server_decode(sp, sched.survivors, arrived1, arrived2, dealt.scheme.get());
    return res;
}

}  // namespace secagg
