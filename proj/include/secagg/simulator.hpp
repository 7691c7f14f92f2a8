#pragma once

// Session simulator: enumerates or samples dropout schedules, runs one
// fresh-randomness session per schedule, checks the decoded sum against a
// directly computed one, and assembles per-collusion-set adversary views.
// Everything is deterministic in the plan seed; records are emitted in
// sorted schedule order so reports compare byte for byte across runs.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dealer.hpp"
#include "protocol.hpp"
#include "rng.hpp"
#include "session.hpp"
#include "sets.hpp"

namespace secagg {

/// All valid schedules: qualifying survivor set, responder subset of it with
/// at least U members. Ascending by (survivors, responders) mask.
inline std::vector<DropoutSchedule> enumerate_schedules(const SessionParams& sp) {
    std::vector<DropoutSchedule> out;
    for (UserSet v : sp.qualifying_sets())
        for (UserSet r : subsets_of_size_at_least(v, sp.min_responders))
            out.push_back({v, r});
    return out;
}

enum class ScheduleMode { exhaustive, sampled };
enum class CollusionMode { exhaustive, sampled };

struct ExperimentPlan {
    SessionParams params;
    ScheduleMode schedule_mode = ScheduleMode::exhaustive;
    CollusionMode collusion_mode = CollusionMode::exhaustive;
    int schedule_samples = 0;   // sampled mode only
    int collusion_samples = 0;  // sampled mode only
    std::uint64_t seed = 0;
    long budget = 100000;  // max (schedule, collusion) pairs in exhaustive mode
    SchemeOptions scheme_options;
};

/// What the server-side adversary holds for one (schedule, collusion set)
/// pair: the transcript (by index into ExperimentReport::transcripts) plus
/// the colluding users' inputs and dealt randomness.
struct AdversaryView {
    std::size_t transcript_index = 0;
    UserSet colluders = 0;
    std::vector<int> colluder_ids;
    std::vector<InputVector> colluder_inputs;
    std::vector<UserRandomness> colluder_randomness;
};

struct ScheduleRecord {
    DropoutSchedule schedule;
    UserSet colluders = 0;
    bool decode_ok = false;
    std::size_t transcript_index = 0;
};

struct ExperimentReport {
    SessionParams params;
    std::uint64_t seed = 0;
    std::vector<ScheduleRecord> records;       // one per (schedule, collusion set)
    std::vector<Transcript> transcripts;       // one per schedule
    std::vector<std::vector<InputVector>> inputs_used;  // one input matrix per schedule
    std::vector<AdversaryView> views;

    bool all_decodes_ok() const {
        for (const ScheduleRecord& r : records)
            if (!r.decode_ok) return false;
        return true;
    }
};

/// Runs the plan on an explicit schedule list. With fixed inputs every
/// schedule aggregates the same vectors; otherwise inputs are redrawn per
/// schedule from the plan seed. Dealt randomness is always fresh per
/// schedule (single-shot model).
inline ExperimentReport run_experiment_with_schedules(
    const ExperimentPlan& plan, const std::vector<DropoutSchedule>& schedules,
    const std::optional<std::vector<InputVector>>& fixed_inputs = {}) {
    const SessionParams& sp = plan.params;
    const Field& base = *sp.base_field;

    std::vector<UserSet> collusions;
    if (plan.collusion_mode == CollusionMode::exhaustive) {
        collusions = sets_of_size_at_most(sp.users, sp.max_colluders);
        long pairs = static_cast<long>(schedules.size()) * static_cast<long>(collusions.size());
        if (pairs > plan.budget)
            throw budget_error("experiment needs " + std::to_string(pairs) +
                               " schedule/collusion pairs, over the budget of " + std::to_string(plan.budget));
    } else {
        if (plan.collusion_samples < 1) throw std::invalid_argument("sampled mode needs a sample count");
        Rng pick(mix_seed(plan.seed, 0xc0111));
        while (static_cast<int>(collusions.size()) < plan.collusion_samples) {
            UserSet t = static_cast<UserSet>(pick.next_u64()) & full_set(sp.users);
            if (set_size(t) > sp.max_colluders) continue;
            collusions.push_back(t);
        }
    }

    ExperimentReport rep;
    rep.params = sp;
    rep.seed = plan.seed;

    for (std::size_t si = 0; si < schedules.size(); ++si) {
        const DropoutSchedule& sched = schedules[si];

        Rng session_rng(mix_seed(plan.seed, si));
        std::vector<InputVector> inputs;
        if (fixed_inputs) {
            inputs = *fixed_inputs;
            if (static_cast<int>(inputs.size()) != sp.users)
                throw std::invalid_argument("need one input vector per user");
        } else {
            inputs.resize(static_cast<std::size_t>(sp.users));
            for (auto& iv : inputs) iv.w = session_rng.uniform_vec(base, static_cast<std::size_t>(sp.input_len));
        }
        DealerOutput dealt = deal(sp, session_rng, plan.scheme_options);

        SessionResult res = run_session(sp, inputs, dealt, sched, static_cast<std::uint32_t>(si));

        std::vector<felem> expected(static_cast<std::size_t>(sp.input_len), 0);
        for (int k : set_members(sched.survivors))
            for (long l = 0; l < sp.input_len; ++l)
                expected[static_cast<std::size_t>(l)] =
                    base.add(expected[static_cast<std::size_t>(l)],
                             inputs[static_cast<std::size_t>(k - 1)].w[static_cast<std::size_t>(l)]);
        bool ok = res.decoded_sum == expected;

        rep.transcripts.push_back(res.transcript);
        rep.inputs_used.push_back(inputs);

        for (UserSet t : collusions) {
            ScheduleRecord rec;
            rec.schedule = sched;
            rec.colluders = t;
            rec.decode_ok = ok;
            rec.transcript_index = si;
            rep.records.push_back(rec);

            AdversaryView view;
            view.transcript_index = si;
            view.colluders = t;
            for (int k : set_members(t)) {
                view.colluder_ids.push_back(k);
                view.colluder_inputs.push_back(inputs[static_cast<std::size_t>(k - 1)]);
                view.colluder_randomness.push_back(dealt.users[static_cast<std::size_t>(k - 1)]);
            }
            rep.views.push_back(view);
        }
    }
    return rep;
}

/// Enumerates or samples the schedules per the plan, then runs them.
inline ExperimentReport run_experiment(const ExperimentPlan& plan,
                                       const std::optional<std::vector<InputVector>>& fixed_inputs = {}) {
    const SessionParams& sp = plan.params;
    std::vector<DropoutSchedule> schedules;
    if (plan.schedule_mode == ScheduleMode::exhaustive) {
        schedules = enumerate_schedules(sp);
    } else {
        if (plan.schedule_samples < 1) throw std::invalid_argument("sampled mode needs a sample count");
        Rng pick(mix_seed(plan.seed, 0x5c4ed));
        while (static_cast<int>(schedules.size()) < plan.schedule_samples) {
            UserSet v = static_cast<UserSet>(pick.next_u64()) & full_set(sp.users);
            if (set_size(v) < sp.min_responders) continue;
            UserSet r = static_cast<UserSet>(pick.next_u64()) & v;
            if (set_size(r) < sp.min_responders) continue;
            schedules.push_back({v, r});
        }
    }
    return run_experiment_with_schedules(plan, schedules, fixed_inputs);
}

}  // namespace secagg
