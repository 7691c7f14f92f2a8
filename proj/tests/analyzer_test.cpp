#include <gtest/gtest.h>

#include <memory>
#include <vector>

#include "secagg/analyzer.hpp"

using namespace secagg;

static std::shared_ptr<const Field> gf(std::uint64_t p, unsigned m = 1) {
    return std::make_shared<const Field>(p, m);
}

static std::shared_ptr<const Scheme> scheme_for(int k, int u, int t, std::uint64_t p,
                                                long l = 0, SchemeOptions opt = {}) {
    return Scheme::build(SessionParams::make(k, u, t, gf(p), 1, l), opt);
}

TEST(Entropy, BundleRanksMatchStructure) {
    auto s = scheme_for(3, 2, 1, 5, 1);
    const Field& f = *s->params.eff_field;
    EXPECT_EQ(entropy(f, inputs_bundle(*s)), 3);
    EXPECT_EQ(entropy(f, masks_bundle(*s, full_set(3))), 3);
    EXPECT_EQ(entropy(f, sum_inputs_bundle(*s, set_of({1, 2}))), 1);
    // round 1 carries one fresh masked symbol per user
    EXPECT_EQ(entropy(f, round1_bundle(*s)), 3);
    // two round-2 answers of a pair set carry the mask sum and the set noise
    EXPECT_EQ(entropy(f, round2_bundle(*s, set_of({1, 2}))), 2);
    EXPECT_EQ(entropy(f, transcript_bundle(*s, set_of({1, 2}))), 5);
    // one user holds its mask plus one share from each of the three sets
    // containing it
    EXPECT_EQ(entropy(f, holdings_bundle(*s, set_of({1}))), 4);
}

TEST(Entropy, ConditionalMiExamples) {
    auto s = scheme_for(3, 2, 1, 5, 1);
    const Field& f = *s->params.eff_field;
    VariableBundle in = inputs_bundle(*s);
    VariableBundle empty{"empty", {}};
    EXPECT_EQ(conditional_mi(f, in, in, empty), 3);  // I(W;W) = H(W)
    EXPECT_EQ(conditional_mi(f, in, masks_bundle(*s, full_set(3)), empty), 0);
    // the round-1 stream alone is independent of the inputs
    EXPECT_EQ(conditional_mi(f, in, round1_bundle(*s), empty), 0);
}

TEST(Security, CanonicalSchemesLeakNothing) {
    struct Case { int k, u, t; std::uint64_t p; };
    for (Case c : {Case{3, 1, 0, 5}, Case{3, 2, 0, 5}, Case{3, 2, 1, 5},
                   Case{4, 1, 0, 5}, Case{4, 2, 0, 7}, Case{4, 2, 1, 7},
                   Case{4, 3, 0, 7}, Case{4, 3, 1, 7}, Case{4, 3, 2, 7}}) {
        auto s = scheme_for(c.k, c.u, c.t, c.p);
        SecurityReport rep = verify_security(*s);
        EXPECT_TRUE(rep.all_zero()) << "K=" << c.k << " U=" << c.u << " T=" << c.t
                                    << " max leak " << rep.max_mi();
        EXPECT_EQ(rep.cases.size(),
                  sets_of_size_at_least(c.k, c.u).size() * sets_of_size_at_most(c.k, c.t).size());
    }
}

TEST(Security, LongerInputsAndGroupedFieldsStaySecure) {
    auto s = scheme_for(3, 2, 1, 5, 3);
    EXPECT_TRUE(verify_security(*s).all_zero());
    auto grouped = Scheme::build(SessionParams::make(4, 2, 1, gf(2), 3));
    EXPECT_TRUE(verify_security(*grouped).all_zero());
}

TEST(Security, StructuredVariantStaysSecure) {
    SchemeOptions opt;
    opt.structured = true;
    auto s = Scheme::build(SessionParams::make(3, 2, 0, gf(5), 1, 2), opt);
    EXPECT_TRUE(verify_security(*s).all_zero());
}

// Dropping the noise must trip the alarm: one colluder who knows its own
// mask can strip the surviving pair's round-2 answers and unmask the third
// user's round-1 symbol.
TEST(Security, ZeroNoiseControlIsDetected) {
    SchemeOptions opt;
    opt.zero_noise = true;
    auto s = scheme_for(3, 2, 1, 5, 1, opt);
    SecurityReport rep = verify_security(*s);
    EXPECT_FALSE(rep.all_zero());
    EXPECT_GE(rep.max_mi(), 1);
    bool found = false;
    for (const SecurityCase& c : rep.cases)
        if (c.survivors == set_of({1, 2}) && c.colluders == set_of({1})) {
            EXPECT_EQ(c.mi, 1);  // exactly the third user's input leaks
            found = true;
        }
    EXPECT_TRUE(found);
}

// One colluder beyond the threshold breaks the canonical scheme: T is tight.
TEST(Security, CollusionBeyondThresholdLeaks) {
    auto s = scheme_for(4, 2, 1, 7, 1);
    const Field& f = *s->params.eff_field;
    UserSet v = set_of({1, 2, 3});
    UserSet t = set_of({3, 4});  // size 2 > T = 1
    long mi = conditional_mi(f, inputs_bundle(*s), transcript_bundle(*s, v),
                             adversary_condition_bundle(*s, v, t));
    EXPECT_GE(mi, 1);
}

TEST(Security, BudgetGate) {
    auto s = scheme_for(4, 2, 1, 7);
    EXPECT_THROW(verify_security(*s, 10), budget_error);
    EXPECT_TRUE(verify_security(*s, 100000).all_zero());
}

TEST(Identities, HoldAcrossSmallSessions) {
    struct Case { int k, u, t; std::uint64_t p; };
    for (Case c : {Case{3, 2, 1, 5}, Case{4, 2, 1, 7}, Case{4, 3, 1, 7}, Case{4, 3, 2, 7},
                   Case{2, 1, 0, 3}}) {
        auto s = scheme_for(c.k, c.u, c.t, c.p);
        IdentityReport rep = verify_independence_identities(*s);
        EXPECT_TRUE(rep.all_pass()) << "K=" << c.k << " U=" << c.u << " T=" << c.t;
        EXPECT_FALSE(rep.cases.empty());
    }
}

TEST(Identities, HoldingsCountExample) {
    // K=3, U=2, T=1, L=1: one user's holdings are its mask plus one share
    // from each of the three qualifying sets containing it, all independent.
    auto s = scheme_for(3, 2, 1, 5, 1);
    IdentityReport rep = verify_independence_identities(*s);
    bool found = false;
    for (const IdentityCase& c : rep.cases)
        if (c.id == "holdings.count" && c.colluders == set_of({1})) {
            EXPECT_EQ(c.expected, 4);
            EXPECT_EQ(c.got, 4);
            found = true;
        }
    EXPECT_TRUE(found);
}

TEST(Identities, BudgetGate) {
    auto s = scheme_for(4, 2, 1, 7);
    EXPECT_THROW(verify_independence_identities(*s, 5), budget_error);
}

TEST(Rates, ExactRationals) {
    RateReport r = verify_rates(SessionParams::make(4, 3, 1, gf(7)));
    EXPECT_EQ(r.r1, Ratio(1, 1));
    EXPECT_EQ(r.r2, Ratio(1, 2));
    EXPECT_TRUE(r.r1_optimal);
    EXPECT_TRUE(r.r2_optimal);
    EXPECT_EQ(r.r2.str(), "1/2");

    RateReport one = verify_rates(SessionParams::make(3, 2, 1, gf(5), 1, 4));
    EXPECT_EQ(one.r2, Ratio(1, 1));
    EXPECT_TRUE(one.r2_optimal);

    // grouped: rates are unchanged because both lengths count base symbols
    RateReport g = verify_rates(SessionParams::make(4, 2, 1, gf(2), 3, 6));
    EXPECT_EQ(g.r1, Ratio(1, 1));
    EXPECT_EQ(g.r2, Ratio(1, 1));
    EXPECT_EQ(g.round2_len, 6);
}
