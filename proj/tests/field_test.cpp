#include <gtest/gtest.h>

#include <cstdint>
#include <set>
#include <vector>

#include "secagg/field.hpp"
#include "secagg/rng.hpp"

using namespace secagg;

// Brute-force inverse: search the multiplication table. Independent of the
// Field implementation's table/Euclid paths.
static felem search_inverse(const Field& f, felem a) {
    for (felem x = 0; x < f.size(); ++x)
        if (f.mul(a, x) == 1) return x;
    throw std::logic_error("no inverse found");
}

TEST(Field, PrimeFieldBasics) {
    Field f(5);
    EXPECT_EQ(f.size(), 5u);
    EXPECT_EQ(f.add(3, 4), 2u);
    EXPECT_EQ(f.sub(1, 3), 3u);
    EXPECT_EQ(f.neg(2), 3u);
    EXPECT_EQ(f.mul(3, 4), 2u);
    EXPECT_EQ(f.inv(2), 3u);
    EXPECT_EQ(f.inv(2), search_inverse(f, 2));
    EXPECT_EQ(f.pow(2, 4), 1u);
    EXPECT_EQ(f.element(4), 4u);
    EXPECT_THROW(f.element(5), std::out_of_range);
    EXPECT_THROW(f.inv(0), std::domain_error);
}

TEST(Field, RejectsBadParameters) {
    EXPECT_THROW(Field(4), std::invalid_argument);   // not prime
    EXPECT_THROW(Field(1), std::invalid_argument);
    EXPECT_THROW(Field(6), std::invalid_argument);
    EXPECT_THROW(Field(2, 0), std::invalid_argument);
    EXPECT_THROW(Field(2, 33), std::invalid_argument);  // 2^33 > 2^32
    EXPECT_THROW(Field(65537, 2), std::invalid_argument);
    EXPECT_NO_THROW(Field(2, 32));  // exactly 2^32 is allowed
}

TEST(Field, ExtensionModulusIsLowestPackedIrreducible) {
    Field f(2, 3);
    // Lowest packed monic cubic over GF(2) without a root: candidates below
    // x^3 + x + 1 all factor (x^3 has root 0, x^3+1 root 1, x^3+x root 0).
    std::vector<std::uint64_t> expect{1, 1, 0, 1};
    EXPECT_EQ(f.modulus(), expect);
    for (std::uint64_t v = 0; v < 3; ++v) {
        detail::poly cand = detail::packed_monic(v, 2, 3);
        bool has_root = detail::poly_eval(cand, 0, 2) == 0 || detail::poly_eval(cand, 1, 2) == 0;
        EXPECT_TRUE(has_root) << "candidate " << v << " should be reducible";
    }
    EXPECT_NE(detail::poly_eval(expect, 0, 2), 0u);
    EXPECT_NE(detail::poly_eval(expect, 1, 2), 0u);
}

TEST(Field, KnownModuli) {
    // Independently checked minimal-packed-value moduli.
    EXPECT_EQ(Field(2, 2).modulus(), (detail::poly{1, 1, 1}));        // x^2+x+1
    EXPECT_EQ(Field(3, 2).modulus(), (detail::poly{1, 0, 1}));        // x^2+1
    EXPECT_EQ(Field(2, 4).modulus(), (detail::poly{1, 1, 0, 0, 1}));  // x^4+x+1
}

TEST(Field, AxiomSweepSmallFields) {
    struct Case { std::uint64_t p; unsigned m; };
    for (Case c : {Case{2, 1}, Case{3, 1}, Case{2, 2}, Case{5, 1}, Case{7, 1}, Case{2, 3},
                   Case{3, 2}, Case{11, 1}, Case{13, 1}, Case{2, 4}}) {
        Field f(c.p, c.m);
        std::uint64_t q = f.size();
        for (felem a = 0; a < q; ++a) {
            EXPECT_EQ(f.add(a, 0), a);
            EXPECT_EQ(f.mul(a, 1), a);
            EXPECT_EQ(f.add(a, f.neg(a)), 0u);
            if (a != 0) {
                EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
                EXPECT_EQ(f.inv(a), search_inverse(f, a));
                // multiplication by a nonzero element permutes the field
                std::set<felem> image;
                for (felem b = 0; b < q; ++b) image.insert(f.mul(a, b));
                EXPECT_EQ(image.size(), q);
            }
            for (felem b = 0; b < q; ++b) {
                EXPECT_EQ(f.add(a, b), f.add(b, a));
                EXPECT_EQ(f.mul(a, b), f.mul(b, a));
                EXPECT_EQ(f.sub(f.add(a, b), b), a);
                for (felem cc = 0; cc < q; ++cc) {
                    ASSERT_EQ(f.add(f.add(a, b), cc), f.add(a, f.add(b, cc)));
                    ASSERT_EQ(f.mul(f.mul(a, b), cc), f.mul(a, f.mul(b, cc)));
                    ASSERT_EQ(f.mul(a, f.add(b, cc)), f.add(f.mul(a, b), f.mul(a, cc)));
                }
            }
        }
    }
}

TEST(Field, LargePrimeNoTables) {
    // Above the table threshold: exercises the direct arithmetic path.
    Field f(4294967291ull);  // largest prime below 2^32
    felem a = 4294967290ull, b = 4294967289ull;
    EXPECT_EQ(f.mul(a, f.inv(a)), 1u);
    EXPECT_EQ(f.mul(a, b), f.mul(b, a));
    EXPECT_EQ(f.sub(f.add(a, b), b), a);
    EXPECT_EQ(f.add(a, 1), 0u);  // a == -1
}

TEST(Field, WidthBytes) {
    EXPECT_EQ(Field(2).width_bytes(), 1u);
    EXPECT_EQ(Field(5).width_bytes(), 1u);
    EXPECT_EQ(Field(257).width_bytes(), 2u);
    EXPECT_EQ(Field(2, 16).width_bytes(), 2u);
    EXPECT_EQ(Field(2, 17).width_bytes(), 3u);
    EXPECT_EQ(Field(4294967291ull).width_bytes(), 4u);
}

TEST(Field, Describe) {
    EXPECT_EQ(Field(7).describe(), "GF(7)");
    EXPECT_EQ(Field(2, 3).describe(), "GF(2^3)");
}

TEST(Grouping, PackIsAdditiveHomomorphism) {
    // Exhaustive over GF(2), B=2: packing two base symbols into GF(2^2)
    // must commute with addition.
    Field base(2);
    Field ext = extension_field(base, 2);
    ASSERT_EQ(ext.size(), 4u);
    for (felem a0 = 0; a0 < 2; ++a0)
        for (felem a1 = 0; a1 < 2; ++a1)
            for (felem b0 = 0; b0 < 2; ++b0)
                for (felem b1 = 0; b1 < 2; ++b1) {
                    GroupedElement a{{a0, a1}}, b{{b0, b1}};
                    GroupedElement s{{base.add(a0, b0), base.add(a1, b1)}};
                    EXPECT_EQ(ext.add(group_pack(base, a), group_pack(base, b)),
                              group_pack(base, s));
                }
}

TEST(Grouping, PackIsAdditiveHomomorphismOddCharacteristic) {
    Field base(3);
    Field ext = extension_field(base, 2);
    ASSERT_EQ(ext.size(), 9u);
    for (felem a = 0; a < 9; ++a)
        for (felem b = 0; b < 9; ++b) {
            GroupedElement ga = group_unpack(base, 2, a), gb = group_unpack(base, 2, b);
            GroupedElement s{{base.add(ga.parts[0], gb.parts[0]), base.add(ga.parts[1], gb.parts[1])}};
            EXPECT_EQ(ext.add(a, b), group_pack(base, s));
        }
}

TEST(Grouping, RoundTripsAndErrors) {
    Field base(5);
    std::vector<felem> v{1, 4, 0, 3};
    std::vector<felem> packed = group_pack_vec(base, 2, v);
    ASSERT_EQ(packed.size(), 2u);
    EXPECT_EQ(packed[0], 1u + 4u * 5u);
    EXPECT_EQ(packed[1], 0u + 3u * 5u);
    EXPECT_EQ(group_unpack_vec(base, 2, packed), v);
    EXPECT_EQ(group_flatten(group_embed(base, v, 2)), v);
    EXPECT_THROW(group_embed(base, v, 3), std::invalid_argument);
    EXPECT_THROW(group_pack(base, GroupedElement{{5}}), std::out_of_range);
    EXPECT_THROW(group_unpack(base, 2, 25), std::out_of_range);
}

TEST(Rng, DeterministicAndInRange) {
    Field f(7);
    Rng a(42), b(42), c(43);
    std::vector<felem> va = a.uniform_vec(f, 100), vb = b.uniform_vec(f, 100);
    EXPECT_EQ(va, vb);
    EXPECT_NE(va, c.uniform_vec(f, 100));
    for (felem x : va) EXPECT_LT(x, 7u);
    // all residues appear over a longer stream
    std::set<felem> seen(va.begin(), va.end());
    Rng d(1);
    for (int i = 0; i < 200; ++i) seen.insert(d.uniform(f));
    EXPECT_EQ(seen.size(), 7u);
}

TEST(Rng, MixSeedSeparatesStreams) {
    EXPECT_NE(mix_seed(1, 0), mix_seed(1, 1));
    EXPECT_NE(mix_seed(1, 0), mix_seed(2, 0));
    EXPECT_EQ(mix_seed(9, 5), mix_seed(9, 5));
}
