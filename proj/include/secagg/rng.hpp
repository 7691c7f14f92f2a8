#pragma once

// Deterministic entropy source. Field elements are drawn by rejection from
// mt19937_64 words, so the stream is reproducible across platforms and
// standard libraries for a fixed seed.

#include <cstdint>
#include <random>
#include <vector>

#include "field.hpp"

namespace secagg {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    felem uniform(const Field& f) {
        std::uint64_t q = f.size();
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % q);
        for (;;) {
            std::uint64_t x = gen_();
            if (x < limit) return x % q;
        }
    }

    std::vector<felem> uniform_vec(const Field& f, std::size_t n) {
        std::vector<felem> out(n);
        for (felem& x : out) x = uniform(f);
        return out;
    }

private:
    std::mt19937_64 gen_;
};

// splitmix64; used to derive independent per-session seeds from a base seed.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

}  // namespace secagg
