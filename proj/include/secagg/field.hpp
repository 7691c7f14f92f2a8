#pragma once

// Exact arithmetic in finite fields GF(p^m), with the canonical integer
// representation: an element is the integer whose base-p digits are the
// coefficients of its polynomial representative (low degree first). The
// modulus polynomial is the lexicographically first monic irreducible of
// degree m, found by scanning packed coefficient values upward, so two
// parties constructing GF(p^m) independently agree on every representative.
//
// Fields with q <= 2^16 carry exp/log tables for mul/inv; larger fields use
// direct modular or polynomial arithmetic. q is capped at 2^32.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace secagg {

// Canonical representative of a field element, always in [0, q).
using felem = std::uint64_t;

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    if (n % 2 == 0) return n == 2;
    for (std::uint64_t d = 3; d * d <= n; d += 2)
        if (n % d == 0) return false;
    return true;
}

namespace detail {

// Polynomials over GF(p): little-endian coefficient vectors, not
// necessarily trimmed. Degree of the zero polynomial is -1.
using poly = std::vector<std::uint64_t>;

inline int poly_degree(const poly& f) {
    for (int i = static_cast<int>(f.size()) - 1; i >= 0; --i)
        if (f[static_cast<std::size_t>(i)] != 0) return i;
    return -1;
}

inline std::uint64_t mod_inv_prime(std::uint64_t a, std::uint64_t p) {
    // Extended Euclid on integers; gcd(a, p) == 1 since p is prime.
    std::int64_t t = 0, nt = 1;
    std::int64_t r = static_cast<std::int64_t>(p), nr = static_cast<std::int64_t>(a % p);
    while (nr != 0) {
        std::int64_t quo = r / nr;
        std::int64_t tmp = t - quo * nt; t = nt; nt = tmp;
        tmp = r - quo * nr; r = nr; nr = tmp;
    }
    if (t < 0) t += static_cast<std::int64_t>(p);
    return static_cast<std::uint64_t>(t);
}

inline poly poly_mul(const poly& a, const poly& b, std::uint64_t p) {
    int da = poly_degree(a), db = poly_degree(b);
    if (da < 0 || db < 0) return {};
    poly out(static_cast<std::size_t>(da + db + 1), 0);
    for (int i = 0; i <= da; ++i) {
        if (a[static_cast<std::size_t>(i)] == 0) continue;
        for (int j = 0; j <= db; ++j) {
            std::size_t k = static_cast<std::size_t>(i + j);
            out[k] = (out[k] + a[static_cast<std::size_t>(i)] * b[static_cast<std::size_t>(j)]) % p;
        }
    }
    return out;
}

// num mod den, den nonzero; quotient discarded. Also used for trial division.
inline poly poly_rem(poly num, const poly& den, std::uint64_t p) {
    int dd = poly_degree(den);
    std::uint64_t lead_inv = mod_inv_prime(den[static_cast<std::size_t>(dd)], p);
    for (int i = poly_degree(num); i >= dd; --i) {
        std::uint64_t c = num[static_cast<std::size_t>(i)];
        if (c == 0) continue;
        std::uint64_t f = c * lead_inv % p;
        for (int j = 0; j <= dd; ++j) {
            std::size_t k = static_cast<std::size_t>(i - dd + j);
            std::uint64_t s = f * den[static_cast<std::size_t>(j)] % p;
            num[k] = (num[k] + p - s) % p;
        }
    }
    if (dd > 0) num.resize(static_cast<std::size_t>(dd));
    else num.assign(1, 0);
    return num;
}

inline std::uint64_t poly_eval(const poly& f, std::uint64_t x, std::uint64_t p) {
    std::uint64_t acc = 0;
    for (int i = poly_degree(f); i >= 0; --i)
        acc = (acc * x + f[static_cast<std::size_t>(i)]) % p;
    return acc;
}

// Monic degree-m polynomial from packed low coefficients: digit i of v
// (base p) is the coefficient of x^i.
inline poly packed_monic(std::uint64_t v, std::uint64_t p, unsigned m) {
    poly f(m + 1, 0);
    for (unsigned i = 0; i < m; ++i) { f[i] = v % p; v /= p; }
    f[m] = 1;
    return f;
}

// No roots and no monic factor of degree 2..m/2: trial division.
inline bool poly_is_irreducible(const poly& f, std::uint64_t p, unsigned m) {
    for (std::uint64_t x = 0; x < p; ++x)
        if (poly_eval(f, x, p) == 0) return false;
    for (unsigned d = 2; d <= m / 2; ++d) {
        std::uint64_t count = 1;
        for (unsigned i = 0; i < d; ++i) count *= p;
        for (std::uint64_t v = 0; v < count; ++v) {
            if (v % p == 0) continue;  // factor divisible by x implies a root at 0
            poly g = packed_monic(v, p, d);
            if (poly_degree(poly_rem(f, g, p)) < 0) return false;
        }
    }
    return true;
}

}  // namespace detail

/// Runtime-parameterized finite field GF(p^m). Immutable once constructed;
/// cheap to share by const reference. All operands and results are canonical
/// representatives in [0, q).
class Field {
public:
    Field(std::uint64_t p, unsigned m = 1) : p_(p), m_(m) {
        if (!is_prime(p)) throw std::invalid_argument("field characteristic must be prime: " + std::to_string(p));
        if (m < 1) throw std::invalid_argument("field degree must be at least 1");
        unsigned __int128 q = 1;
        for (unsigned i = 0; i < m; ++i) {
            q *= p;
            if (q > (static_cast<unsigned __int128>(1) << 32))
                throw std::invalid_argument("field size p^m exceeds 2^32");
        }
        q_ = static_cast<std::uint64_t>(q);
        if (m_ > 1) find_modulus();
        if (q_ <= (1u << 16)) build_tables();
    }

    std::uint64_t characteristic() const { return p_; }
    unsigned degree() const { return m_; }
    std::uint64_t size() const { return q_; }

    /// Monic modulus polynomial, low coefficient first, length m+1.
    /// Empty for prime fields.
    const std::vector<std::uint64_t>& modulus() const { return modulus_; }

    bool valid(felem a) const { return a < q_; }

    /// Element with canonical index i (the enumeration is by representative).
    felem element(std::uint64_t index) const {
        if (index >= q_) throw std::out_of_range("element index " + std::to_string(index) +
                                                 " outside field of size " + std::to_string(q_));
        return index;
    }

    felem add(felem a, felem b) const {
        check(a); check(b);
        if (m_ == 1) { felem s = a + b; return s >= p_ ? s - p_ : s; }
        if (p_ == 2) return a ^ b;
        return digitwise(a, b, /*subtract=*/false);
    }

    felem sub(felem a, felem b) const {
        check(a); check(b);
        if (m_ == 1) return a >= b ? a - b : a + p_ - b;
        if (p_ == 2) return a ^ b;
        return digitwise(a, b, /*subtract=*/true);
    }

    felem neg(felem a) const { return sub(0, a); }

    felem mul(felem a, felem b) const {
        check(a); check(b);
        if (!exp_.empty()) {
            if (a == 0 || b == 0) return 0;
            return exp_[(static_cast<std::uint64_t>(log_[a]) + log_[b]) % (q_ - 1)];
        }
        return mul_direct(a, b);
    }

    felem inv(felem a) const {
        check(a);
        if (a == 0) throw std::domain_error("inverse of zero");
        if (!exp_.empty()) return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
        if (m_ == 1) return detail::mod_inv_prime(a, p_);
        return inv_poly(a);
    }

    felem pow(felem a, std::uint64_t e) const {
        check(a);
        felem acc = 1, base = a;
        while (e) {
            if (e & 1) acc = mul(acc, base);
            base = mul(base, base);
            e >>= 1;
        }
        return acc;
    }

    /// Serialized width of one element: ceil(log2 q) bits, rounded up to bytes.
    unsigned width_bytes() const {
        unsigned bits = 0;
        while ((static_cast<std::uint64_t>(1) << bits) < q_) ++bits;
        if (bits == 0) bits = 1;
        return (bits + 7) / 8;
    }

    std::string describe() const {
        if (m_ == 1) return "GF(" + std::to_string(p_) + ")";
        return "GF(" + std::to_string(p_) + "^" + std::to_string(m_) + ")";
    }

    bool operator==(const Field& o) const { return p_ == o.p_ && m_ == o.m_; }

private:
    void check(felem a) const {
        if (a >= q_) throw std::out_of_range("element " + std::to_string(a) +
                                             " outside field of size " + std::to_string(q_));
    }

    felem digitwise(felem a, felem b, bool subtract) const {
        felem out = 0, base = 1;
        for (unsigned i = 0; i < m_; ++i) {
            std::uint64_t da = a % p_, db = b % p_;
            std::uint64_t d = subtract ? (da + p_ - db) % p_ : (da + db) % p_;
            out += d * base;
            a /= p_; b /= p_; base *= p_;
        }
        return out;
    }

    felem mul_direct(felem a, felem b) const {
        if (m_ == 1) return a * b % p_;  // p <= 2^32, so the product fits in 64 bits
        detail::poly pa = unpack(a), pb = unpack(b);
        detail::poly prod = detail::poly_mul(pa, pb, p_);
        if (detail::poly_degree(prod) >= static_cast<int>(m_))
            prod = detail::poly_rem(prod, modulus_, p_);
        return pack(prod);
    }

    felem inv_poly(felem a) const {
        // Extended Euclid in GF(p)[x] against the modulus.
        detail::poly r0 = modulus_, r1 = unpack(a);
        detail::poly t0{0}, t1{1};
        while (detail::poly_degree(r1) >= 0) {
            int d0 = detail::poly_degree(r0), d1 = detail::poly_degree(r1);
            if (d0 < d1) { std::swap(r0, r1); std::swap(t0, t1); continue; }
            std::uint64_t f = r0[static_cast<std::size_t>(d0)] *
                              detail::mod_inv_prime(r1[static_cast<std::size_t>(d1)], p_) % p_;
            int shift = d0 - d1;
            for (int j = 0; j <= d1; ++j) {
                std::size_t k = static_cast<std::size_t>(j + shift);
                std::uint64_t s = f * r1[static_cast<std::size_t>(j)] % p_;
                r0[k] = (r0[k] + p_ - s) % p_;
            }
            if (t0.size() < t1.size() + static_cast<std::size_t>(shift) + 1)
                t0.resize(t1.size() + static_cast<std::size_t>(shift) + 1, 0);
            for (std::size_t j = 0; j < t1.size(); ++j) {
                std::uint64_t s = f * t1[j] % p_;
                t0[j + static_cast<std::size_t>(shift)] = (t0[j + static_cast<std::size_t>(shift)] + p_ - s) % p_;
            }
        }
        std::uint64_t c = detail::mod_inv_prime(r0[static_cast<std::size_t>(detail::poly_degree(r0))], p_);
        detail::poly out(m_, 0);
        for (std::size_t j = 0; j < t0.size() && j < m_; ++j) out[j] = t0[j] * c % p_;
        return pack(out);
    }

    detail::poly unpack(felem a) const {
        detail::poly f(m_, 0);
        for (unsigned i = 0; i < m_; ++i) { f[i] = a % p_; a /= p_; }
        return f;
    }

    felem pack(const detail::poly& f) const {
        felem out = 0, base = 1;
        for (unsigned i = 0; i < m_; ++i) {
            if (i < f.size()) out += f[i] % p_ * base;
            base *= p_;
        }
        return out;
    }

    void find_modulus() {
        for (std::uint64_t v = 0; v < q_; ++v) {
            detail::poly f = detail::packed_monic(v, p_, m_);
            if (detail::poly_is_irreducible(f, p_, m_)) { modulus_ = f; return; }
        }
        throw std::logic_error("no irreducible polynomial found");  // unreachable
    }

    void build_tables() {
        std::uint64_t order = q_ - 1;
        std::vector<std::uint64_t> prime_factors;
        std::uint64_t n = order;
        for (std::uint64_t d = 2; d * d <= n; ++d)
            if (n % d == 0) { prime_factors.push_back(d); while (n % d == 0) n /= d; }
        if (n > 1) prime_factors.push_back(n);

        felem gen = 0;
        for (felem g = 1; g < q_; ++g) {
            bool primitive = true;
            for (std::uint64_t f : prime_factors)
                if (pow_notable(g, order / f) == 1) { primitive = false; break; }
            if (primitive) { gen = g; break; }
        }

        exp_.resize(order);
        log_.assign(q_, 0);
        felem x = 1;
        for (std::uint64_t i = 0; i < order; ++i) {
            exp_[i] = static_cast<std::uint32_t>(x);
            log_[x] = static_cast<std::uint32_t>(i);
            x = mul_direct(x, gen);
        }
    }

    felem pow_notable(felem a, std::uint64_t e) const {
        felem acc = 1, base = a;
        while (e) {
            if (e & 1) acc = mul_direct(acc, base);
            base = mul_direct(base, base);
            e >>= 1;
        }
        return acc;
    }

    std::uint64_t p_;
    unsigned m_;
    std::uint64_t q_;
    std::vector<std::uint64_t> modulus_;
    std::vector<std::uint32_t> exp_, log_;
};

inline Field make_field(std::uint64_t p, unsigned m = 1) { return Field(p, m); }

/// One block of consecutive base-field symbols, viewed as a single symbol of
/// the extension field GF(q^block).
struct GroupedElement {
    std::vector<felem> parts;
    bool operator==(const GroupedElement& o) const { return parts == o.parts; }
};

/// GF(p^{m*block}); addition there is digit-wise mod p, so the packed image
/// of a block sum equals the extension-field sum of the packed images.
inline Field extension_field(const Field& base, unsigned block) {
    if (block < 1) throw std::invalid_argument("grouping factor must be at least 1");
    return Field(base.characteristic(), base.degree() * block);
}

/// Packed representative: sum of parts[i] * q^i, a bijection onto [0, q^block).
inline felem group_pack(const Field& base, const GroupedElement& g) {
    felem out = 0, shift = 1;
    for (felem part : g.parts) {
        if (!base.valid(part)) throw std::out_of_range("grouped part outside base field");
        out += part * shift;
        shift *= base.size();
    }
    return out;
}

inline GroupedElement group_unpack(const Field& base, unsigned block, felem x) {
    GroupedElement g;
    g.parts.resize(block);
    for (unsigned i = 0; i < block; ++i) { g.parts[i] = x % base.size(); x /= base.size(); }
    if (x != 0) throw std::out_of_range("element outside grouped range");
    return g;
}

inline std::vector<GroupedElement> group_embed(const Field& base, const std::vector<felem>& v, unsigned block) {
    if (block < 1 || v.size() % block != 0)
        throw std::invalid_argument("vector length not divisible by grouping factor");
    std::vector<GroupedElement> out(v.size() / block);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].parts.assign(v.begin() + static_cast<std::ptrdiff_t>(i * block),
                            v.begin() + static_cast<std::ptrdiff_t>((i + 1) * block));
        for (felem part : out[i].parts)
            if (!base.valid(part)) throw std::out_of_range("grouped part outside base field");
    }
    return out;
}

inline std::vector<felem> group_flatten(const std::vector<GroupedElement>& v) {
    std::vector<felem> out;
    for (const GroupedElement& g : v) out.insert(out.end(), g.parts.begin(), g.parts.end());
    return out;
}

/// Base-field symbol vector -> extension-field symbol vector (and back).
inline std::vector<felem> group_pack_vec(const Field& base, unsigned block, const std::vector<felem>& v) {
    std::vector<GroupedElement> g = group_embed(base, v, block);
    std::vector<felem> out(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = group_pack(base, g[i]);
    return out;
}

inline std::vector<felem> group_unpack_vec(const Field& base, unsigned block, const std::vector<felem>& v) {
    std::vector<felem> out;
    out.reserve(v.size() * block);
    for (felem x : v) {
        GroupedElement g = group_unpack(base, block, x);
        out.insert(out.end(), g.parts.begin(), g.parts.end());
    }
    return out;
}

}  // namespace secagg
