#pragma once

// Affine representation of protocol variables. Every quantity the protocol
// ever produces (inputs, masks, noise, messages, decoded sums) is an affine
// function of a fixed list of uniform, independent ground symbols. Entropies
// of such variables are coefficient-matrix ranks, which is what the analyzer
// exploits; this header only provides the representation.

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "field.hpp"
#include "matrix.hpp"
#include "sets.hpp"

namespace secagg {

enum class SymbolKind {
    input,      // one coordinate of a user's input vector
    self_mask,  // one coordinate of a user's additive mask
    noise       // one coordinate of the shared noise for a survivor set
};

struct SymbolInfo {
    SymbolKind kind;
    int user = 0;        // input/self_mask
    UserSet set = 0;     // noise
    int coord = 0;
};

/// Session-global list of ground symbols. Immutable once built; the builder
/// is the scheme constructor.
class SymbolRegistry {
public:
    explicit SymbolRegistry(std::shared_ptr<const Field> field) : field_(std::move(field)) {}

    std::size_t add(const SymbolInfo& info) {
        symbols_.push_back(info);
        return symbols_.size() - 1;
    }

    std::size_t size() const { return symbols_.size(); }
    const SymbolInfo& info(std::size_t i) const { return symbols_.at(i); }
    const Field& field() const { return *field_; }
    std::shared_ptr<const Field> field_ptr() const { return field_; }

private:
    std::shared_ptr<const Field> field_;
    std::vector<SymbolInfo> symbols_;
};

/// Affine form c0 + sum coeff[i] * symbol[i], coefficients in the registry's
/// field. Dense; registries are small at desk scale.
struct LinearExpr {
    std::vector<felem> coeff;
    felem constant = 0;

    explicit LinearExpr(std::size_t symbols = 0) : coeff(symbols, 0) {}

    static LinearExpr of_symbol(std::size_t symbols, std::size_t index) {
        LinearExpr e(symbols);
        e.coeff.at(index) = 1;
        return e;
    }

    void add_term(const Field& f, std::size_t index, felem c) {
        coeff.at(index) = f.add(coeff.at(index), c);
    }

    void accumulate(const Field& f, const LinearExpr& o, felem scale) {
        if (coeff.size() != o.coeff.size()) throw std::invalid_argument("registry size mismatch");
        for (std::size_t i = 0; i < coeff.size(); ++i)
            coeff[i] = f.add(coeff[i], f.mul(scale, o.coeff[i]));
        constant = f.add(constant, f.mul(scale, o.constant));
    }

    felem eval(const Field& f, const std::vector<felem>& ground) const {
        if (ground.size() != coeff.size()) throw std::invalid_argument("ground size mismatch");
        felem acc = constant;
        for (std::size_t i = 0; i < coeff.size(); ++i)
            if (coeff[i] != 0) acc = f.add(acc, f.mul(coeff[i], ground[i]));
        return acc;
    }

    bool operator==(const LinearExpr& o) const {
        return coeff == o.coeff && constant == o.constant;
    }
};

/// A named tuple of jointly considered variables.
struct VariableBundle {
    std::string name;
    std::vector<LinearExpr> rows;

    void append(const VariableBundle& o) {
        rows.insert(rows.end(), o.rows.begin(), o.rows.end());
    }
};

/// Rank of the stacked coefficient rows (constants are irrelevant to rank).
inline std::size_t joint_rank(const Field& f, const std::vector<const VariableBundle*>& bundles) {
    std::size_t total = 0, width = 0;
    for (const VariableBundle* b : bundles) {
        total += b->rows.size();
        for (const LinearExpr& e : b->rows) width = e.coeff.size();
    }
    if (total == 0) return 0;
    Matrix m(f, total, width);
    std::size_t r = 0;
    for (const VariableBundle* b : bundles)
        for (const LinearExpr& e : b->rows) {
            if (e.coeff.size() != width) throw std::invalid_argument("registry size mismatch");
            for (std::size_t j = 0; j < width; ++j) m.at(r, j) = e.coeff[j];
            ++r;
        }
    return m.rank();
}

inline std::size_t bundle_rank(const Field& f, const VariableBundle& b) {
    return joint_rank(f, {&b});
}

}  // namespace secagg
