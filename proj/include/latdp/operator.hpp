#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "latdp/space.hpp"

namespace latdp {

// An m x n real matrix between two coordinate lattices; column i is the image
// of the i-th domain atom.
struct LatticeOperator {
    LatticeSpace domain;    // dim n
    LatticeSpace codomain;  // dim m
    std::vector<double> matrix;  // row-major, m rows of n entries

    std::size_t rows() const { return codomain.dim; }
    std::size_t cols() const { return domain.dim; }
    double& at(std::size_t r, std::size_t c) { return matrix[r * cols() + c]; }
    double at(std::size_t r, std::size_t c) const { return matrix[r * cols() + c]; }

    Vec apply(const Vec& x) const;
    Vec column(std::size_t i) const;
    std::vector<Vec> columns() const;
    bool positive() const;
};

LatticeOperator make_operator(LatticeSpace domain, LatticeSpace codomain,
                              std::vector<double> row_major);
LatticeOperator from_columns(LatticeSpace domain, LatticeSpace codomain,
                             const std::vector<Vec>& cols);
LatticeOperator identity_operator(const LatticeSpace& s);

LatticeOperator operator_sub(const LatticeOperator& a, const LatticeOperator& b);
LatticeOperator operator_scale(const LatticeOperator& a, double t);

// entrywise absolute value; this is |T| for coordinatewise finite lattices
LatticeOperator modulus(const LatticeOperator& t);

// columns have pairwise disjoint supports
bool has_disjoint_columns(const LatticeOperator& t);
// 0 <= s <= t entrywise
bool dominated_by(const LatticeOperator& s, const LatticeOperator& t);

struct NormEstimate {
    double lower = 0.0;                  // certified: attained by a witness vector
    std::optional<double> upper;         // closed form / interpolation, when available
    std::string provenance;              // which closed form produced `upper`
    Vec witness;                         // domain vector attaining `lower`
};

// Lower bound by multi-start ascent of ||Tx||/||x|| (restricted to x >= 0 for
// positive T); exact value where closed forms exist:
//   L1-type domain        -> max_i ||T delta_i|| / ||delta_i||
//   sup-type codomain     -> max_t dual_norm(domain, row_t)
//   positive Lq -> Lq     -> interpolation bound ||T||_1^{1/q} ||T||_inf^{1-1/q}
//   L2 -> L2              -> power iteration (lower) + Schur bound (upper)
NormEstimate operator_norm(const LatticeOperator& t, int budget = 24,
                           std::uint64_t seed = 0);

// convenience: certified upper bound when available, else the search lower bound
double operator_norm_value(const LatticeOperator& t, int budget = 24,
                           std::uint64_t seed = 0);

}  // namespace latdp
