#pragma once

#include <cstddef>
#include <vector>

#include "latdp/errors.hpp"

namespace latdp {

// A finite real coordinate vector.  All lattice structure (order, meet, join,
// modulus) is coordinatewise.
using Vec = std::vector<double>;

void check_same_dim(const Vec& x, const Vec& y);
void check_finite(const Vec& x);

Vec abs_of(const Vec& x);
Vec meet(const Vec& x, const Vec& y);
Vec join(const Vec& x, const Vec& y);
Vec pos_part(const Vec& x);
Vec neg_part(const Vec& x);

Vec add(const Vec& x, const Vec& y);
Vec sub(const Vec& x, const Vec& y);
Vec scale(const Vec& x, double a);
double dot(const Vec& x, const Vec& y);

// coordinatewise (|x_i|^p + |y_i|^p)^{1/p}; p = inf gives max(|x_i|, |y_i|)
Vec p_sum(const Vec& x, const Vec& y, double p);

bool is_nonnegative(const Vec& x);
// x and y disjoint: |x| ∧ |y| = 0 coordinatewise
bool is_disjoint(const Vec& x, const Vec& y);
// x <= y coordinatewise
bool leq_coordinatewise(const Vec& x, const Vec& y);

Vec meet_all(const std::vector<Vec>& xs);
Vec join_all(const std::vector<Vec>& xs);
Vec sum_all(const std::vector<Vec>& xs);

}  // namespace latdp
