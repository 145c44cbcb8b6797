#include "latdp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace latdp {

void check_same_dim(const Vec& x, const Vec& y) {
    if (x.size() != y.size())
        throw DimensionError("vector dimension mismatch: " + std::to_string(x.size()) +
                             " vs " + std::to_string(y.size()));
}

void check_finite(const Vec& x) {
    if (x.empty()) throw InvalidInput("vector must have dimension >= 1");
    for (double e : x)
        if (!std::isfinite(e)) throw InvalidInput("vector entry not finite");
}

Vec abs_of(const Vec& x) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::fabs(x[i]);
    return r;
}

Vec meet(const Vec& x, const Vec& y) {
    check_same_dim(x, y);
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::min(x[i], y[i]);
    return r;
}

Vec join(const Vec& x, const Vec& y) {
    check_same_dim(x, y);
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::max(x[i], y[i]);
    return r;
}

Vec pos_part(const Vec& x) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::max(x[i], 0.0);
    return r;
}

Vec neg_part(const Vec& x) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::max(-x[i], 0.0);
    return r;
}

Vec add(const Vec& x, const Vec& y) {
    check_same_dim(x, y);
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] + y[i];
    return r;
}

Vec sub(const Vec& x, const Vec& y) {
    check_same_dim(x, y);
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = x[i] - y[i];
    return r;
}

Vec scale(const Vec& x, double a) {
    Vec r(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) r[i] = a * x[i];
    return r;
}

double dot(const Vec& x, const Vec& y) {
    check_same_dim(x, y);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

Vec p_sum(const Vec& x, const Vec& y, double p) {
    check_same_dim(x, y);
    if (!(p >= 1.0)) throw InvalidInput("p_sum requires p >= 1");
    Vec r(x.size());
    if (std::isinf(p)) {
        for (std::size_t i = 0; i < x.size(); ++i)
            r[i] = std::max(std::fabs(x[i]), std::fabs(y[i]));
        return r;
    }
    if (p == 1.0) {
        for (std::size_t i = 0; i < x.size(); ++i) r[i] = std::fabs(x[i]) + std::fabs(y[i]);
        return r;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
        double a = std::fabs(x[i]), b = std::fabs(y[i]);
        if (a == 0.0) { r[i] = b; continue; }
        if (b == 0.0) { r[i] = a; continue; }
        r[i] = std::pow(std::pow(a, p) + std::pow(b, p), 1.0 / p);
    }
    return r;
}

bool is_nonnegative(const Vec& x) {
    for (double e : x)
        if (e < 0.0) return false;
    return true;
}

bool is_disjoint(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != 0.0 && y[i] != 0.0) return false;
    return true;
}

bool leq_coordinatewise(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) return false;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] > y[i]) return false;
    return true;
}

Vec meet_all(const std::vector<Vec>& xs) {
    if (xs.empty()) throw InvalidInput("meet_all on empty family");
    Vec r = xs[0];
    for (std::size_t k = 1; k < xs.size(); ++k) r = meet(r, xs[k]);
    return r;
}

Vec join_all(const std::vector<Vec>& xs) {
    if (xs.empty()) throw InvalidInput("join_all on empty family");
    Vec r = xs[0];
    for (std::size_t k = 1; k < xs.size(); ++k) r = join(r, xs[k]);
    return r;
}

Vec sum_all(const std::vector<Vec>& xs) {
    if (xs.empty()) throw InvalidInput("sum_all on empty family");
    Vec r = xs[0];
    for (std::size_t k = 1; k < xs.size(); ++k) r = add(r, xs[k]);
    return r;
}

}  // namespace latdp
