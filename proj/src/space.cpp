#include "latdp/space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace latdp {

namespace {

double sign_of(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

double conjugate_exponent(double p) {
    if (p == 1.0) return std::numeric_limits<double>::infinity();
    if (std::isinf(p)) return 1.0;
    return p / (p - 1.0);
}

double lp_norm(const Vec& x, double p) {
    if (std::isinf(p)) {
        double m = 0.0;
        for (double e : x) m = std::max(m, std::fabs(e));
        return m;
    }
    if (p == 1.0) {
        double s = 0.0;
        for (double e : x) s += std::fabs(e);
        return s;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (double e : x) s += e * e;
        return std::sqrt(s);
    }
    double s = 0.0;
    for (double e : x) s += std::pow(std::fabs(e), p);
    return std::pow(s, 1.0 / p);
}

double weighted_lp_norm(const Vec& x, double p, const std::vector<double>& w) {
    double s = 0.0;
    if (p == 1.0) {
        for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::fabs(x[i]);
        return s;
    }
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(std::fabs(x[i]), p);
    return std::pow(s, 1.0 / p);
}

}  // namespace

LatticeSpace make_lp_space(std::size_t dim, double p) {
    LatticeSpace s{dim, NormSpec::lp(p)};
    validate_space(s);
    return s;
}

LatticeSpace make_sup_space(std::size_t dim) {
    LatticeSpace s{dim, NormSpec::sup()};
    validate_space(s);
    return s;
}

LatticeSpace make_weighted_lp_space(double p, std::vector<double> weights) {
    LatticeSpace s{weights.size(), NormSpec::weighted_lp(p, std::move(weights))};
    validate_space(s);
    return s;
}

void validate_space(const LatticeSpace& s) {
    if (s.dim < 1) throw InvalidInput("space dimension must be >= 1");
    switch (s.norm.kind) {
        case NormKind::Lp:
            if (!(s.norm.p >= 1.0)) throw InvalidInput("Lp requires p >= 1");
            break;
        case NormKind::WeightedLp:
            if (!(s.norm.p >= 1.0) || std::isinf(s.norm.p))
                throw InvalidInput("WeightedLp requires 1 <= p < inf");
            if (s.norm.weights.size() != s.dim)
                throw DimensionError("weight list length must equal dim");
            for (double w : s.norm.weights)
                if (!(w > 0.0) || !std::isfinite(w))
                    throw InvalidInput("weights must be positive finite");
            break;
        case NormKind::Sup:
            break;
    }
}

bool is_l1_kind(const LatticeSpace& s) {
    return (s.norm.kind == NormKind::Lp && s.norm.p == 1.0) ||
           (s.norm.kind == NormKind::WeightedLp && s.norm.p == 1.0);
}

bool is_sup_kind(const LatticeSpace& s) {
    return s.norm.kind == NormKind::Sup ||
           (s.norm.kind == NormKind::Lp && std::isinf(s.norm.p));
}

double norm(const LatticeSpace& s, const Vec& x) {
    if (x.size() != s.dim) throw DimensionError("norm: vector/space dimension mismatch");
    switch (s.norm.kind) {
        case NormKind::Lp: return lp_norm(x, s.norm.p);
        case NormKind::WeightedLp: return weighted_lp_norm(x, s.norm.p, s.norm.weights);
        case NormKind::Sup: return lp_norm(x, std::numeric_limits<double>::infinity());
    }
    return 0.0;
}

double dual_norm(const LatticeSpace& s, const Vec& x) {
    if (x.size() != s.dim) throw DimensionError("dual_norm: vector/space dimension mismatch");
    switch (s.norm.kind) {
        case NormKind::Lp: return lp_norm(x, conjugate_exponent(s.norm.p));
        case NormKind::Sup: return lp_norm(x, 1.0);
        case NormKind::WeightedLp: {
            const double p = s.norm.p;
            const auto& w = s.norm.weights;
            if (p == 1.0) {
                double m = 0.0;
                for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::fabs(x[i]) / w[i]);
                return m;
            }
            // dual of (sum w|x|^p)^{1/p} is the weighted Lp' norm with weights w^{1-p'}
            const double q = conjugate_exponent(p);
            double sum = 0.0;
            for (std::size_t i = 0; i < x.size(); ++i)
                sum += std::pow(w[i], 1.0 - q) * std::pow(std::fabs(x[i]), q);
            return std::pow(sum, 1.0 / q);
        }
    }
    return 0.0;
}

Vec norming_functional(const LatticeSpace& s, const Vec& x) {
    if (x.size() != s.dim) throw DimensionError("norming_functional: dimension mismatch");
    const double nx = norm(s, x);
    if (nx == 0.0) throw InvalidInput("norming_functional: zero vector");
    Vec z(x.size(), 0.0);

    if (is_sup_kind(s)) {
        // indicator of the first coordinate attaining the max, with sign
        std::size_t k = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (std::fabs(x[i]) > best) { best = std::fabs(x[i]); k = i; }
        }
        z[k] = sign_of(x[k]);
        return z;
    }

    const double p = s.norm.p;
    if (s.norm.kind == NormKind::Lp) {
        if (p == 1.0) {
            for (std::size_t i = 0; i < x.size(); ++i) z[i] = sign_of(x[i]);
            return z;
        }
        for (std::size_t i = 0; i < x.size(); ++i)
            z[i] = sign_of(x[i]) * std::pow(std::fabs(x[i]) / nx, p - 1.0);
        return z;
    }

    // WeightedLp, weights folded in so that <z,x> = norm(x) and dual_norm(z) = 1
    const auto& w = s.norm.weights;
    if (p == 1.0) {
        for (std::size_t i = 0; i < x.size(); ++i)
            if (x[i] != 0.0) z[i] = w[i] * sign_of(x[i]);
        return z;
    }
    for (std::size_t i = 0; i < x.size(); ++i)
        z[i] = w[i] * sign_of(x[i]) * std::pow(std::fabs(x[i]) / nx, p - 1.0);
    return z;
}

Vec dual_norming_vector(const LatticeSpace& s, const Vec& beta) {
    if (beta.size() != s.dim) throw DimensionError("dual_norming_vector: dimension mismatch");
    if (!is_nonnegative(beta)) throw InvalidInput("dual_norming_vector: beta must be >= 0");
    Vec z(beta.size(), 0.0);
    const double db = dual_norm(s, beta);
    if (db == 0.0) {
        // beta = 0: any unit direction norms it; pick the first atom
        z[0] = 1.0 / atom_norm(s, 0);
        return z;
    }

    if (is_sup_kind(s)) {
        // unit ball peak: the all-ones vector pairs beta to its L1 mass
        std::fill(z.begin(), z.end(), 1.0);
        return z;
    }

    const double p = s.norm.p;
    if (s.norm.kind == NormKind::Lp) {
        if (p == 1.0) {
            std::size_t k = 0;
            double best = -1.0;
            for (std::size_t i = 0; i < beta.size(); ++i)
                if (beta[i] > best) { best = beta[i]; k = i; }
            z[k] = 1.0;
            return z;
        }
        for (std::size_t i = 0; i < beta.size(); ++i)
            z[i] = std::pow(beta[i], 1.0 / (p - 1.0));
        const double nz = norm(s, z);
        for (auto& e : z) e /= nz;
        return z;
    }

    const auto& w = s.norm.weights;
    if (p == 1.0) {
        std::size_t k = 0;
        double best = -1.0;
        for (std::size_t i = 0; i < beta.size(); ++i) {
            const double r = beta[i] / w[i];
            if (r > best) { best = r; k = i; }
        }
        z[k] = 1.0 / w[k];
        return z;
    }
    for (std::size_t i = 0; i < beta.size(); ++i)
        z[i] = std::pow(beta[i] / w[i], 1.0 / (p - 1.0));
    const double nz = norm(s, z);
    for (auto& e : z) e /= nz;
    return z;
}

double atom_norm(const LatticeSpace& s, std::size_t i) {
    switch (s.norm.kind) {
        case NormKind::Lp: return 1.0;
        case NormKind::Sup: return 1.0;
        case NormKind::WeightedLp: return std::pow(s.norm.weights[i], 1.0 / s.norm.p);
    }
    return 1.0;
}

std::string describe(const NormSpec& n) {
    std::ostringstream os;
    switch (n.kind) {
        case NormKind::Lp:
            if (std::isinf(n.p)) os << "l_inf";
            else os << "l_" << n.p;
            break;
        case NormKind::WeightedLp: os << "weighted l_" << n.p; break;
        case NormKind::Sup: os << "sup"; break;
    }
    return os.str();
}

}  // namespace latdp
