#include "latdp/operator.hpp"

#include <algorithm>
#include <cmath>

#include "latdp/rng.hpp"

namespace latdp {

Vec LatticeOperator::apply(const Vec& x) const {
    if (x.size() != cols()) throw DimensionError("apply: vector/operator dimension mismatch");
    Vec y(rows(), 0.0);
    for (std::size_t r = 0; r < rows(); ++r) {
        double s = 0.0;
        const double* row = matrix.data() + r * cols();
        for (std::size_t c = 0; c < cols(); ++c) s += row[c] * x[c];
        y[r] = s;
    }
    return y;
}

Vec LatticeOperator::column(std::size_t i) const {
    Vec col(rows());
    for (std::size_t r = 0; r < rows(); ++r) col[r] = at(r, i);
    return col;
}

std::vector<Vec> LatticeOperator::columns() const {
    std::vector<Vec> cs(cols());
    for (std::size_t i = 0; i < cols(); ++i) cs[i] = column(i);
    return cs;
}

bool LatticeOperator::positive() const {
    for (double e : matrix)
        if (e < 0.0) return false;
    return true;
}

LatticeOperator make_operator(LatticeSpace domain, LatticeSpace codomain,
                              std::vector<double> row_major) {
    validate_space(domain);
    validate_space(codomain);
    if (row_major.size() != domain.dim * codomain.dim)
        throw DimensionError("matrix size does not match dim(domain) * dim(codomain)");
    for (double e : row_major)
        if (!std::isfinite(e)) throw InvalidInput("matrix entry not finite");
    return LatticeOperator{std::move(domain), std::move(codomain), std::move(row_major)};
}

LatticeOperator from_columns(LatticeSpace domain, LatticeSpace codomain,
                             const std::vector<Vec>& cols) {
    if (cols.size() != domain.dim) throw DimensionError("from_columns: column count mismatch");
    std::vector<double> data(domain.dim * codomain.dim, 0.0);
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (cols[i].size() != codomain.dim)
            throw DimensionError("from_columns: column length mismatch");
        for (std::size_t r = 0; r < codomain.dim; ++r)
            data[r * domain.dim + i] = cols[i][r];
    }
    return make_operator(std::move(domain), std::move(codomain), std::move(data));
}

LatticeOperator identity_operator(const LatticeSpace& s) {
    std::vector<double> data(s.dim * s.dim, 0.0);
    for (std::size_t i = 0; i < s.dim; ++i) data[i * s.dim + i] = 1.0;
    return LatticeOperator{s, s, std::move(data)};
}

LatticeOperator operator_sub(const LatticeOperator& a, const LatticeOperator& b) {
    if (a.domain.dim != b.domain.dim || a.codomain.dim != b.codomain.dim)
        throw DimensionError("operator_sub: shape mismatch");
    LatticeOperator r = a;
    for (std::size_t k = 0; k < r.matrix.size(); ++k) r.matrix[k] -= b.matrix[k];
    return r;
}

LatticeOperator operator_scale(const LatticeOperator& a, double t) {
    LatticeOperator r = a;
    for (auto& e : r.matrix) e *= t;
    return r;
}

LatticeOperator modulus(const LatticeOperator& t) {
    LatticeOperator r = t;
    for (auto& e : r.matrix) e = std::fabs(e);
    return r;
}

bool has_disjoint_columns(const LatticeOperator& t) {
    for (std::size_t r = 0; r < t.rows(); ++r) {
        int nonzero = 0;
        for (std::size_t c = 0; c < t.cols(); ++c)
            if (t.at(r, c) != 0.0) ++nonzero;
        if (nonzero > 1) return false;
    }
    return true;
}

bool dominated_by(const LatticeOperator& s, const LatticeOperator& t) {
    if (s.matrix.size() != t.matrix.size()) return false;
    for (std::size_t k = 0; k < s.matrix.size(); ++k)
        if (s.matrix[k] < 0.0 || s.matrix[k] > t.matrix[k]) return false;
    return true;
}

namespace {

double rayleigh(const LatticeOperator& t, const Vec& x) {
    const double nx = norm(t.domain, x);
    if (nx == 0.0) return 0.0;
    return norm(t.codomain, t.apply(x)) / nx;
}

// one sweep of multiplicative coordinate ascent on |coeffs|, keeping signs
bool ascent_sweep(const LatticeOperator& t, Vec& x, double& best, bool allow_sign_flips) {
    static const double factors[] = {0.25, 0.5, 0.8, 1.25, 2.0, 4.0};
    bool improved = false;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double saved = x[i];
        double best_xi = saved;
        for (double f : factors) {
            x[i] = saved * f;
            const double v = rayleigh(t, x);
            if (v > best + 1e-15) { best = v; best_xi = x[i]; improved = true; }
        }
        if (allow_sign_flips && saved != 0.0) {
            x[i] = -saved;
            const double v = rayleigh(t, x);
            if (v > best + 1e-15) { best = v; best_xi = x[i]; improved = true; }
        }
        if (saved == 0.0) {
            x[i] = 1.0;
            const double v = rayleigh(t, x);
            if (v > best + 1e-15) { best = v; best_xi = x[i]; improved = true; }
        }
        x[i] = best_xi;
    }
    return improved;
}

double power_iteration_l2(const LatticeOperator& t, Vec& witness) {
    const std::size_t n = t.cols();
    Vec x(n, 1.0);
    // x <- T^T T x, 200 iterations is far beyond what desk-scale instances need
    double sigma = 0.0;
    for (int it = 0; it < 200; ++it) {
        Vec y = t.apply(x);
        Vec z(n, 0.0);
        for (std::size_t r = 0; r < t.rows(); ++r)
            for (std::size_t c = 0; c < n; ++c) z[c] += t.at(r, c) * y[r];
        double nz = 0.0;
        for (double e : z) nz += e * e;
        nz = std::sqrt(nz);
        if (nz == 0.0) { witness = x; return 0.0; }
        for (auto& e : z) e /= nz;
        double new_sigma = 0.0;
        {
            Vec w = t.apply(z);
            for (double e : w) new_sigma += e * e;
            new_sigma = std::sqrt(new_sigma);
        }
        x = z;
        if (std::fabs(new_sigma - sigma) <= 1e-14 * std::max(1.0, new_sigma) && it > 4) {
            sigma = new_sigma;
            break;
        }
        sigma = new_sigma;
    }
    witness = x;
    return sigma;
}

bool is_plain_lp(const LatticeSpace& s, double p) {
    return s.norm.kind == NormKind::Lp && s.norm.p == p;
}

double l1_to_l1_norm(const LatticeOperator& t) {
    // max over columns of the codomain weighted-L1 mass, relative to atom norm
    double best = 0.0;
    for (std::size_t c = 0; c < t.cols(); ++c) {
        double s = 0.0;
        for (std::size_t r = 0; r < t.rows(); ++r) {
            double w = t.codomain.norm.kind == NormKind::WeightedLp ? t.codomain.norm.weights[r] : 1.0;
            s += w * std::fabs(t.at(r, c));
        }
        double dw = t.domain.norm.kind == NormKind::WeightedLp ? t.domain.norm.weights[c] : 1.0;
        best = std::max(best, s / dw);
    }
    return best;
}

double sup_to_sup_abs_norm(const LatticeOperator& t) {
    // max row sum of |entries|, i.e. || |T| 1 ||_inf
    double best = 0.0;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        double s = 0.0;
        for (std::size_t c = 0; c < t.cols(); ++c) s += std::fabs(t.at(r, c));
        best = std::max(best, s);
    }
    return best;
}

}  // namespace

NormEstimate operator_norm(const LatticeOperator& t, int budget, std::uint64_t seed) {
    NormEstimate est;
    const std::size_t n = t.cols();
    const bool pos = t.positive();

    // closed forms
    if (is_l1_kind(t.domain)) {
        double best = 0.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double v = norm(t.codomain, t.column(i)) / atom_norm(t.domain, i);
            if (v > best) { best = v; arg = i; }
        }
        est.lower = best;
        est.upper = best;
        est.provenance = "max column norm (L1-type domain)";
        est.witness.assign(n, 0.0);
        est.witness[arg] = 1.0 / atom_norm(t.domain, arg);
        return est;
    }
    if (is_sup_kind(t.codomain)) {
        double best = 0.0;
        Vec best_row;
        for (std::size_t r = 0; r < t.rows(); ++r) {
            Vec row(n);
            for (std::size_t c = 0; c < n; ++c) row[c] = t.at(r, c);
            const double v = dual_norm(t.domain, row);
            if (v > best) { best = v; best_row = row; }
        }
        est.lower = best;
        est.upper = best;
        est.provenance = "max row dual norm (sup-type codomain)";
        if (!best_row.empty() && best > 0.0) {
            // witness: the domain vector norming the best row
            Vec z = dual_norming_vector(t.domain, abs_of(best_row));
            for (std::size_t c = 0; c < n; ++c) z[c] = std::copysign(z[c], best_row[c]);
            est.witness = z;
        }
        return est;
    }
    if (is_plain_lp(t.domain, 2.0) && is_plain_lp(t.codomain, 2.0)) {
        Vec w;
        const double sigma = power_iteration_l2(t, w);
        est.lower = sigma;
        // Schur test: valid for every matrix
        est.upper = std::sqrt(l1_to_l1_norm(t) * sup_to_sup_abs_norm(t));
        est.provenance = "power iteration + Schur bound (L2 -> L2)";
        est.witness = w;
        if (*est.upper < est.lower) est.upper = est.lower;  // rounding guard
        return est;
    }

    // positive Lq -> Lq interpolation upper bound
    const bool same_q = t.domain.norm.kind != NormKind::Sup &&
                        t.codomain.norm.kind != NormKind::Sup &&
                        !std::isinf(t.domain.norm.p) &&
                        t.domain.norm.p == t.codomain.norm.p && pos;
    if (same_q) {
        const double q = t.domain.norm.p;
        const double n1 = l1_to_l1_norm(t);
        const double ninf = sup_to_sup_abs_norm(t);
        est.upper = std::pow(n1, 1.0 / q) * std::pow(ninf, 1.0 - 1.0 / q);
        est.provenance = "interpolation bound (positive Lq -> Lq)";
    }

    // lower bound by multi-start ascent
    Rng rng(seed ^ 0x6c62272e07bb0142ull);
    double best = 0.0;
    Vec best_x;
    auto consider = [&](Vec x) {
        double v = rayleigh(t, x);
        if (v > best) { best = v; best_x = x; }
        for (int sweep = 0; sweep < 60; ++sweep)
            if (!ascent_sweep(t, x, v, !pos)) break;
        if (v > best) { best = v; best_x = x; }
    };
    consider(Vec(n, 1.0));
    for (std::size_t i = 0; i < n; ++i) {
        Vec e(n, 0.0);
        e[i] = 1.0;
        consider(e);
    }
    for (int r = 0; r < budget; ++r) {
        Vec x(n);
        for (auto& e : x) e = pos ? rng.uniform(0.0, 1.0) : rng.uniform(-1.0, 1.0);
        consider(x);
    }
    est.lower = best;
    est.witness = best_x;
    if (est.upper && *est.upper < est.lower) est.upper = est.lower;
    if (est.provenance.empty()) est.provenance = "multi-start ascent lower bound";
    return est;
}

double operator_norm_value(const LatticeOperator& t, int budget, std::uint64_t seed) {
    const NormEstimate e = operator_norm(t, budget, seed);
    return e.upper ? *e.upper : e.lower;
}

}  // namespace latdp
