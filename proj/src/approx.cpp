#include "latdp/approx.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "latdp/parallel.hpp"
#include "latdp/rng.hpp"

namespace latdp {

std::vector<std::vector<std::size_t>> SupportAssignment::owned_sets(std::size_t n_cols) const {
    std::vector<std::vector<std::size_t>> sets(n_cols);
    for (std::size_t t = 0; t < owner.size(); ++t)
        if (owner[t] >= 0 && static_cast<std::size_t>(owner[t]) < n_cols)
            sets[static_cast<std::size_t>(owner[t])].push_back(t);
    return sets;
}

nlohmann::json ApproxResult::to_json() const {
    nlohmann::json j;
    j["S"] = operator_to_json(s);
    j["distance"] = distance;
    j["bound"] = bound;
    j["eps_used"] = eps_used ? nlohmann::json(*eps_used) : nlohmann::json(nullptr);
    j["method"] = method;
    j["dominated"] = dominated;
    return j;
}

double dominant_peak_cut(std::span<const double> t) {
    if (t.empty()) throw InvalidInput("dominant_peak_cut: empty input");
    const double lead = t[0];
    double rest = 0.0;
    for (std::size_t i = 1; i < t.size(); ++i) rest = std::max(rest, std::fabs(t[i]));
    if (lead <= rest) return 0.0;
    if (lead <= 2.0 * rest) return 2.0 * (lead - rest);
    return lead;
}

double soft_threshold_cut(double t, double eps) {
    const double a = std::fabs(t);
    if (a <= eps) return 0.0;
    if (a >= 2.0 * eps) return t;
    return std::copysign(2.0 * (a - eps), t);
}

namespace {

// shared truncation core: g_i(t) from f_i(t) against the peer level h_i(t)
double peer_cut(double f, double h) {
    const double a = std::fabs(f);
    if (a <= h) return 0.0;
    if (a >= 2.0 * h) return f;
    return 2.0 * (f - std::copysign(h, f));
}

double sup_codomain_norm(const LatticeOperator& t) {
    double best = 0.0;
    for (std::size_t r = 0; r < t.rows(); ++r) {
        Vec row(t.cols());
        for (std::size_t c = 0; c < t.cols(); ++c) row[c] = t.at(r, c);
        best = std::max(best, dual_norm(t.domain, row));
    }
    return best;
}

double l1_codomain_operator_norm(const LatticeOperator& t) {
    // positive operator into an L1-type lattice: dual norm of the column masses
    Vec beta(t.cols());
    for (std::size_t i = 0; i < t.cols(); ++i) beta[i] = norm(t.codomain, t.column(i));
    return dual_norm(t.domain, beta);
}

}  // namespace

ApproxResult approximate_dp_sup_domain(const LatticeOperator& t, std::optional<double> eps) {
    if (!is_sup_kind(t.domain))
        throw IncompatibleError("approximate_dp_sup_domain: domain must be sup-normed");
    if (!t.positive())
        throw IncompatibleError("approximate_dp_sup_domain: operator must be positive");

    const std::size_t m = t.rows(), n = t.cols();
    LatticeOperator s = t;
    std::vector<double> row(n);
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) row[c] = t.at(r, c);
        for (std::size_t c = 0; c < n; ++c) {
            double peers = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != c) peers = std::max(peers, std::fabs(row[j]));
            s.at(r, c) = peer_cut(row[c], peers);
        }
    }

    ApproxResult res;
    res.s = std::move(s);
    res.method = "phi_n";
    res.dominated = dominated_by(res.s, t);
    // positive residual with a sup-normed domain attains its norm at the unit
    res.distance = norm(t.codomain, operator_sub(t, res.s).apply(Vec(n, 1.0)));
    res.distance_exact = true;

    Vec total(m, 0.0), peak(m, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const Vec f = t.column(i);
        total = add(total, f);
        peak = join(peak, f);
    }
    const double unconditional = 2.0 * norm(t.codomain, sub(total, peak));
    res.eps_used = eps;
    res.bound = eps ? 256.0 * *eps : unconditional;
    return res;
}

ApproxResult approximate_dp_sup_codomain(const LatticeOperator& t, std::optional<double> eps) {
    if (!is_sup_kind(t.codomain))
        throw IncompatibleError("approximate_dp_sup_codomain: codomain must be sup-normed");

    const std::size_t m = t.rows(), n = t.cols();
    LatticeOperator s = t;
    for (std::size_t r = 0; r < m; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            double peers = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != c) peers = std::max(peers, std::fabs(t.at(r, j)));
            s.at(r, c) = peer_cut(t.at(r, c), peers);
        }
    }

    ApproxResult res;
    res.s = std::move(s);
    res.method = "truncation";
    res.dominated = t.positive() && dominated_by(res.s, t);
    res.distance = sup_codomain_norm(operator_sub(t, res.s));
    res.distance_exact = true;
    res.eps_used = eps;
    const double norm_t = sup_codomain_norm(t);
    res.bound = eps ? 257.0 * *eps * norm_t : res.distance;
    return res;
}

ApproxResult approximate_dp_threshold(const LatticeOperator& t, double eps) {
    if (!is_sup_kind(t.codomain))
        throw IncompatibleError("approximate_dp_threshold: codomain must be sup-normed");
    if (!(eps > 0.0)) throw IncompatibleError("approximate_dp_threshold: eps must be > 0");

    const std::size_t m = t.rows(), n = t.cols();
    for (std::size_t r = 0; r < m; ++r) {
        int large = 0;
        for (std::size_t c = 0; c < n; ++c)
            if (std::fabs(t.at(r, c)) > eps) ++large;
        if (large > 1)
            throw IncompatibleError(
                "approximate_dp_threshold: two columns exceed eps at coordinate " +
                std::to_string(r));
    }

    LatticeOperator s = t;
    for (auto& e : s.matrix) e = soft_threshold_cut(e, eps);

    ApproxResult res;
    res.s = std::move(s);
    res.method = "threshold";
    res.dominated = t.positive() && dominated_by(res.s, t);
    res.distance = sup_codomain_norm(operator_sub(t, res.s));
    res.distance_exact = true;
    res.eps_used = eps;
    const double norm_t = sup_codomain_norm(t);
    res.bound = 257.0 * eps * std::max(1.0, norm_t);
    return res;
}

namespace {

void require_l1_codomain_positive(const LatticeOperator& t, const char* who) {
    if (!is_l1_kind(t.codomain))
        throw IncompatibleError(std::string(who) + ": codomain must be L1-type");
    if (!t.positive()) throw IncompatibleError(std::string(who) + ": operator must be positive");
}

// per-coordinate codomain mass each column contributes
std::vector<double> coordinate_masses(const LatticeOperator& t) {
    std::vector<double> c(t.rows() * t.cols());
    for (std::size_t r = 0; r < t.rows(); ++r) {
        const double w =
            t.codomain.norm.kind == NormKind::WeightedLp ? t.codomain.norm.weights[r] : 1.0;
        for (std::size_t i = 0; i < t.cols(); ++i)
            c[r * t.cols() + i] = w * std::fabs(t.at(r, i));
    }
    return c;
}

}  // namespace

double assignment_objective(const LatticeOperator& t, const SupportAssignment& a) {
    require_l1_codomain_positive(t, "assignment_objective");
    if (a.owner.size() != t.rows())
        throw DimensionError("assignment_objective: owner list length != codomain dim");
    const std::size_t n = t.cols();
    const auto masses = coordinate_masses(t);
    Vec beta(n);
    for (std::size_t i = 0; i < n; ++i) beta[i] = norm(t.codomain, t.column(i));
    for (std::size_t r = 0; r < t.rows(); ++r) {
        const int o = a.owner[r];
        if (o >= 0) beta[static_cast<std::size_t>(o)] -= masses[r * n + o];
    }
    for (auto& b : beta) b = std::max(b, 0.0);
    return dual_norm(t.domain, beta);
}

std::pair<SupportAssignment, double> optimal_assignment_bruteforce(
    const LatticeOperator& t, std::uint64_t enumeration_cap) {
    require_l1_codomain_positive(t, "optimal_assignment_bruteforce");
    const std::size_t m = t.rows(), n = t.cols();
    const std::uint64_t base = n + 1;
    long double total_ld = 1.0L;
    for (std::size_t i = 0; i < m; ++i) total_ld *= base;
    if (total_ld > static_cast<long double>(enumeration_cap))
        throw InvalidInput("optimal_assignment_bruteforce: instance too large");
    const std::uint64_t total = static_cast<std::uint64_t>(total_ld);

    const auto masses = coordinate_masses(t);
    Vec col_mass(n);
    for (std::size_t i = 0; i < n; ++i) col_mass[i] = norm(t.codomain, t.column(i));

    struct ChunkResult {
        double value = std::numeric_limits<double>::infinity();
        std::vector<int> owner;
    };

    auto scan = [&](std::uint64_t lo, std::uint64_t hi, ChunkResult& out) {
        // decode lo into the odometer (owner[0] most significant; digit 0 = dropped)
        std::vector<int> digits(m, 0);
        {
            std::uint64_t v = lo;
            for (std::size_t pos = m; pos-- > 0;) {
                digits[pos] = static_cast<int>(v % base);
                v /= base;
            }
        }
        Vec beta = col_mass;
        auto apply_digit = [&](std::size_t r, int digit, double sign) {
            if (digit > 0) beta[static_cast<std::size_t>(digit - 1)] += sign * masses[r * n + (digit - 1)];
        };
        for (std::size_t r = 0; r < m; ++r) apply_digit(r, digits[r], -1.0);

        for (std::uint64_t k = lo; k < hi; ++k) {
            const double v = dual_norm(t.domain, beta);
            if (v < out.value - 1e-15 || out.owner.empty()) {
                out.value = v;
                out.owner = digits;
            }
            if (k + 1 == hi) break;
            // increment the odometer from the least significant position
            std::size_t pos = m;
            while (pos-- > 0) {
                apply_digit(pos, digits[pos], +1.0);
                if (static_cast<std::uint64_t>(digits[pos]) + 1 < base) {
                    ++digits[pos];
                    apply_digit(pos, digits[pos], -1.0);
                    break;
                }
                digits[pos] = 0;
            }
        }
    };

    const unsigned workers =
        static_cast<unsigned>(std::min<std::uint64_t>(worker_count(), std::max<std::uint64_t>(total / 4096, 1)));
    std::vector<ChunkResult> results(workers);
    if (workers <= 1) {
        scan(0, total, results[0]);
    } else {
        std::vector<std::thread> pool;
        const std::uint64_t chunk = (total + workers - 1) / workers;
        for (unsigned w = 0; w < workers; ++w) {
            const std::uint64_t lo = w * chunk;
            const std::uint64_t hi = std::min<std::uint64_t>(total, lo + chunk);
            pool.emplace_back([&, lo, hi, w] { if (lo < hi) scan(lo, hi, results[w]); });
        }
        for (auto& th : pool) th.join();
    }

    // earlier chunks carry lexicographically smaller owner lists, so taking a
    // strict improvement in chunk order reproduces the serial tie-break
    ChunkResult best;
    for (const auto& r : results)
        if (!r.owner.empty() && (best.owner.empty() || r.value < best.value - 1e-15)) best = r;

    SupportAssignment a;
    a.owner.resize(m);
    for (std::size_t r = 0; r < m; ++r) a.owner[r] = best.owner[r] - 1;
    return {a, best.value};
}

std::pair<SupportAssignment, double> alternating_assignment(const LatticeOperator& t,
                                                            int max_iters,
                                                            std::uint64_t seed) {
    require_l1_codomain_positive(t, "alternating_assignment");
    const std::size_t m = t.rows(), n = t.cols();
    const auto masses = coordinate_masses(t);
    Vec col_mass(n);
    for (std::size_t i = 0; i < n; ++i) col_mass[i] = norm(t.codomain, t.column(i));

    auto assign_for = [&](const Vec& alpha) {
        SupportAssignment a;
        a.owner.assign(m, -1);
        for (std::size_t r = 0; r < m; ++r) {
            double best = 0.0;
            int arg = -1;
            for (std::size_t i = 0; i < n; ++i) {
                const double v = alpha[i] * std::fabs(t.at(r, i));
                if (v > best) { best = v; arg = static_cast<int>(i); }
            }
            a.owner[r] = arg;
        }
        return a;
    };
    auto objective = [&](const SupportAssignment& a) {
        Vec beta = col_mass;
        for (std::size_t r = 0; r < m; ++r)
            if (a.owner[r] >= 0) beta[static_cast<std::size_t>(a.owner[r])] -= masses[r * n + a.owner[r]];
        for (auto& b : beta) b = std::max(b, 0.0);
        return std::make_pair(dual_norm(t.domain, beta), beta);
    };

    SupportAssignment best_a;
    double best_v = std::numeric_limits<double>::infinity();
    Rng rng(seed ^ 0x9e3779b97f4a7c15ull);

    const int starts = 5;  // uniform + 4 random
    for (int s = 0; s < starts; ++s) {
        Vec alpha(n, 1.0);
        if (s > 0)
            for (auto& e : alpha) e = rng.uniform(0.05, 1.0);
        const double na = norm(t.domain, alpha);
        for (auto& e : alpha) e /= na;

        std::set<std::vector<int>> seen;
        for (int it = 0; it < max_iters; ++it) {
            SupportAssignment a = assign_for(alpha);
            auto [v, beta] = objective(a);
            if (v < best_v - 1e-15 || best_a.owner.empty()) {
                best_v = v;
                best_a = a;
            }
            if (!seen.insert(a.owner).second) break;  // cycle
            if (v == 0.0) break;
            alpha = dual_norming_vector(t.domain, beta);
        }
    }
    return {best_a, best_v};
}

LatticeOperator build_dp_from_assignment(const LatticeOperator& t, const SupportAssignment& a,
                                         double drop_threshold) {
    if (a.owner.size() != t.rows())
        throw DimensionError("build_dp_from_assignment: owner list length != codomain dim");
    LatticeOperator s = t;
    for (std::size_t r = 0; r < t.rows(); ++r)
        for (std::size_t c = 0; c < t.cols(); ++c)
            if (a.owner[r] != static_cast<int>(c)) s.at(r, c) = 0.0;
    if (drop_threshold > 0.0) {
        for (std::size_t c = 0; c < t.cols(); ++c) {
            if (norm(t.codomain, t.column(c)) < drop_threshold)
                for (std::size_t r = 0; r < t.rows(); ++r) s.at(r, c) = 0.0;
        }
    }
    return s;
}

ApproxResult approximate_l1_target(const LatticeOperator& t, std::optional<double> eps,
                                   std::uint64_t seed) {
    require_l1_codomain_positive(t, "approximate_l1_target");
    const std::size_t m = t.rows(), n = t.cols();

    auto [assignment, value] = alternating_assignment(t, 64, seed);
    {
        // exact refinement when the instance is small enough
        long double total = 1.0L;
        for (std::size_t i = 0; i < m; ++i) total *= (n + 1);
        if (total <= 100000.0L) {
            auto [oa, ov] = optimal_assignment_bruteforce(t);
            if (ov < value) {
                assignment = oa;
                value = ov;
            }
        }
    }

    const double norm_t = l1_codomain_operator_norm(t);
    double drop = 0.0;
    if (eps) drop = 2.0 * std::sqrt(2.0 * *eps * norm_t / 3.0);

    LatticeOperator s = build_dp_from_assignment(t, assignment, drop);

    ApproxResult res;
    res.method = "assignment";
    res.dominated = dominated_by(s, t);
    // exact distance via the dual-norm identity on residual column masses
    Vec beta(n);
    for (std::size_t i = 0; i < n; ++i)
        beta[i] = norm(t.codomain, sub(t.column(i), s.column(i)));
    res.distance = dual_norm(t.domain, beta);
    res.distance_exact = true;
    res.s = std::move(s);
    res.eps_used = eps;
    res.bound = eps ? std::min(256.0 * *eps, drop) : res.distance;
    return res;
}

LatticeOperator power_transfer(const LatticeOperator& t, double q) {
    if (!(q > 1.0)) throw IncompatibleError("power_transfer: q must be > 1");
    if (!t.positive()) throw IncompatibleError("power_transfer: operator must be positive");
    auto transfer_space = [&](const LatticeSpace& s) {
        if (s.norm.kind == NormKind::Lp && s.norm.p == q) return make_lp_space(s.dim, 1.0);
        if (s.norm.kind == NormKind::WeightedLp && s.norm.p == q)
            return make_weighted_lp_space(1.0, s.norm.weights);
        throw IncompatibleError("power_transfer: spaces must carry the exponent q");
    };
    LatticeOperator r{transfer_space(t.domain), transfer_space(t.codomain), t.matrix};
    for (auto& e : r.matrix) e = std::pow(e, q);
    return r;
}

LatticeOperator root_transfer(const LatticeOperator& s_prime, double q) {
    if (!(q > 1.0)) throw IncompatibleError("root_transfer: q must be > 1");
    if (!s_prime.positive()) throw IncompatibleError("root_transfer: operator must be positive");
    auto transfer_space = [&](const LatticeSpace& s) {
        if (s.norm.kind == NormKind::Lp && s.norm.p == 1.0) return make_lp_space(s.dim, q);
        if (s.norm.kind == NormKind::WeightedLp && s.norm.p == 1.0)
            return make_weighted_lp_space(q, s.norm.weights);
        throw IncompatibleError("root_transfer: spaces must be L1-type");
    };
    LatticeOperator r{transfer_space(s_prime.domain), transfer_space(s_prime.codomain),
                      s_prime.matrix};
    for (auto& e : r.matrix) e = std::pow(e, 1.0 / q);
    return r;
}

ApproxResult approximate_lq_target(const LatticeOperator& t, double q,
                                   std::optional<double> eps, std::uint64_t seed) {
    if (!(q > 1.0)) throw IncompatibleError("approximate_lq_target: q must be > 1");
    const bool cod_ok = (t.codomain.norm.kind == NormKind::Lp && t.codomain.norm.p == q) ||
                        (t.codomain.norm.kind == NormKind::WeightedLp && t.codomain.norm.p == q);
    if (!cod_ok)
        throw IncompatibleError("approximate_lq_target: codomain exponent must equal q");
    if (!t.positive()) throw IncompatibleError("approximate_lq_target: operator must be positive");

    const LatticeOperator t_prime = power_transfer(t, q);
    std::optional<double> eps_prime;
    if (eps) eps_prime = std::pow(*eps, q);
    const ApproxResult l1 = approximate_l1_target(t_prime, eps_prime, seed);

    // transferring the support pattern back keeps S a bit-exact restriction of T
    LatticeOperator s = t;
    for (std::size_t k = 0; k < s.matrix.size(); ++k)
        if (l1.s.matrix[k] == 0.0) s.matrix[k] = 0.0;

    ApproxResult res;
    res.method = "power_pipeline";
    res.dominated = dominated_by(s, t);
    const NormEstimate ne = operator_norm(operator_sub(t, s), 24, seed);
    res.distance = ne.lower;
    res.distance_exact = false;
    res.s = std::move(s);
    res.eps_used = eps;
    if (eps) {
        const double norm_t = operator_norm_value(t, 24, seed);
        res.bound = 256.0 * *eps + 2.0 * std::sqrt(2.0 * *eps * norm_t / 3.0);
    } else {
        res.bound = res.distance;
    }
    return res;
}

}  // namespace latdp
