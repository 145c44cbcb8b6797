#include "latdp/instances.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "latdp/parallel.hpp"
#include "latdp/rng.hpp"

namespace latdp {

nlohmann::json GraphInstance::meta() const {
    return nlohmann::json{
        {"kind", "graph"}, {"N", n_vertices_minus_one}, {"p", p}, {"q", q}};
}

GraphInstance graph_operator(int n, double p, double q) {
    if (n < 2) throw InvalidInput("graph_operator: N must be >= 2");
    if (!(1.0 <= p && p < q && std::isfinite(q)))
        throw InvalidInput("graph_operator: need 1 <= p < q < inf");

    GraphInstance inst;
    inst.n_vertices_minus_one = n;
    inst.p = p;
    inst.q = q;
    const std::size_t vertices = static_cast<std::size_t>(n) + 1;
    inst.edge_count = static_cast<std::size_t>(n) * vertices / 2;

    // edges of the complete graph in lexicographic vertex order
    inst.incidence.assign(vertices, {});
    std::size_t edge = 0;
    for (std::size_t a = 0; a < vertices; ++a)
        for (std::size_t b = a + 1; b < vertices; ++b) {
            inst.incidence[a].push_back(edge);
            inst.incidence[b].push_back(edge);
            ++edge;
        }

    const double entry = std::pow(static_cast<double>(n), -1.0 / q);
    std::vector<double> data(inst.edge_count * vertices, 0.0);
    for (std::size_t i = 0; i < vertices; ++i)
        for (std::size_t s : inst.incidence[i]) data[s * vertices + i] = entry;
    inst.op = make_operator(make_lp_space(vertices, p), make_lp_space(inst.edge_count, q),
                            std::move(data));
    return inst;
}

double graph_analytic_eps(int n, double p, double q) {
    const double nd = static_cast<double>(n);
    if (q >= 2.0 * p) return std::pow(nd, -1.0 / q);
    return std::pow(std::pow(nd + 1.0, 2.0 - q / p) / nd, 1.0 / q);
}

nlohmann::json GraphVerifyReport::to_json() const {
    return nlohmann::json{{"norm_upper", norm_upper},
                          {"norm_bound", norm_bound},
                          {"defect_lower", defect_lower},
                          {"eps_analytic", eps_analytic},
                          {"dp_distance_lower", dp_distance_lower},
                          {"dp_distance_certified", dp_distance_certified},
                          {"dp_distance_target", dp_distance_target},
                          {"holds", holds}};
}

GraphVerifyReport graph_verify(const GraphInstance& inst, std::uint64_t seed,
                               std::uint64_t enumeration_cap) {
    GraphVerifyReport rep;
    const double q = inst.q;

    // interpolation applies to the operator viewed Lq -> Lq; the formal
    // identity Lp -> Lq is contractive for p <= q
    LatticeOperator as_lq = inst.op;
    as_lq.domain = make_lp_space(inst.op.domain.dim, q);
    const NormEstimate ne = operator_norm(as_lq, 8, seed);
    rep.norm_upper = ne.upper.value_or(ne.lower);
    rep.norm_bound = std::pow(2.0, 1.0 - 1.0 / q);

    rep.eps_analytic = graph_analytic_eps(inst.n_vertices_minus_one, inst.p, inst.q);
    rep.defect_lower = dp_defect_search(inst.op, seed).lower_bound;

    const ColumnDistanceBound dist = dp_distance_column_lower_bound(inst.op, enumeration_cap);
    rep.dp_distance_lower = dist.value;
    rep.dp_distance_certified = dist.certified;
    rep.dp_distance_target = std::pow(2.0, -1.0 / q);

    rep.holds = rep.norm_upper <= rep.norm_bound + 1e-9 &&
                rep.defect_lower <= rep.eps_analytic + 1e-6 &&
                (!rep.dp_distance_certified ||
                 rep.dp_distance_lower >= rep.dp_distance_target - 1e-9);
    return rep;
}

namespace {

// residual mass of column i off its owned set, expressed in the power domain
// of the codomain norm so single-coordinate updates stay O(1)
struct ResidualTracker {
    const LatticeOperator& t;
    double q;                 // codomain exponent (finite)
    std::vector<double> contrib;  // per (coordinate, column) mass
    Vec column_total;

    explicit ResidualTracker(const LatticeOperator& op) : t(op) {
        q = op.codomain.norm.kind == NormKind::Sup ? 1.0 : op.codomain.norm.p;
        const std::size_t m = op.rows(), n = op.cols();
        contrib.assign(m * n, 0.0);
        column_total.assign(n, 0.0);
        for (std::size_t r = 0; r < m; ++r) {
            const double w = op.codomain.norm.kind == NormKind::WeightedLp
                                 ? op.codomain.norm.weights[r]
                                 : 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double c = w * std::pow(std::fabs(op.at(r, i)), q);
                contrib[r * n + i] = c;
                column_total[i] += c;
            }
        }
    }

    double beta_from_residual(double residual) const {
        return std::pow(std::max(residual, 0.0), 1.0 / q);
    }
};

}  // namespace

ColumnDistanceBound dp_distance_column_lower_bound(const LatticeOperator& t,
                                                   std::uint64_t enumeration_cap) {
    const std::size_t m = t.rows(), n = t.cols();
    ColumnDistanceBound out;

    if (is_sup_kind(t.codomain)) {
        // max-residual updates are not reversible for the sup norm; fall back
        // to a greedy argmax assignment with one-move local search
        SupportAssignment a;
        a.owner.assign(m, 0);
        for (std::size_t r = 0; r < m; ++r) {
            double best = -1.0;
            for (std::size_t i = 0; i < n; ++i)
                if (std::fabs(t.at(r, i)) > best) {
                    best = std::fabs(t.at(r, i));
                    a.owner[r] = static_cast<int>(i);
                }
        }
        auto value_of = [&](const SupportAssignment& asg) {
            double worst = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                double res = 0.0;
                for (std::size_t r = 0; r < m; ++r)
                    if (asg.owner[r] != static_cast<int>(i))
                        res = std::max(res, std::fabs(t.at(r, i)));
                worst = std::max(worst, res);
            }
            return worst;
        };
        double v = value_of(a);
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::size_t r = 0; r < m; ++r)
                for (std::size_t i = 0; i < n; ++i) {
                    const int saved = a.owner[r];
                    if (saved == static_cast<int>(i)) continue;
                    a.owner[r] = static_cast<int>(i);
                    const double w = value_of(a);
                    if (w < v - 1e-15) {
                        v = w;
                        improved = true;
                    } else {
                        a.owner[r] = saved;
                    }
                }
        }
        out.value = v;
        out.certified = false;
        out.assignment = a;
        return out;
    }

    // dropping a coordinate never lowers the max residual, so owners range
    // over the n columns only
    long double total_ld = 1.0L;
    for (std::size_t i = 0; i < m; ++i) total_ld *= n;
    const bool exhaustive = total_ld <= static_cast<long double>(enumeration_cap);
    const ResidualTracker tracker(t);

    if (!exhaustive) {
        SupportAssignment a;
        a.owner.assign(m, 0);
        for (std::size_t r = 0; r < m; ++r) {
            double best = -1.0;
            for (std::size_t i = 0; i < n; ++i)
                if (tracker.contrib[r * n + i] > best) {
                    best = tracker.contrib[r * n + i];
                    a.owner[r] = static_cast<int>(i);
                }
        }
        Vec residual = tracker.column_total;
        for (std::size_t r = 0; r < m; ++r)
            residual[static_cast<std::size_t>(a.owner[r])] -= tracker.contrib[r * n + a.owner[r]];
        auto worst = [&]() {
            double w = 0.0;
            for (double e : residual) w = std::max(w, e);
            return w;
        };
        double v = worst();
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::size_t r = 0; r < m; ++r)
                for (std::size_t i = 0; i < n; ++i) {
                    const int saved = a.owner[r];
                    if (saved == static_cast<int>(i)) continue;
                    residual[static_cast<std::size_t>(saved)] += tracker.contrib[r * n + saved];
                    residual[i] -= tracker.contrib[r * n + i];
                    a.owner[r] = static_cast<int>(i);
                    const double w = worst();
                    if (w < v - 1e-15) {
                        v = w;
                        improved = true;
                    } else {
                        residual[i] += tracker.contrib[r * n + i];
                        residual[static_cast<std::size_t>(saved)] -= tracker.contrib[r * n + saved];
                        a.owner[r] = saved;
                    }
                }
        }
        out.value = tracker.beta_from_residual(v);
        out.certified = false;
        out.assignment = a;
        return out;
    }

    const std::uint64_t total = static_cast<std::uint64_t>(total_ld);
    struct ChunkResult {
        double value = std::numeric_limits<double>::infinity();
        std::vector<int> owner;
    };

    auto scan = [&](std::uint64_t lo, std::uint64_t hi, ChunkResult& res) {
        std::vector<int> digits(m, 0);
        {
            std::uint64_t v = lo;
            for (std::size_t pos = m; pos-- > 0;) {
                digits[pos] = static_cast<int>(v % n);
                v /= n;
            }
        }
        Vec residual = tracker.column_total;
        for (std::size_t r = 0; r < m; ++r)
            residual[static_cast<std::size_t>(digits[r])] -= tracker.contrib[r * n + digits[r]];

        for (std::uint64_t k = lo; k < hi; ++k) {
            double w = 0.0;
            for (double e : residual) w = std::max(w, e);
            if (w < res.value - 1e-18 || res.owner.empty()) {
                res.value = w;
                res.owner = digits;
            }
            if (k + 1 == hi) break;
            std::size_t pos = m;
            while (pos-- > 0) {
                const int d = digits[pos];
                residual[static_cast<std::size_t>(d)] += tracker.contrib[pos * n + d];
                if (static_cast<std::size_t>(d) + 1 < n) {
                    digits[pos] = d + 1;
                    residual[static_cast<std::size_t>(d + 1)] -= tracker.contrib[pos * n + d + 1];
                    break;
                }
                digits[pos] = 0;
                residual[0] -= tracker.contrib[pos * n + 0];
            }
        }
    };

    const unsigned workers = static_cast<unsigned>(
        std::min<std::uint64_t>(worker_count(), std::max<std::uint64_t>(total / 4096, 1)));
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

    ChunkResult best;
    for (const auto& r : results)
        if (!r.owner.empty() && (best.owner.empty() || r.value < best.value - 1e-18)) best = r;

    out.value = tracker.beta_from_residual(best.value);
    out.certified = true;
    out.assignment.owner = best.owner;
    return out;
}

nlohmann::json WalshInstance::meta() const {
    return nlohmann::json{{"kind", "walsh"}, {"k_min", k_min}, {"k_max", k_max}};
}

std::vector<double> sylvester_orthonormal(int k) {
    if (k < 0 || k > 12) throw InvalidInput("sylvester_orthonormal: level out of range");
    std::size_t dim = 1;
    std::vector<double> h{1.0};
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int level = 0; level < k; ++level) {
        const std::size_t nd = dim * 2;
        std::vector<double> next(nd * nd);
        for (std::size_t r = 0; r < dim; ++r)
            for (std::size_t c = 0; c < dim; ++c) {
                const double v = h[r * dim + c] * inv_sqrt2;
                next[r * nd + c] = v;
                next[r * nd + dim + c] = v;
                next[(dim + r) * nd + c] = v;
                next[(dim + r) * nd + dim + c] = -v;
            }
        h = std::move(next);
        dim = nd;
    }
    return h;
}

WalshInstance walsh_operator(int k_min, int k_max) {
    if (!(1 <= k_min && k_min <= k_max && k_max <= 10))
        throw InvalidInput("walsh_operator: need 1 <= k_min <= k_max <= 10");
    WalshInstance inst;
    inst.k_min = k_min;
    inst.k_max = k_max;
    for (int k = k_min; k <= k_max; ++k) {
        const std::size_t dim = 1ull << k;
        const double scale = std::pow(2.0, -k / 2.0);
        std::vector<double> data = sylvester_orthonormal(k);
        for (auto& e : data) e *= scale;
        for (std::size_t i = 0; i < dim; ++i) data[i * dim + i] += 1.0;
        inst.blocks.push_back(
            make_operator(make_lp_space(dim, 2.0), make_lp_space(dim, 2.0), std::move(data)));
    }
    inst.op = direct_sum(inst.blocks, 2.0);
    return inst;
}

nlohmann::json WalshVerifyReport::to_json() const {
    return nlohmann::json{{"perturbation_norm", perturbation_norm},
                          {"perturbation_target", perturbation_target},
                          {"worst_witness_gap", worst_witness_gap},
                          {"worst_block_defect_ratio", worst_block_defect_ratio},
                          {"modulus_distance_lower", modulus_distance_lower},
                          {"modulus_distance_target", modulus_distance_target},
                          {"candidate_distance_min", candidate_distance_min},
                          {"holds", holds}};
}

WalshVerifyReport walsh_verify(const WalshInstance& inst, double eps_target,
                               std::uint64_t seed) {
    WalshVerifyReport rep;
    rep.perturbation_target = std::pow(2.0, -inst.k_min / 2.0);
    rep.modulus_distance_target = 1.0 / (3.0 * std::sqrt(2.0));

    Rng rng(seed ^ 0xa0761d6478bd642full);
    double pert = 0.0;
    double worst_gap = 0.0;
    double worst_ratio = 0.0;

    for (std::size_t b = 0; b < inst.blocks.size(); ++b) {
        const int k = inst.k_min + static_cast<int>(b);
        const LatticeOperator& block = inst.blocks[b];
        const std::size_t dim = block.rows();

        const LatticeOperator deviation = operator_sub(block, identity_operator(block.domain));
        pert = std::max(pert, operator_norm(deviation, 8, seed).lower);

        // half/half witness pair evaluated through the entrywise modulus
        const double coef = std::pow(2.0, -(k - 1) / 2.0);
        Vec x(dim, 0.0), y(dim, 0.0);
        for (std::size_t j = 0; j < dim / 2; ++j) x[j] = coef;
        for (std::size_t j = dim / 2; j < dim; ++j) y[j] = coef;
        const LatticeOperator mod = modulus(block);
        const double meet_norm =
            norm(block.codomain, meet(abs_of(mod.apply(x)), abs_of(mod.apply(y))));
        const double gap = std::fabs(meet_norm - std::pow(2.0, -0.5)) / std::pow(2.0, 1.0 - k);
        worst_gap = std::max(worst_gap, gap);

        // sampled disjoint pairs must stay below the analytic block level
        const double level = 3.0 * std::pow(2.0, -k / 2.0);
        for (int s = 0; s < 64; ++s) {
            const std::uint64_t mask = rng.next_u64() & ((dim >= 64) ? ~0ull : ((1ull << dim) - 1));
            Vec u(dim, 0.0), v(dim, 0.0);
            bool has_u = false, has_v = false;
            for (std::size_t j = 0; j < dim; ++j) {
                const double c = rng.uniform(0.05, 1.0);
                if (mask >> (j % 64) & 1) { u[j] = c; has_u = true; }
                else { v[j] = c; has_v = true; }
            }
            if (!has_u || !has_v) continue;
            worst_ratio = std::max(worst_ratio, pairwise_dp_value(block, u, v) / level);
        }
    }
    rep.perturbation_norm = pert;
    rep.worst_witness_gap = worst_gap;
    rep.worst_block_defect_ratio = worst_ratio;

    // certified distance bound for the modulus of the smallest block
    const LatticeOperator mod0 = modulus(inst.blocks.front());
    const ColumnDistanceBound dist =
        dp_distance_column_lower_bound(mod0, mod0.rows() <= 8 ? 20'000'000ull : 10'000'000ull);
    rep.modulus_distance_lower = dist.certified ? dist.value : 0.0;

    // every DP candidate our own constructions produce must stay far away
    double cand_min = std::numeric_limits<double>::infinity();
    {
        const std::size_t dim = mod0.rows();
        std::vector<SupportAssignment> cands;
        SupportAssignment diag;
        diag.owner.resize(dim);
        for (std::size_t r = 0; r < dim; ++r) diag.owner[r] = static_cast<int>(r);
        cands.push_back(diag);
        SupportAssignment greedy;
        greedy.owner.assign(dim, 0);
        for (std::size_t r = 0; r < dim; ++r) {
            double best = -1.0;
            for (std::size_t c = 0; c < dim; ++c)
                if (mod0.at(r, c) > best) { best = mod0.at(r, c); greedy.owner[r] = static_cast<int>(c); }
        }
        cands.push_back(greedy);
        if (dist.certified) cands.push_back(dist.assignment);
        for (const auto& a : cands) {
            const LatticeOperator u = build_dp_from_assignment(mod0, a);
            cand_min = std::min(cand_min, operator_norm(operator_sub(mod0, u), 8, seed).lower);
        }
    }
    rep.candidate_distance_min = cand_min;

    rep.holds = std::fabs(rep.perturbation_norm - rep.perturbation_target) <= 1e-9 &&
                rep.perturbation_norm <= eps_target + 1e-12 &&
                rep.worst_witness_gap <= 1.0 + 1e-9 &&
                rep.worst_block_defect_ratio <= 1.0 + 1e-9 &&
                rep.modulus_distance_lower >= rep.modulus_distance_target - 1e-6 &&
                rep.candidate_distance_min >= rep.modulus_distance_target - 1e-6;
    return rep;
}

nlohmann::json PerturbedInstance::meta() const {
    return nlohmann::json{{"kind", "perturbed"}, {"eta", eta}, {"eps_analytic", eps_analytic}};
}

PerturbedInstance perturbed_dp_instance(std::size_t n, std::size_t m, double eta,
                                        std::uint64_t seed, const LatticeSpace& domain,
                                        const LatticeSpace& codomain) {
    if (eta < 0.0) throw InvalidInput("perturbed_dp_instance: eta must be >= 0");
    if (domain.dim != n || codomain.dim != m)
        throw DimensionError("perturbed_dp_instance: space dims must match n, m");
    Rng rng(seed ^ 0xe7037ed1a0b428dbull);

    // disjoint-column base: every column owns at least one coordinate when
    // m >= n, remaining coordinates are spread at random
    std::vector<int> owner(m);
    for (std::size_t r = 0; r < m; ++r)
        owner[r] = r < n ? static_cast<int>(r) : static_cast<int>(rng.uniform_int(n));
    LatticeOperator base{domain, codomain, std::vector<double>(n * m, 0.0)};
    for (std::size_t r = 0; r < m; ++r)
        base.at(r, static_cast<std::size_t>(owner[r])) = rng.uniform(0.3, 1.0);

    // scale the base to a contraction; disjoint positive columns make the
    // column-wise bound exact for p_dom <= p_cod and for sup domains
    double base_norm_ub = 0.0;
    if (is_sup_kind(domain) && base.positive()) {
        base_norm_ub = norm(codomain, base.apply(Vec(n, 1.0)));
    } else {
        for (std::size_t i = 0; i < n; ++i)
            base_norm_ub = std::max(base_norm_ub, norm(codomain, base.column(i)) / atom_norm(domain, i));
        const double pd = is_sup_kind(domain) ? std::numeric_limits<double>::infinity() : domain.norm.p;
        const double pc = is_sup_kind(codomain) ? std::numeric_limits<double>::infinity() : codomain.norm.p;
        if (!(pd <= pc)) {
            // crude certified fallback: sum of column norms
            double s = 0.0;
            for (std::size_t i = 0; i < n; ++i)
                s += norm(codomain, base.column(i)) / atom_norm(domain, i);
            base_norm_ub = s;
        }
    }
    if (base_norm_ub > 0.0)
        for (auto& e : base.matrix) e /= base_norm_ub;

    // positive perturbation scaled to a certified contraction
    LatticeOperator noise{domain, codomain, std::vector<double>(n * m)};
    for (auto& e : noise.matrix) e = rng.uniform(0.0, 1.0);
    double noise_ub = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        noise_ub += norm(codomain, noise.column(i)) / atom_norm(domain, i);
    if (noise_ub > 0.0)
        for (auto& e : noise.matrix) e /= noise_ub;

    PerturbedInstance inst;
    inst.eta = eta;
    inst.op = base;
    for (std::size_t k = 0; k < inst.op.matrix.size(); ++k)
        inst.op.matrix[k] += eta * noise.matrix[k];
    // keep ||T|| <= 1: ||base|| <= 1 and ||noise|| <= 1
    for (auto& e : inst.op.matrix) e /= (1.0 + eta);
    inst.eps_analytic = 2.0 * eta;
    return inst;
}

LatticeOperator direct_sum(const std::vector<LatticeOperator>& blocks, double outer_p) {
    if (blocks.empty()) throw InvalidInput("direct_sum: no blocks");
    const bool outer_sup = std::isinf(outer_p);

    auto check_side = [&](const LatticeSpace& s) {
        if (outer_sup) {
            if (!is_sup_kind(s)) throw IncompatibleError("direct_sum: sup outer needs sup blocks");
            return;
        }
        const bool ok = (s.norm.kind == NormKind::Lp && s.norm.p == outer_p) ||
                        (s.norm.kind == NormKind::WeightedLp && s.norm.p == outer_p);
        if (!ok) throw IncompatibleError("direct_sum: block norms must match the outer exponent");
    };

    std::size_t dom_dim = 0, cod_dim = 0;
    bool dom_weighted = false, cod_weighted = false;
    for (const auto& b : blocks) {
        check_side(b.domain);
        check_side(b.codomain);
        dom_dim += b.domain.dim;
        cod_dim += b.codomain.dim;
        dom_weighted |= b.domain.norm.kind == NormKind::WeightedLp;
        cod_weighted |= b.codomain.norm.kind == NormKind::WeightedLp;
    }

    auto make_side = [&](bool weighted, std::size_t dim, bool domain_side) {
        if (outer_sup) return make_sup_space(dim);
        if (!weighted) return make_lp_space(dim, outer_p);
        std::vector<double> w;
        w.reserve(dim);
        for (const auto& b : blocks) {
            const LatticeSpace& s = domain_side ? b.domain : b.codomain;
            if (s.norm.kind == NormKind::WeightedLp)
                w.insert(w.end(), s.norm.weights.begin(), s.norm.weights.end());
            else
                w.insert(w.end(), s.dim, 1.0);
        }
        return make_weighted_lp_space(outer_p, std::move(w));
    };

    LatticeOperator sum{make_side(dom_weighted, dom_dim, true),
                        make_side(cod_weighted, cod_dim, false),
                        std::vector<double>(dom_dim * cod_dim, 0.0)};
    std::size_t roff = 0, coff = 0;
    for (const auto& b : blocks) {
        for (std::size_t r = 0; r < b.rows(); ++r)
            for (std::size_t c = 0; c < b.cols(); ++c)
                sum.at(roff + r, coff + c) = b.at(r, c);
        roff += b.rows();
        coff += b.cols();
    }
    return sum;
}

}  // namespace latdp
