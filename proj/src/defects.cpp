#include "latdp/defects.hpp"

#include <algorithm>
#include <cmath>

#include "latdp/rng.hpp"

namespace latdp {

std::string defect_kind_name(DefectKind k) {
    switch (k) {
        case DefectKind::DP: return "dp";
        case DefectKind::MP: return "mp";
        case DefectKind::LH: return "lh";
        case DefectKind::SDP: return "sdp";
    }
    return "?";
}

nlohmann::json DefectEstimate::to_json() const {
    nlohmann::json j;
    j["kind"] = defect_kind_name(kind);
    j["lower_bound"] = lower_bound;
    if (witness) {
        j["witness"] = {{"x", witness->x}, {"y", witness->y}};
    } else {
        j["witness"] = nullptr;
    }
    if (!family.empty()) {
        nlohmann::json fam = nlohmann::json::array();
        for (const auto& v : family) fam.push_back(v);
        j["family"] = fam;
    }
    j["analytic_upper"] = analytic_upper ? nlohmann::json(*analytic_upper) : nlohmann::json(nullptr);
    j["provenance"] = provenance;
    return j;
}

double pairwise_dp_value(const LatticeOperator& t, const Vec& x, const Vec& y) {
    if (x.size() != t.cols() || y.size() != t.cols())
        throw DimensionError("pairwise_dp_value: dimension mismatch");
    if (!is_disjoint(x, y)) throw InvalidInput("pairwise_dp_value: inputs not disjoint");
    const double nx = norm(t.domain, x);
    const double ny = norm(t.domain, y);
    if (nx == 0.0 || ny == 0.0) throw InvalidInput("pairwise_dp_value: zero input");
    const Vec m = meet(abs_of(t.apply(x)), abs_of(t.apply(y)));
    return norm(t.codomain, m) / std::max(nx, ny);
}

namespace {

std::uint64_t full_mask(std::size_t n) {
    return n >= 64 ? ~0ull : ((1ull << n) - 1);
}

Vec indicator_unit(const LatticeSpace& dom, std::uint64_t mask) {
    Vec u(dom.dim, 0.0);
    for (std::size_t i = 0; i < dom.dim; ++i)
        if (mask >> i & 1) u[i] = 1.0;
    const double nu = norm(dom, u);
    for (auto& e : u) e /= nu;
    return u;
}

double split_indicator_value(const LatticeOperator& t, std::uint64_t mask_a,
                             std::uint64_t mask_b) {
    const Vec ua = indicator_unit(t.domain, mask_a);
    const Vec ub = indicator_unit(t.domain, mask_b);
    const Vec m = meet(abs_of(t.apply(ua)), abs_of(t.apply(ub)));
    return norm(t.codomain, m);
}

// Coordinate ascent over nonnegative coefficients on a fixed support split.
// Both sides are kept normalized through the objective, so the value is a
// genuine pairwise_dp_value at every step.
class SplitAscent {
public:
    SplitAscent(const LatticeOperator& t, std::uint64_t mask_a, std::uint64_t mask_b)
        : t_(t) {
        for (std::size_t i = 0; i < t.cols(); ++i) {
            if (mask_a >> i & 1) side_a_.push_back(i);
            else if (mask_b >> i & 1) side_b_.push_back(i);
        }
    }

    // returns best value; fills witness pair on improvement
    double run(const Vec& start_a, const Vec& start_b, Vec& wx, Vec& wy) {
        a_ = start_a;
        b_ = start_b;
        refresh();
        double best = value();
        bool improved = true;
        for (int sweep = 0; sweep < 200 && improved; ++sweep) {
            improved = false;
            improved |= sweep_side(side_a_, a_, ta_, best);
            improved |= sweep_side(side_b_, b_, tb_, best);
            refresh();  // guard against incremental drift
            const double v = value();
            if (v > best) best = v;
        }
        wx = embed(side_a_, a_);
        wy = embed(side_b_, b_);
        const double nx = norm(t_.domain, wx), ny = norm(t_.domain, wy);
        if (nx > 0.0)
            for (auto& e : wx) e /= nx;
        if (ny > 0.0)
            for (auto& e : wy) e /= ny;
        return best;
    }

    std::size_t dim_a() const { return side_a_.size(); }
    std::size_t dim_b() const { return side_b_.size(); }

private:
    Vec embed(const std::vector<std::size_t>& side, const Vec& coef) const {
        Vec x(t_.cols(), 0.0);
        for (std::size_t k = 0; k < side.size(); ++k) x[side[k]] = coef[k];
        return x;
    }

    void refresh() {
        ta_ = t_.apply(embed(side_a_, a_));
        tb_ = t_.apply(embed(side_b_, b_));
        na_ = norm(t_.domain, embed(side_a_, a_));
        nb_ = norm(t_.domain, embed(side_b_, b_));
    }

    double value() const {
        if (na_ == 0.0 || nb_ == 0.0) return 0.0;
        Vec m(t_.rows());
        for (std::size_t r = 0; r < t_.rows(); ++r)
            m[r] = std::min(std::fabs(ta_[r]) / na_, std::fabs(tb_[r]) / nb_);
        return norm(t_.codomain, m);
    }

    bool sweep_side(const std::vector<std::size_t>& side, Vec& coef, Vec& tc, double& best) {
        static const double factors[] = {0.0, 0.25, 0.5, 0.8, 1.25, 2.0, 4.0};
        bool improved = false;
        for (std::size_t k = 0; k < side.size(); ++k) {
            const std::size_t col = side[k];
            const double saved = coef[k];
            double best_c = saved;
            auto try_value = [&](double c) {
                const double d = c - coef[k];
                if (d != 0.0)
                    for (std::size_t r = 0; r < t_.rows(); ++r) tc[r] += d * t_.at(r, col);
                coef[k] = c;
                if (&coef == &a_) na_ = norm(t_.domain, embed(side_a_, a_));
                else nb_ = norm(t_.domain, embed(side_b_, b_));
                const double v = value();
                if (v > best + 1e-9 * std::max(1.0, best)) {
                    best = v;
                    best_c = c;
                    improved = true;
                }
            };
            if (saved == 0.0) {
                double mean = 0.0;
                int cnt = 0;
                for (double e : coef)
                    if (e > 0.0) { mean += e; ++cnt; }
                try_value(cnt ? mean / cnt : 1.0);
            } else {
                for (double f : factors) try_value(saved * f);
            }
            try_value(best_c);  // settle on the winner
        }
        return improved;
    }

    const LatticeOperator& t_;
    std::vector<std::size_t> side_a_, side_b_;
    Vec a_, b_;
    Vec ta_, tb_;
    double na_ = 0.0, nb_ = 0.0;
};

struct SplitScore {
    std::uint64_t mask_a;
    std::uint64_t mask_b;
    double indicator_value;
};

// covering splits (A, A^c); exhaustive fixes index 0 into A to visit each
// unordered pair once
std::vector<SplitScore> candidate_splits(const LatticeOperator& t, std::uint64_t seed,
                                         int exhaustive_limit) {
    const std::size_t n = t.cols();
    const std::uint64_t full = full_mask(n);
    std::vector<SplitScore> cands;
    if (n <= static_cast<std::size_t>(exhaustive_limit) && n >= 2 && n <= 24) {
        // subsets containing index 0 visit each unordered covering split once
        for (std::uint64_t a = 0; a < (1ull << (n - 1)); ++a) {
            const std::uint64_t mask_a = (a << 1) | 1ull;
            if (mask_a == full) continue;
            cands.push_back({mask_a, full & ~mask_a, 0.0});
        }
    } else {
        Rng rng(seed ^ 0x51ed270b8a482dfbull);
        for (int s = 0; s < 2048; ++s) {
            std::uint64_t m = rng.next_u64() & full;
            if (m == 0 || m == full) continue;
            if (!(m & 1ull)) m = full & ~m;
            cands.push_back({m, full & ~m, 0.0});
        }
        for (std::size_t i = 0; i < n; ++i)
            cands.push_back({1ull << i, full & ~(1ull << i), 0.0});
    }
    // atom pairs: frequently the extremal witnesses
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            cands.push_back({1ull << i, 1ull << j, 0.0});
    // dedupe on the (ordered) mask pair
    std::sort(cands.begin(), cands.end(), [](const SplitScore& x, const SplitScore& y) {
        return std::tie(x.mask_a, x.mask_b) < std::tie(y.mask_a, y.mask_b);
    });
    cands.erase(std::unique(cands.begin(), cands.end(),
                            [](const SplitScore& x, const SplitScore& y) {
                                return x.mask_a == y.mask_a && x.mask_b == y.mask_b;
                            }),
                cands.end());
    for (auto& c : cands) c.indicator_value = split_indicator_value(t, c.mask_a, c.mask_b);
    return cands;
}

}  // namespace

DefectEstimate indicator_split_defect(const LatticeOperator& t, int exhaustive_limit,
                                      std::uint64_t seed) {
    const bool pos = t.positive();
    const LatticeOperator mod_store = pos ? LatticeOperator{} : modulus(t);
    const LatticeOperator& target = pos ? t : mod_store;

    const std::size_t n = target.cols();
    const std::uint64_t full = full_mask(n);
    DefectEstimate est;
    est.kind = DefectKind::DP;
    est.provenance = pos ? "" : "measured on modulus(T); ";

    if (n < 2) {
        est.provenance += "trivial (single atom)";
        return est;
    }

    auto eval_mask = [&](std::uint64_t mask_a) {
        return split_indicator_value(target, mask_a, full & ~mask_a);
    };

    double best = -1.0;
    std::uint64_t best_mask = 1;
    if (n <= static_cast<std::size_t>(exhaustive_limit) && n <= 24) {
        for (std::uint64_t a = 0; a < (1ull << (n - 1)); ++a) {
            const std::uint64_t mask_a = (a << 1) | 1ull;
            if (mask_a == full) continue;
            const double v = eval_mask(mask_a);
            if (v > best) { best = v; best_mask = mask_a; }
        }
        est.provenance += "exhaustive indicator splits";
    } else {
        Rng rng(seed ^ 0x7f4a7c15ull);
        auto consider = [&](std::uint64_t m) {
            if (m == 0 || m == full) return;
            const double v = eval_mask(m);
            if (v > best) { best = v; best_mask = m; }
        };
        for (std::size_t i = 0; i < n; ++i) consider(1ull << i);
        for (int s = 0; s < 4096; ++s) consider(rng.next_u64() & full);
        // greedy one-flip local search from the best mask found
        bool improved = true;
        while (improved) {
            improved = false;
            for (std::size_t i = 0; i < n; ++i) {
                const std::uint64_t m = best_mask ^ (1ull << i);
                if (m == 0 || m == full) continue;
                const double v = eval_mask(m);
                if (v > best + 1e-15) {
                    best = v;
                    best_mask = m;
                    improved = true;
                }
            }
        }
        est.provenance += "sampled indicator splits + local search";
    }

    est.lower_bound = std::max(best, 0.0);
    DefectCertificate cert;
    cert.x = indicator_unit(target.domain, best_mask);
    cert.y = indicator_unit(target.domain, full & ~best_mask);
    cert.value = est.lower_bound;
    est.witness = cert;
    return est;
}

DefectEstimate dp_defect_search(const LatticeOperator& t, std::uint64_t seed, int restarts) {
    DefectEstimate est;
    est.kind = DefectKind::DP;
    const std::size_t n = t.cols();
    if (n < 2) {
        est.provenance = "trivial (single atom)";
        return est;
    }

    auto cands = candidate_splits(t, seed, 15);
    // refine only the most promising splits; the uniform start of the ascent
    // reproduces each split's indicator value, so the result dominates the
    // indicator bound
    std::vector<std::size_t> order(cands.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return cands[i].indicator_value > cands[j].indicator_value;
    });
    const std::size_t refine = std::min<std::size_t>(order.size(), 24);

    double best = 0.0;
    Vec bx, by;
    for (const auto& c : cands) {
        if (c.indicator_value > best) {
            best = c.indicator_value;
            bx = indicator_unit(t.domain, c.mask_a);
            by = indicator_unit(t.domain, c.mask_b);
        }
    }

    Rng rng(seed ^ 0x94d049bb133111ebull);
    for (std::size_t k = 0; k < refine; ++k) {
        const auto& c = cands[order[k]];
        SplitAscent ascent(t, c.mask_a, c.mask_b);
        for (int r = 0; r < restarts; ++r) {
            Vec sa(ascent.dim_a()), sb(ascent.dim_b());
            if (r == 0) {
                std::fill(sa.begin(), sa.end(), 1.0);
                std::fill(sb.begin(), sb.end(), 1.0);
            } else {
                for (auto& e : sa) e = rng.uniform(0.05, 1.0);
                for (auto& e : sb) e = rng.uniform(0.05, 1.0);
            }
            Vec wx, wy;
            const double v = ascent.run(sa, sb, wx, wy);
            if (v > best) {
                best = v;
                bx = wx;
                by = wy;
            }
        }
    }

    est.lower_bound = best;
    if (!bx.empty()) est.witness = DefectCertificate{bx, by, best};
    est.provenance = (n <= 15) ? "exhaustive splits + coordinate ascent"
                               : "sampled splits + coordinate ascent";
    return est;
}

double mp_defect(const LatticeOperator& t, const Vec& x, const Vec& y) {
    if (!t.positive()) throw InvalidInput("mp_defect: operator must be positive");
    if (!is_nonnegative(x) || !is_nonnegative(y))
        throw InvalidInput("mp_defect: inputs must be >= 0");
    if (norm(t.domain, x) > 1.0 + 1e-12 || norm(t.domain, y) > 1.0 + 1e-12)
        throw InvalidInput("mp_defect: inputs must lie in the unit ball");
    const Vec lhs = meet(t.apply(x), t.apply(y));
    const Vec rhs = t.apply(meet(x, y));
    return norm(t.codomain, sub(lhs, rhs));
}

DefectEstimate mp_defect_search(const LatticeOperator& t, std::uint64_t seed, int restarts) {
    if (!t.positive()) throw InvalidInput("mp_defect_search: operator must be positive");
    DefectEstimate est;
    est.kind = DefectKind::MP;

    // disjoint pairs are minimum-preserving pairs with the same value
    DefectEstimate dp = dp_defect_search(t, seed, restarts);
    est.lower_bound = dp.lower_bound;
    est.witness = dp.witness;

    Rng rng(seed ^ 0xbf58476d1ce4e5b9ull);
    const std::size_t n = t.cols();
    const int samples = std::max(64, restarts * 16);
    for (int s = 0; s < samples; ++s) {
        Vec x(n), y(n);
        for (auto& e : x) e = rng.uniform(0.0, 1.0);
        for (auto& e : y) e = rng.uniform(0.0, 1.0);
        const double nx = norm(t.domain, x), ny = norm(t.domain, y);
        if (nx == 0.0 || ny == 0.0) continue;
        for (auto& e : x) e /= nx;
        for (auto& e : y) e /= ny;
        const double v = mp_defect(t, x, y);
        if (v > est.lower_bound) {
            est.lower_bound = v;
            est.witness = DefectCertificate{x, y, v};
        }
    }
    est.provenance = "split search + sampled positive pairs";
    return est;
}

double lh_defect(const LatticeOperator& t, const Vec& x) {
    const double nx = norm(t.domain, x);
    if (nx == 0.0) throw InvalidInput("lh_defect: zero vector");
    const Vec lhs = abs_of(t.apply(abs_of(x)));
    const Vec rhs = abs_of(t.apply(x));
    return norm(t.codomain, sub(lhs, rhs)) / nx;
}

DefectEstimate lh_defect_search(const LatticeOperator& t, std::uint64_t seed, int restarts) {
    DefectEstimate est;
    est.kind = DefectKind::LH;

    auto consider = [&](const Vec& x) {
        if (norm(t.domain, x) == 0.0) return;
        const double v = lh_defect(t, x);
        if (v > est.lower_bound) {
            est.lower_bound = v;
            est.witness = DefectCertificate{x, {}, v};
        }
    };

    // the signed difference of a disjoint-pair witness is the canonical
    // high-defect probe
    DefectEstimate dp = dp_defect_search(t, seed, restarts);
    if (dp.witness) consider(sub(dp.witness->x, dp.witness->y));

    Rng rng(seed ^ 0x2545f4914f6cdd1dull);
    const std::size_t n = t.cols();
    const int samples = std::max(64, restarts * 16);
    for (int s = 0; s < samples; ++s) {
        Vec x(n);
        for (auto& e : x) e = rng.uniform(-1.0, 1.0);
        consider(x);
    }
    est.provenance = "dp-witness difference + sampled signed vectors";
    return est;
}

double sdp_defect(const LatticeOperator& t, const std::vector<Vec>& family) {
    if (family.empty()) throw InvalidInput("sdp_defect: empty family");
    for (std::size_t i = 0; i < family.size(); ++i) {
        if (norm(t.domain, family[i]) > 1.0 + 1e-12)
            throw InvalidInput("sdp_defect: family member outside the unit ball");
        for (std::size_t j = i + 1; j < family.size(); ++j)
            if (!is_disjoint(family[i], family[j]))
                throw InvalidInput("sdp_defect: family not mutually disjoint");
    }
    std::vector<Vec> images;
    images.reserve(family.size());
    for (const auto& x : family) images.push_back(abs_of(t.apply(x)));
    return norm(t.codomain, sub(sum_all(images), join_all(images)));
}

namespace {

// DFS over set partitions with incremental block column sums; each block of
// atoms becomes a normalized indicator family member.
struct PartitionSearch {
    const LatticeOperator& t;
    std::size_t n, m;
    std::vector<Vec> block_sum;       // summed columns per open block
    std::vector<double> block_mass;   // domain mass used for normalization
    std::vector<std::vector<int>> block_members;
    double best = -1.0;
    std::vector<std::vector<int>> best_blocks;

    explicit PartitionSearch(const LatticeOperator& op) : t(op), n(op.cols()), m(op.rows()) {}

    double block_norm_factor(std::size_t b) const {
        const auto& dn = t.domain.norm;
        if (t.domain.norm.kind == NormKind::Sup || std::isinf(dn.p)) return 1.0;
        return std::pow(block_mass[b], 1.0 / dn.p);
    }

    double leaf_value() const {
        Vec total(m, 0.0), peak(m, 0.0);
        for (std::size_t b = 0; b < block_sum.size(); ++b) {
            const double f = block_norm_factor(b);
            for (std::size_t r = 0; r < m; ++r) {
                const double v = std::fabs(block_sum[b][r]) / f;
                total[r] += v;
                peak[r] = std::max(peak[r], v);
            }
        }
        return norm(t.codomain, sub(total, peak));
    }

    void add_to_block(std::size_t b, std::size_t atom) {
        for (std::size_t r = 0; r < m; ++r) block_sum[b][r] += t.at(r, atom);
        block_mass[b] += atom_mass(atom);
        block_members[b].push_back(static_cast<int>(atom));
    }

    void remove_from_block(std::size_t b, std::size_t atom) {
        for (std::size_t r = 0; r < m; ++r) block_sum[b][r] -= t.at(r, atom);
        block_mass[b] -= atom_mass(atom);
        block_members[b].pop_back();
    }

    double atom_mass(std::size_t i) const {
        const auto& dn = t.domain.norm;
        if (dn.kind == NormKind::WeightedLp) return dn.weights[i];
        return 1.0;
    }

    void dfs(std::size_t atom) {
        if (atom == n) {
            const double v = leaf_value();
            if (v > best) {
                best = v;
                best_blocks = block_members;
            }
            return;
        }
        for (std::size_t b = 0; b < block_sum.size(); ++b) {
            add_to_block(b, atom);
            dfs(atom + 1);
            remove_from_block(b, atom);
        }
        block_sum.emplace_back(m, 0.0);
        block_mass.push_back(0.0);
        block_members.emplace_back();
        add_to_block(block_sum.size() - 1, atom);
        dfs(atom + 1);
        remove_from_block(block_sum.size() - 1, atom);
        block_sum.pop_back();
        block_mass.pop_back();
        block_members.pop_back();
    }
};

}  // namespace

DefectEstimate sdp_atom_defect(const LatticeOperator& t, std::size_t partition_limit) {
    DefectEstimate est;
    est.kind = DefectKind::SDP;
    const std::size_t n = t.cols();

    auto family_from_blocks = [&](const std::vector<std::vector<int>>& blocks) {
        std::vector<Vec> fam;
        for (const auto& blk : blocks) {
            Vec x(n, 0.0);
            for (int i : blk) x[static_cast<std::size_t>(i)] = 1.0;
            const double nx = norm(t.domain, x);
            for (auto& e : x) e /= nx;
            fam.push_back(std::move(x));
        }
        return fam;
    };

    // canonical atom family
    std::vector<std::vector<int>> atoms(n);
    for (std::size_t i = 0; i < n; ++i) atoms[i] = {static_cast<int>(i)};
    std::vector<Vec> canonical = family_from_blocks(atoms);
    est.lower_bound = sdp_defect(t, canonical);
    est.family = canonical;
    est.provenance = "canonical atoms";

    if (n >= 2 && n <= partition_limit) {
        PartitionSearch search(t);
        search.dfs(0);
        if (search.best > est.lower_bound) {
            est.lower_bound = search.best;
            est.family = family_from_blocks(search.best_blocks);
            est.provenance = "exhaustive atom coarsenings";
        } else {
            est.provenance = "canonical atoms (coarsenings enumerated)";
        }
    }
    return est;
}

nlohmann::json AlmostDisjointReport::to_json() const {
    return nlohmann::json{{"lhs", lhs},
                          {"rhs", rhs},
                          {"norm_t_used", norm_t_used},
                          {"norm_t_certified", norm_t_certified},
                          {"holds", holds}};
}

AlmostDisjointReport almost_disjoint_check(const LatticeOperator& t, const Vec& x,
                                           const Vec& y, double eps,
                                           std::optional<double> norm_t) {
    AlmostDisjointReport rep;
    rep.lhs = norm(t.codomain, meet(abs_of(t.apply(x)), abs_of(t.apply(y))));
    if (norm_t) {
        rep.norm_t_used = *norm_t;
        rep.norm_t_certified = true;
    } else {
        const NormEstimate ne = operator_norm(t);
        rep.norm_t_used = ne.upper ? *ne.upper : ne.lower;
        rep.norm_t_certified = ne.upper.has_value();
    }
    const double mx = std::max(norm(t.domain, x), norm(t.domain, y));
    const double overlap = norm(t.domain, meet(abs_of(x), abs_of(y)));
    rep.rhs = 4.0 * (eps * mx + rep.norm_t_used * overlap);
    rep.holds = rep.lhs <= rep.rhs + 1e-12;
    return rep;
}

}  // namespace latdp
