#include "latdp/inequalities.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace latdp {

double expected_min_split(const std::vector<double>& b) {
    const std::size_t n = b.size();
    if (n == 0) throw InvalidInput("expected_min_split: empty input");
    if (n > 25) throw InvalidInput("expected_min_split: length > 25 not enumerable");
    for (double e : b)
        if (e < 0.0 || !std::isfinite(e))
            throw InvalidInput("expected_min_split: entries must be nonnegative finite");

    long double total = 0.0L;
    for (double e : b) total += e;

    // Gray-code walk: subset k differs from k-1 in bit ctz(k); long double
    // running sum plus Kahan accumulation keeps the enumeration reproducible
    // well inside 1e-12
    long double side = 0.0L;  // sum over current subset
    long double acc = 0.0L, comp = 0.0L;
    const std::uint64_t count = 1ull << n;
    std::uint64_t gray_prev = 0;
    for (std::uint64_t k = 1; k < count; ++k) {
        const std::uint64_t gray = k ^ (k >> 1);
        const std::uint64_t flipped = gray ^ gray_prev;
        const int bit = std::countr_zero(flipped);
        if (gray & flipped) side += b[static_cast<std::size_t>(bit)];
        else side -= b[static_cast<std::size_t>(bit)];
        gray_prev = gray;
        const long double m = std::min(side, total - side);
        const long double y = m - comp;
        const long double s = acc + y;
        comp = (s - acc) - y;
        acc = s;
    }
    // the empty subset contributes min(0, total) = 0
    return static_cast<double>(acc / static_cast<long double>(count));
}

nlohmann::json SandwichReport::to_json() const {
    return nlohmann::json{{"lhs", lhs}, {"mid", mid}, {"rhs", rhs}, {"holds", holds}};
}

SandwichReport maxmin_sandwich_check(const std::vector<double>& b) {
    SandwichReport rep;
    rep.lhs = expected_min_split(b);
    double total = 0.0, mx = 0.0;
    for (double e : b) {
        total += e;
        mx = std::max(mx, e);
    }
    rep.mid = total - mx;
    rep.rhs = 256.0 * rep.lhs;
    rep.holds = rep.lhs <= rep.mid + 1e-12 && rep.mid <= rep.rhs + 1e-12;
    return rep;
}

nlohmann::json VectorSplitReport::to_json() const {
    return nlohmann::json{{"coordinatewise_holds", coordinatewise_holds},
                          {"norm_holds", norm_holds},
                          {"norm_lhs", norm_lhs},
                          {"norm_rhs", norm_rhs}};
}

VectorSplitReport vector_split_check(const std::vector<Vec>& fs, const LatticeSpace& space) {
    const std::size_t n = fs.size();
    if (n == 0 || n > 20) throw InvalidInput("vector_split_check: need 1 <= n <= 20");
    const std::size_t dim = fs[0].size();
    for (const auto& f : fs) {
        if (f.size() != dim) throw DimensionError("vector_split_check: ragged family");
        if (!is_nonnegative(f)) throw InvalidInput("vector_split_check: family must be >= 0");
    }
    if (dim != space.dim) throw DimensionError("vector_split_check: space dimension mismatch");

    Vec total(dim, 0.0), peak(dim, 0.0);
    for (const auto& f : fs) {
        total = add(total, f);
        peak = join(peak, f);
    }
    const Vec gap = sub(total, peak);

    const std::uint64_t count = 1ull << n;
    Vec mean_min(dim, 0.0);
    long double norm_acc = 0.0L;
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        Vec side(dim, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            if (mask >> i & 1) side = add(side, fs[i]);
        const Vec m = meet(side, sub(total, side));
        for (std::size_t d = 0; d < dim; ++d) mean_min[d] += m[d];
        norm_acc += norm(space, m);
    }
    for (auto& e : mean_min) e /= static_cast<double>(count);

    VectorSplitReport rep;
    rep.coordinatewise_holds = true;
    for (std::size_t d = 0; d < dim; ++d)
        if (mean_min[d] + 1e-12 < gap[d] / 256.0) rep.coordinatewise_holds = false;
    rep.norm_lhs = static_cast<double>(norm_acc / static_cast<long double>(count));
    rep.norm_rhs = norm(space, gap) / 256.0;
    rep.norm_holds = rep.norm_lhs + 1e-12 >= rep.norm_rhs;
    return rep;
}

nlohmann::json PairBoundReport::to_json() const {
    return nlohmann::json{{"lhs", lhs}, {"rhs", rhs}, {"holds", holds}};
}

nlohmann::json ArbNumberReport::to_json() const {
    return nlohmann::json{{"join_form", join_form.to_json()},
                          {"power_form", power_form.to_json()}};
}

namespace {

void check_disjoint_family(const std::vector<Vec>& family) {
    for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i + 1; j < family.size(); ++j)
            if (!is_disjoint(family[i], family[j]))
                throw InvalidInput("family not mutually disjoint");
}

Vec p_sum_family(const std::vector<Vec>& xs, double p) {
    Vec acc = abs_of(xs[0]);
    for (std::size_t k = 1; k < xs.size(); ++k) acc = p_sum(acc, xs[k], p);
    return acc;
}

}  // namespace

ArbNumberReport arb_number_check(const LatticeOperator& t, const std::vector<Vec>& family,
                                 double p, double eps) {
    if (!t.positive()) throw InvalidInput("arb_number_check: operator must be positive");
    if (family.empty()) throw InvalidInput("arb_number_check: empty family");
    check_disjoint_family(family);

    std::vector<Vec> images;
    for (const auto& x : family) images.push_back(abs_of(t.apply(x)));
    const double scale = 256.0 * eps * norm(t.domain, sum_all(family));

    ArbNumberReport rep;
    rep.join_form.lhs = norm(t.codomain, sub(sum_all(images), join_all(images)));
    rep.join_form.rhs = scale;
    rep.join_form.holds = rep.join_form.lhs <= rep.join_form.rhs + 1e-12;

    rep.power_form.lhs =
        norm(t.codomain, sub(p_sum_family(images, p), t.apply(p_sum_family(family, p))));
    rep.power_form.rhs = scale;
    rep.power_form.holds = rep.power_form.lhs <= rep.power_form.rhs + 1e-12;
    return rep;
}

PairBoundReport maxmin_operator_check(const LatticeOperator& t, const std::vector<Vec>& xs,
                                      double eps) {
    if (!t.positive()) throw InvalidInput("maxmin_operator_check: operator must be positive");
    if (xs.empty()) throw InvalidInput("maxmin_operator_check: empty family");
    for (const auto& x : xs)
        if (!is_nonnegative(x)) throw InvalidInput("maxmin_operator_check: inputs must be >= 0");

    std::vector<Vec> images;
    for (const auto& x : xs) images.push_back(t.apply(x));

    const double join_gap = norm(t.codomain, sub(t.apply(join_all(xs)), join_all(images)));
    const double meet_gap = norm(t.codomain, sub(meet_all(images), t.apply(meet_all(xs))));

    PairBoundReport rep;
    rep.lhs = std::max(join_gap, meet_gap);
    rep.rhs = 256.0 * eps * norm(t.domain, join_all(xs));
    rep.holds = rep.lhs <= rep.rhs + 1e-12;
    return rep;
}

PairBoundReport iterated_join_check(const LatticeOperator& t, const std::vector<Vec>& xs,
                                    double eps_mp) {
    if (xs.empty()) throw InvalidInput("iterated_join_check: empty family");
    const double n = static_cast<double>(xs.size());
    std::vector<Vec> images;
    for (const auto& x : xs) images.push_back(t.apply(x));

    PairBoundReport rep;
    rep.lhs = norm(t.codomain, sub(t.apply(join_all(xs)), join_all(images)));
    rep.rhs = eps_mp * std::ceil(std::log2(std::max(n, 1.0))) * n;
    if (xs.size() == 1) rep.rhs = 0.0;
    rep.holds = rep.lhs <= rep.rhs + 1e-12;
    return rep;
}

SphereNet sphere_net(double q, int n_segments) {
    if (!(q > 1.0)) throw InvalidInput("sphere_net: q must be > 1");
    if (n_segments < 1) throw InvalidInput("sphere_net: N must be >= 1");
    SphereNet net;
    net.q = q;
    net.n_segments = n_segments;

    const int fine = 512 * n_segments;
    std::vector<std::pair<double, double>> poly(fine + 1);
    for (int k = 0; k <= fine; ++k) {
        const double x = 1.0 - static_cast<double>(k) / fine;
        const double y = std::pow(std::max(0.0, 1.0 - std::pow(x, q)), 1.0 / q);
        poly[k] = {x, y};
    }
    std::vector<double> arclen(fine + 1, 0.0);
    for (int k = 1; k <= fine; ++k) {
        const double dx = poly[k].first - poly[k - 1].first;
        const double dy = poly[k].second - poly[k - 1].second;
        arclen[k] = arclen[k - 1] + std::hypot(dx, dy);
    }
    const double total = arclen[fine];

    net.points.reserve(n_segments + 1);
    int cursor = 0;
    for (int j = 0; j <= n_segments; ++j) {
        const double target = total * j / n_segments;
        while (cursor < fine && arclen[cursor + 1] < target) ++cursor;
        double x;
        if (j == 0) x = 1.0;
        else if (j == n_segments) x = 0.0;
        else {
            const double seg = arclen[cursor + 1] - arclen[cursor];
            const double t = seg > 0.0 ? (target - arclen[cursor]) / seg : 0.0;
            x = poly[cursor].first + t * (poly[cursor + 1].first - poly[cursor].first);
        }
        // snap back onto the curve so x^q + y^q = 1 holds to machine precision
        const double y = std::pow(std::max(0.0, 1.0 - std::pow(x, q)), 1.0 / q);
        net.points.emplace_back(x, y);
    }
    return net;
}

double net_covering_gap(const SphereNet& net, int probe_count) {
    double worst = 0.0;
    for (int k = 0; k <= probe_count; ++k) {
        const double x = 1.0 - static_cast<double>(k) / probe_count;
        const double y = std::pow(std::max(0.0, 1.0 - std::pow(x, net.q)), 1.0 / net.q);
        double nearest = std::numeric_limits<double>::infinity();
        for (const auto& [px, py] : net.points)
            nearest = std::min(nearest, std::max(std::fabs(x - px), std::fabs(y - py)));
        worst = std::max(worst, nearest);
    }
    return worst;
}

nlohmann::json NetEstimateReport::to_json() const {
    return nlohmann::json{
        {"error", error}, {"bound", bound}, {"dominated", dominated}, {"holds", holds}};
}

NetEstimateReport net_estimate_check(const Vec& u, const Vec& v, double p,
                                     const SphereNet& net, const LatticeSpace& space) {
    if (!(p > 1.0)) throw InvalidInput("net_estimate_check: p must be > 1");
    const double q = p / (p - 1.0);
    if (std::fabs(q - net.q) > 1e-9)
        throw InvalidInput("net_estimate_check: net exponent must be conjugate to p");
    check_same_dim(u, v);

    const Vec au = abs_of(u), av = abs_of(v);
    const Vec target = p_sum(u, v, p);
    Vec best(u.size(), 0.0);
    for (const auto& [x, y] : net.points)
        best = join(best, add(scale(au, x), scale(av, y)));

    NetEstimateReport rep;
    rep.dominated = leq_coordinatewise(best, add(target, Vec(u.size(), 1e-12)));
    rep.error = norm(space, sub(target, best));
    rep.bound = (2.0 / net.n_segments) * (norm(space, u) + norm(space, v));
    rep.holds = rep.dominated && rep.error <= rep.bound + 1e-12;
    return rep;
}

std::vector<RefinementRow> refinement_norm_demo(double p, double q, double eps,
                                                double norm_t, double cq,
                                                const std::vector<long long>& levels,
                                                const LatticeOperator* op) {
    if (!(q > p)) throw InvalidInput("refinement_norm_demo: requires q > p");
    std::vector<RefinementRow> rows;
    for (long long n : levels) {
        RefinementRow row;
        row.n = n;
        row.bound = 256.0 * eps + cq * norm_t * std::pow(static_cast<double>(n), 1.0 / q - 1.0 / p);
        if (op != nullptr) {
            // equal-measure split of the constant-one function on a dyadic
            // weighted domain: x_i = indicator of the i-th block
            const std::size_t dim = op->cols();
            if (dim % static_cast<std::size_t>(n) == 0) {
                const std::size_t block = dim / static_cast<std::size_t>(n);
                std::vector<Vec> xs;
                for (long long i = 0; i < n; ++i) {
                    Vec x(dim, 0.0);
                    for (std::size_t k = 0; k < block; ++k)
                        x[static_cast<std::size_t>(i) * block + k] = 1.0;
                    xs.push_back(std::move(x));
                }
                std::vector<Vec> images;
                for (const auto& x : xs) images.push_back(abs_of(op->apply(x)));
                row.split_term = norm(op->codomain, p_sum_family(images, q));
                row.tx_norm = norm(op->codomain, op->apply(Vec(dim, 1.0)));
            }
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace latdp
