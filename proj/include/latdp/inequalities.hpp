#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "latdp/operator.hpp"

namespace latdp {

// Exact (1/2^n) * sum over all subsets S of min(sum_S b, sum_{S^c} b),
// Gray-code incremental sums; len(b) <= 25.
double expected_min_split(const std::vector<double>& b);

struct SandwichReport {
    double lhs = 0.0;   // expected min over splits
    double mid = 0.0;   // sum - max
    double rhs = 0.0;   // 256 * lhs
    bool holds = false;
    nlohmann::json to_json() const;
};

SandwichReport maxmin_sandwich_check(const std::vector<double>& b);

struct VectorSplitReport {
    bool coordinatewise_holds = false;
    bool norm_holds = false;
    double norm_lhs = 0.0;   // E_S ||min(...)||
    double norm_rhs = 0.0;   // 2^{-8} || sum f - join f ||
    nlohmann::json to_json() const;
};

// Both forms of the subset-split inequality for positive families, by exact
// enumeration; n <= 20.
VectorSplitReport vector_split_check(const std::vector<Vec>& fs, const LatticeSpace& space);

struct PairBoundReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool holds = false;
    nlohmann::json to_json() const;
};

struct ArbNumberReport {
    PairBoundReport join_form;   // ||sum|Tx_i| - join|Tx_i||| <= 256 eps ||sum x_i||
    PairBoundReport power_form;  // ||(sum|Tx_i|^p)^{1/p} - T(sum|x_i|^p)^{1/p}|| <= same
    nlohmann::json to_json() const;
};

ArbNumberReport arb_number_check(const LatticeOperator& t, const std::vector<Vec>& family,
                                 double p, double eps);

// max{ ||T(join x) - join Tx||, ||meet Tx - T(meet x)|| } <= 256 eps ||join x||
PairBoundReport maxmin_operator_check(const LatticeOperator& t, const std::vector<Vec>& xs,
                                      double eps);

// ||T(join x_i) - join Tx_i|| <= eps_mp * ceil(log2 n) * n for unit positive x_i
PairBoundReport iterated_join_check(const LatticeOperator& t, const std::vector<Vec>& xs,
                                    double eps_mp);

// N+1 points on {x^q + y^q = 1, x,y in [0,1]} by equal-arclength subdivision,
// ordered from (1,0) to (0,1).
struct SphereNet {
    double q = 2.0;
    int n_segments = 1;  // N
    std::vector<std::pair<double, double>> points;  // N+1 entries
};

SphereNet sphere_net(double q, int n_segments);

// max over a probe grid of the Chebyshev distance to the nearest net point;
// the covering invariant is gap <= 2/N
double net_covering_gap(const SphereNet& net, int probe_count);

struct NetEstimateReport {
    double error = 0.0;   // || p_sum(u,v) - join_j (x_j|u| + y_j|v|) ||
    double bound = 0.0;   // (2/N)(||u|| + ||v||)
    bool dominated = false;  // join <= p_sum coordinatewise
    bool holds = false;
    nlohmann::json to_json() const;
};

NetEstimateReport net_estimate_check(const Vec& u, const Vec& v, double p,
                                     const SphereNet& net, const LatticeSpace& space);

struct RefinementRow {
    long long n = 1;
    double bound = 0.0;       // 256 eps + Cq normT n^{1/q - 1/p}
    double split_term = 0.0;  // measured ||(sum |Tx_i|^q)^{1/q}|| for the equal split
    double tx_norm = 0.0;     // measured ||T 1|| (constant across levels)
};

// Bound-chain demonstration on a dyadic equal-weight domain; rows show the
// split term decaying like n^{1/q - 1/p}.
std::vector<RefinementRow> refinement_norm_demo(double p, double q, double eps,
                                                double norm_t, double cq,
                                                const std::vector<long long>& levels,
                                                const LatticeOperator* op = nullptr);

}  // namespace latdp
