#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "latdp/approx.hpp"
#include "latdp/defects.hpp"

namespace latdp {

// Complete-graph incidence operator: column i is N^{-1/q} times the indicator
// of the edges at vertex i, acting Lp^{N+1} -> Lq^M with M = N(N+1)/2.
struct GraphInstance {
    int n_vertices_minus_one = 2;  // N
    double p = 1.0, q = 2.0;
    std::size_t edge_count = 3;  // M
    std::vector<std::vector<std::size_t>> incidence;  // F_i, N+1 sets of size N
    LatticeOperator op;

    nlohmann::json meta() const;
};

GraphInstance graph_operator(int n, double p, double q);

// analytic defect level for the graph operator
double graph_analytic_eps(int n, double p, double q);

struct GraphVerifyReport {
    double norm_upper = 0.0;           // interpolation bound
    double norm_bound = 0.0;           // 2^{1 - 1/q}
    double defect_lower = 0.0;         // search lower bound
    double eps_analytic = 0.0;
    double dp_distance_lower = 0.0;    // assignment-enumerated lower bound
    bool dp_distance_certified = false;
    double dp_distance_target = 0.0;   // 2^{-1/q}
    bool holds = false;
    nlohmann::json to_json() const;
};

GraphVerifyReport graph_verify(const GraphInstance& inst, std::uint64_t seed = 0,
                               std::uint64_t enumeration_cap = 10'000'000ull);

// min over support assignments of max_i || f_i restricted off its owned set ||;
// a lower bound for ||T - S|| over every disjointness preserving S when the
// domain atoms are unit vectors.  Exhaustive when (n+1)^m <= cap, else greedy
// plus local search (flagged non-certified).
struct ColumnDistanceBound {
    double value = 0.0;
    bool certified = false;
    SupportAssignment assignment;
};

ColumnDistanceBound dp_distance_column_lower_bound(const LatticeOperator& t,
                                                   std::uint64_t enumeration_cap = 10'000'000ull);

// Block-diagonal perturbed identities on L2: block i is I + 2^{-i/2} W_i with
// W_i the orthonormal Sylvester stage of size 2^i.
struct WalshInstance {
    int k_min = 3, k_max = 6;
    std::vector<LatticeOperator> blocks;  // one per level k_min..k_max
    LatticeOperator op;                   // direct sum on L2

    nlohmann::json meta() const;
};

WalshInstance walsh_operator(int k_min, int k_max);

// 2^{k/2}-scaled Sylvester matrix: entries +-2^{-k/2}, orthogonal
std::vector<double> sylvester_orthonormal(int k);

struct WalshVerifyReport {
    double perturbation_norm = 0.0;    // ||T - I||, largest block level
    double perturbation_target = 0.0;  // 2^{-k_min/2}
    double worst_witness_gap = 0.0;    // max_k | ||modulus meet|| - 2^{-1/2} | / 2^{1-k}
    double worst_block_defect_ratio = 0.0;  // sampled pairwise value / (3 * 2^{-k/2})
    double modulus_distance_lower = 0.0;    // dim-8 block enumeration
    double modulus_distance_target = 0.0;   // 1/(3 sqrt 2)
    double candidate_distance_min = 0.0;    // min over constructed DP candidates
    bool holds = false;
    nlohmann::json to_json() const;
};

WalshVerifyReport walsh_verify(const WalshInstance& inst, double eps_target,
                               std::uint64_t seed = 0);

// T = S0 + eta R with S0 a random positive disjoint-column operator and R a
// random positive contraction; eps_analytic = 2 eta ||R|| is a certified DP
// defect bound.
struct PerturbedInstance {
    LatticeOperator op;
    double eta = 0.0;
    double eps_analytic = 0.0;

    nlohmann::json meta() const;
};

PerturbedInstance perturbed_dp_instance(std::size_t n, std::size_t m, double eta,
                                        std::uint64_t seed, const LatticeSpace& domain,
                                        const LatticeSpace& codomain);

// block-diagonal sum; all block norms must agree with the outer exponent
LatticeOperator direct_sum(const std::vector<LatticeOperator>& blocks, double outer_p);

}  // namespace latdp
