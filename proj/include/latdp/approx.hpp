#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "latdp/operator.hpp"

namespace latdp {

// Map from codomain coordinates to owning domain column, or -1 for dropped.
// The owned sets are mutually disjoint by construction.
struct SupportAssignment {
    std::vector<int> owner;  // length m, entries in {-1, 0, .., n-1}

    std::vector<std::vector<std::size_t>> owned_sets(std::size_t n_cols) const;
};

struct ApproxResult {
    LatticeOperator s;
    double distance = 0.0;          // ||T - S||, exact where a closed form exists
    bool distance_exact = true;     // false when only a search lower bound is available
    double bound = 0.0;             // guaranteed bound for the eps used (or the
                                    // unconditional certificate when eps absent)
    std::optional<double> eps_used;
    std::string method;             // "phi_n" | "truncation" | "threshold" |
                                    // "assignment" | "power_pipeline"
    bool dominated = false;         // 0 <= S <= T entrywise

    nlohmann::json to_json() const;
};

// Scalar cut behind the sup-domain construction: keeps the leading value when
// it dominates the rest by a factor 2, kills it when it is dominated, linear
// ramp in between.  t[0] is the distinguished coordinate.
double dominant_peak_cut(std::span<const double> t);

// Scalar two-slope cut at level eps: 0 for |t| <= eps, t for |t| >= 2 eps,
// 2(|t| - eps) sign t in between.
double soft_threshold_cut(double t, double eps);

// Positive T with sup-norm domain: columnwise peak filtering.  Unconditional
// certificate: distance <= 2 ||sum f_i - join f_i||; with a valid eps the
// returned bound is 256 eps.
ApproxResult approximate_dp_sup_domain(const LatticeOperator& t,
                                       std::optional<double> eps = std::nullopt);

// Sup-norm codomain: per-coordinate truncation against the peer columns; for
// a valid eps the bound is 257 eps ||T||.
ApproxResult approximate_dp_sup_codomain(const LatticeOperator& t,
                                         std::optional<double> eps = std::nullopt);

// Sup-norm codomain, scalar cut at a fixed eps; requires the at-most-one-large
// -column property (|f_i(t)| > eps for at most one i per coordinate).
ApproxResult approximate_dp_threshold(const LatticeOperator& t, double eps);

// ||T - S_A|| for positive T into an L1-type codomain, via the dual-norm
// identity on the residual column masses.
double assignment_objective(const LatticeOperator& t, const SupportAssignment& a);

// exact argmin of assignment_objective over all (n+1)^m assignments
std::pair<SupportAssignment, double> optimal_assignment_bruteforce(
    const LatticeOperator& t, std::uint64_t enumeration_cap = 10'000'000ull);

// alternating weight/argmax scheme; value is always >= the brute-force optimum
std::pair<SupportAssignment, double> alternating_assignment(const LatticeOperator& t,
                                                            int max_iters = 64,
                                                            std::uint64_t seed = 0);

// column i restricted to its owned set; columns of codomain norm below
// drop_threshold are zeroed entirely
LatticeOperator build_dp_from_assignment(const LatticeOperator& t, const SupportAssignment& a,
                                         double drop_threshold = 0.0);

// assignment-minimization pipeline for positive T into an L1-type codomain
ApproxResult approximate_l1_target(const LatticeOperator& t,
                                   std::optional<double> eps = std::nullopt,
                                   std::uint64_t seed = 0);

// entrywise q-th powers, with spaces transferred Lq -> L1 (weights preserved)
LatticeOperator power_transfer(const LatticeOperator& t, double q);
// entrywise q-th roots, spaces transferred L1 -> Lq
LatticeOperator root_transfer(const LatticeOperator& s_prime, double q);

// power-transfer pipeline for positive T into an Lq codomain (q > 1)
ApproxResult approximate_lq_target(const LatticeOperator& t, double q,
                                   std::optional<double> eps = std::nullopt,
                                   std::uint64_t seed = 0);

}  // namespace latdp
