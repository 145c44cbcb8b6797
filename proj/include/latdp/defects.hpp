#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "latdp/operator.hpp"

namespace latdp {

enum class DefectKind { DP, MP, LH, SDP };

std::string defect_kind_name(DefectKind k);

// A witness pair together with the value it certifies.  For kinds that require
// a disjoint pair, x and y have disjoint supports.
struct DefectCertificate {
    Vec x;
    Vec y;
    double value = 0.0;
};

struct DefectEstimate {
    DefectKind kind = DefectKind::DP;
    double lower_bound = 0.0;
    std::optional<DefectCertificate> witness;  // pair witness (DP/MP/LH)
    std::vector<Vec> family;                   // family witness (SDP)
    std::optional<double> analytic_upper;
    std::string provenance;

    nlohmann::json to_json() const;
};

// || |Tx| ∧ |Ty| || / max(||x||, ||y||) for a disjoint pair; errors otherwise.
double pairwise_dp_value(const LatticeOperator& t, const Vec& x, const Vec& y);

// Best split defect over normalized indicator pairs u_S vs u_{S^c}; exhaustive
// for n <= exhaustive_limit, seeded sampling + one-flip local search beyond.
// Non-positive operators are measured through their modulus (flagged).
DefectEstimate indicator_split_defect(const LatticeOperator& t, int exhaustive_limit = 20,
                                      std::uint64_t seed = 0);

// Maximizes pairwise_dp_value over disjoint-support pairs with nonnegative
// coefficients: per-split coordinate ascent with multiplicative updates from
// random restarts.  Always at least the indicator-split bound.
DefectEstimate dp_defect_search(const LatticeOperator& t, std::uint64_t seed = 0,
                                int restarts = 8);

// ||(Tx) ∧ (Ty) − T(x ∧ y)|| for positive T and x, y >= 0 with norms <= 1
double mp_defect(const LatticeOperator& t, const Vec& x, const Vec& y);
DefectEstimate mp_defect_search(const LatticeOperator& t, std::uint64_t seed = 0,
                                int restarts = 8);

// || |T|x|| − |Tx| || / ||x||
double lh_defect(const LatticeOperator& t, const Vec& x);
DefectEstimate lh_defect_search(const LatticeOperator& t, std::uint64_t seed = 0,
                                int restarts = 8);

// || Σ_i |Tx_i| − ∨_i |Tx_i| || for a mutually disjoint family with norms <= 1
double sdp_defect(const LatticeOperator& t, const std::vector<Vec>& family);

// Canonical atom family plus exhaustive block coarsenings (n <= partition_limit)
DefectEstimate sdp_atom_defect(const LatticeOperator& t, std::size_t partition_limit = 12);

struct AlmostDisjointReport {
    double lhs = 0.0;          // || |Tx| ∧ |Ty| ||
    double rhs = 0.0;          // 4 (eps max{||x||,||y||} + ||T|| || |x| ∧ |y| ||)
    double norm_t_used = 0.0;
    bool norm_t_certified = false;  // true when a closed-form upper bound existed
    bool holds = false;

    nlohmann::json to_json() const;
};

// Verifies the almost-disjointness transfer inequality for a valid eps.
AlmostDisjointReport almost_disjoint_check(const LatticeOperator& t, const Vec& x,
                                           const Vec& y, double eps,
                                           std::optional<double> norm_t = std::nullopt);

}  // namespace latdp
