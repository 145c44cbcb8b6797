#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "latdp/lattice.hpp"

namespace latdp {

enum class NormKind { Lp, WeightedLp, Sup };

// A monotone (lattice) norm on R^dim.  Lp covers p in [1, inf] with p = inf
// stored as the IEEE infinity; WeightedLp is restricted to p < inf (a weighted
// sup is expressible by rescaling coordinates and is not supported here).
struct NormSpec {
    NormKind kind = NormKind::Lp;
    double p = 2.0;                // meaningful for Lp / WeightedLp
    std::vector<double> weights;   // WeightedLp only, all > 0

    static NormSpec lp(double p_) { return {NormKind::Lp, p_, {}}; }
    static NormSpec sup() { return {NormKind::Sup, std::numeric_limits<double>::infinity(), {}}; }
    static NormSpec weighted_lp(double p_, std::vector<double> w) {
        return {NormKind::WeightedLp, p_, std::move(w)};
    }

    bool operator==(const NormSpec&) const = default;
};

struct LatticeSpace {
    std::size_t dim = 1;
    NormSpec norm;

    bool operator==(const LatticeSpace&) const = default;
};

LatticeSpace make_lp_space(std::size_t dim, double p);
LatticeSpace make_sup_space(std::size_t dim);
LatticeSpace make_weighted_lp_space(double p, std::vector<double> weights);

void validate_space(const LatticeSpace& s);
// true for Lp(1) and WeightedLp(1, .) -- the L1-type lattices
bool is_l1_kind(const LatticeSpace& s);
// true for Sup and Lp(inf)
bool is_sup_kind(const LatticeSpace& s);

double norm(const LatticeSpace& s, const Vec& x);

// Norm of x acting as a functional on s via the standard pairing <x, .>.
double dual_norm(const LatticeSpace& s, const Vec& x);

// z* with dual_norm(s, z*) = 1 and <z*, x> = norm(s, x); x != 0 required.
// Sup tie-break: lowest coordinate index attaining the max.
Vec norming_functional(const LatticeSpace& s, const Vec& x);

// For beta >= 0: the z >= 0 with norm(s, z) = 1 and <z, beta> = dual_norm(s, beta),
// i.e. the unit-sphere direction that norms beta as a functional.  For L1-type
// spaces ties go to the lowest index.
Vec dual_norming_vector(const LatticeSpace& s, const Vec& beta);

// norm of the i-th coordinate atom in s
double atom_norm(const LatticeSpace& s, std::size_t i);

std::string describe(const NormSpec& n);

}  // namespace latdp
