#pragma once

#include <optional>

#include "corrlab/correspondence.hpp"

namespace corrlab {

// Normal form z + a_0 + a_1/z + ... + a_{d-2}/z^(d-2) + a_d/z^d + ... +
// a_{2d-3}/z^(2d-3) + 1/((2d-1) z^(2d-1)): simple pole at infinity, pole of
// order 2d-1 at the origin, no z^-(d-1) term. Coefficient count is 2d-3.
HomRationalMap normal_form(int d, const std::vector<cplx>& coeffs);

// The explicit one-parameter d = 3 family R_c(z) = z + c/z - c/(3z^3) + 1/(5z^5).
HomRationalMap family_map(cplx c);

// |R'(infinity)| in the reciprocal chart; requires a simple pole at infinity.
// Divergence along a parameter path signals escape from the bounded region.
double degeneration_indicator(const HomRationalMap& R);

// Distinguished-branch attractor scan: the simple diagonal fixed point of
// smallest multiplier modulus < 1. The pole pair {0, infinity} of the
// normal form carries a structural superattracting branch fixed point at the
// origin for every parameter; it is excluded, along with the eta-fixed
// critical points +-1, so the scan sees only the mating dynamics.
std::optional<FixedPointData> attracting_fixed_data(const Correspondence& C);

struct BasinBudget {
    int depth_cap = 40;
    int width_cap = 2000;
    double eps_ball = 1e-3;
    double cluster_tol = 1e-7;
};

struct MatingModel {
    HomRationalMap R;
    Correspondence C;
    std::optional<FixedPointData> attractor;
    BasinBudget budget;
};

MatingModel make_mating_model(const HomRationalMap& R, const BasinBudget& budget = {});

enum class PointClass { Attracted, NotAttracted, BudgetExhausted };

struct ClassifyResult {
    PointClass cls;
    int depth = 0; // first level entering the attractor ball, when attracted
};

// Breadth-first exploration of forward fans from z with duplicate pruning:
// attracted when some orbit point enters the eps-ball around the attractor;
// not_attracted when the exploration closes; budget_exhausted when the caps
// cut it short.
ClassifyResult classify_point(const MatingModel& M, const SpherePoint& z);

// Inverse-branch continuation of (R|_D)^-1 along a path from the base pair
// (infinity, infinity), then w -> R(eta(w)). The reverse leg re-traces the
// branch back to certify the continuation.
SpherePoint b_involution_eval(const MatingModel& M, const SpherePoint& z, int path_steps = 64);

} // namespace corrlab
