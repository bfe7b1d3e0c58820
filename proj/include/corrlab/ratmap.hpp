#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "corrlab/moebius.hpp"
#include "corrlab/polyring.hpp"

namespace corrlab {

// Degree-d rational map in homogeneous form (P : Q), stored as dehomogenized
// univariate coefficient vectors plus the formal degree d. The joint
// coefficient vector is normalized to sup-norm 1, so points of the
// compactified parameter space P^(2d+1) are representable, including
// degenerate ones.
class HomRationalMap {
public:
    HomRationalMap(int degree, ComplexPoly P, ComplexPoly Q);

    // Affine shorthand: the polynomial map z -> p(z), i.e. (p(z) : 1).
    static HomRationalMap polynomial(int degree, ComplexPoly p);

    int degree() const { return d_; }
    const ComplexPoly& P() const { return P_; }
    const ComplexPoly& Q() const { return Q_; }

    // Projective evaluation of the raw pair, no reduction.
    SpherePoint eval_raw(const SpherePoint& p) const;

private:
    int d_;
    ComplexPoly P_, Q_;
};

// f = H . phi_f with H = gcd(P, Q); zeros of H are the holes.
struct ReducedForm {
    ComplexPoly H;      // univariate part of the common factor (may carry z-powers)
    int holes_at_infinity = 0;
    std::vector<std::pair<SpherePoint, int>> holes; // with multiplicities, infinity included
    HomRationalMap phi;
    int degree; // deg(phi_f)

    int hole_degree() const { return H.degree() + holes_at_infinity; }
    double distance_to_holes(const SpherePoint& p) const;
    SpherePoint evaluate(const SpherePoint& p, double hole_tol = 1e-7) const;
};

ReducedForm reduce(const HomRationalMap& f, double tol = 1e-8);

// Value of phi_f at p; refuses points within cluster_tol of a hole.
SpherePoint evaluate(const HomRationalMap& f, const SpherePoint& p, double tol = 1e-8);

// The 2 deg - 2 critical points (with multiplicity) of the reduced map, from
// the homogeneous Wronskian P'Q - PQ'.
std::vector<std::pair<SpherePoint, int>> critical_points(const HomRationalMap& f,
                                                         double tol = 1e-8);

// Coefficients of L o f o M; declared degree preserved.
HomRationalMap conjugate(const MoebiusMap& L, const HomRationalMap& f, const MoebiusMap& M);

using MapFamily = std::function<HomRationalMap(double)>; // n -> f_n

// Closed-form family: per-coefficient expression trees in n.
struct RatMapFamily {
    int degree;
    std::vector<Expr> num, den; // ascending, sizes degree+1

    HomRationalMap at(double n) const;
    MapFamily fn() const {
        return [*this](double n) { return at(n); };
    }
};

struct LimitReport {
    ReducedForm limit;
    std::vector<double> samples_used;
    std::vector<double> drift;        // per-sample coefficient distance to the limit
    std::vector<double> probe_defect; // sup |f_n - phi_f| on a grid avoiding holes
};

struct LimitOptions {
    double tol = 1e-8;            // coefficient Cauchy certification
    double hole_margin = 0.1;     // spherical radius excluded around holes
    int probe_grid = 200;
};

// Extrapolated limit in P^(2d+1) followed by reduction; certifies that the
// pivot-normalized coefficients are Cauchy across the sample schedule and that
// f_n approaches phi_f away from the holes. Throws NotCauchy.
LimitReport limit_of_family(const MapFamily& f, int degree, const std::vector<double>& samples,
                            const LimitOptions& opts = {});

enum class RescalingStatus { RescalingLimit, DegreeZero };

struct RescalingLimitReport {
    LimitReport report;
    RescalingStatus status; // RescalingLimit iff reduced degree >= 1
};

RescalingLimitReport rescaling_limit(const MapFamily& f, int degree, const RescalingSequence& A,
                                     const RescalingSequence& B, const LimitOptions& opts = {});

// Three-probe co-rescaling construction: B_n sends (0, 1, inf) to the images
// of the probes under f_n o A_n, built symbolically so it can be resampled.
// Throws ProbeCollapse when probe images collide at large n.
RescalingSequence find_corescaling(const RatMapFamily& f, const RescalingSequence& A,
                                   const std::array<SpherePoint, 3>& probes, double tol = 1e-10);

struct VdReport {
    cplx dR_at_one;
    cplx dR_at_minus_one;
    std::vector<double> sres_rel; // relative |sRes_2j|, j = 1..d-1
    bool verdict;
};

// Membership test for the subresultant variety V_d: R'(+-1) = 0 and the even
// principal subresultants of (num R', num R' o eta) vanish. deg R must be 2d.
VdReport vd_membership(const HomRationalMap& R, int d, double tol = 1e-8);

} // namespace corrlab
