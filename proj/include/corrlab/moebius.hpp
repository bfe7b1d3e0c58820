#pragma once

#include <array>
#include <optional>
#include <vector>

#include "corrlab/common.hpp"
#include "corrlab/expr.hpp"

namespace corrlab {

// Point of the Riemann sphere in projective coordinates (z : w), stored with
// max(|z|, |w|) = 1. The normalization survives every operation, so poles and
// points near infinity need no special casing.
struct SpherePoint {
    cplx z{0.0, 0.0};
    cplx w{1.0, 0.0};

    SpherePoint() = default;
    SpherePoint(cplx z_, cplx w_);

    static SpherePoint finite(cplx v) { return SpherePoint(v, cplx(1.0, 0.0)); }
    static SpherePoint infinity() { return SpherePoint(cplx(1.0, 0.0), cplx(0.0, 0.0)); }

    bool is_infinity(double tol = 1e-14) const { return std::abs(w) <= tol; }
    // Affine coordinate z/w; infinite for points at infinity.
    cplx affine() const { return z / w; }
};

// Chordal metric on the sphere: symmetric, zero iff projectively equal, <= 2.
double spherical_distance(const SpherePoint& p, const SpherePoint& q);

// The fixed involution eta(z) = 1/z as a coordinate swap; exact in projective
// coordinates (no renormalization), fixed points (1:1) and (-1:1).
inline SpherePoint eta(const SpherePoint& p) {
    SpherePoint q;
    q.z = p.w;
    q.w = p.z;
    return q;
}

// Element of PSL2(C), entries normalized to ad - bc = 1 (global sign free).
struct MoebiusMap {
    cplx a{1.0}, b{0.0}, c{0.0}, d{1.0};

    MoebiusMap() = default;
    MoebiusMap(cplx a_, cplx b_, cplx c_, cplx d_);

    static MoebiusMap identity() { return MoebiusMap(); }
    static MoebiusMap scaling(cplx lambda);
    static MoebiusMap translation(cplx t);
    static MoebiusMap eta_map() { return MoebiusMap(0.0, 1.0, 1.0, 0.0); }
    // The map sending 0, 1, infinity to the given points.
    static MoebiusMap from_images_of_zero_one_inf(const SpherePoint& p0,
                                                  const SpherePoint& p1,
                                                  const SpherePoint& pinf);

    MoebiusMap inverse() const { return MoebiusMap(d, -b, -c, a); }
    double sup_norm() const;
    cplx trace() const { return a + d; }
};

MoebiusMap operator*(const MoebiusMap& L, const MoebiusMap& R); // composition L after R

SpherePoint apply(const MoebiusMap& M, const SpherePoint& p);

// Probe-based commutation test against eta on a fixed 8-point set.
bool commutes_with_eta(const MoebiusMap& M, double tol);

// A sequence of Moebius maps n -> M_n given in closed form, so that pairwise
// limits can be sampled at arbitrarily large n.
struct RescalingSequence {
    std::array<Expr, 4> entries; // row-major a, b, c, d
    std::vector<double> sample_indices;

    static std::vector<double> default_samples(); // 10^1 .. 10^6 geometric
    static RescalingSequence constant(const MoebiusMap& M);
    static RescalingSequence from_entries(Expr a, Expr b, Expr c, Expr d,
                                          std::vector<double> samples = default_samples());

    MoebiusMap at(double n) const; // normalized; throws on singular sample
    // Unnormalized entries; projective uses that must avoid the determinant
    // normalization (deep zoom chains underflow it).
    std::array<cplx, 4> raw_at(double n) const;
};

// adj(B) * A applied to p: evaluates B^-1 A projectively without dividing by
// det(B).
SpherePoint apply_quotient_raw(const std::array<cplx, 4>& B, const std::array<cplx, 4>& A,
                               const SpherePoint& p);

enum class PairRegime { Equivalent, Bounded, Independent };

struct PairClassification {
    PairRegime regime;
    std::optional<MoebiusMap> limit; // set for Equivalent
    std::vector<double> norms;       // det-normalized sup-norms of B_n^{-1} A_n
};

struct PairThresholds {
    double equivalent_tol = 1e-8; // successive-difference sup-norm at last three samples
    double divergence_norm = 1e6; // independent: above this and strictly increasing
};

// Classifies B_n^{-1} A_n as equivalent / bounded / independent. Throws
// Error("Inconclusive") when the samples match no regime.
PairClassification classify_rescaling_pair(const RescalingSequence& A,
                                           const RescalingSequence& B,
                                           const PairThresholds& thresholds = {});

} // namespace corrlab
