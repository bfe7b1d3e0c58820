#include "corrlab/mating.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace corrlab {

HomRationalMap normal_form(int d, const std::vector<cplx>& coeffs) {
    if (d < 2) fail("TemplateMismatch", "normal form needs d >= 2");
    const size_t expected = static_cast<size_t>(2 * d - 3);
    if (coeffs.size() != expected)
        fail("TemplateMismatch", "normal form for d = " + std::to_string(d) + " takes " +
                                     std::to_string(expected) + " coefficients");
    // multiply through by z^(2d-1): P has a z^(2d) head, a gap at z^d, and a
    // constant tail 1/(2d-1); Q = z^(2d-1).
    std::vector<cplx> p(2 * d + 1, cplx(0.0));
    p[2 * d] = 1.0;
    p[0] = 1.0 / (2.0 * d - 1.0);
    size_t idx = 0;
    for (int k = 0; k <= d - 2; ++k) p[2 * d - 1 - k] = coeffs[idx++]; // a_0 .. a_{d-2}
    for (int k = d; k <= 2 * d - 3; ++k) p[2 * d - 1 - k] = coeffs[idx++]; // a_d .. a_{2d-3}
    std::vector<cplx> q(2 * d, cplx(0.0));
    q[2 * d - 1] = 1.0;
    HomRationalMap R(2 * d, ComplexPoly(std::move(p)), ComplexPoly(std::move(q)));
    // pole structure check: simple pole at infinity, order 2d-1 at the origin
    if (std::abs(R.P().coeff(0)) == 0.0 || R.Q().order_at_zero() != 2 * d - 1)
        fail("TemplateMismatch", "normal form lost its pole structure");
    return R;
}

HomRationalMap family_map(cplx c) { return normal_form(3, {cplx(0.0), c, -c / 3.0}); }

double degeneration_indicator(const HomRationalMap& R) {
    const int D = R.degree();
    int dp = R.P().degree(), dq = R.Q().degree();
    if (dp != D || dp - dq != 1)
        fail("WrongLocalForm", "map needs a simple pole at infinity");
    return std::abs(R.P().lc() / R.Q().lc());
}

std::optional<FixedPointData> attracting_fixed_data(const Correspondence& C) {
    auto fps = fixed_points(C);
    std::optional<FixedPointData> best;
    for (const auto& fp : fps) {
        if (!fp.simple || fp.multipliers.empty()) continue;
        if (fp.point.is_infinity(1e-9)) continue;
        cplx a = fp.point.affine();
        if (std::abs(a) < 1e-9) continue;                       // pole artifact
        if (std::abs(a - 1.0) < 1e-9 || std::abs(a + 1.0) < 1e-9) continue; // eta-fixed
        double m = std::abs(fp.multipliers[0]);
        if (m >= 1.0 - 1e-9) continue;
        if (!best || m < std::abs(best->multipliers[0]) - 1e-15 ||
            (std::abs(m - std::abs(best->multipliers[0])) <= 1e-15 &&
             std::make_pair(a.real(), a.imag()) <
                 std::make_pair(best->point.affine().real(), best->point.affine().imag())))
            best = fp;
    }
    return best;
}

MatingModel make_mating_model(const HomRationalMap& R, const BasinBudget& budget) {
    Correspondence C = from_uniformizer(R);
    auto attractor = attracting_fixed_data(C);
    return MatingModel{R, std::move(C), std::move(attractor), budget};
}

namespace {

// Spatial hash over the embedded sphere for duplicate pruning at cluster_tol.
class SphereVisited {
public:
    explicit SphereVisited(double tol) : h_(std::max(tol, 1e-12)) {}

    // true if a point within tolerance was already present; inserts otherwise
    bool test_and_insert(const SpherePoint& p) {
        double n2 = std::norm(p.z) + std::norm(p.w);
        double X = 2.0 * (p.z * std::conj(p.w)).real() / n2;
        double Y = 2.0 * (p.z * std::conj(p.w)).imag() / n2;
        double Z = (std::norm(p.z) - std::norm(p.w)) / n2;
        long ix = std::lround(X / h_), iy = std::lround(Y / h_), iz = std::lround(Z / h_);
        for (long dx = -1; dx <= 1; ++dx)
            for (long dy = -1; dy <= 1; ++dy)
                for (long dz = -1; dz <= 1; ++dz) {
                    auto it = cells_.find(key(ix + dx, iy + dy, iz + dz));
                    if (it == cells_.end()) continue;
                    for (const auto& q : it->second)
                        if (spherical_distance(p, q) <= h_) return true;
                }
        cells_[key(ix, iy, iz)].push_back(p);
        return false;
    }

private:
    static long long key(long x, long y, long z) {
        return ((x & 0x1fffffLL) << 42) | ((y & 0x1fffffLL) << 21) | (z & 0x1fffffLL);
    }
    double h_;
    std::map<long long, std::vector<SpherePoint>> cells_;
};

} // namespace

ClassifyResult classify_point(const MatingModel& M, const SpherePoint& z) {
    if (!M.attractor) fail("NoAttractor", "classify_point needs an attractor");
    const SpherePoint target = M.attractor->point;
    const BasinBudget& b = M.budget;

    if (spherical_distance(z, target) <= b.eps_ball) return {PointClass::Attracted, 0};
    if (b.depth_cap <= 0 || b.width_cap <= 0) return {PointClass::BudgetExhausted, 0};

    SphereVisited visited(b.cluster_tol);
    visited.test_and_insert(z);
    std::vector<SpherePoint> frontier{z};
    bool truncated = false;

    for (int level = 1; level <= b.depth_cap; ++level) {
        std::vector<SpherePoint> next;
        for (const auto& x : frontier) {
            BranchFan fan;
            try {
                fan = forward_images(M.C, x);
            } catch (const Error&) {
                continue; // indeterminate fiber: nothing to expand
            }
            for (const auto& [y, mult] : fan.images) {
                if (spherical_distance(y, target) <= b.eps_ball)
                    return {PointClass::Attracted, level};
                if (visited.test_and_insert(y)) continue;
                if (static_cast<int>(next.size()) < b.width_cap)
                    next.push_back(y);
                else
                    truncated = true;
            }
        }
        if (next.empty()) return {PointClass::NotAttracted, level};
        frontier = std::move(next);
    }
    (void)truncated; // depth exhaustion and width truncation report the same class
    return {PointClass::BudgetExhausted, b.depth_cap};
}

namespace {

// Nearest root of R(w) = target to the previous branch point; the root
// multiplicity and the distance to the next-nearest distinct solution feed the
// collision detection.
struct TrackStep {
    SpherePoint w;
    int multiplicity = 1;
    double moved = 0.0;
    double gap = 4.0; // distance from w to the nearest other solution
};

TrackStep nearest_preimage(const HomRationalMap& R, const SpherePoint& target,
                           const SpherePoint& prev) {
    ComplexPoly numer = R.P() * target.w - R.Q() * target.z;
    if (numer.is_zero()) fail("NotReachable", "degenerate preimage equation");
    auto sols = projective_roots(numer, R.degree());
    TrackStep out;
    double best = 5.0;
    for (const auto& [w, mult] : sols) {
        double dist = spherical_distance(w, prev);
        if (dist < best) {
            best = dist;
            out.w = w;
            out.multiplicity = mult;
        }
    }
    out.moved = best;
    for (const auto& [w, mult] : sols) {
        double dist = spherical_distance(w, out.w);
        if (dist > 1e-12) out.gap = std::min(out.gap, dist);
    }
    return out;
}

// Walks the inverse branch along the projective segment between the values,
// refining the step whenever the tracked root moves a large fraction of the
// distance to the nearest other branch.
SpherePoint continue_inverse_branch(const HomRationalMap& R, const SpherePoint& from_value,
                                    const SpherePoint& from_branch, const SpherePoint& to_value,
                                    int steps) {
    SpherePoint w = from_branch;
    double t = 0.0;
    auto value_at = [&](double s) {
        return SpherePoint(from_value.z * (1.0 - s) + to_value.z * s,
                           from_value.w * (1.0 - s) + to_value.w * s);
    };
    double dt = 1.0 / steps;
    const double min_dt = dt / 1024.0;
    while (t < 1.0 - 1e-12) {
        double step = std::min(dt, 1.0 - t);
        TrackStep ts = nearest_preimage(R, value_at(t + step), w);
        if (ts.multiplicity > 1 && t + step > 1.0 - 1e-12)
            fail("BranchCollision", "continuation ends at a critical value");
        if ((ts.multiplicity > 1 || ts.moved > 0.25 * ts.gap) && step > min_dt) {
            dt = step / 2.0;
            continue;
        }
        if (ts.multiplicity > 1 || ts.moved > 0.5 * ts.gap)
            fail("BranchCollision", "continuation path passes near a critical value");
        w = ts.w;
        t += step;
        dt = std::min(2.0 * dt, 1.0 / steps);
    }
    return w;
}

} // namespace

SpherePoint b_involution_eval(const MatingModel& M, const SpherePoint& z, int path_steps) {
    if (path_steps < 2) fail("InvalidArgument", "need at least 2 path steps");
    // base pair: infinity in D with R(infinity) = infinity
    const SpherePoint base = SpherePoint::infinity();
    if (z.is_infinity(1e-12)) {
        // F(inf) = R(eta(inf)) = R(0)
        return reduce(M.R).evaluate(SpherePoint::finite(0.0), 1e-12);
    }
    SpherePoint w = continue_inverse_branch(M.R, base, base, z, path_steps);
    // reverse leg certifies the branch
    SpherePoint back = continue_inverse_branch(M.R, z, w, base, path_steps);
    if (spherical_distance(back, base) > 1e-8)
        fail("NotReachable", "reverse continuation does not return to the base branch");
    return reduce(M.R).evaluate(eta(w), 1e-12);
}

} // namespace corrlab
