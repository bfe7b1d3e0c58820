#include "corrlab/correspondence.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace corrlab {

namespace {

// A polynomial factor in x alone (or y alone) would be a fiber of a
// projection; certified absent when no single-variable content divides Q.
void check_no_fibers(const BivarPoly& Q, double tol) {
    auto content_degree = [&](const BivarPoly& B) {
        // gcd over the y-coefficient polynomials c_j(x)
        ComplexPoly g;
        bool first = true;
        for (int j = 0; j <= B.deg_y(); ++j) {
            std::vector<cplx> col(B.deg_x() + 1);
            for (int i = 0; i <= B.deg_x(); ++i) col[i] = B.coeff(i, j);
            ComplexPoly cj{std::move(col)};
            if (cj.is_zero()) continue;
            g = first ? cj : gcd_approx(g, cj, tol);
            first = false;
            if (!first && g.degree() == 0) return 0;
        }
        return first ? 0 : g.degree();
    };
    if (content_degree(Q) > 0)
        fail("FiberFactor", "correspondence polynomial has a factor in x alone");
    if (content_degree(Q.transposed()) > 0)
        fail("FiberFactor", "correspondence polynomial has a factor in y alone");
}

Correspondence make_correspondence(BivarPoly Q, Provenance prov, double tol) {
    BivarPoly t = Q.trimmed();
    check_no_fibers(t, tol);
    Correspondence C;
    C.d1 = t.deg_x();
    C.d2 = t.deg_y();
    C.Q = std::move(t);
    C.provenance = prov;
    return C;
}

} // namespace

Correspondence from_pair(const HomRationalMap& f, const HomRationalMap& g, double tol) {
    ReducedForm rf = reduce(f, tol), rg = reduce(g, tol);
    if (rf.hole_degree() > 0 || rg.hole_degree() > 0)
        fail("DegenerateInput", "coincidence locus needs hole-free maps");
    // Q(x, y) = P_f(x) Q_g(y) - Q_f(x) P_g(y), padded to the formal degrees.
    BivarPoly T(f.degree(), g.degree());
    for (int i = 0; i <= f.degree(); ++i)
        for (int j = 0; j <= g.degree(); ++j)
            T.set_coeff(i, j,
                        f.P().coeff(i) * g.Q().coeff(j) - f.Q().coeff(i) * g.P().coeff(j));
    return make_correspondence(std::move(T), Provenance::FromPair, tol);
}

Correspondence from_uniformizer(const HomRationalMap& R, double tol) {
    ReducedForm rr = reduce(R, tol);
    if (rr.hole_degree() > 0) fail("DegenerateInput", "uniformizing map must be reduced");
    const int D = R.degree();
    if (D < 2) fail("DegreeMismatch", "uniformizing map needs degree 2d >= 2");
    // Clear denominators of (R(x) - R(1/y)) / (x - 1/y):
    // numerator T = P(x) Q*(y) - Q(x) P*(y), divisor xy - 1.
    ComplexPoly Ps = R.P().reversed(D), Qs = R.Q().reversed(D);
    BivarPoly T(D, D);
    for (int i = 0; i <= D; ++i)
        for (int j = 0; j <= D; ++j)
            T.set_coeff(i, j, R.P().coeff(i) * Qs.coeff(j) - R.Q().coeff(i) * Ps.coeff(j));
    BivarPoly xy1 = BivarPoly::from_coeffs({{-1.0}, {0.0, 1.0}});
    BivarPoly S = divide_out_bivar(T.trimmed(), xy1, tol); // throws NotDivisible
    Correspondence C = make_correspondence(std::move(S), Provenance::FromUniformizer, tol);
    if (C.d1 != D - 1 || C.d2 != D - 1)
        fail("BidegreeMismatch", "expected bidegree (2d-1, 2d-1)");
    return C;
}

namespace {

BranchFan solve_fiber(const BivarPoly& Q, int deg_y, const SpherePoint& base, FanDirection dir) {
    ComplexPoly fiber = Q.specialize_x(base);
    BranchFan fan;
    fan.base = base;
    fan.direction = dir;
    if (fiber.max_abs_coeff() <= 1e-13 * std::max(1.0, Q.max_abs_coeff()))
        fail("IndeterminateFiber", "correspondence polynomial vanishes on the whole fiber");
    fan.exceptional = fiber.degree() < deg_y; // images escaped to infinity
    fan.images = projective_roots(fiber, deg_y);
    return fan;
}

} // namespace

BranchFan forward_images(const Correspondence& C, const SpherePoint& x) {
    return solve_fiber(C.Q, C.d2, x, FanDirection::Forward);
}

BranchFan backward_images(const Correspondence& C, const SpherePoint& y) {
    return solve_fiber(C.Q.transposed(), C.d1, y, FanDirection::Backward);
}

std::vector<SpherePoint> fibonacci_sphere_grid(int count) {
    std::vector<SpherePoint> pts;
    pts.reserve(count);
    const double ga = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
        double zc = 1.0 - 2.0 * (k + 0.5) / count;
        double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
        double th = ga * k;
        pts.push_back(SpherePoint(cplx(r * std::cos(th), r * std::sin(th)), cplx(1.0 - zc)));
    }
    return pts;
}

std::vector<std::pair<SpherePoint, SpherePoint>> sample_variety(const Correspondence& C,
                                                                int grid_size, bool parallel) {
    auto grid = fibonacci_sphere_grid(grid_size);
    const int G = static_cast<int>(grid.size());
    std::vector<std::vector<std::pair<SpherePoint, SpherePoint>>> rows(2 * G);

#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int k = 0; k < 2 * G; ++k) {
        const bool fwd = k < G;
        const SpherePoint& base = grid[fwd ? k : k - G];
        try {
            BranchFan fan = fwd ? forward_images(C, base) : backward_images(C, base);
            for (const auto& [img, mult] : fan.images) {
                if (fwd)
                    rows[k].emplace_back(base, img);
                else
                    rows[k].emplace_back(img, base);
            }
        } catch (const Error&) {
            // indeterminate fiber at a base point: skip, sampled elsewhere
        }
    }

    std::vector<std::pair<SpherePoint, SpherePoint>> out;
    for (const auto& r : rows) out.insert(out.end(), r.begin(), r.end());
    return out;
}

namespace {

double product_dist(const std::pair<SpherePoint, SpherePoint>& a,
                    const std::pair<SpherePoint, SpherePoint>& b) {
    return std::max(spherical_distance(a.first, b.first),
                    spherical_distance(a.second, b.second));
}

double grid_mesh(const std::vector<SpherePoint>& grid) {
    // Largest nearest-neighbor spacing of the sample grid.
    double mesh = 0.0;
    for (size_t i = 0; i < grid.size(); ++i) {
        double nn = 4.0;
        for (size_t j = 0; j < grid.size(); ++j) {
            if (j == i) continue;
            nn = std::min(nn, spherical_distance(grid[i], grid[j]));
        }
        mesh = std::max(mesh, nn);
    }
    return mesh;
}

using PairSet = std::vector<std::pair<SpherePoint, SpherePoint>>;

double directed_hausdorff(const PairSet& A, const PairSet& B, bool parallel) {
    std::vector<double> mins(A.size(), 0.0);
#pragma omp parallel for schedule(static) if (parallel)
    for (long i = 0; i < static_cast<long>(A.size()); ++i) {
        double best = 4.0;
        for (const auto& b : B) best = std::min(best, product_dist(A[i], b));
        mins[i] = best;
    }
    double h = 0.0;
    for (double v : mins) h = std::max(h, v);
    return h;
}

} // namespace

double hausdorff_distance(const Correspondence& C1, const Correspondence& C2, int grid_size,
                          double* mesh_out, bool parallel) {
    if (grid_size < 16) fail("InvalidArgument", "grid_size must be >= 16");
    PairSet A = sample_variety(C1, grid_size, parallel);
    PairSet B = sample_variety(C2, grid_size, parallel);
    if (mesh_out) *mesh_out = grid_mesh(fibonacci_sphere_grid(grid_size));
    return std::max(directed_hausdorff(A, B, parallel), directed_hausdorff(B, A, parallel));
}

ConvergenceReport converges_away_from(const CorrFamily& family, const Correspondence& limit,
                                      const std::vector<SpherePoint>& S1,
                                      const std::vector<SpherePoint>& S2, double margin,
                                      int grid_size, const std::vector<double>& schedule) {
    if (margin < 0) fail("InvalidArgument", "margin must be nonnegative");
    auto keep = [&](const std::pair<SpherePoint, SpherePoint>& p) {
        for (const auto& s : S1)
            if (spherical_distance(p.first, s) < margin) return false;
        for (const auto& s : S2)
            if (spherical_distance(p.second, s) < margin) return false;
        return true;
    };
    auto restrict_set = [&](PairSet v) {
        PairSet out;
        for (auto& p : v)
            if (keep(p)) out.push_back(p);
        return out;
    };
    PairSet L = restrict_set(sample_variety(limit, grid_size));

    ConvergenceReport rep;
    rep.schedule = schedule;
    rep.mesh = grid_mesh(fibonacci_sphere_grid(grid_size));
    for (double n : schedule) {
        PairSet F = restrict_set(sample_variety(family(n), grid_size));
        double d = std::max(directed_hausdorff(F, L, true), directed_hausdorff(L, F, true));
        rep.distances.push_back(d);
    }
    rep.monotone_decreasing = true;
    for (size_t i = 1; i < rep.distances.size(); ++i)
        if (rep.distances[i] > rep.distances[i - 1] + 1e-12) rep.monotone_decreasing = false;
    return rep;
}

std::vector<FixedPointData> fixed_points(const Correspondence& C) {
    ComplexPoly diag = C.Q.diagonal();
    if (diag.max_abs_coeff() <= 1e-13 * std::max(1.0, C.Q.max_abs_coeff()))
        fail("DiagonalDegenerate", "diagonal polynomial vanishes identically");

    BivarPoly Qx = C.Q.partial_x(), Qy = C.Q.partial_y();
    std::vector<FixedPointData> out;
    for (const auto& [pt, mult] : projective_roots(diag, C.d1 + C.d2)) {
        FixedPointData fp;
        fp.point = pt;
        fp.simple = (mult == 1);
        if (fp.simple) {
            // dy/dx = -Q_x / Q_y at (pt, pt); for the point at infinity use the
            // eta-chart on both slots, where the same formula applies.
            cplx qx, qy;
            if (!pt.is_infinity(1e-9)) {
                cplx x = pt.affine();
                qx = Qx.eval(x, x);
                qy = Qy.eval(x, x);
            } else {
                // Q~(u, v) = u^d1 v^d2 Q(1/u, 1/v); multiplier at (0, 0).
                BivarPoly Qt(C.d1, C.d2);
                for (int i = 0; i <= C.d1; ++i)
                    for (int j = 0; j <= C.d2; ++j)
                        Qt.set_coeff(C.d1 - i, C.d2 - j, C.Q.coeff(i, j));
                qx = Qt.partial_x().eval(0.0, 0.0);
                qy = Qt.partial_y().eval(0.0, 0.0);
            }
            if (std::abs(qy) > 1e-14 * std::max(1.0, std::abs(qx)))
                fp.multipliers.push_back(-qx / qy);
            else
                fp.simple = false; // branch point on the diagonal
        }
        out.push_back(std::move(fp));
    }
    return out;
}

bool check_reversibility(const Correspondence& C, int n_samples, double tol, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double scale = std::max(1.0, C.Q.max_abs_coeff());
    for (int s = 0; s < n_samples; ++s) {
        cplx z(u(rng), u(rng)), w(u(rng), u(rng));
        if (std::abs(z) + std::abs(w) < 1e-3) continue;
        SpherePoint x(z, w);
        BranchFan fan;
        try {
            fan = forward_images(C, x);
        } catch (const Error&) {
            continue;
        }
        for (const auto& [y, mult] : fan.images) {
            cplx v = C.Q.eval_homog(eta(y), eta(x));
            if (std::abs(v) > tol * scale) return false;
        }
    }
    return true;
}

} // namespace corrlab
