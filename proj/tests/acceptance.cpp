// Acceptance suite: one self-contained check per criterion, one pass/fail
// line each, nonzero exit code when anything fails. Run via ctest or
// directly; an optional argument filters criteria by number.
#include <omp.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "corrlab/fuchsian.hpp"
#include "corrlab/io.hpp"
#include "corrlab/render.hpp"

using namespace corrlab;

namespace {

struct Checker {
    bool ok = true;
    std::string first_failure;

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            first_failure = what;
        }
    }
};

std::mt19937 rng(20260810);

cplx rand_c(double radius) {
    std::uniform_real_distribution<double> u(-radius, radius);
    return cplx(u(rng), u(rng));
}

bool multiset_eta_closed(std::vector<SpherePoint> pts, double tol) {
    std::vector<bool> used(pts.size(), false);
    for (const auto& p : pts) {
        SpherePoint ep = eta(p);
        bool found = false;
        for (size_t j = 0; j < pts.size(); ++j) {
            if (used[j]) continue;
            if (spherical_distance(pts[j], ep) < tol) {
                used[j] = true;
                found = true;
                break;
            }
        }
        if (!found) return false;
    }
    return true;
}

// ---- criteria ------------------------------------------------------------

// 1. from_uniformizer on the normal forms yields bidegree (2d-1, 2d-1) for
//    d in {2,3,4}, 20 random coefficient draws each.
void criterion_bidegree(Checker& c) {
    for (int d : {2, 3, 4}) {
        for (int t = 0; t < 20; ++t) {
            std::vector<cplx> coeffs;
            for (int k = 0; k < 2 * d - 3; ++k) coeffs.push_back(rand_c(2.0));
            Correspondence C = from_uniformizer(normal_form(d, coeffs));
            c.require(C.d1 == 2 * d - 1 && C.d2 == 2 * d - 1,
                      "bidegree (" + std::to_string(C.d1) + "," + std::to_string(C.d2) +
                          ") at d = " + std::to_string(d));
        }
    }
}

// 2. every from_uniformizer correspondence passes check_reversibility at 200
//    samples, tol 1e-8.
void criterion_reversibility(Checker& c) {
    for (int d : {2, 3, 4}) {
        for (int t = 0; t < 5; ++t) {
            std::vector<cplx> coeffs;
            for (int k = 0; k < 2 * d - 3; ++k) coeffs.push_back(rand_c(2.0));
            Correspondence C = from_uniformizer(normal_form(d, coeffs));
            c.require(check_reversibility(C, 200, 1e-8), "reversibility at d = " + std::to_string(d));
        }
    }
    for (int t = 0; t < 5; ++t)
        c.require(check_reversibility(from_uniformizer(family_map(rand_c(2.0))), 200, 1e-8),
                  "reversibility of R_c");
}

// 3. Q(x, eta(x)) is proportional to the numerator of R'(x): one global
//    constant per map, relative 1e-8 at 50 probes, 10 random R_c. The
//    right-hand side is the independent derivative route P'Q - PQ'.
void criterion_diagonal_identity(Checker& c) {
    for (int t = 0; t < 10; ++t) {
        HomRationalMap R = family_map(rand_c(2.0));
        Correspondence C = from_uniformizer(R);
        ComplexPoly W = R.P().derivative() * R.Q() - R.P() * R.Q().derivative();
        cplx ratio(0.0);
        bool have_ratio = false;
        int checked = 0;
        while (checked < 50) {
            cplx x = rand_c(2.0);
            if (std::abs(x) < 0.15 || std::abs(std::abs(x) - 1.0) < 0.05) continue;
            SpherePoint xp = SpherePoint::finite(x);
            cplx wv = W.eval(x);
            if (std::abs(wv) < 1e-6) continue;
            cplx denorm = std::pow(xp.w, C.d1) * std::pow(eta(xp).w, C.d2);
            cplx lhs = C.Q.eval_homog(xp, eta(xp)) / denorm * std::pow(x, C.d2);
            ++checked;
            if (!have_ratio) {
                ratio = lhs / wv;
                have_ratio = true;
            } else {
                c.require(std::abs(lhs / wv - ratio) <= 1e-8 * std::abs(ratio),
                          "diagonal identity ratio drifts");
            }
        }
    }
}

// 4. critical multisets of R_c away from the poles are closed under inversion
//    and vd_membership holds at 1e-8, over 100 random c; 20 random degree-6
//    maps fail the membership test.
void criterion_vd(Checker& c) {
    for (int t = 0; t < 100; ++t) {
        cplx cc = rand_c(10.0);
        HomRationalMap R = family_map(cc);
        std::vector<SpherePoint> free_pts;
        for (const auto& [p, m] : critical_points(R)) {
            if (p.is_infinity(1e-9) || std::abs(p.z) < 1e-9) continue;
            for (int i = 0; i < m; ++i) free_pts.push_back(p);
        }
        c.require(free_pts.size() == 6, "six critical points away from the poles");
        bool has_one = false, has_minus_one = false;
        for (const auto& p : free_pts) {
            if (spherical_distance(p, SpherePoint::finite(1.0)) < 1e-8) has_one = true;
            if (spherical_distance(p, SpherePoint::finite(-1.0)) < 1e-8) has_minus_one = true;
        }
        c.require(has_one && has_minus_one, "critical points contain +-1");
        c.require(multiset_eta_closed(free_pts, 1e-8), "critical multiset eta-closed");
        c.require(vd_membership(R, 3, 1e-8).verdict, "vd_membership true on the family");
    }
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
        std::vector<cplx> a(7), b(7);
        for (auto& v : a) v = cplx(u(rng), u(rng));
        for (auto& v : b) v = cplx(u(rng), u(rng));
        c.require(!vd_membership(HomRationalMap(6, ComplexPoly(a), ComplexPoly(b)), 3, 1e-8).verdict,
                  "vd_membership false on a random map");
    }
}

// 5. limit_of_family on f_n(z) = z(z-1-1/n)/(z-1): hole {1} within 1e-6, phi
//    the identity, compact-convergence defect < 1e-3 at n = 1e6 and
//    decreasing along the schedule.
void criterion_hole_recovery(Checker& c) {
    MapFamily f = [](double n) {
        return HomRationalMap(2, ComplexPoly({0.0, -(1.0 + 1.0 / n), 1.0}), ComplexPoly({-1.0, 1.0}));
    };
    LimitReport rep = limit_of_family(f, 2, RescalingSequence::default_samples());
    c.require(rep.limit.degree == 1, "limit degree 1");
    c.require(rep.limit.holes.size() == 1, "single hole");
    c.require(spherical_distance(rep.limit.holes[0].first, SpherePoint::finite(1.0)) < 1e-6,
              "hole at 1 within 1e-6");
    SpherePoint probe = SpherePoint::finite(cplx(0.4, 0.3));
    c.require(spherical_distance(rep.limit.evaluate(probe), probe) < 1e-9, "phi is the identity");
    c.require(rep.probe_defect.back() < 1e-3, "defect below 1e-3 at n = 1e6");
    for (size_t i = 1; i < rep.probe_defect.size(); ++i)
        c.require(rep.probe_defect[i] <= rep.probe_defect[i - 1] + 1e-12, "defect decreasing");
}

// 6. the z^2 + n scenario: three-probe co-rescaling gives the degree-2 limit
//    z^2, two co-rescalings are equivalent/bounded, the identity co-rescaling
//    yields degree 0.
void criterion_rescaling(Checker& c) {
    RatMapFamily fam;
    fam.degree = 2;
    fam.num = {Expr::var_n(), Expr::constant(0.0), Expr::constant(1.0)};
    fam.den = {Expr::constant(1.0), Expr::constant(0.0), Expr::constant(0.0)};
    auto id = RescalingSequence::constant(MoebiusMap::identity());

    std::array<SpherePoint, 3> probes{SpherePoint::finite(0.0), SpherePoint::finite(1.0),
                                      SpherePoint::infinity()};
    RescalingSequence B1 = find_corescaling(fam, id, probes);
    RescalingLimitReport r1 = rescaling_limit(fam.fn(), 2, id, B1);
    c.require(r1.status == RescalingStatus::RescalingLimit, "co-rescaled limit exists");
    c.require(r1.report.limit.degree == 2, "limit degree 2");
    SpherePoint p = SpherePoint::finite(cplx(1.3, -0.4));
    c.require(spherical_distance(r1.report.limit.evaluate(p),
                                 SpherePoint::finite(cplx(1.3, -0.4) * cplx(1.3, -0.4))) < 1e-6,
              "limit is z^2");

    std::array<SpherePoint, 3> probes2{SpherePoint::finite(cplx(0.0, 1.0)),
                                       SpherePoint::finite(-2.0), SpherePoint::infinity()};
    RescalingSequence B2 = find_corescaling(fam, id, probes2);
    PairRegime regime = classify_rescaling_pair(B1, B2).regime;
    c.require(regime == PairRegime::Equivalent || regime == PairRegime::Bounded,
              "co-rescalings unique up to bounded equivalence");

    RescalingLimitReport r0 = rescaling_limit(fam.fn(), 2, id, id);
    c.require(r0.status == RescalingStatus::DegreeZero, "identity co-rescaling degenerates");
}

// 7. synthetic rescaling families from 10 random trees (<= 6 vertices)
//    reconstruct isomorphic trees; clique bound fixtures.
void criterion_tree_roundtrip(Checker& c) {
    for (int trial = 0; trial < 10; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);
        TreeOfSpheres t;
        t.n = n;
        t.auxiliary.assign(n, false);
        for (int v = 1; v < n; ++v) t.edges.push_back({static_cast<int>(rng() % v), v});
        std::uniform_real_distribution<double> u(-1.5, 1.5);
        for (int v = 0; v < n; ++v) {
            std::vector<cplx> used;
            for (int w : t.neighbors(v)) {
                cplx m;
                for (;;) {
                    m = cplx(u(rng), u(rng));
                    bool okm = true;
                    for (cplx o : used)
                        if (std::abs(m - o) < 0.4) okm = false;
                    if (okm) break;
                }
                used.push_back(m);
                t.markings[{v, w}] = SpherePoint::finite(m);
            }
        }
        auto fam = make_rescaling_family(t);
        auto res = reconstruct_tree(fam, reconstruction_samples());
        c.require(res.tree.n == t.n, "vertex count preserved");
        c.require(canonical_tree_signature(res.tree) == canonical_tree_signature(t),
                  "reconstructed tree isomorphic to the source");
    }

    AdjacencyGraph edge;
    edge.n = 2;
    edge.edges = {{0, 1}};
    std::map<std::pair<int, int>, int> unit{{{0, 1}, 1}, {{1, 0}, 1}};
    c.require(clique_bound_check(edge, unit), "two-vertex fixture passes the clique bound");
    AdjacencyGraph triangle;
    triangle.n = 3;
    triangle.edges = {{0, 1}, {1, 2}, {0, 2}};
    c.require(!clique_bound_check(triangle, {}), "triangle violates the clique bound");
    std::map<std::pair<int, int>, int> heavy{{{0, 1}, 2}, {{1, 0}, 1}};
    c.require(!clique_bound_check(edge, heavy), "local degree 2 violates the clique bound");
}

// 8. domination classification fixtures: exceptional, regular, invalid.
void criterion_domination(Checker& c) {
    auto one_vertex = [](int degree) {
        Signature k;
        k.tree.n = 1;
        k.tree.auxiliary = {false};
        k.tau = {0};
        k.delta = {degree};
        return k;
    };
    auto two_vertex = [](int d0, int d1, int l01, int l10) {
        Signature k;
        k.tree.n = 2;
        k.tree.edges = {{0, 1}};
        k.tree.auxiliary = {false, false};
        k.tau = {1, 0};
        k.delta = {d0, d1};
        k.local_delta[{0, 1}] = l01;
        k.local_delta[{1, 0}] = l10;
        return k;
    };
    c.require(check_domination(one_vertex(2), two_vertex(1, 1, 1, 1), {0, 0}).cls ==
                  DominationClass::Exceptional,
              "saturating two-vertex fixture is exceptional");
    auto reg = two_vertex(2, 1, 1, 1);
    reg.tau = {0, 1};
    c.require(check_domination(one_vertex(3), reg, {0, 0}).cls == DominationClass::Regular,
              "(2,1) fixture is regular");
    c.require(check_domination(one_vertex(4), reg, {0, 0}).cls == DominationClass::Invalid,
              "degree-sum violation is invalid");
}

// 9. Bowen-Series: winding degree 2d-1 for d in 2..6, Markov endpoint closure
//    to 1e-10, parabolic vertex cycles to 1e-8, conjugacy defect at depth 12
//    below the depth-6 defect and below 1e-3 on 1e4 samples for d = 3.
void criterion_bowen(Checker& c) {
    for (int d = 2; d <= 6; ++d)
        c.require(winding_degree(bowen_series(d)) == 2 * d - 1, "winding degree 2d-1");
    for (int d : {2, 3, 4}) {
        BowenSeriesMap A = bowen_series(d);
        for (int k = 0; k < 2 * d; ++k) {
            double image = A.eval(A.pairing.polygon.vertex_angle(k));
            double best = 1e9;
            for (int m = 0; m < 2 * d; ++m) {
                double diff = std::abs(image - A.pairing.polygon.vertex_angle(m));
                best = std::min(best, std::min(diff, 2.0 * M_PI - diff));
            }
            c.require(best <= 1e-10, "Markov endpoint closure");
        }
        for (int v = 0; v < 2 * d; ++v) {
            VertexCycle cyc = vertex_cycle_element(A.pairing, v);
            c.require(std::abs(cyc.trace_squared - cplx(4.0)) <= 1e-8, "parabolic vertex cycle");
        }
    }
    BowenSeriesMap A3 = bowen_series(3);
    double d6 = conjugacy(A3, 6).defect(10000);
    double d12 = conjugacy(A3, 12).defect(10000);
    c.require(d12 < d6, "conjugacy defect decreases from depth 6 to 12");
    c.require(d12 < 1e-3, "conjugacy defect below 1e-3 at depth 12");
}

// 10. Hausdorff sanity: identity, exact symmetry, sampled triangle inequality
//     within twice the mesh; continuity d(C_{c+1/n}, C_c) < 1e-2 at n = 1e3
//     with grid 64, decreasing along n in {10, 100, 1000}.
void criterion_hausdorff(Checker& c) {
    Correspondence C0 = from_uniformizer(family_map(cplx(0.3, 0.1)));
    Correspondence C1 = from_uniformizer(family_map(cplx(0.8, -0.2)));
    Correspondence Ch = from_uniformizer(family_map(cplx(0.55, -0.05)));

    double mesh = 0.0;
    c.require(hausdorff_distance(C0, C0, 32, &mesh) == 0.0, "d(C, C) = 0");
    c.require(hausdorff_distance(C0, C1, 32) == hausdorff_distance(C1, C0, 32),
              "exact symmetry");
    double d01 = hausdorff_distance(C0, C1, 32, &mesh);
    double d0h = hausdorff_distance(C0, Ch, 32);
    double dh1 = hausdorff_distance(Ch, C1, 32);
    c.require(d01 <= d0h + dh1 + 2.0 * mesh, "triangle inequality within twice the mesh");

    cplx cc(0.3, 0.1);
    double prev = 1e9;
    for (double n : {10.0, 100.0, 1000.0}) {
        double d = hausdorff_distance(from_uniformizer(family_map(cc + 1.0 / n)),
                                      from_uniformizer(family_map(cc)), 64);
        c.require(d <= prev + 1e-12, "distance decreasing along n");
        prev = d;
    }
    c.require(prev < 1e-2, "distance below 1e-2 at n = 1e3");
}

// 11. renderer determinism and symmetry at 64x64; parameter-plane structured
//     set nonempty and strictly inside the radius-4 window.
void criterion_renderers(Checker& c) {
    GridSpec dgrid{cplx(0.0), 2.0, 64};
    BasinBudget dbud; // depth 40, width 2000 defaults
    PlaneImage a = render_dynamical_plane(cplx(0.0), dgrid, dbud);
    PlaneImage b = render_dynamical_plane(cplx(0.0), dgrid, dbud);
    c.require(fnv1a64(to_ppm(a)) == fnv1a64(to_ppm(b)), "stable dynamical-plane hash");
    c.require(eta_symmetry_defect(a) <= 0.01, "eta-symmetry defect within 1 percent");

    GridSpec pgrid{cplx(0.0), 4.0, 64};
    BasinBudget pbud;
    pbud.depth_cap = 28;
    pbud.width_cap = 256;
    PlaneImage pp = render_parameter_plane(pgrid, pbud);
    double rlo, rhi, ilo, ihi;
    bool nonempty = structured_bounding_box(pp, rlo, rhi, ilo, ihi);
    c.require(nonempty, "structured set nonempty");
    if (nonempty) {
        double margin = 2.0 * pgrid.radius / pgrid.px; // one pixel inside the ring
        c.require(rlo > -4.0 + margin && rhi < 4.0 - margin && ilo > -4.0 + margin &&
                      ihi < 4.0 - margin,
                  "structured set strictly inside the radius-4 window");
    }
}

struct Criterion {
    int number;
    const char* name;
    std::function<void(Checker&)> fn;
};

} // namespace

int main(int argc, char** argv) {
    std::vector<Criterion> criteria{
        {1, "bidegree-contract", criterion_bidegree},
        {2, "reversibility", criterion_reversibility},
        {3, "diagonal-derivative-identity", criterion_diagonal_identity},
        {4, "eta-critical-sets-and-vd", criterion_vd},
        {5, "hole-gcd-recovery", criterion_hole_recovery},
        {6, "rescaling-limits", criterion_rescaling},
        {7, "tree-reconstruction-roundtrip", criterion_tree_roundtrip},
        {8, "domination-classification", criterion_domination},
        {9, "bowen-series", criterion_bowen},
        {10, "hausdorff-metric", criterion_hausdorff},
        {11, "renderer-determinism-symmetry", criterion_renderers},
    };

    int failures = 0;
    for (auto& cr : criteria) {
        if (argc > 1 && std::atoi(argv[1]) != cr.number) continue;
        Checker chk;
        double t0 = omp_get_wtime();
        try {
            cr.fn(chk);
        } catch (const std::exception& e) {
            chk.ok = false;
            chk.first_failure = std::string("exception: ") + e.what();
        }
        double dt = omp_get_wtime() - t0;
        if (chk.ok) {
            std::printf("[PASS] %2d %-32s (%.1f s)\n", cr.number, cr.name, dt);
        } else {
            std::printf("[FAIL] %2d %-32s (%.1f s): %s\n", cr.number, cr.name, dt,
                        chk.first_failure.c_str());
            ++failures;
        }
        std::fflush(stdout);
    }
    if (argc <= 1)
        std::printf("acceptance: %d/%zu criteria passed\n",
                    static_cast<int>(criteria.size()) - failures, criteria.size());
    return failures;
}
