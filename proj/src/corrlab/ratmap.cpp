#include "corrlab/ratmap.hpp"

#include <algorithm>
#include <cmath>

namespace corrlab {

namespace {

void joint_normalize(ComplexPoly& P, ComplexPoly& Q) {
    double m = std::max(P.max_abs_coeff(), Q.max_abs_coeff());
    if (m == 0.0) fail("InvalidMap", "P and Q both zero");
    P = P * cplx(1.0 / m);
    Q = Q * cplx(1.0 / m);
}

} // namespace

HomRationalMap::HomRationalMap(int degree, ComplexPoly P, ComplexPoly Q)
    : d_(degree), P_(std::move(P)), Q_(std::move(Q)) {
    if (d_ < 0) fail("InvalidMap", "negative degree");
    if (P_.degree() > d_ || Q_.degree() > d_)
        fail("InvalidMap", "declared degree below actual coefficient degree");
    joint_normalize(P_, Q_);
}

HomRationalMap HomRationalMap::polynomial(int degree, ComplexPoly p) {
    return HomRationalMap(degree, std::move(p), ComplexPoly::one());
}

SpherePoint HomRationalMap::eval_raw(const SpherePoint& p) const {
    return SpherePoint(P_.eval_homog(p, d_), Q_.eval_homog(p, d_));
}

double ReducedForm::distance_to_holes(const SpherePoint& p) const {
    double dmin = 4.0;
    for (const auto& [h, mult] : holes) dmin = std::min(dmin, spherical_distance(p, h));
    return dmin;
}

SpherePoint ReducedForm::evaluate(const SpherePoint& p, double hole_tol) const {
    if (!holes.empty() && distance_to_holes(p) <= hole_tol)
        fail("EvaluationAtHole", "point is within tolerance of a hole");
    cplx a = phi.P().eval_homog(p, phi.degree());
    cplx b = phi.Q().eval_homog(p, phi.degree());
    if (std::max(std::abs(a), std::abs(b)) == 0.0)
        fail("EvaluationAtHole", "projective value collapsed");
    return SpherePoint(a, b);
}

ReducedForm reduce(const HomRationalMap& f, double tol) {
    const int D = f.degree();
    const ComplexPoly &P = f.P(), &Q = f.Q();

    // Shared w-power: degree deficiency of both entries as homogeneous forms.
    int vw = D - std::max(P.degree(), Q.degree());
    ComplexPoly H;
    ComplexPoly phiP, phiQ;
    int phi_deg = 0;

    if (P.is_zero() || Q.is_zero()) {
        // The nonzero entry is the whole common factor; phi is constant.
        const ComplexPoly& nz = P.is_zero() ? Q : P;
        H = nz;
        phiP = P.is_zero() ? ComplexPoly::zero() : ComplexPoly::one();
        phiQ = P.is_zero() ? ComplexPoly::one() : ComplexPoly::zero();
        vw = D - nz.degree();
        phi_deg = 0;
    } else {
        int vz = std::min(P.order_at_zero(), Q.order_at_zero());
        ComplexPoly Pr = P.shifted_down(vz), Qr = Q.shifted_down(vz);
        ComplexPoly G = gcd_approx(Pr, Qr, tol);
        H = ComplexPoly::monomial(vz) * G;
        ComplexPoly rem;
        phiP = Pr.divide(G, &rem);
        phiQ = Qr.divide(G, &rem);
        phi_deg = D - vw - vz - G.degree();
    }

    ReducedForm out{std::move(H), vw, {}, HomRationalMap(phi_deg, phiP, phiQ), phi_deg};
    if (out.holes_at_infinity > 0)
        out.holes.emplace_back(SpherePoint::infinity(), out.holes_at_infinity);
    if (out.H.degree() > 0)
        for (const auto& rc : roots(out.H))
            out.holes.emplace_back(SpherePoint::finite(rc.center), rc.multiplicity);
    return out;
}

SpherePoint evaluate(const HomRationalMap& f, const SpherePoint& p, double tol) {
    return reduce(f, tol).evaluate(p);
}

std::vector<std::pair<SpherePoint, int>> critical_points(const HomRationalMap& f, double tol) {
    ReducedForm rf = reduce(f, tol);
    if (rf.degree < 1) fail("DegreeZero", "constant map has no critical points");
    if (rf.degree == 1) return {};
    ComplexPoly W = rf.phi.P().derivative() * rf.phi.Q() - rf.phi.P() * rf.phi.Q().derivative();
    return projective_roots(W, 2 * rf.degree - 2);
}

HomRationalMap conjugate(const MoebiusMap& L, const HomRationalMap& f, const MoebiusMap& M) {
    const int D = f.degree();
    // Substitute (z, w) -> (M.a z + M.b w, M.c z + M.d w) into the homogeneous
    // forms: accumulate binomial products (az + bw)^i (cz + dw)^(D - i).
    std::vector<std::vector<cplx>> top(D + 1), bot(D + 1);
    // top[i] = coefficients of (az+bw)^i, bot[i] = coefficients of (cz+dw)^i.
    top[0] = {cplx(1.0)};
    bot[0] = {cplx(1.0)};
    for (int i = 1; i <= D; ++i) {
        top[i].assign(i + 1, cplx(0.0));
        bot[i].assign(i + 1, cplx(0.0));
        for (int k = 0; k < i; ++k) {
            top[i][k + 1] += top[i - 1][k] * M.a;
            top[i][k] += top[i - 1][k] * M.b;
            bot[i][k + 1] += bot[i - 1][k] * M.c;
            bot[i][k] += bot[i - 1][k] * M.d;
        }
    }
    std::vector<cplx> Pm(D + 1, cplx(0.0)), Qm(D + 1, cplx(0.0));
    for (int i = 0; i <= D; ++i) {
        cplx pc = f.P().coeff(i), qc = f.Q().coeff(i);
        if (pc == cplx(0.0) && qc == cplx(0.0)) continue;
        // (az+bw)^i (cz+dw)^(D-i): convolve the two expansions.
        for (int s = 0; s <= i; ++s)
            for (int t = 0; t <= D - i; ++t) {
                cplx mono = top[i][s] * bot[D - i][t];
                Pm[s + t] += pc * mono;
                Qm[s + t] += qc * mono;
            }
    }
    // Post-compose with L.
    std::vector<cplx> Pn(D + 1), Qn(D + 1);
    for (int k = 0; k <= D; ++k) {
        Pn[k] = L.a * Pm[k] + L.b * Qm[k];
        Qn[k] = L.c * Pm[k] + L.d * Qm[k];
    }
    return HomRationalMap(D, ComplexPoly(std::move(Pn)), ComplexPoly(std::move(Qn)));
}

HomRationalMap RatMapFamily::at(double n) const {
    std::vector<cplx> p(num.size()), q(den.size());
    for (size_t i = 0; i < num.size(); ++i) p[i] = num[i].eval(n);
    for (size_t i = 0; i < den.size(); ++i) q[i] = den[i].eval(n);
    return HomRationalMap(degree, ComplexPoly(std::move(p)), ComplexPoly(std::move(q)));
}

namespace {

std::vector<cplx> joint_coeffs(const HomRationalMap& f) {
    std::vector<cplx> v(2 * (f.degree() + 1), cplx(0.0));
    for (int i = 0; i <= f.degree(); ++i) {
        v[i] = f.P().coeff(i);
        v[f.degree() + 1 + i] = f.Q().coeff(i);
    }
    return v;
}

cplx aitken_c(cplx e1, cplx e2, cplx e3) {
    cplx d1 = e2 - e1, d2 = e3 - e2;
    cplx den = d2 - d1;
    if (std::abs(den) <= 1e-14 * (std::abs(d1) + std::abs(d2)) || std::abs(den) == 0.0) return e3;
    return e3 - d2 * d2 / den;
}

std::vector<SpherePoint> probe_grid_points(int count) {
    // Spherical Fibonacci lattice mapped to projective coordinates.
    std::vector<SpherePoint> pts;
    pts.reserve(count);
    const double ga = M_PI * (3.0 - std::sqrt(5.0));
    for (int k = 0; k < count; ++k) {
        double zc = 1.0 - 2.0 * (k + 0.5) / count;
        double r = std::sqrt(std::max(0.0, 1.0 - zc * zc));
        double th = ga * k;
        double X = r * std::cos(th), Y = r * std::sin(th);
        pts.push_back(SpherePoint(cplx(X, Y), cplx(1.0 - zc)));
    }
    return pts;
}

} // namespace

LimitReport limit_of_family(const MapFamily& f, int degree, const std::vector<double>& samples,
                            const LimitOptions& opts) {
    if (samples.size() < 4) fail("InvalidArgument", "need at least 4 samples");
    std::vector<std::vector<cplx>> vecs;
    for (double n : samples) {
        HomRationalMap fn = f(n);
        if (fn.degree() != degree) fail("InvalidArgument", "family degree mismatch");
        vecs.push_back(joint_coeffs(fn));
    }
    const size_t L = vecs.back().size();

    // Pivot normalization: divide by the entry that is largest at the last
    // sample, making the sequence scale- and phase-aligned.
    size_t pivot = 0;
    for (size_t i = 1; i < L; ++i)
        if (std::abs(vecs.back()[i]) > std::abs(vecs.back()[pivot])) pivot = i;
    for (auto& v : vecs) {
        cplx pv = v[pivot];
        if (std::abs(pv) == 0.0) fail("NotCauchy", "pivot coefficient vanishes along the family");
        for (auto& e : v) e /= pv;
    }

    auto diff = [&](const std::vector<cplx>& a, const std::vector<cplx>& b) {
        double m = 0;
        for (size_t i = 0; i < L; ++i) m = std::max(m, std::abs(a[i] - b[i]));
        return m;
    };
    size_t k = vecs.size();
    double d32 = diff(vecs[k - 1], vecs[k - 2]);
    double d21 = diff(vecs[k - 2], vecs[k - 3]);

    std::vector<cplx> lim(L);
    if (d32 < opts.tol && d21 < opts.tol) {
        lim = vecs[k - 1];
    } else if (d32 < 0.5 * d21) {
        std::vector<cplx> ea(L), eb(L);
        double agree = 0;
        for (size_t i = 0; i < L; ++i) {
            ea[i] = aitken_c(vecs[k - 4][i], vecs[k - 3][i], vecs[k - 2][i]);
            eb[i] = aitken_c(vecs[k - 3][i], vecs[k - 2][i], vecs[k - 1][i]);
            agree = std::max(agree, std::abs(ea[i] - eb[i]));
        }
        if (agree >= opts.tol) fail("NotCauchy", "extrapolated limits disagree");
        lim = eb;
    } else {
        fail("NotCauchy", "coefficients are not settling along the sample schedule");
    }

    ComplexPoly Pl(std::vector<cplx>(lim.begin(), lim.begin() + degree + 1));
    ComplexPoly Ql(std::vector<cplx>(lim.begin() + degree + 1, lim.end()));
    HomRationalMap limit_map(degree, Pl, Ql);
    LimitReport rep{reduce(limit_map, opts.tol), samples, {}, {}};

    for (auto& v : vecs) {
        double m = 0;
        for (size_t i = 0; i < L; ++i) m = std::max(m, std::abs(v[i] - lim[i]));
        rep.drift.push_back(m);
    }

    // Compact-convergence diagnostic on a probe grid away from the holes.
    auto grid = probe_grid_points(opts.probe_grid);
    for (double n : samples) {
        HomRationalMap fn = f(n);
        double defect = 0;
        for (const auto& p : grid) {
            if (rep.limit.distance_to_holes(p) < opts.hole_margin) continue;
            defect = std::max(defect,
                              spherical_distance(fn.eval_raw(p), rep.limit.evaluate(p)));
        }
        rep.probe_defect.push_back(defect);
    }
    return rep;
}

RescalingLimitReport rescaling_limit(const MapFamily& f, int degree, const RescalingSequence& A,
                                     const RescalingSequence& B, const LimitOptions& opts) {
    if (A.sample_indices != B.sample_indices)
        fail("InvalidArgument", "rescaling pair needs a shared sample grid");
    MapFamily conj = [&f, &A, &B](double n) {
        return conjugate(B.at(n).inverse(), f(n), A.at(n));
    };
    LimitReport rep = limit_of_family(conj, degree, A.sample_indices, opts);
    RescalingStatus st =
        rep.limit.degree >= 1 ? RescalingStatus::RescalingLimit : RescalingStatus::DegreeZero;
    return {std::move(rep), st};
}

namespace {

// Projective pair of expressions (numerator : denominator).
struct ExprPoint {
    Expr num, den;
};

ExprPoint apply_sym(const std::array<Expr, 4>& m, const ExprPoint& p) {
    return {m[0] * p.num + m[1] * p.den, m[2] * p.num + m[3] * p.den};
}

ExprPoint apply_map_sym(const RatMapFamily& f, const ExprPoint& p) {
    // sum_i c_i(n) N^i D^(deg - i) for numerator and denominator rows.
    int D = f.degree;
    std::vector<Expr> npow(D + 1), dpow(D + 1);
    npow[0] = Expr::constant(1.0);
    dpow[0] = Expr::constant(1.0);
    for (int i = 1; i <= D; ++i) {
        npow[i] = npow[i - 1] * p.num;
        dpow[i] = dpow[i - 1] * p.den;
    }
    Expr P = Expr::constant(0.0), Q = Expr::constant(0.0);
    for (int i = 0; i <= D; ++i) {
        Expr mono = npow[i] * dpow[D - i];
        P = P + f.num[i] * mono;
        Q = Q + f.den[i] * mono;
    }
    return {P, Q};
}

} // namespace

RescalingSequence find_corescaling(const RatMapFamily& f, const RescalingSequence& A,
                                   const std::array<SpherePoint, 3>& probes, double tol) {
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (spherical_distance(probes[i], probes[j]) < 0.5)
                fail("InvalidArgument", "probes must be pairwise separated by >= 0.5");

    std::array<ExprPoint, 3> v;
    for (int i = 0; i < 3; ++i) {
        ExprPoint p{Expr::constant(probes[i].z), Expr::constant(probes[i].w)};
        v[i] = apply_map_sym(f, apply_sym(A.entries, p));
    }
    // Moebius sending 0, 1, inf to v0, v1, v2 (projective targets).
    // columns: t1 = v0.den * v1.num - v0.num * v1.den, t0 = v2.num * v1.den - v2.den * v1.num
    Expr t1 = v[0].den * v[1].num - v[0].num * v[1].den;
    Expr t0 = v[2].num * v[1].den - v[2].den * v[1].num;
    RescalingSequence B = RescalingSequence::from_entries(
        v[2].num * t1, v[0].num * t0, v[2].den * t1, v[0].den * t0, A.sample_indices);

    // Probe images may legitimately cluster on the sphere for large n; the
    // heuristic fails only when the interpolating matrix degenerates: colliding
    // images make det(B_n) vanish relative to the entry scale.
    double n0 = A.sample_indices.front();
    {
        cplx e0 = B.entries[0].eval(n0), e1 = B.entries[1].eval(n0);
        cplx e2 = B.entries[2].eval(n0), e3 = B.entries[3].eval(n0);
        double sup = std::max({std::abs(e0), std::abs(e1), std::abs(e2), std::abs(e3)});
        double det = std::abs(e0 * e3 - e1 * e2);
        if (!(det > tol * sup * sup))
            fail("ProbeCollapse", "probe images collide: interpolating matrix degenerates");
    }
    try {
        for (double n : B.sample_indices) B.at(n); // invertibility across the grid
    } catch (const Error&) {
        fail("ProbeCollapse", "interpolating matrix is singular on the sample grid");
    }
    return B;
}

VdReport vd_membership(const HomRationalMap& R, int d, double tol) {
    if (R.degree() != 2 * d) fail("DegreeMismatch", "vd_membership needs deg R = 2d");
    ComplexPoly W = R.P().derivative() * R.Q() - R.P() * R.Q().derivative();
    if (W.is_zero()) fail("DegreeMismatch", "derivative numerator vanished");
    const int formal = 4 * d - 2;
    ComplexPoly Wrev = W.reversed(formal); // numerator of R' o eta

    double wscale = W.max_abs_coeff();
    VdReport rep;
    // R'(x) = W(x)/Q(x)^2; at +-1 vanishing of W is what matters.
    rep.dR_at_one = W.eval(cplx(1.0)) / wscale;
    rep.dR_at_minus_one = W.eval(cplx(-1.0)) / wscale;
    bool ok = std::abs(rep.dR_at_one) <= tol && std::abs(rep.dR_at_minus_one) <= tol;
    for (int j = 1; j <= d - 1; ++j) {
        double scale = 1.0;
        cplx s = subresultant_coeff(W, Wrev, 2 * j, formal, formal, &scale);
        double rel = std::abs(s) / scale;
        rep.sres_rel.push_back(rel);
        if (rel > tol) ok = false;
    }
    rep.verdict = ok;
    return rep;
}

} // namespace corrlab
