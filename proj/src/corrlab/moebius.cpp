#include "corrlab/moebius.hpp"

#include <algorithm>
#include <cmath>

namespace corrlab {

SpherePoint::SpherePoint(cplx z_, cplx w_) {
    double m = std::max(std::abs(z_), std::abs(w_));
    if (!(m > 0.0) || !std::isfinite(m)) fail("InvalidPoint", "projective pair must be nonzero and finite");
    z = z_ / m;
    w = w_ / m;
}

double spherical_distance(const SpherePoint& p, const SpherePoint& q) {
    double num = 2.0 * std::abs(p.z * q.w - q.z * p.w);
    double den = std::sqrt(std::norm(p.z) + std::norm(p.w)) * std::sqrt(std::norm(q.z) + std::norm(q.w));
    return num / den;
}

MoebiusMap::MoebiusMap(cplx a_, cplx b_, cplx c_, cplx d_) {
    cplx det = a_ * d_ - b_ * c_;
    if (std::abs(det) == 0.0 || !std::isfinite(std::abs(det)))
        fail("SingularMatrix", "Moebius map needs nonzero finite determinant");
    cplx s = std::sqrt(det);
    a = a_ / s;
    b = b_ / s;
    c = c_ / s;
    d = d_ / s;
}

MoebiusMap MoebiusMap::scaling(cplx lambda) { return MoebiusMap(lambda, 0.0, 0.0, 1.0); }
MoebiusMap MoebiusMap::translation(cplx t) { return MoebiusMap(1.0, t, 0.0, 1.0); }

MoebiusMap MoebiusMap::from_images_of_zero_one_inf(const SpherePoint& p0,
                                                   const SpherePoint& p1,
                                                   const SpherePoint& pinf) {
    // M(0) = (a0:a1), M(1) = (b0:b1), M(inf) = (c0:c1):
    // columns scale as t0 = b1 c0 - b0 c1, t1 = a1 b0 - a0 b1.
    cplx a0 = p0.z, a1 = p0.w, b0 = p1.z, b1 = p1.w, c0 = pinf.z, c1 = pinf.w;
    cplx t1 = a1 * b0 - a0 * b1;
    cplx t0 = c0 * b1 - c1 * b0;
    return MoebiusMap(c0 * t1, a0 * t0, c1 * t1, a1 * t0);
}

double MoebiusMap::sup_norm() const {
    return std::max(std::max(std::abs(a), std::abs(b)), std::max(std::abs(c), std::abs(d)));
}

MoebiusMap operator*(const MoebiusMap& L, const MoebiusMap& R) {
    return MoebiusMap(L.a * R.a + L.b * R.c, L.a * R.b + L.b * R.d,
                      L.c * R.a + L.d * R.c, L.c * R.b + L.d * R.d);
}

SpherePoint apply(const MoebiusMap& M, const SpherePoint& p) {
    return SpherePoint(M.a * p.z + M.b * p.w, M.c * p.z + M.d * p.w);
}

bool commutes_with_eta(const MoebiusMap& M, double tol) {
    if (!(tol > 0)) fail("InvalidArgument", "tolerance must be positive");
    const SpherePoint probes[8] = {
        SpherePoint::finite(cplx(0.3, 0.1)),  SpherePoint::finite(cplx(-1.7, 0.4)),
        SpherePoint::finite(cplx(0.0, 2.0)),  SpherePoint::finite(cplx(5.0, -3.0)),
        SpherePoint::finite(cplx(0.0, 0.0)),  SpherePoint::infinity(),
        SpherePoint::finite(cplx(1.0, 0.0)),  SpherePoint::finite(cplx(-0.2, -0.9))};
    for (const auto& p : probes) {
        if (spherical_distance(apply(M, eta(p)), eta(apply(M, p))) > tol) return false;
    }
    return true;
}

std::vector<double> RescalingSequence::default_samples() {
    return {1e1, 1e2, 1e3, 1e4, 1e5, 1e6};
}

RescalingSequence RescalingSequence::constant(const MoebiusMap& M) {
    return from_entries(Expr::constant(M.a), Expr::constant(M.b), Expr::constant(M.c),
                        Expr::constant(M.d));
}

RescalingSequence RescalingSequence::from_entries(Expr a, Expr b, Expr c, Expr d,
                                                  std::vector<double> samples) {
    RescalingSequence s;
    s.entries = {std::move(a), std::move(b), std::move(c), std::move(d)};
    s.sample_indices = std::move(samples);
    return s;
}

MoebiusMap RescalingSequence::at(double n) const {
    return MoebiusMap(entries[0].eval(n), entries[1].eval(n), entries[2].eval(n), entries[3].eval(n));
}

std::array<cplx, 4> RescalingSequence::raw_at(double n) const {
    return {entries[0].eval(n), entries[1].eval(n), entries[2].eval(n), entries[3].eval(n)};
}

SpherePoint apply_quotient_raw(const std::array<cplx, 4>& B, const std::array<cplx, 4>& A,
                               const SpherePoint& p) {
    // adj(B) = [[d, -b], [-c, a]]
    std::array<cplx, 4> C{B[3] * A[0] - B[1] * A[2], B[3] * A[1] - B[1] * A[3],
                          -B[2] * A[0] + B[0] * A[2], -B[2] * A[1] + B[0] * A[3]};
    return SpherePoint(C[0] * p.z + C[1] * p.w, C[2] * p.z + C[3] * p.w);
}

namespace {

// Aligns the free sign of a det-1 matrix with a reference before comparing.
std::array<cplx, 4> sign_aligned(const MoebiusMap& M, const std::array<cplx, 4>& ref) {
    std::array<cplx, 4> e{M.a, M.b, M.c, M.d};
    double plus = 0, minus = 0;
    for (int i = 0; i < 4; ++i) {
        plus += std::abs(e[i] - ref[i]);
        minus += std::abs(-e[i] - ref[i]);
    }
    if (minus < plus)
        for (auto& v : e) v = -v;
    return e;
}

double entry_diff(const std::array<cplx, 4>& x, const std::array<cplx, 4>& y) {
    double m = 0;
    for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

// Aitken extrapolation of a c/n-type tail; falls back to the last value when
// the sequence has already settled.
cplx aitken(cplx e1, cplx e2, cplx e3) {
    cplx d1 = e2 - e1, d2 = e3 - e2;
    cplx den = d2 - d1;
    if (std::abs(den) <= 1e-14 * (std::abs(d1) + std::abs(d2)) || std::abs(den) == 0.0) return e3;
    return e3 - d2 * d2 / den;
}

} // namespace

PairClassification classify_rescaling_pair(const RescalingSequence& A,
                                           const RescalingSequence& B,
                                           const PairThresholds& th) {
    if (A.sample_indices != B.sample_indices)
        fail("InvalidArgument", "rescaling pair needs a shared sample grid");
    const auto& samples = A.sample_indices;
    if (samples.size() < 4) fail("InvalidArgument", "need at least 4 samples");

    std::vector<std::array<cplx, 4>> seq;
    PairClassification out;
    for (double n : samples) {
        MoebiusMap C = B.at(n).inverse() * A.at(n);
        if (seq.empty())
            seq.push_back({C.a, C.b, C.c, C.d});
        else
            seq.push_back(sign_aligned(C, seq.back()));
        double m = 0;
        for (auto& v : seq.back()) m = std::max(m, std::abs(v));
        out.norms.push_back(m);
    }

    size_t k = seq.size();
    double diff32 = entry_diff(seq[k - 1], seq[k - 2]);
    double diff21 = entry_diff(seq[k - 2], seq[k - 3]);

    auto to_map = [](const std::array<cplx, 4>& e) { return MoebiusMap(e[0], e[1], e[2], e[3]); };

    // Equivalent: entrywise Cauchy at the last three samples, raw or after
    // Aitken acceleration of a decaying tail.
    if (diff32 < th.equivalent_tol && diff21 < th.equivalent_tol) {
        out.regime = PairRegime::Equivalent;
        out.limit = to_map(seq[k - 1]);
        return out;
    }
    if (diff32 < 0.5 * diff21) {
        // Decaying tail: accept as equivalent only if Aitken extrapolations of
        // the last two sample triples agree on the limit.
        std::array<cplx, 4> ext_a, ext_b;
        for (int i = 0; i < 4; ++i) {
            ext_a[i] = aitken(seq[k - 4][i], seq[k - 3][i], seq[k - 2][i]);
            ext_b[i] = aitken(seq[k - 3][i], seq[k - 2][i], seq[k - 1][i]);
        }
        if (entry_diff(ext_a, ext_b) < th.equivalent_tol) {
            out.regime = PairRegime::Equivalent;
            out.limit = to_map(ext_b);
            return out;
        }
    }

    double m1 = out.norms[k - 3], m2 = out.norms[k - 2], m3 = out.norms[k - 1];
    if (m3 >= th.divergence_norm && m3 > m2 && m2 > m1) {
        out.regime = PairRegime::Independent;
        return out;
    }
    if (*std::max_element(out.norms.begin(), out.norms.end()) < th.divergence_norm) {
        out.regime = PairRegime::Bounded;
        return out;
    }
    fail("Inconclusive", "sampled data matches no regime within thresholds");
}

} // namespace corrlab
