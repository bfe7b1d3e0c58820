#include "corrlab/fuchsian.hpp"

#include <algorithm>
#include <cmath>

namespace corrlab {

namespace {

double wrap_angle(double t) {
    double w = std::fmod(t, 2.0 * M_PI);
    if (w < 0) w += 2.0 * M_PI;
    return w;
}

} // namespace

IdealPolygon IdealPolygon::regular(int d) {
    if (d < 2) fail("InvalidArgument", "ideal polygon needs d >= 2");
    IdealPolygon poly;
    poly.d = d;
    for (int k = 0; k < 2 * d; ++k) poly.vertices.push_back(std::polar(1.0, M_PI * k / d));
    return poly;
}

SidePairingSet build_group(int d) {
    IdealPolygon poly = IdealPolygon::regular(d);
    SidePairingSet set;
    set.polygon = poly;
    set.sigma.resize(2 * d);
    // Side k spans vertices v_k, v_{k+1}. Its geodesic is the circle through
    // them orthogonal to the unit circle, center exp(i(2k+1)pi/2d)/cos(pi/2d).
    // Conjugation composed with inversion in that circle gives the pairing
    // g(z) = (conj(c) z - 1)/(z - c): endpoints go to their conjugates, the
    // disk is preserved, orientation is preserved.
    for (int k = 0; k < 2 * d; ++k) {
        set.sigma[k] = (2 * d - 1 - k + 2 * d) % (2 * d);
        cplx c = std::polar(1.0 / std::cos(M_PI / (2 * d)), M_PI * (2 * k + 1) / (2 * d));
        set.side_map.push_back(MoebiusMap(std::conj(c), -1.0, 1.0, -c));
    }
    // Construction invariants: endpoints map to conjugates, pairing of the
    // paired side is the inverse, and the disk is preserved.
    for (int k = 0; k < 2 * d; ++k) {
        const MoebiusMap& g = set.side_map[k];
        for (cplx v : {poly.vertices[k], poly.vertices[(k + 1) % (2 * d)]}) {
            SpherePoint img = apply(g, SpherePoint::finite(v));
            if (spherical_distance(img, SpherePoint::finite(std::conj(v))) > 1e-12)
                fail("InternalError", "side pairing does not conjugate endpoints");
        }
        SpherePoint origin = apply(g, SpherePoint::finite(0.0));
        if (std::abs(origin.affine()) >= 1.0)
            fail("InternalError", "side pairing does not preserve the disk");
    }
    return set;
}

int BowenSeriesMap::arc_of(double t) const {
    const int n = 2 * d();
    double w = wrap_angle(t);
    int k = static_cast<int>(std::floor(w * n / (2.0 * M_PI)));
    return std::min(k, n - 1);
}

double BowenSeriesMap::eval(double t) const {
    const MoebiusMap& g = pairing.side_map[arc_of(t)];
    SpherePoint img = apply(g, SpherePoint::finite(std::polar(1.0, t)));
    return wrap_angle(std::arg(img.affine()));
}

double BowenSeriesMap::derivative(double t) const {
    // |g'(z)| = r^2 / |z - c|^2 on the unit circle
    int k = arc_of(t);
    double r = std::tan(M_PI / (2.0 * d()));
    cplx c = std::polar(1.0 / std::cos(M_PI / (2.0 * d())), M_PI * (2 * k + 1) / (2.0 * d()));
    cplx z = std::polar(1.0, t);
    return r * r / std::norm(z - c);
}

double BowenSeriesMap::lift(double t) const {
    // The arc behind side k maps over the complement of arc sigma(k), an
    // angular span of (2d-1) * pi / d; endpoint lifts are exact multiples.
    const int n = 2 * d();
    double w = wrap_angle(t);
    int k = arc_of(w);
    double tk = 2.0 * M_PI * k / n;
    double base = k * (2.0 * d() - 1.0) * M_PI / d();
    double a0 = eval(tk);
    double at = eval(w);
    double inc = wrap_angle(at - a0);
    return base + inc;
}

double BowenSeriesMap::lift_inverse(double y) const {
    double lo = 0.0, hi = 2.0 * M_PI;
    for (int it = 0; it < 52; ++it) {
        double mid = 0.5 * (lo + hi);
        if (lift(mid) < y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

BowenSeriesMap bowen_series(int d) { return BowenSeriesMap{build_group(d)}; }

int winding_degree(const BowenSeriesMap& A) {
    // Unwrap A along a fine sampling of the circle and count full turns.
    const int N = 4096 * A.d();
    double prev = A.eval(0.0);
    double total = 0.0;
    for (int i = 1; i <= N; ++i) {
        double t = 2.0 * M_PI * i / N;
        double cur = A.eval(t >= 2.0 * M_PI ? 0.0 : t);
        double delta = cur - prev;
        while (delta < -M_PI) delta += 2.0 * M_PI;
        while (delta > M_PI) delta -= 2.0 * M_PI;
        total += delta;
        prev = cur;
    }
    double turns = total / (2.0 * M_PI);
    int rounded = static_cast<int>(std::lround(turns));
    if (std::abs(turns - rounded) > 1e-6)
        fail("NonCovering", "winding number is not an integer: " + std::to_string(turns));
    if (rounded != 2 * A.d() - 1)
        fail("NonCovering", "winding degree " + std::to_string(rounded));
    return rounded;
}

VertexCycle vertex_cycle_element(const SidePairingSet& pairing, int vertex_index) {
    const int n = 2 * pairing.d();
    if (vertex_index < 0 || vertex_index >= n) fail("IndexOutOfRange", "vertex index");

    // Follow the side-pairing cycle: from (vertex w, incident side s), apply
    // the pairing of s (w goes to its conjugate vertex), then continue with
    // the other side incident at the image that is not the paired side.
    int w = vertex_index;
    int s = vertex_index; // side starting at the vertex
    MoebiusMap M = MoebiusMap::identity();
    for (int steps = 0; steps < 4 * n + 4; ++steps) {
        M = pairing.side_map[s] * M;
        w = (n - w) % n; // conjugate vertex
        int paired = pairing.sigma[s];
        // sides incident at w: w and w-1
        int other = (paired == w) ? (w - 1 + n) % n : w;
        s = other;
        if (w == vertex_index && s == vertex_index) break;
    }
    if (w != vertex_index || s != vertex_index)
        fail("InternalError", "vertex cycle did not close");

    VertexCycle out;
    out.element = M;
    cplx tr = M.trace();
    out.trace_squared = tr * tr; // det already normalized to 1
    out.parabolic = std::abs(out.trace_squared - cplx(4.0)) <= 1e-8;
    return out;
}

namespace {

// Model-map symbols of t to the given depth: which interval between
// consecutive depth-1 preimages of 0 under t -> (2d-1) t.
void model_symbols(double t, int degree_k, int depth, std::vector<int>& out) {
    out.resize(depth);
    double x = wrap_angle(t);
    for (int i = 0; i < depth; ++i) {
        double scaled = x * degree_k / (2.0 * M_PI);
        int j = std::min(static_cast<int>(std::floor(scaled)), degree_k - 1);
        out[i] = j;
        x = wrap_angle(degree_k * x);
    }
}

} // namespace

double CircleConjugacy::evaluate(double t) const {
    const int k = 2 * map.d() - 1;
    std::vector<int> symbols;
    model_symbols(t, k, depth, symbols);
    double x = wrap_angle(t);
    for (int i = 0; i < depth; ++i) x = wrap_angle(k * x);
    // Pull the residual back through the inverse branches, innermost first.
    double y = x;
    for (int i = depth - 1; i >= 0; --i) y = map.lift_inverse(y + 2.0 * M_PI * symbols[i]);
    return y;
}

double CircleConjugacy::defect(int n_samples) const {
    const int k = 2 * map.d() - 1;
    double worst = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        double t = 2.0 * M_PI * (i + 0.5) / n_samples;
        double lhs = evaluate(wrap_angle(k * t));
        double rhs = map.eval(evaluate(t));
        double diff = std::abs(lhs - rhs);
        diff = std::min(diff, 2.0 * M_PI - diff);
        worst = std::max(worst, diff);
    }
    return worst;
}

CircleConjugacy conjugacy(const BowenSeriesMap& A, int depth) {
    if (depth < 1) fail("InvalidArgument", "conjugacy depth must be >= 1");
    const int k = 2 * A.d() - 1;

    CircleConjugacy conj{A, depth, {}};

    // Enumerate the matched preimage lattice up to a memory cap; evaluation
    // refines beyond it pointwise.
    int table_depth = 0;
    long count = 1;
    while (table_depth < depth && count * k <= 20000) {
        count *= k;
        ++table_depth;
    }
    std::vector<double> apts{0.0};
    for (int level = 0; level < table_depth; ++level) {
        std::vector<double> next;
        next.reserve(apts.size() * k);
        for (double th : apts)
            for (int j = 0; j < k; ++j) next.push_back(A.lift_inverse(th + 2.0 * M_PI * j));
        std::sort(next.begin(), next.end());
        apts = std::move(next);
    }
    if (static_cast<long>(apts.size()) != count)
        fail("CombinatoricsMismatch", "preimage counts differ between the maps");
    for (long j = 0; j < count; ++j)
        conj.table.emplace_back(2.0 * M_PI * j / count, apts[j]);
    // anchored at the common fixed point
    if (std::abs(conj.table.front().second) > 1e-9)
        fail("CombinatoricsMismatch", "conjugacy is not anchored at angle 0");
    return conj;
}

} // namespace corrlab
