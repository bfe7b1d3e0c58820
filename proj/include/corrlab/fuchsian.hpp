#pragma once

#include <vector>

#include "corrlab/moebius.hpp"

namespace corrlab {

// Regular ideal 2d-gon with vertices at the 2d-th roots of unity.
struct IdealPolygon {
    int d = 2;
    std::vector<cplx> vertices; // v_k = exp(i k pi / d), k = 0..2d-1

    static IdealPolygon regular(int d);
    double vertex_angle(int k) const { return 2.0 * M_PI * k / (2.0 * d); }
};

// Side pairings of the polygon: side k joins v_k to v_{k+1}; its pairing is
// complex conjugation composed with inversion in the side's geodesic circle,
// sending the side to its real-symmetric edge sigma(k) = 2d-1-k.
struct SidePairingSet {
    IdealPolygon polygon;
    std::vector<MoebiusMap> side_map; // pairing per side, size 2d
    std::vector<int> sigma;           // side involution

    const MoebiusMap& generator(int j) const { return side_map[j - 1]; } // g_1..g_d
    int d() const { return polygon.d; }
};

SidePairingSet build_group(int d);

// The Bowen-Series circle map of the base group: on the arc behind side k it
// acts by that side's pairing. A continuous, expansive,
// degree-(2d-1) covering of the circle with a Markov partition at the
// polygon vertices.
struct BowenSeriesMap {
    SidePairingSet pairing;

    int d() const { return pairing.d(); }
    int arc_of(double t) const;        // counterclockwise tie resolution
    double eval(double t) const;       // angle in [0, 2 pi)
    double derivative(double t) const; // |A'| along the circle
    double lift(double t) const;       // monotone lift, lift(0) = 0
    double lift_inverse(double y) const;
};

BowenSeriesMap bowen_series(int d);

// Total winding of the circle map; must equal 2d - 1, else NonCovering.
int winding_degree(const BowenSeriesMap& A);

struct VertexCycle {
    MoebiusMap element;
    cplx trace_squared; // of the determinant-normalized matrix
    bool parabolic;     // |tr^2 - 4| <= 1e-8
};

VertexCycle vertex_cycle_element(const SidePairingSet& pairing, int vertex_index);

// Conjugacy h between t -> (2d-1) t and the Bowen-Series map, anchored at the
// common fixed angle 0, built from matched preimage trees of depth `depth`.
// The stored table enumerates the lattice up to a memory cap; evaluation
// refines pointwise to the full depth.
struct CircleConjugacy {
    BowenSeriesMap map;
    int depth = 1;
    std::vector<std::pair<double, double>> table; // (model angle, A angle), cyclic

    double evaluate(double t) const;
    // sup_t |h((2d-1) t) - A(h(t))| over n uniformly spread samples
    double defect(int n_samples) const;
};

CircleConjugacy conjugacy(const BowenSeriesMap& A, int depth);

} // namespace corrlab
