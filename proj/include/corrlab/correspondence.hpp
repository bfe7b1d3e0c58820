#pragma once

#include <functional>
#include <vector>

#include "corrlab/ratmap.hpp"

namespace corrlab {

enum class Provenance { FromPair, FromUniformizer };

// Algebraic correspondence on C^ x C^: the vanishing locus of a bivariate
// polynomial with no fibers of either projection, acting as a multi-valued
// map x -> {y : Q(x, y) = 0}.
struct Correspondence {
    BivarPoly Q;
    int d1 = 0, d2 = 0; // bidegree (deg_x, deg_y)
    Provenance provenance = Provenance::FromPair;
};

// Coincidence locus {f(x) = g(y)} of two reduced rational maps.
Correspondence from_pair(const HomRationalMap& f, const HomRationalMap& g, double tol = 1e-8);

// Deleted coincidence equation (R(x) - R(eta y)) / (x - eta y) = 0 of a
// uniformizing rational map of degree 2d; bidegree (2d-1, 2d-1).
Correspondence from_uniformizer(const HomRationalMap& R, double tol = 1e-8);

enum class FanDirection { Forward, Backward };

struct BranchFan {
    SpherePoint base;
    FanDirection direction;
    std::vector<std::pair<SpherePoint, int>> images; // with multiplicities
    bool exceptional = false; // leading-coefficient collapse at the base
};

BranchFan forward_images(const Correspondence& C, const SpherePoint& x);
BranchFan backward_images(const Correspondence& C, const SpherePoint& y);

// Spherical Fibonacci lattice on the Riemann sphere, in projective form.
std::vector<SpherePoint> fibonacci_sphere_grid(int count);

// Sampled points of the variety in C^ x C^: forward fans over an x-grid plus
// the transposed sweep. Parallel and serial kernels produce identical output.
std::vector<std::pair<SpherePoint, SpherePoint>> sample_variety(const Correspondence& C,
                                                                int grid_size,
                                                                bool parallel = true);

// Symmetric sampled Hausdorff distance in the product chordal sup-metric.
// mesh_out (optional) receives the sampling mesh of the grid.
double hausdorff_distance(const Correspondence& C1, const Correspondence& C2, int grid_size,
                          double* mesh_out = nullptr, bool parallel = true);

using CorrFamily = std::function<Correspondence(double)>;

struct ConvergenceReport {
    std::vector<double> schedule;
    std::vector<double> distances; // restricted Hausdorff along the schedule
    bool monotone_decreasing = false;
    double mesh = 0.0;
};

// Restricted Hausdorff distances excluding margin-neighborhoods of S1 x C^ and
// C^ x S2, along a parameter schedule.
ConvergenceReport converges_away_from(const CorrFamily& family, const Correspondence& limit,
                                      const std::vector<SpherePoint>& S1,
                                      const std::vector<SpherePoint>& S2, double margin,
                                      int grid_size, const std::vector<double>& schedule);

struct FixedPointData {
    SpherePoint point;
    bool simple = true;
    std::vector<cplx> multipliers; // dy/dx per local branch; one entry when simple
};

// Roots of the diagonal Q(x, x) with branch multipliers at simple roots.
// Throws DiagonalDegenerate when the diagonal vanishes identically.
std::vector<FixedPointData> fixed_points(const Correspondence& C);

// (x, y) in C  =>  (eta y, eta x) in C, sampled over random base points.
bool check_reversibility(const Correspondence& C, int n_samples, double tol,
                         unsigned seed = 2026);

} // namespace corrlab
