#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "corrlab/ratmap.hpp"

namespace corrlab {

// Finite tree of Riemann spheres: vertices carry spheres (unless auxiliary),
// and each vertex marks one point per incident edge direction.
struct TreeOfSpheres {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    std::vector<bool> auxiliary; // clique-contraction centers carry no sphere
    // (vertex, neighbor) -> marked point xi_vertex(direction of neighbor)
    std::map<std::pair<int, int>, SpherePoint> markings;

    std::vector<int> neighbors(int v) const;
    bool adjacent(int a, int b) const;
    bool is_tree() const; // connected and acyclic
    // distinct directions must get distinct marked points
    void validate(double tol = 1e-9) const;
};

// Unlabeled-isomorphism canonical form (rooted at the tree center).
std::string canonical_tree_signature(const TreeOfSpheres& t);

// Signature: tree with involution, degree function and local degree functions.
struct Signature {
    TreeOfSpheres tree;
    std::vector<int> tau;                      // vertex involution
    std::vector<int> delta;                    // degree per vertex
    std::map<std::pair<int, int>, int> local_delta; // (vertex, neighbor) -> local degree

    void validate() const; // tau involutive, 1 <= local <= delta
};

int signature_degree(const Signature& kappa);
bool is_simple(const Signature& kappa);

enum class DominationClass { Regular, Exceptional, Invalid };

struct Domination {
    DominationClass cls;
    std::string reason; // set when invalid
};

// Validates pi : V2 -> V1 as a domination of kappa1 by kappa2 and classifies
// it; invalid inputs are a returned classification, never an exception.
Domination check_domination(const Signature& kappa1, const Signature& kappa2,
                            const std::vector<int>& pi);

// Rational map between trees of spheres: tree map plus per-vertex rational
// maps, subject to the marked-point compatibility conditions.
struct TreeRationalMap {
    TreeOfSpheres domain, target;
    std::vector<int> vertex_image;         // F on vertices
    std::vector<HomRationalMap> sphere_map; // R_a per domain vertex
    int degree = 0;
};

struct TreeMapReport {
    bool ok = true;
    std::vector<std::string> failures;
    int probes_checked = 0;
};

TreeMapReport validate_tree_rational_map(const TreeRationalMap& F, int probes,
                                         unsigned seed = 2026, double tol = 1e-9);

// Adjacency graph produced by the pairwise-projection separation rule, before
// clique contraction.
struct AdjacencyGraph {
    int n = 0;
    std::vector<std::pair<int, int>> edges;
    bool adjacent(int a, int b) const;
    std::vector<std::vector<int>> maximal_cliques() const;
};

struct ReconstructionResult {
    AdjacencyGraph graph; // before contraction
    TreeOfSpheres tree;   // cliques of size >= 3 contracted to auxiliary stars
    // pairwise projections x_{q -> p}, indexed [p][q]
    std::vector<std::vector<SpherePoint>> projections;
};

// Sample schedule balancing extrapolation quality against the cancellation
// noise of deeply nested zoom quotients.
std::vector<double> reconstruction_samples();

struct ReconstructOptions {
    double constant_tol = 1e-7;   // both probe points must agree to this
    double separation_tol = 1e-6; // distinct projections are separated beyond this
};

// Rebuilds the tree of spheres underlying a family of rescalings from the
// pairwise limits of M_p,n^-1 o M_q,n. Throws NotConstantLimit when a pair
// fails to converge to a constant.
ReconstructionResult reconstruct_tree(const std::vector<RescalingSequence>& family,
                                      const std::vector<double>& samples,
                                      const ReconstructOptions& opts = {});

// Necessary condition for arising as an external-fiber limit: every maximal
// clique has exactly two vertices and local degrees 1 at both ends.
bool clique_bound_check(const AdjacencyGraph& graph,
                        const std::map<std::pair<int, int>, int>& local_degrees);

// Synthetic rescaling family realizing a given tree of spheres: per-vertex
// Moebius zooms composed along the rooted hierarchy. Markings must be finite
// for this generator.
std::vector<RescalingSequence> make_rescaling_family(const TreeOfSpheres& tree, int root = -1,
                                                     std::vector<double> samples =
                                                         reconstruction_samples());

} // namespace corrlab
