#include "corrlab/trees.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <set>

namespace corrlab {

std::vector<int> TreeOfSpheres::neighbors(int v) const {
    std::vector<int> out;
    for (const auto& [a, b] : edges) {
        if (a == v) out.push_back(b);
        if (b == v) out.push_back(a);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool TreeOfSpheres::adjacent(int a, int b) const {
    for (const auto& [x, y] : edges)
        if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
}

bool TreeOfSpheres::is_tree() const {
    if (n == 0) return false;
    if (static_cast<int>(edges.size()) != n - 1) return false;
    std::vector<int> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int count = 1;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int w : neighbors(v))
            if (!seen[w]) {
                seen[w] = 1;
                ++count;
                stack.push_back(w);
            }
    }
    return count == n;
}

void TreeOfSpheres::validate(double tol) const {
    if (!is_tree()) fail("InvalidTree", "edge set is not a tree");
    for (int v = 0; v < n; ++v) {
        auto nb = neighbors(v);
        for (size_t i = 0; i < nb.size(); ++i)
            for (size_t j = i + 1; j < nb.size(); ++j) {
                auto it1 = markings.find({v, nb[i]});
                auto it2 = markings.find({v, nb[j]});
                if (it1 == markings.end() || it2 == markings.end()) continue;
                if (spherical_distance(it1->second, it2->second) <= tol)
                    fail("InvalidTree", "markings collide at vertex " + std::to_string(v));
            }
    }
}

namespace {

std::string ahu_encode(const TreeOfSpheres& t, int v, int parent) {
    std::vector<std::string> children;
    for (int w : t.neighbors(v))
        if (w != parent) children.push_back(ahu_encode(t, w, v));
    std::sort(children.begin(), children.end());
    std::string s = "(";
    for (const auto& c : children) s += c;
    s += ")";
    return s;
}

std::vector<int> tree_centers(const TreeOfSpheres& t) {
    // iterated leaf removal
    std::vector<int> degree(t.n, 0);
    for (const auto& [a, b] : t.edges) {
        ++degree[a];
        ++degree[b];
    }
    std::vector<int> active(t.n, 1);
    int remaining = t.n;
    std::vector<int> frontier;
    for (int v = 0; v < t.n; ++v)
        if (degree[v] <= 1) frontier.push_back(v);
    while (remaining > 2) {
        std::vector<int> next;
        for (int v : frontier) {
            active[v] = 0;
            --remaining;
            for (int w : t.neighbors(v))
                if (active[w] && --degree[w] == 1) next.push_back(w);
        }
        frontier = std::move(next);
    }
    std::vector<int> centers;
    for (int v = 0; v < t.n; ++v)
        if (active[v]) centers.push_back(v);
    return centers;
}

} // namespace

std::string canonical_tree_signature(const TreeOfSpheres& t) {
    if (t.n == 0) return "";
    std::vector<std::string> forms;
    for (int c : tree_centers(t)) forms.push_back(ahu_encode(t, c, -1));
    std::sort(forms.begin(), forms.end());
    return forms.front();
}

void Signature::validate() const {
    if (!tree.is_tree()) fail("InvalidSignature", "underlying graph is not a tree");
    if (static_cast<int>(tau.size()) != tree.n || static_cast<int>(delta.size()) != tree.n)
        fail("InvalidSignature", "tau/delta size mismatch");
    for (int v = 0; v < tree.n; ++v) {
        if (tau[v] < 0 || tau[v] >= tree.n || tau[tau[v]] != v)
            fail("InvalidSignature", "tau is not an involution");
        if (delta[v] < 1) fail("InvalidSignature", "degree function must be >= 1");
    }
    for (const auto& [key, ld] : local_delta) {
        if (!tree.adjacent(key.first, key.second))
            fail("InvalidSignature", "local degree on a non-edge");
        if (ld < 1 || ld > delta[key.first])
            fail("InvalidSignature", "local degree outside 1..delta");
    }
}

int signature_degree(const Signature& kappa) {
    kappa.validate();
    int total = 0;
    for (int v = 0; v < kappa.tree.n; ++v)
        if (!(v < static_cast<int>(kappa.tree.auxiliary.size()) && kappa.tree.auxiliary[v]))
            total += kappa.delta[v];
    return total;
}

bool is_simple(const Signature& kappa) {
    kappa.validate();
    for (int v = 0; v < kappa.tree.n; ++v)
        for (int w : kappa.tree.neighbors(v)) {
            auto it = kappa.local_delta.find({v, w});
            int ld = (it == kappa.local_delta.end()) ? 1 : it->second;
            if (ld != 1) return false;
        }
    return true;
}

namespace {

int local_degree_of(const Signature& k, int v, int toward) {
    auto it = k.local_delta.find({v, toward});
    return it == k.local_delta.end() ? 1 : it->second;
}

} // namespace

Domination check_domination(const Signature& kappa1, const Signature& kappa2,
                            const std::vector<int>& pi) {
    kappa1.validate();
    kappa2.validate();
    auto invalid = [](std::string why) { return Domination{DominationClass::Invalid, std::move(why)}; };

    if (signature_degree(kappa1) != signature_degree(kappa2))
        return invalid("total degrees differ");
    if (static_cast<int>(pi.size()) != kappa2.tree.n) return invalid("pi size mismatch");

    // surjectivity and degree sums over fibers
    std::vector<int> fiber_degree(kappa1.tree.n, 0), fiber_size(kappa1.tree.n, 0);
    for (int b = 0; b < kappa2.tree.n; ++b) {
        if (pi[b] < 0 || pi[b] >= kappa1.tree.n) return invalid("pi image out of range");
        fiber_degree[pi[b]] += kappa2.delta[b];
        fiber_size[pi[b]] += 1;
    }
    for (int a = 0; a < kappa1.tree.n; ++a) {
        if (fiber_size[a] == 0) return invalid("pi is not surjective");
        if (fiber_degree[a] != kappa1.delta[a]) return invalid("fiber degree sum mismatch");
    }

    // equivariance
    for (int b = 0; b < kappa2.tree.n; ++b)
        if (kappa1.tau[pi[b]] != pi[kappa2.tau[b]]) return invalid("tau equivariance fails");

    // fibers are subtrees: connected within T2
    for (int a = 0; a < kappa1.tree.n; ++a) {
        std::vector<int> members;
        for (int b = 0; b < kappa2.tree.n; ++b)
            if (pi[b] == a) members.push_back(b);
        std::set<int> inside(members.begin(), members.end());
        std::vector<int> stack{members.front()};
        std::set<int> seen{members.front()};
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (int w : kappa2.tree.neighbors(v))
                if (inside.count(w) && !seen.count(w)) {
                    seen.insert(w);
                    stack.push_back(w);
                }
        }
        if (seen.size() != inside.size()) return invalid("fiber is not a subtree");
    }

    // cross-fiber edges of T2 must project onto edges of T1, covering all of E1
    std::set<std::pair<int, int>> covered;
    for (const auto& [b1, b2] : kappa2.tree.edges) {
        int a1 = pi[b1], a2 = pi[b2];
        if (a1 == a2) continue;
        if (!kappa1.tree.adjacent(a1, a2)) return invalid("edge projects to a non-edge");
        covered.insert({std::min(a1, a2), std::max(a1, a2)});
    }
    for (const auto& [a1, a2] : kappa1.tree.edges)
        if (!covered.count({std::min(a1, a2), std::max(a1, a2)}))
            return invalid("an edge of the base tree is not covered");

    // exceptional: some fiber is exactly two vertices a, b joined by an edge
    // whose local degrees saturate the vertex degrees
    for (int a = 0; a < kappa1.tree.n; ++a) {
        if (fiber_size[a] != 2) continue;
        int u = -1, v = -1;
        for (int b = 0; b < kappa2.tree.n; ++b)
            if (pi[b] == a) (u < 0 ? u : v) = b;
        if (!kappa2.tree.adjacent(u, v)) continue;
        if (local_degree_of(kappa2, u, v) == kappa2.delta[u] &&
            local_degree_of(kappa2, v, u) == kappa2.delta[v])
            return Domination{DominationClass::Exceptional, ""};
    }
    return Domination{DominationClass::Regular, ""};
}

TreeMapReport validate_tree_rational_map(const TreeRationalMap& F, int probes, unsigned seed,
                                         double tol) {
    TreeMapReport rep;
    F.domain.validate();
    F.target.validate();
    if (static_cast<int>(F.vertex_image.size()) != F.domain.n ||
        static_cast<int>(F.sphere_map.size()) != F.domain.n)
        fail("InvalidArgument", "tree rational map tables have wrong sizes");

    auto record = [&rep](std::string msg) {
        rep.ok = false;
        rep.failures.push_back(std::move(msg));
    };

    // Edges map to edges or vertices.
    for (const auto& [a, b] : F.domain.edges) {
        int fa = F.vertex_image[a], fb = F.vertex_image[b];
        if (fa != fb && !F.target.adjacent(fa, fb))
            record("edge (" + std::to_string(a) + "," + std::to_string(b) +
                   ") maps to a non-edge");
    }

    // Marked-point compatibility, both the edge-image and vertex-image cases.
    for (const auto& [a, b] : F.domain.edges) {
        for (auto [u, v] : {std::pair{a, b}, std::pair{b, a}}) {
            auto mu = F.domain.markings.find({u, v});
            if (mu == F.domain.markings.end()) continue;
            SpherePoint image = reduce(F.sphere_map[u]).evaluate(mu->second, 1e-12);
            int fu = F.vertex_image[u], fv = F.vertex_image[v];
            if (fu != fv) {
                auto mt = F.target.markings.find({fu, fv});
                if (mt == F.target.markings.end()) {
                    record("missing target marking for edge image");
                    continue;
                }
                if (spherical_distance(image, mt->second) > tol)
                    record("edge-image compatibility fails at direction (" + std::to_string(u) +
                           "," + std::to_string(v) + ")");
            } else {
                auto mv = F.domain.markings.find({v, u});
                if (mv == F.domain.markings.end()) continue;
                SpherePoint other = reduce(F.sphere_map[v]).evaluate(mv->second, 1e-12);
                if (spherical_distance(image, other) > tol)
                    record("vertex-image compatibility fails on collapsed edge (" +
                           std::to_string(u) + "," + std::to_string(v) + ")");
            }
        }
    }

    // Degree certification: random smooth targets get `degree` preimages.
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> un(-1.0, 1.0);
    int checked = 0;
    while (checked < probes) {
        int tv = static_cast<int>(rng() % F.target.n);
        if (tv < static_cast<int>(F.target.auxiliary.size()) && F.target.auxiliary[tv]) continue;
        SpherePoint y(cplx(un(rng), un(rng)), cplx(un(rng), un(rng)));
        // keep clear of target markings
        bool smooth = true;
        for (int w : F.target.neighbors(tv)) {
            auto it = F.target.markings.find({tv, w});
            if (it != F.target.markings.end() && spherical_distance(y, it->second) < 0.05)
                smooth = false;
        }
        if (!smooth) continue;

        int count = 0;
        bool near_critical = false;
        for (int a = 0; a < F.domain.n; ++a) {
            if (F.vertex_image[a] != tv) continue;
            const HomRationalMap& R = F.sphere_map[a];
            // solve R(x) = y: P(x) w_y - Q(x) z_y = 0 homogeneously
            ComplexPoly numer = R.P() * y.w - R.Q() * y.z;
            if (numer.is_zero()) {
                near_critical = true;
                break;
            }
            for (const auto& [root, mult] : projective_roots(numer, R.degree())) {
                count += mult;
                if (mult > 1) near_critical = true;
            }
        }
        if (near_critical) continue; // resample a cleaner target
        ++checked;
        if (count != F.degree)
            record("preimage count " + std::to_string(count) + " != degree at a smooth target");
    }
    rep.probes_checked = checked;
    return rep;
}

bool AdjacencyGraph::adjacent(int a, int b) const {
    for (const auto& [x, y] : edges)
        if ((x == a && y == b) || (x == b && y == a)) return true;
    return false;
}

std::vector<std::vector<int>> AdjacencyGraph::maximal_cliques() const {
    // Tiny graphs: enumerate subsets.
    std::vector<std::vector<int>> cliques;
    if (n > 20) fail("InvalidArgument", "clique enumeration capped at 20 vertices");
    for (int mask = 1; mask < (1 << n); ++mask) {
        std::vector<int> members;
        for (int v = 0; v < n; ++v)
            if (mask & (1 << v)) members.push_back(v);
        if (members.size() < 2) continue;
        bool clique = true;
        for (size_t i = 0; i < members.size() && clique; ++i)
            for (size_t j = i + 1; j < members.size() && clique; ++j)
                if (!adjacent(members[i], members[j])) clique = false;
        if (!clique) continue;
        bool maximal = true;
        for (int v = 0; v < n && maximal; ++v) {
            if (mask & (1 << v)) continue;
            bool extends = true;
            for (int m : members)
                if (!adjacent(v, m)) extends = false;
            if (extends) maximal = false;
        }
        if (maximal) cliques.push_back(members);
    }
    return cliques;
}

std::vector<double> reconstruction_samples() {
    return {6.0, 18.0, 54.0, 162.0, 486.0, 1458.0, 4374.0};
}

ReconstructionResult reconstruct_tree(const std::vector<RescalingSequence>& family,
                                      const std::vector<double>& samples,
                                      const ReconstructOptions& opts) {
    const int n = static_cast<int>(family.size());
    if (n < 1) fail("InvalidArgument", "need at least one rescaling");
    ReconstructionResult out;
    out.graph.n = n;
    out.projections.assign(n, std::vector<SpherePoint>(n));

    const SpherePoint probe1 = SpherePoint::finite(cplx(0.37, 0.21));
    const SpherePoint probe2 = SpherePoint::finite(cplx(-1.12, 0.58));

    // Shanks extrapolation of a settling point sequence in the affine chart
    // selected by the last value; a second level removes the next-order tail
    // when enough samples are available.
    auto extrapolate = [](const std::vector<SpherePoint>& vals) {
        size_t k = vals.size();
        bool inf_chart = std::abs(vals[k - 1].w) <= std::abs(vals[k - 1].z);
        auto chart = [&](const SpherePoint& p) { return inf_chart ? p.w / p.z : p.z / p.w; };
        auto aitken = [](cplx e1, cplx e2, cplx e3) {
            cplx d1 = e2 - e1, d2 = e3 - e2;
            cplx den = d2 - d1;
            if (std::abs(den) <= 1e-13 * (std::abs(d1) + std::abs(d2)) || den == cplx(0.0))
                return e3;
            return e3 - d2 * d2 / den;
        };
        std::vector<cplx> e;
        for (const auto& v : vals) e.push_back(chart(v));
        while (e.size() >= 3) {
            std::vector<cplx> next;
            for (size_t i = 0; i + 2 < e.size(); ++i) next.push_back(aitken(e[i], e[i + 1], e[i + 2]));
            e = std::move(next);
            if (e.size() < 3) break;
        }
        cplx lim = e.back();
        return inf_chart ? SpherePoint(cplx(1.0), lim) : SpherePoint(lim, cplx(1.0));
    };

    // x_{q -> p} = lim (M_p,n^-1 o M_q,n)(probe); certified constant when two
    // distinct probes settle on the same value.
    for (int p = 0; p < n; ++p) {
        for (int q = 0; q < n; ++q) {
            if (p == q) continue;
            SpherePoint lim1, lim2;
            for (int which = 0; which < 2; ++which) {
                const SpherePoint& probe = which ? probe2 : probe1;
                std::vector<SpherePoint> vals;
                for (double nn : samples)
                    vals.push_back(
                        apply_quotient_raw(family[p].raw_at(nn), family[q].raw_at(nn), probe));
                size_t k = vals.size();
                double d32 = spherical_distance(vals[k - 1], vals[k - 2]);
                double d21 = spherical_distance(vals[k - 2], vals[k - 3]);
                if (d32 > opts.constant_tol && !(d32 < 0.5 * d21))
                    fail("NotConstantLimit", "pair (" + std::to_string(p) + "," +
                                                 std::to_string(q) + ") does not settle");
                (which ? lim2 : lim1) = extrapolate(vals);
            }
            if (spherical_distance(lim1, lim2) > opts.constant_tol)
                fail("NotConstantLimit", "probes disagree for pair (" + std::to_string(p) + "," +
                                             std::to_string(q) + ")");
            out.projections[p][q] = lim1;
        }
    }

    // adjacency: p, q adjacent iff no third r separates them
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            bool separated = false;
            for (int r = 0; r < n && !separated; ++r) {
                if (r == p || r == q) continue;
                if (spherical_distance(out.projections[r][p], out.projections[r][q]) >
                    opts.separation_tol)
                    separated = true;
            }
            if (!separated) out.graph.edges.push_back({p, q});
        }

    // contract cliques of size >= 3 into auxiliary star centers
    TreeOfSpheres tree;
    tree.n = n;
    tree.auxiliary.assign(n, false);
    std::set<std::pair<int, int>> tree_edges;
    for (const auto& clique : out.graph.maximal_cliques()) {
        if (clique.size() == 2) {
            tree_edges.insert({clique[0], clique[1]});
        } else {
            int center = tree.n++;
            tree.auxiliary.push_back(true);
            for (int v : clique) tree_edges.insert({v, center});
        }
    }
    tree.edges.assign(tree_edges.begin(), tree_edges.end());
    // markings: the direction at p toward its tree-neighbor carries x_{q -> p}
    for (const auto& [a, b] : tree.edges) {
        if (a < n && b < n) {
            tree.markings[{a, b}] = out.projections[a][b];
            tree.markings[{b, a}] = out.projections[b][a];
        } else {
            // star edges: marking of the spherical vertex toward the center is
            // the common projection point of the clique
            int sphere_v = a < n ? a : b;
            int center = a < n ? b : a;
            for (int q = 0; q < n; ++q) {
                if (q == sphere_v) continue;
                if (out.graph.adjacent(sphere_v, q)) {
                    tree.markings[{sphere_v, center}] = out.projections[sphere_v][q];
                    break;
                }
            }
        }
    }
    if (!tree.is_tree())
        fail("NotConstantLimit", "separation pattern did not produce a tree");
    out.tree = std::move(tree);
    return out;
}

bool clique_bound_check(const AdjacencyGraph& graph,
                        const std::map<std::pair<int, int>, int>& local_degrees) {
    for (const auto& clique : graph.maximal_cliques()) {
        if (clique.size() != 2) return false;
        auto it1 = local_degrees.find({clique[0], clique[1]});
        auto it2 = local_degrees.find({clique[1], clique[0]});
        int d1 = it1 == local_degrees.end() ? 1 : it1->second;
        int d2 = it2 == local_degrees.end() ? 1 : it2->second;
        if (d1 != 1 || d2 != 1) return false;
    }
    return true;
}

std::vector<RescalingSequence> make_rescaling_family(const TreeOfSpheres& tree, int root,
                                                     std::vector<double> samples) {
    tree.validate();
    const int n = tree.n;
    if (root < 0) root = tree_centers(tree).front(); // minimize nesting depth
    std::vector<std::array<Expr, 4>> maps(n);
    std::vector<int> depth(n, -1);
    maps[root] = {Expr::constant(1.0), Expr::constant(0.0), Expr::constant(0.0),
                  Expr::constant(1.0)};
    depth[root] = 0;

    // Child zoom: M_c(z) = M_a(p + r_n / (z - q)) with p the marking at the
    // parent toward the child, q the marking at the child toward the parent.
    // A uniform r_n = 1/n per level realizes all pairwise limits and keeps the
    // quotient signals above roundoff at every sample depth.
    std::vector<int> order{root};
    for (size_t head = 0; head < order.size(); ++head) {
        int a = order[head];
        for (int c : tree.neighbors(a)) {
            if (depth[c] >= 0) continue;
            depth[c] = depth[a] + 1;
            auto itp = tree.markings.find({a, c});
            auto itq = tree.markings.find({c, a});
            if (itp == tree.markings.end() || itq == tree.markings.end())
                fail("InvalidArgument", "synthetic family needs full markings");
            if (itp->second.is_infinity(1e-9) || itq->second.is_infinity(1e-9))
                fail("InvalidArgument", "synthetic generator needs finite markings");
            cplx p = itp->second.affine(), q = itq->second.affine();
            Expr rn = Expr::constant(1.0) / Expr::var_n();
            // zoom matrix Z(z) = p + r/(z - q) = (p z + (r - p q)) / (z - q)
            std::array<Expr, 4> Z = {Expr::constant(p), rn - Expr::constant(p * q),
                                     Expr::constant(1.0), Expr::constant(-q)};
            const auto& A = maps[a];
            maps[c] = {A[0] * Z[0] + A[1] * Z[2], A[0] * Z[1] + A[1] * Z[3],
                       A[2] * Z[0] + A[3] * Z[2], A[2] * Z[1] + A[3] * Z[3]};
            order.push_back(c);
        }
    }

    std::vector<RescalingSequence> out;
    for (int v = 0; v < n; ++v)
        out.push_back(RescalingSequence::from_entries(maps[v][0], maps[v][1], maps[v][2],
                                                      maps[v][3], samples));
    return out;
}

} // namespace corrlab
