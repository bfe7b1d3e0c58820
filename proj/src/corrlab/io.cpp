#include "corrlab/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace corrlab::io {

namespace {

json cplx_to_json(cplx v) { return json::array({v.real(), v.imag()}); }

cplx cplx_from_json(const json& j) {
    if (j.is_number()) return cplx(j.get<double>(), 0.0);
    if (!j.is_array() || j.size() != 2) fail("ParseError", "complex value must be [re, im]");
    return cplx(j[0].get<double>(), j[1].get<double>());
}

} // namespace

json to_json(const SpherePoint& p) {
    return json::array({p.z.real(), p.z.imag(), p.w.real(), p.w.imag()});
}

SpherePoint sphere_point_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4)
        fail("ParseError", "sphere point must be [re_z, im_z, re_w, im_w]");
    return SpherePoint(cplx(j[0].get<double>(), j[1].get<double>()),
                       cplx(j[2].get<double>(), j[3].get<double>()));
}

json to_json(const MoebiusMap& m) {
    return json::array({cplx_to_json(m.a), cplx_to_json(m.b), cplx_to_json(m.c), cplx_to_json(m.d)});
}

MoebiusMap moebius_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4) fail("ParseError", "Moebius map must have 4 entries");
    return MoebiusMap(cplx_from_json(j[0]), cplx_from_json(j[1]), cplx_from_json(j[2]),
                      cplx_from_json(j[3]));
}

json to_json(const Expr& e) {
    switch (e.op()) {
    case Expr::Op::Const: {
        json j;
        j["op"] = "const";
        j["re"] = e.value().real();
        j["im"] = e.value().imag();
        return j;
    }
    case Expr::Op::Var: return json{{"op", "n"}};
    case Expr::Op::Add: return json{{"op", "+"}, {"args", json::array({to_json(e.lhs()), to_json(e.rhs())})}};
    case Expr::Op::Sub: return json{{"op", "-"}, {"args", json::array({to_json(e.lhs()), to_json(e.rhs())})}};
    case Expr::Op::Mul: return json{{"op", "*"}, {"args", json::array({to_json(e.lhs()), to_json(e.rhs())})}};
    case Expr::Op::Div: return json{{"op", "/"}, {"args", json::array({to_json(e.lhs()), to_json(e.rhs())})}};
    }
    fail("InternalError", "unreachable");
}

Expr expr_from_json(const json& j) {
    if (j.is_number()) return Expr::constant(cplx(j.get<double>(), 0.0));
    if (j.is_array()) return Expr::constant(cplx_from_json(j));
    if (j.is_string() && j.get<std::string>() == "n") return Expr::var_n();
    if (!j.is_object() || !j.contains("op")) fail("ParseError", "expression node needs an op");
    std::string op = j["op"].get<std::string>();
    if (op == "const") return Expr::constant(cplx(j.value("re", 0.0), j.value("im", 0.0)));
    if (op == "n") return Expr::var_n();
    if (!j.contains("args") || j["args"].size() != 2)
        fail("ParseError", "binary expression needs two args");
    Expr a = expr_from_json(j["args"][0]);
    Expr b = expr_from_json(j["args"][1]);
    if (op == "+") return a + b;
    if (op == "-") return a - b;
    if (op == "*") return a * b;
    if (op == "/") return a / b;
    fail("ParseError", "unknown expression op " + op);
}

json to_json(const RescalingSequence& s) {
    json j;
    j["entries"] = json::array(
        {to_json(s.entries[0]), to_json(s.entries[1]), to_json(s.entries[2]), to_json(s.entries[3])});
    j["samples"] = s.sample_indices;
    return j;
}

RescalingSequence rescaling_from_json(const json& j) {
    if (!j.contains("entries") || j["entries"].size() != 4)
        fail("ParseError", "rescaling needs 4 entry expressions");
    std::vector<double> samples = RescalingSequence::default_samples();
    if (j.contains("samples")) samples = j["samples"].get<std::vector<double>>();
    return RescalingSequence::from_entries(
        expr_from_json(j["entries"][0]), expr_from_json(j["entries"][1]),
        expr_from_json(j["entries"][2]), expr_from_json(j["entries"][3]), std::move(samples));
}

json to_json(const ComplexPoly& p) {
    json arr = json::array();
    for (int i = 0; i <= p.degree(); ++i) arr.push_back(cplx_to_json(p.coeff(i)));
    return arr;
}

ComplexPoly poly_from_json(const json& j) {
    if (!j.is_array()) fail("ParseError", "polynomial must be a coefficient array");
    std::vector<cplx> c;
    for (const auto& e : j) c.push_back(cplx_from_json(e));
    return ComplexPoly(std::move(c));
}

json to_json(const HomRationalMap& f) {
    json j;
    j["degree"] = f.degree();
    j["num"] = to_json(f.P());
    j["den"] = to_json(f.Q());
    return j;
}

HomRationalMap map_from_json(const json& j) {
    if (!j.contains("degree") || !j.contains("num") || !j.contains("den"))
        fail("ParseError", "map needs degree, num, den");
    return HomRationalMap(j["degree"].get<int>(), poly_from_json(j["num"]),
                          poly_from_json(j["den"]));
}

json to_json(const RatMapFamily& f) {
    json j;
    j["degree"] = f.degree;
    json num = json::array(), den = json::array();
    for (const auto& e : f.num) num.push_back(to_json(e));
    for (const auto& e : f.den) den.push_back(to_json(e));
    j["num"] = num;
    j["den"] = den;
    return j;
}

RatMapFamily family_from_json(const json& j) {
    if (!j.contains("degree") || !j.contains("num") || !j.contains("den"))
        fail("ParseError", "family needs degree, num, den");
    RatMapFamily f;
    f.degree = j["degree"].get<int>();
    for (const auto& e : j["num"]) f.num.push_back(expr_from_json(e));
    for (const auto& e : j["den"]) f.den.push_back(expr_from_json(e));
    if (static_cast<int>(f.num.size()) != f.degree + 1 ||
        static_cast<int>(f.den.size()) != f.degree + 1)
        fail("ParseError", "family coefficient count must be degree + 1");
    return f;
}

json to_json(const Correspondence& c) {
    json rows = json::array();
    for (int i = 0; i <= c.Q.deg_x(); ++i) {
        json row = json::array();
        for (int k = 0; k <= c.Q.deg_y(); ++k) row.push_back(cplx_to_json(c.Q.coeff(i, k)));
        rows.push_back(row);
    }
    json j;
    j["bidegree"] = json::array({c.d1, c.d2});
    j["coeffs"] = rows;
    j["provenance"] = c.provenance == Provenance::FromUniformizer ? "from_uniformizer" : "from_pair";
    return j;
}

Correspondence correspondence_from_json(const json& j) {
    if (!j.contains("coeffs")) fail("ParseError", "correspondence needs coeffs");
    std::vector<std::vector<cplx>> rows;
    for (const auto& r : j["coeffs"]) {
        std::vector<cplx> row;
        for (const auto& e : r) row.push_back(cplx_from_json(e));
        rows.push_back(std::move(row));
    }
    Correspondence c;
    c.Q = BivarPoly::from_coeffs(std::move(rows));
    c.d1 = c.Q.deg_x();
    c.d2 = c.Q.deg_y();
    c.provenance = j.value("provenance", std::string("from_pair")) == "from_uniformizer"
                       ? Provenance::FromUniformizer
                       : Provenance::FromPair;
    if (j.contains("bidegree")) {
        if (j["bidegree"][0].get<int>() != c.d1 || j["bidegree"][1].get<int>() != c.d2)
            fail("ParseError", "declared bidegree does not match trimmed coefficients");
    }
    return c;
}

json to_json(const TreeOfSpheres& t) {
    json j;
    j["vertices"] = t.n;
    j["auxiliary"] = t.auxiliary;
    json edges = json::array();
    for (const auto& [a, b] : t.edges) edges.push_back(json::array({a, b}));
    j["edges"] = edges;
    json marks = json::array();
    for (const auto& [key, p] : t.markings)
        marks.push_back(json{{"at", key.first}, {"toward", key.second}, {"point", to_json(p)}});
    j["markings"] = marks;
    return j;
}

TreeOfSpheres tree_from_json(const json& j) {
    TreeOfSpheres t;
    t.n = j["vertices"].get<int>();
    t.auxiliary = j.value("auxiliary", std::vector<bool>(t.n, false));
    for (const auto& e : j["edges"]) t.edges.push_back({e[0].get<int>(), e[1].get<int>()});
    if (j.contains("markings"))
        for (const auto& m : j["markings"])
            t.markings[{m["at"].get<int>(), m["toward"].get<int>()}] =
                sphere_point_from_json(m["point"]);
    return t;
}

json to_json(const Signature& k) {
    json j;
    j["tree"] = to_json(k.tree);
    j["tau"] = k.tau;
    j["delta"] = k.delta;
    json ld = json::array();
    for (const auto& [key, v] : k.local_delta)
        ld.push_back(json{{"at", key.first}, {"toward", key.second}, {"degree", v}});
    j["local_delta"] = ld;
    return j;
}

Signature signature_from_json(const json& j) {
    Signature k;
    k.tree = tree_from_json(j["tree"]);
    k.tau = j["tau"].get<std::vector<int>>();
    k.delta = j["delta"].get<std::vector<int>>();
    if (j.contains("local_delta"))
        for (const auto& m : j["local_delta"])
            k.local_delta[{m["at"].get<int>(), m["toward"].get<int>()}] = m["degree"].get<int>();
    return k;
}

json to_json(const ReducedForm& rf) {
    json j;
    j["degree"] = rf.degree;
    j["phi"] = to_json(rf.phi);
    j["common_factor"] = to_json(rf.H);
    j["holes_at_infinity"] = rf.holes_at_infinity;
    json holes = json::array();
    for (const auto& [p, m] : rf.holes)
        holes.push_back(json{{"point", to_json(p)}, {"multiplicity", m}});
    j["holes"] = holes;
    return j;
}

std::string tree_to_dot(const TreeOfSpheres& t) {
    std::ostringstream os;
    os << "graph tree_of_spheres {\n";
    for (int v = 0; v < t.n; ++v) {
        bool aux = v < static_cast<int>(t.auxiliary.size()) && t.auxiliary[v];
        os << "  v" << v << " [label=\"" << v << (aux ? " (aux)" : "") << "\""
           << (aux ? ", shape=point" : "") << "];\n";
    }
    for (const auto& [a, b] : t.edges) os << "  v" << a << " -- v" << b << ";\n";
    os << "}\n";
    return os.str();
}

std::string roots_to_csv(const std::vector<std::pair<SpherePoint, int>>& roots) {
    std::ostringstream os;
    os << "re,im,multiplicity\n";
    os.precision(17);
    for (const auto& [p, m] : roots) {
        if (p.is_infinity(1e-12)) {
            os << "inf,inf," << m << "\n";
        } else {
            cplx a = p.affine();
            os << a.real() << "," << a.imag() << "," << m << "\n";
        }
    }
    return os.str();
}

std::string variety_to_csv(const Correspondence& C, int grid_size) {
    std::ostringstream os;
    os << "x_re,x_im,y_re,y_im,branch_index\n";
    os.precision(17);
    auto emit_pair = [&os](const SpherePoint& x, const SpherePoint& y, int branch) {
        auto coord = [&os](const SpherePoint& p, bool last) {
            if (p.is_infinity(1e-12)) {
                os << "inf,inf";
            } else {
                cplx a = p.affine();
                os << a.real() << "," << a.imag();
            }
            os << (last ? "" : ",");
        };
        coord(x, false);
        coord(y, false);
        os << branch << "\n";
    };
    for (const auto& base : fibonacci_sphere_grid(grid_size)) {
        try {
            BranchFan fan = forward_images(C, base);
            int branch = 0;
            for (const auto& [y, mult] : fan.images)
                for (int i = 0; i < mult; ++i) emit_pair(base, y, branch++);
        } catch (const Error&) {
            // base point with an indeterminate fiber: skip
        }
    }
    return os.str();
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail("IoError", "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail("IoError", "cannot write " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) fail("IoError", "short write to " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        fail("IoError", "rename failed for " + path + ": " + ec.message());
    }
}

} // namespace corrlab::io
