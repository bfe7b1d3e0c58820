#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>

#include "corrlab/cli.hpp"
#include "corrlab/io.hpp"
#include <algorithm>

#include "corrlab/mating.hpp"

using namespace corrlab;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() / ("corrlab_test_" + std::to_string(::getpid()));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

std::string z2_plus_n_family(const TempDir& dir) {
    io::json fam;
    fam["degree"] = 2;
    fam["num"] = {io::json{{"op", "n"}}, 0.0, 1.0};
    fam["den"] = {1.0, 0.0, 0.0};
    std::string p = dir.file("fam.json");
    io::write_file_atomic(p, fam.dump());
    return p;
}

} // namespace

TEST_CASE("json round-trips") {
    SUBCASE("sphere point") {
        SpherePoint p(cplx(0.3, -0.7), cplx(1.0, 0.2));
        SpherePoint q = io::sphere_point_from_json(io::to_json(p));
        CHECK(spherical_distance(p, q) < 1e-15);
    }
    SUBCASE("expression with all ops") {
        Expr e = (Expr::var_n() + Expr::constant(cplx(2.0, 1.0))) /
                 (Expr::var_n() * Expr::var_n() - Expr::constant(3.0));
        Expr f = io::expr_from_json(io::to_json(e));
        for (double n : {2.0, 5.0, 11.0}) CHECK(std::abs(e.eval(n) - f.eval(n)) < 1e-15);
    }
    SUBCASE("rational map") {
        HomRationalMap R = family_map(cplx(0.4, -1.1));
        HomRationalMap S = io::map_from_json(io::to_json(R));
        SpherePoint p = SpherePoint::finite(cplx(0.9, 0.4));
        CHECK(spherical_distance(R.eval_raw(p), S.eval_raw(p)) < 1e-14);
    }
    SUBCASE("correspondence") {
        Correspondence C = from_uniformizer(family_map(0.3));
        Correspondence D = io::correspondence_from_json(io::to_json(C));
        CHECK(D.d1 == C.d1);
        CHECK(D.d2 == C.d2);
        CHECK(D.provenance == Provenance::FromUniformizer);
    }
    SUBCASE("tree and signature") {
        TreeOfSpheres t;
        t.n = 2;
        t.edges = {{0, 1}};
        t.auxiliary = {false, false};
        t.markings[{0, 1}] = SpherePoint::finite(0.5);
        t.markings[{1, 0}] = SpherePoint::infinity();
        TreeOfSpheres u = io::tree_from_json(io::to_json(t));
        CHECK(u.n == 2);
        CHECK(u.adjacent(0, 1));
        CHECK(u.markings.at({1, 0}).is_infinity());
    }
}

TEST_CASE("parse_args validation") {
    SUBCASE("defaults fill in") {
        auto cfg = cli::parse_args({"vd-check", "--map", "m.json"});
        CHECK(cfg.subcommand == "vd-check");
        CHECK(cfg.tol == 1e-8);
        CHECK(cfg.seed == 0);
    }
    SUBCASE("px below 16 is a usage error") {
        CHECK_THROWS_WITH_AS(
            cli::parse_args({"render-bers", "--px", "10", "--out", "x.ppm"}),
            doctest::Contains("UsageError"), Error);
    }
    SUBCASE("hausdorff takes two files and a grid") {
        auto cfg = cli::parse_args({"hausdorff", "a.json", "b.json", "--grid", "64"});
        CHECK(cfg.inputs.size() == 2);
        CHECK(cfg.grid == 64);
    }
    SUBCASE("complex forms") {
        auto cfg = cli::parse_args({"render-dyn", "--c", "0.5,-1.25", "--out", "x.ppm"});
        CHECK(cfg.c == cplx(0.5, -1.25));
        auto cfg2 = cli::parse_args({"render-dyn", "--c", "0+0i", "--out", "x.ppm"});
        CHECK(cfg2.c == cplx(0.0, 0.0));
        auto cfg3 = cli::parse_args({"render-bers", "--center", "1.5-2i", "--out", "x.ppm"});
        CHECK(cfg3.center == cplx(1.5, -2.0));
    }
    SUBCASE("unknown subcommand") {
        CHECK_THROWS_WITH_AS(cli::parse_args({"frobnicate"}), doctest::Contains("UsageError"),
                             Error);
    }
}

TEST_CASE("run: limits emits the reduced form") {
    TempDir dir;
    io::json fam;
    fam["degree"] = 2;
    // f_n(z) = z(z - 1 - 1/n)/(z - 1)
    io::json minus_one_minus = {{"op", "-"},
                                {"args", {-1.0, io::json{{"op", "/"}, {"args", {1.0, io::json{{"op", "n"}}}}}}}};
    fam["num"] = {0.0, minus_one_minus, 1.0};
    fam["den"] = {-1.0, 1.0, 0.0};
    std::string fpath = dir.file("fam.json");
    io::write_file_atomic(fpath, fam.dump());

    cli::RunConfig cfg;
    cfg.subcommand = "limits";
    cfg.inputs = {fpath};
    cfg.out = dir.file("reduced.json");
    auto rep = cli::run(cfg);
    REQUIRE(rep.outputs.size() == 1);
    auto result = io::json::parse(io::read_file(cfg.out));
    CHECK(result["reduced"]["degree"].get<int>() == 1);
    REQUIRE(result["reduced"]["holes"].size() == 1);
}

TEST_CASE("run: rescale with find-b recovers degree 2 for z^2 + n") {
    TempDir dir;
    cli::RunConfig cfg;
    cfg.subcommand = "rescale";
    cfg.inputs = {z2_plus_n_family(dir)};
    cfg.find_b = true;
    cfg.out = dir.file("rescale.json");
    auto rep = cli::run(cfg);
    auto result = io::json::parse(rep.result_json);
    CHECK(result["status"] == "rescaling_limit");
    CHECK(result["reduced"]["degree"].get<int>() == 2);

    SUBCASE("identity co-rescaling reports degree zero") {
        cli::RunConfig cfg2 = cfg;
        cfg2.find_b = false;
        cfg2.out = dir.file("rescale2.json");
        auto rep2 = cli::run(cfg2);
        auto result2 = io::json::parse(rep2.result_json);
        CHECK(result2["status"] == "degree_zero");
    }
}

TEST_CASE("run: hausdorff on two correspondence files") {
    TempDir dir;
    std::string a = dir.file("a.json"), b = dir.file("b.json");
    io::write_file_atomic(a, io::to_json(from_uniformizer(family_map(0.0))).dump());
    io::write_file_atomic(b, io::to_json(from_uniformizer(family_map(0.5))).dump());
    cli::RunConfig cfg;
    cfg.subcommand = "hausdorff";
    cfg.inputs = {a, b};
    cfg.grid = 24;
    cfg.out_csv = dir.file("points.csv");
    auto rep = cli::run(cfg);
    auto result = io::json::parse(rep.result_json);
    CHECK(result["distance"].get<double>() > 0.0);
    CHECK(result["mesh"].get<double>() > 0.0);
    std::string csv = io::read_file(cfg.out_csv);
    CHECK(csv.substr(0, 33) == "x_re,x_im,y_re,y_im,branch_index\n");
    // 24 base points x 5 branches
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 24 * 5);
}

TEST_CASE("csv exports") {
    auto rcs = roots(ComplexPoly({-1.0, 0.0, 1.0})); // z^2 - 1
    std::vector<std::pair<SpherePoint, int>> pts;
    for (const auto& rc : rcs) pts.emplace_back(SpherePoint::finite(rc.center), rc.multiplicity);
    std::string csv = io::roots_to_csv(pts);
    CHECK(csv.substr(0, 20) == "re,im,multiplicity\n1");
}

TEST_CASE("signature json round-trip") {
    Signature k;
    k.tree.n = 2;
    k.tree.edges = {{0, 1}};
    k.tree.auxiliary = {false, false};
    k.tau = {1, 0};
    k.delta = {3, 3};
    k.local_delta[{0, 1}] = 2;
    k.local_delta[{1, 0}] = 1;
    Signature m = io::signature_from_json(io::to_json(k));
    CHECK(signature_degree(m) == 6);
    CHECK_FALSE(is_simple(m));
    CHECK(m.tau[0] == 1);
}

TEST_CASE("run: tree-reconstruct emits tree JSON and DOT") {
    TempDir dir;
    TreeOfSpheres t;
    t.n = 2;
    t.edges = {{0, 1}};
    t.auxiliary = {false, false};
    t.markings[{0, 1}] = SpherePoint::finite(0.5);
    t.markings[{1, 0}] = SpherePoint::finite(-0.25);
    auto fam = make_rescaling_family(t);
    io::json j;
    j["rescalings"] = io::json::array();
    for (const auto& r : fam) j["rescalings"].push_back(io::to_json(r));
    j["samples"] = reconstruction_samples();
    std::string fpath = dir.file("rescalings.json");
    io::write_file_atomic(fpath, j.dump());

    cli::RunConfig cfg;
    cfg.subcommand = "tree-reconstruct";
    cfg.inputs = {fpath};
    cfg.out = dir.file("tree.json");
    cfg.out_dot = dir.file("tree.dot");
    auto rep = cli::run(cfg);
    CHECK(rep.outputs.size() == 2);
    auto result = io::json::parse(io::read_file(cfg.out));
    CHECK(result["tree"]["vertices"].get<int>() == 2);
    CHECK(io::read_file(cfg.out_dot).find("v0 -- v1") != std::string::npos);
}

TEST_CASE("run: bowen emits CSV and PPM with recorded hashes") {
    TempDir dir;
    cli::RunConfig cfg;
    cfg.subcommand = "bowen";
    cfg.d = 3;
    cfg.px = 64;
    cfg.depth = 4;
    cfg.out_csv = dir.file("bowen.csv");
    cfg.out_ppm = dir.file("bowen.ppm");
    auto rep = cli::run(cfg);
    CHECK(rep.outputs.size() == 2);
    for (const auto& f : rep.outputs) CHECK(f.fnv1a64_hex.size() == 16);
    auto result = io::json::parse(rep.result_json);
    CHECK(result["winding_degree"].get<int>() == 5);
    std::string ppm = io::read_file(cfg.out_ppm);
    CHECK(ppm.substr(0, 3) == "P6\n");
}

TEST_CASE("run: vd-check verdicts") {
    TempDir dir;
    std::string fam_path = dir.file("rc.json");
    io::write_file_atomic(fam_path, io::to_json(family_map(cplx(0.8, 0.3))).dump());
    cli::RunConfig cfg;
    cfg.subcommand = "vd-check";
    cfg.inputs = {fam_path};
    auto rep = cli::run(cfg);
    CHECK(io::json::parse(rep.result_json)["verdict"].get<bool>());

    std::string z6_path = dir.file("z6.json");
    io::write_file_atomic(z6_path,
                          io::to_json(HomRationalMap(6, ComplexPoly::monomial(6),
                                                     ComplexPoly::one()))
                              .dump());
    cfg.inputs = {z6_path};
    auto rep2 = cli::run(cfg);
    CHECK_FALSE(io::json::parse(rep2.result_json)["verdict"].get<bool>());
}

TEST_CASE("run: renderers are deterministic across runs") {
    TempDir dir;
    cli::RunConfig cfg;
    cfg.subcommand = "render-dyn";
    cfg.c = cplx(0.0);
    cfg.center = cplx(0.0);
    cfg.radius = 2.0;
    cfg.px = 16;
    cfg.depth = 10;
    cfg.width = 24;
    cfg.out = dir.file("dyn.ppm");
    cfg.meta = dir.file("dyn.meta.json");
    auto rep1 = cli::run(cfg);
    std::string h1 = rep1.outputs[0].fnv1a64_hex;
    auto rep2 = cli::run(cfg);
    CHECK(rep2.outputs[0].fnv1a64_hex == h1);
    auto meta = io::json::parse(io::read_file(cfg.meta));
    CHECK(meta["hash"].get<std::string>() == h1);
}

TEST_CASE("run: missing input is an IoError") {
    cli::RunConfig cfg;
    cfg.subcommand = "vd-check";
    cfg.inputs = {"/nonexistent/map.json"};
    CHECK_THROWS_WITH_AS(cli::run(cfg), doctest::Contains("IoError"), Error);
}

TEST_CASE("atomic write never leaves the temp file behind") {
    TempDir dir;
    std::string p = dir.file("artifact.json");
    io::write_file_atomic(p, "{}");
    CHECK(fs::exists(p));
    CHECK_FALSE(fs::exists(p + ".tmp"));
}
