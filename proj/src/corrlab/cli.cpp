#include "corrlab/cli.hpp"

#include <omp.h>

#include <chrono>
#include <cstdlib>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "corrlab/fuchsian.hpp"
#include "corrlab/io.hpp"
#include "corrlab/render.hpp"

namespace corrlab::cli {

namespace {

using io::json;

// accepts "re,im" and "re+imi" forms (e.g. "0.5,-1" or "0.5-1i")
cplx parse_complex(const std::string& s) {
    std::string t = s;
    auto comma = t.find(',');
    try {
        if (comma != std::string::npos) {
            return cplx(std::stod(t.substr(0, comma)), std::stod(t.substr(comma + 1)));
        }
        if (!t.empty() && t.back() == 'i') {
            t.pop_back();
            // split at the last +/- that is not an exponent sign or leading
            for (size_t i = t.size(); i-- > 1;) {
                if ((t[i] == '+' || t[i] == '-') && t[i - 1] != 'e' && t[i - 1] != 'E') {
                    double re = std::stod(t.substr(0, i));
                    std::string im = t.substr(i);
                    if (im == "+") return cplx(re, 1.0);
                    if (im == "-") return cplx(re, -1.0);
                    return cplx(re, std::stod(im));
                }
            }
            if (t.empty() || t == "+") return cplx(0.0, 1.0);
            if (t == "-") return cplx(0.0, -1.0);
            return cplx(0.0, std::stod(t));
        }
        return cplx(std::stod(t), 0.0);
    } catch (const std::exception&) {
        fail("UsageError", "cannot parse complex number '" + s + "'");
    }
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return std::string(buf);
}

void emit(RunReport& rep, const std::string& path, const std::string& content) {
    io::write_file_atomic(path, content);
    rep.outputs.push_back({path, hex64(fnv1a64(content))});
}

std::vector<double> config_samples(const RunConfig& cfg) {
    if (cfg.samples) {
        if (cfg.samples->size() < 4) fail("UsageError", "need at least 4 samples");
        return *cfg.samples;
    }
    return RescalingSequence::default_samples();
}

json report_outputs(const RunReport& rep) {
    json outs = json::array();
    for (const auto& f : rep.outputs) outs.push_back({{"path", f.path}, {"hash", f.fnv1a64_hex}});
    return outs;
}

void run_limits(const RunConfig& cfg, RunReport& rep) {
    if (cfg.inputs.empty()) fail("UsageError", "limits needs a family file");
    RatMapFamily fam = io::family_from_json(json::parse(io::read_file(cfg.inputs[0])));
    LimitOptions opts;
    opts.tol = cfg.tol;
    LimitReport lr = limit_of_family(fam.fn(), fam.degree, config_samples(cfg), opts);
    json result;
    result["reduced"] = io::to_json(lr.limit);
    result["drift"] = lr.drift;
    result["probe_defect"] = lr.probe_defect;
    if (!cfg.out.empty()) emit(rep, cfg.out, result.dump(2) + "\n");
    rep.result_json = result.dump();
}

void run_rescale(const RunConfig& cfg, RunReport& rep) {
    if (cfg.inputs.empty()) fail("UsageError", "rescale needs a family file");
    RatMapFamily fam = io::family_from_json(json::parse(io::read_file(cfg.inputs[0])));
    RescalingSequence A = cfg.a_file.empty()
                              ? RescalingSequence::constant(MoebiusMap::identity())
                              : io::rescaling_from_json(json::parse(io::read_file(cfg.a_file)));
    A.sample_indices = config_samples(cfg);
    RescalingSequence B = A;
    json result;
    if (cfg.find_b) {
        std::array<SpherePoint, 3> probes{SpherePoint::finite(0.0), SpherePoint::finite(1.0),
                                          SpherePoint::infinity()};
        B = find_corescaling(fam, A, probes);
        result["corescaling"] = io::to_json(B);
    } else if (!cfg.b_file.empty()) {
        B = io::rescaling_from_json(json::parse(io::read_file(cfg.b_file)));
        B.sample_indices = A.sample_indices;
    }
    LimitOptions opts;
    opts.tol = cfg.tol;
    RescalingLimitReport rl = rescaling_limit(fam.fn(), fam.degree, A, B, opts);
    result["status"] =
        rl.status == RescalingStatus::RescalingLimit ? "rescaling_limit" : "degree_zero";
    result["reduced"] = io::to_json(rl.report.limit);
    result["drift"] = rl.report.drift;
    if (!cfg.out.empty()) emit(rep, cfg.out, result.dump(2) + "\n");
    rep.result_json = result.dump();
}

void run_hausdorff(const RunConfig& cfg, RunReport& rep) {
    if (cfg.inputs.size() < 2) fail("UsageError", "hausdorff needs two correspondence files");
    Correspondence A = io::correspondence_from_json(json::parse(io::read_file(cfg.inputs[0])));
    Correspondence B = io::correspondence_from_json(json::parse(io::read_file(cfg.inputs[1])));
    double mesh = 0.0;
    double d = hausdorff_distance(A, B, cfg.grid, &mesh, !cfg.serial);
    json result{{"distance", d}, {"mesh", mesh}, {"grid", cfg.grid}};
    if (!cfg.out_csv.empty()) emit(rep, cfg.out_csv, io::variety_to_csv(A, cfg.grid));
    if (!cfg.out.empty()) emit(rep, cfg.out, result.dump(2) + "\n");
    rep.result_json = result.dump();
}

void run_tree_reconstruct(const RunConfig& cfg, RunReport& rep) {
    if (cfg.inputs.empty()) fail("UsageError", "tree-reconstruct needs a rescaling-family file");
    json j = json::parse(io::read_file(cfg.inputs[0]));
    if (!j.contains("rescalings")) fail("ParseError", "file needs a 'rescalings' array");
    std::vector<RescalingSequence> fam;
    for (const auto& r : j["rescalings"]) fam.push_back(io::rescaling_from_json(r));
    std::vector<double> samples =
        cfg.samples ? *cfg.samples
                    : (j.contains("samples") ? j["samples"].get<std::vector<double>>()
                                             : reconstruction_samples());
    auto res = reconstruct_tree(fam, samples);
    json result;
    result["tree"] = io::to_json(res.tree);
    json graph = json::array();
    for (const auto& [a, b] : res.graph.edges) graph.push_back(json::array({a, b}));
    result["adjacency_graph"] = graph;
    if (!cfg.out.empty()) emit(rep, cfg.out, result.dump(2) + "\n");
    if (!cfg.out_dot.empty()) emit(rep, cfg.out_dot, io::tree_to_dot(res.tree));
    rep.result_json = result.dump();
}

void run_bowen(const RunConfig& cfg, RunReport& rep) {
    if (cfg.d < 2 || cfg.d > 16) fail("UsageError", "bowen needs 2 <= d <= 16");
    BowenSeriesMap A = bowen_series(cfg.d);
    int degree = winding_degree(A);
    json result{{"d", cfg.d}, {"winding_degree", degree}};

    json gens = json::array();
    for (int jgen = 1; jgen <= cfg.d; ++jgen) gens.push_back(io::to_json(A.pairing.generator(jgen)));
    result["generators"] = gens;

    if (!cfg.out_csv.empty()) {
        std::ostringstream csv;
        csv.precision(17);
        csv << "t,A_of_t\n";
        const int N = 2048;
        for (int i = 0; i < N; ++i) {
            double t = 2.0 * M_PI * i / N;
            csv << t << "," << A.eval(t) << "\n";
        }
        emit(rep, cfg.out_csv, csv.str());
    }
    if (!cfg.out_ppm.empty()) {
        // graph of the circle map and of the conjugacy h on a px x px canvas
        int px = cfg.px;
        CircleConjugacy h = conjugacy(A, std::min(cfg.depth, 8));
        std::string img(static_cast<size_t>(px) * px * 3, static_cast<char>(255));
        auto put = [&](int x, int y, unsigned char r, unsigned char g, unsigned char b) {
            if (x < 0 || y < 0 || x >= px || y >= px) return;
            size_t i = 3 * (static_cast<size_t>(px - 1 - y) * px + x);
            img[i] = static_cast<char>(r);
            img[i + 1] = static_cast<char>(g);
            img[i + 2] = static_cast<char>(b);
        };
        for (int x = 0; x < px; ++x) {
            double t = 2.0 * M_PI * x / px;
            put(x, static_cast<int>(A.eval(t) / (2.0 * M_PI) * px), 30, 60, 200);
            put(x, static_cast<int>(h.evaluate(t) / (2.0 * M_PI) * px), 200, 60, 30);
        }
        emit(rep, cfg.out_ppm,
             "P6\n" + std::to_string(px) + " " + std::to_string(px) + "\n255\n" + img);
    }
    if (!cfg.out.empty()) emit(rep, cfg.out, result.dump(2) + "\n");
    rep.result_json = result.dump();
}

void run_vd_check(const RunConfig& cfg, RunReport& rep) {
    if (cfg.inputs.empty()) fail("UsageError", "vd-check needs a map file");
    HomRationalMap R = io::map_from_json(json::parse(io::read_file(cfg.inputs[0])));
    if (R.degree() % 2 != 0) fail("DegreeMismatch", "vd-check needs an even-degree map");
    int d = R.degree() / 2;
    VdReport v = vd_membership(R, d, cfg.tol);
    json result;
    result["verdict"] = v.verdict;
    result["dR_at_1"] = {v.dR_at_one.real(), v.dR_at_one.imag()};
    result["dR_at_minus_1"] = {v.dR_at_minus_one.real(), v.dR_at_minus_one.imag()};
    result["sres_rel"] = v.sres_rel;
    if (!cfg.out.empty()) emit(rep, cfg.out, result.dump(2) + "\n");
    rep.result_json = result.dump();
}

json image_meta(const PlaneImage& img, const std::string& ppm) {
    json meta;
    meta["px"] = img.grid.px;
    meta["center"] = {img.grid.center.real(), img.grid.center.imag()};
    meta["radius"] = img.grid.radius;
    meta["depth_cap"] = img.budget.depth_cap;
    meta["width_cap"] = img.budget.width_cap;
    meta["seed"] = img.seed;
    meta["hash"] = hex64(fnv1a64(ppm));
    return meta;
}

void run_render_dyn(const RunConfig& cfg, RunReport& rep) {
    GridSpec grid{cfg.center, cfg.radius, cfg.px};
    BasinBudget bud;
    bud.depth_cap = cfg.depth;
    bud.width_cap = cfg.width;
    PlaneImage img = render_dynamical_plane(cfg.c, grid, bud, !cfg.serial);
    img.seed = cfg.seed;
    std::string ppm = to_ppm(img);
    if (cfg.out.empty()) fail("UsageError", "render-dyn needs --out");
    emit(rep, cfg.out, ppm);
    json meta = image_meta(img, ppm);
    meta["c"] = {cfg.c.real(), cfg.c.imag()};
    meta["eta_symmetry_defect"] = eta_symmetry_defect(img);
    if (!cfg.meta.empty()) emit(rep, cfg.meta, meta.dump(2) + "\n");
    rep.result_json = meta.dump();
}

void run_render_bers(const RunConfig& cfg, RunReport& rep) {
    GridSpec grid{cfg.center, cfg.radius, cfg.px};
    BasinBudget bud;
    bud.depth_cap = cfg.depth;
    bud.width_cap = cfg.width;
    PlaneImage img = render_parameter_plane(grid, bud, !cfg.serial);
    img.seed = cfg.seed;
    std::string ppm = to_ppm(img);
    if (cfg.out.empty()) fail("UsageError", "render-bers needs --out");
    emit(rep, cfg.out, ppm);
    json meta = image_meta(img, ppm);
    double rlo, rhi, ilo, ihi;
    if (structured_bounding_box(img, rlo, rhi, ilo, ihi)) {
        meta["structured_bbox"] = {rlo, rhi, ilo, ihi};
        meta["structured_strictly_inside"] =
            rlo > grid.center.real() - grid.radius + 1e-12 &&
            rhi < grid.center.real() + grid.radius - 1e-12 &&
            ilo > grid.center.imag() - grid.radius + 1e-12 &&
            ihi < grid.center.imag() + grid.radius - 1e-12;
    } else {
        meta["structured_bbox"] = nullptr;
    }
    if (!cfg.meta.empty()) emit(rep, cfg.meta, meta.dump(2) + "\n");
    rep.result_json = meta.dump();
}

} // namespace

RunConfig parse_args(const std::vector<std::string>& argv) {
    RunConfig cfg;
    CLI::App app{"algebraic correspondences toolbox"};
    app.require_subcommand(1);

    std::string c_str, center_str = "0,0", samples_str;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--tol", cfg.tol, "numeric tolerance")->check(CLI::PositiveNumber);
        sub->add_option("--seed", cfg.seed, "deterministic seed");
        sub->add_flag("--serial", cfg.serial, "disable the parallel kernels");
        sub->add_option("--samples", samples_str, "comma-separated sample schedule in n");
    };

    auto* limits = app.add_subcommand("limits", "limit of a degenerating family");
    limits->add_option("--family", cfg.inputs, "family JSON file")->required();
    limits->add_option("--out", cfg.out, "output reduced-form JSON");
    add_common(limits);

    auto* rescale = app.add_subcommand("rescale", "rescaling limit of a family");
    rescale->add_option("--family", cfg.inputs, "family JSON file")->required();
    rescale->add_option("--a", cfg.a_file, "rescaling A JSON (default identity)");
    rescale->add_option("--b", cfg.b_file, "rescaling B JSON (default identity)");
    rescale->add_flag("--find-b", cfg.find_b, "construct B from the three-probe heuristic");
    rescale->add_option("--out", cfg.out, "output report JSON");
    add_common(rescale);

    auto* hausdorff = app.add_subcommand("hausdorff", "sampled Hausdorff distance");
    hausdorff->add_option("files", cfg.inputs, "two correspondence JSON files")
        ->expected(2)
        ->required();
    hausdorff->add_option("--grid", cfg.grid, "sphere grid size")->check(CLI::Range(16, 65536));
    hausdorff->add_option("--out", cfg.out, "output report JSON");
    hausdorff->add_option("--dump-csv", cfg.out_csv, "CSV of the first variety's sample points");
    add_common(hausdorff);

    auto* tree = app.add_subcommand("tree-reconstruct", "tree of spheres from rescalings");
    tree->add_option("--family", cfg.inputs, "rescaling-family JSON file")->required();
    tree->add_option("--out", cfg.out, "output tree JSON");
    tree->add_option("--dot", cfg.out_dot, "output DOT graph");
    add_common(tree);

    auto* bowen = app.add_subcommand("bowen", "Bowen-Series circle map of the base group");
    bowen->add_option("--d", cfg.d, "half the number of polygon sides")->check(CLI::Range(2, 16));
    bowen->add_option("--depth", cfg.depth, "conjugacy depth for the plot");
    bowen->add_option("--px", cfg.px, "plot size")->check(CLI::Range(16, 8192));
    bool plot = false;
    bowen->add_flag("--plot", plot, "emit CSV samples and a PPM graph");
    bowen->add_option("--out", cfg.out, "output report JSON");
    bowen->add_option("--out-csv", cfg.out_csv, "output CSV of (t, A(t))");
    bowen->add_option("--out-ppm", cfg.out_ppm, "output PPM graph");
    add_common(bowen);

    auto* vd = app.add_subcommand("vd-check", "subresultant variety membership");
    vd->add_option("--map", cfg.inputs, "map JSON file")->required();
    vd->add_option("--out", cfg.out, "output report JSON");
    add_common(vd);

    auto* rdyn = app.add_subcommand("render-dyn", "dynamical-plane classification");
    rdyn->add_option("--c", c_str, "family parameter (re,im)")->required();
    rdyn->add_option("--center", center_str, "window center");
    rdyn->add_option("--radius", cfg.radius, "window radius")->check(CLI::PositiveNumber);
    rdyn->add_option("--px", cfg.px, "pixels per side")->check(CLI::Range(16, 8192));
    rdyn->add_option("--depth", cfg.depth, "orbit depth budget")->check(CLI::PositiveNumber);
    rdyn->add_option("--width", cfg.width, "frontier width budget")->check(CLI::PositiveNumber);
    rdyn->add_option("--out", cfg.out, "output PPM")->required();
    rdyn->add_option("--meta", cfg.meta, "metadata sidecar JSON");
    add_common(rdyn);

    auto* rbers = app.add_subcommand("render-bers", "parameter-plane explorer");
    rbers->add_option("--center", center_str, "window center");
    rbers->add_option("--radius", cfg.radius, "window radius")->check(CLI::PositiveNumber);
    rbers->add_option("--px", cfg.px, "pixels per side")->check(CLI::Range(16, 8192));
    rbers->add_option("--depth", cfg.depth, "orbit depth budget")->check(CLI::PositiveNumber);
    rbers->add_option("--width", cfg.width, "frontier width budget")->check(CLI::PositiveNumber);
    rbers->add_option("--out", cfg.out, "output PPM")->required();
    rbers->add_option("--meta", cfg.meta, "metadata sidecar JSON");
    add_common(rbers);

    std::vector<std::string> args(argv.begin(), argv.end());
    std::reverse(args.begin(), args.end());
    try {
        app.parse(args);
    } catch (const CLI::CallForHelp&) {
        fail("Help", app.help());
    } catch (const CLI::CallForAllHelp&) {
        fail("Help", app.help("", CLI::AppFormatMode::All));
    } catch (const CLI::ParseError& e) {
        fail("UsageError", e.what());
    }

    cfg.subcommand = app.get_subcommands().front()->get_name();
    if (!c_str.empty()) cfg.c = parse_complex(c_str);
    cfg.center = parse_complex(center_str);
    if (!samples_str.empty()) {
        std::vector<double> s;
        std::stringstream ss(samples_str);
        std::string item;
        while (std::getline(ss, item, ',')) s.push_back(std::stod(item));
        cfg.samples = std::move(s);
    }
    if (cfg.subcommand == "bowen" && !plot) {
        cfg.out_csv.clear();
        cfg.out_ppm.clear();
    }
    return cfg;
}

RunReport run(const RunConfig& cfg) {
    if (const char* threads = std::getenv("CORRLAB_THREADS")) {
        int t = std::atoi(threads);
        if (t > 0) omp_set_num_threads(t);
    }
    RunReport rep;
    rep.subcommand = cfg.subcommand;
    auto start = std::chrono::steady_clock::now();

    if (cfg.subcommand == "limits") run_limits(cfg, rep);
    else if (cfg.subcommand == "rescale") run_rescale(cfg, rep);
    else if (cfg.subcommand == "hausdorff") run_hausdorff(cfg, rep);
    else if (cfg.subcommand == "tree-reconstruct") run_tree_reconstruct(cfg, rep);
    else if (cfg.subcommand == "bowen") run_bowen(cfg, rep);
    else if (cfg.subcommand == "vd-check") run_vd_check(cfg, rep);
    else if (cfg.subcommand == "render-dyn") run_render_dyn(cfg, rep);
    else if (cfg.subcommand == "render-bers") run_render_bers(cfg, rep);
    else fail("UsageError", "unknown subcommand " + cfg.subcommand);

    rep.elapsed_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

int main_entry(int argc, const char* const* argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        RunConfig cfg = parse_args(args);
        RunReport rep = run(cfg);
        json out;
        out["subcommand"] = rep.subcommand;
        out["elapsed_seconds"] = rep.elapsed_seconds;
        out["outputs"] = report_outputs(rep);
        if (!rep.result_json.empty()) out["result"] = json::parse(rep.result_json);
        std::cout << out.dump(2) << std::endl;
        return 0;
    } catch (const Error& e) {
        if (e.kind() == "Help") {
            std::cout << std::string(e.what()).substr(6) << std::endl;
            return 0;
        }
        json err{{"error", e.kind()}, {"detail", e.what()}};
        std::cerr << err.dump() << std::endl;
        return e.kind() == "UsageError" ? 2 : 1;
    } catch (const std::exception& e) {
        json err{{"error", "InternalError"}, {"detail", e.what()}};
        std::cerr << err.dump() << std::endl;
        return 1;
    }
}

} // namespace corrlab::cli
