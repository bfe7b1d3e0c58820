#include "corrlab/render.hpp"

#include <cmath>

namespace corrlab {

cplx GridSpec::pixel_to_point(int ix, int iy) const {
    double step = 2.0 * radius / px;
    return center + cplx(-radius + (ix + 0.5) * step, -radius + (iy + 0.5) * step);
}

bool GridSpec::point_to_pixel(cplx p, int& ix, int& iy) const {
    double step = 2.0 * radius / px;
    double fx = (p.real() - center.real() + radius) / step - 0.5;
    double fy = (p.imag() - center.imag() + radius) / step - 0.5;
    ix = static_cast<int>(std::lround(fx));
    iy = static_cast<int>(std::lround(fy));
    return ix >= 0 && ix < px && iy >= 0 && iy < px;
}

PlaneImage render_dynamical_plane(cplx c, const GridSpec& grid, const BasinBudget& budget,
                                  bool parallel) {
    PlaneImage img;
    img.grid = grid;
    img.budget = budget;
    img.code.assign(static_cast<size_t>(grid.px) * grid.px, PixNoAttractor);
    img.depth.assign(img.code.size(), 0);

    MatingModel M = make_mating_model(family_map(c), budget);
    if (!M.attractor) return img; // uniform diagnostic image

    const int px = grid.px;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int iy = 0; iy < px; ++iy) {
        for (int ix = 0; ix < px; ++ix) {
            size_t idx = static_cast<size_t>(iy) * px + ix;
            try {
                ClassifyResult r = classify_point(M, SpherePoint::finite(grid.pixel_to_point(ix, iy)));
                switch (r.cls) {
                case PointClass::Attracted: img.code[idx] = PixAttracted; break;
                case PointClass::NotAttracted: img.code[idx] = PixNotAttracted; break;
                case PointClass::BudgetExhausted: img.code[idx] = PixExhausted; break;
                }
                img.depth[idx] = static_cast<std::uint16_t>(r.depth);
            } catch (const Error&) {
                img.code[idx] = PixError;
            }
        }
    }
    return img;
}

namespace {

std::vector<SpherePoint> free_critical_points(const HomRationalMap& R) {
    std::vector<SpherePoint> out;
    for (const auto& [p, mult] : critical_points(R)) {
        if (p.is_infinity(1e-9)) continue;
        cplx a = p.affine();
        if (std::abs(a) < 1e-9) continue;
        if (std::abs(a - 1.0) < 1e-7 || std::abs(a + 1.0) < 1e-7) continue;
        out.push_back(p);
    }
    return out;
}

} // namespace

PlaneImage render_parameter_plane(const GridSpec& grid, const BasinBudget& budget, bool parallel) {
    PlaneImage img;
    img.grid = grid;
    img.budget = budget;
    img.code.assign(static_cast<size_t>(grid.px) * grid.px, PixNoAttractor);
    img.depth.assign(img.code.size(), 0);

    const int px = grid.px;
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (int iy = 0; iy < px; ++iy) {
        for (int ix = 0; ix < px; ++ix) {
            size_t idx = static_cast<size_t>(iy) * px + ix;
            cplx c = grid.pixel_to_point(ix, iy);
            try {
                MatingModel M = make_mating_model(family_map(c), budget);
                if (!M.attractor) {
                    img.code[idx] = PixNoAttractor;
                    continue;
                }
                auto crits = free_critical_points(M.R);
                int attracted = 0;
                for (const auto& cp : crits)
                    if (classify_point(M, cp).cls == PointClass::Attracted) ++attracted;
                img.code[idx] = attracted == static_cast<int>(crits.size()) ? PixPlainAttractor
                                                                            : PixStructured;
                img.depth[idx] = static_cast<std::uint16_t>(attracted);
            } catch (const Error&) {
                img.code[idx] = PixError;
            }
        }
    }
    return img;
}

double eta_symmetry_defect(const PlaneImage& img) {
    const int px = img.grid.px;
    long comparable = 0, differing = 0;
    for (int iy = 0; iy < px; ++iy)
        for (int ix = 0; ix < px; ++ix) {
            cplx z = img.grid.pixel_to_point(ix, iy);
            if (std::abs(z) < 1e-9) continue;
            int jx, jy;
            if (!img.grid.point_to_pixel(1.0 / z, jx, jy)) continue;
            ++comparable;
            if (img.at(ix, iy) != img.at(jx, jy)) ++differing;
        }
    if (comparable == 0) return 0.0;
    return static_cast<double>(differing) / static_cast<double>(comparable);
}

bool structured_bounding_box(const PlaneImage& img, double& re_lo, double& re_hi, double& im_lo,
                             double& im_hi) {
    bool any = false;
    re_lo = im_lo = 1e300;
    re_hi = im_hi = -1e300;
    for (int iy = 0; iy < img.grid.px; ++iy)
        for (int ix = 0; ix < img.grid.px; ++ix) {
            if (img.at(ix, iy) != PixStructured) continue;
            cplx c = img.grid.pixel_to_point(ix, iy);
            any = true;
            re_lo = std::min(re_lo, c.real());
            re_hi = std::max(re_hi, c.real());
            im_lo = std::min(im_lo, c.imag());
            im_hi = std::max(im_hi, c.imag());
        }
    return any;
}

std::string to_ppm(const PlaneImage& img) {
    const int px = img.grid.px;
    std::string out = "P6\n" + std::to_string(px) + " " + std::to_string(px) + "\n255\n";
    out.reserve(out.size() + static_cast<size_t>(px) * px * 3);
    for (int iy = 0; iy < px; ++iy)
        for (int ix = 0; ix < px; ++ix) {
            size_t idx = static_cast<size_t>(iy) * px + ix;
            std::uint8_t r = 0, g = 0, b = 0;
            switch (img.code[idx]) {
            case PixAttracted: {
                // shade by attracted depth
                int d = img.depth[idx];
                std::uint8_t shade = static_cast<std::uint8_t>(255 - std::min(200, 5 * d));
                r = 20;
                g = shade;
                b = static_cast<std::uint8_t>(90 + shade / 3);
                break;
            }
            case PixNotAttracted: r = 25; g = 12; b = 40; break;
            case PixExhausted: r = 8; g = 8; b = 8; break;
            case PixNoAttractor: r = 60; g = 60; b = 60; break;
            case PixStructured: r = 235; g = 200; b = 40; break;
            case PixPlainAttractor: r = 40; g = 40; b = 90; break;
            default: r = 255; g = 0; b = 0; break;
            }
            out.push_back(static_cast<char>(r));
            out.push_back(static_cast<char>(g));
            out.push_back(static_cast<char>(b));
        }
    return out;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace corrlab
