#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "corrlab/mating.hpp"

namespace corrlab {

struct GridSpec {
    cplx center{0.0, 0.0};
    double radius = 2.0;
    int px = 64;

    cplx pixel_to_point(int ix, int iy) const;
    // nearest pixel of a point; false when outside the window
    bool point_to_pixel(cplx p, int& ix, int& iy) const;
};

// Pixel classification codes of the plane renderers.
enum PixelCode : std::uint8_t {
    PixAttracted = 0,
    PixNotAttracted = 1,
    PixExhausted = 2,
    PixNoAttractor = 3,
    // parameter plane: attractor present and some free critical orbit stays
    // away from it within budget -- the bounded region the explorer reports
    PixStructured = 4,
    PixPlainAttractor = 5, // attractor present, all free critical orbits attracted
    PixError = 7,
};

struct PlaneImage {
    GridSpec grid;
    BasinBudget budget;
    unsigned seed = 0;
    std::vector<std::uint8_t> code;   // px * px, row-major
    std::vector<std::uint16_t> depth; // attracted depth per pixel

    std::uint8_t at(int ix, int iy) const { return code[static_cast<size_t>(iy) * grid.px + ix]; }
};

// Per-pixel classification of the dynamical plane of the mating family at c.
// Renders a uniform no-attractor diagnostic when the scan finds none.
// The parallel and serial paths produce identical images.
PlaneImage render_dynamical_plane(cplx c, const GridSpec& grid, const BasinBudget& budget,
                                  bool parallel = true);

// Parameter-plane explorer: per-pixel c, attractor scan plus classification of
// the free critical orbits (critical points away from the poles and +-1).
PlaneImage render_parameter_plane(const GridSpec& grid, const BasinBudget& budget,
                                  bool parallel = true);

// Fraction of comparable pixels whose class differs from the class at the
// nearest pixel of 1/z; grid must cover an eta-symmetric window.
double eta_symmetry_defect(const PlaneImage& img);

// Bounding box of the structured set in parameter-plane images; false when the
// structured set is empty.
bool structured_bounding_box(const PlaneImage& img, double& re_lo, double& re_hi, double& im_lo,
                             double& im_hi);

// Binary PPM (P6, fixed 255 max value) with the fixed palette.
std::string to_ppm(const PlaneImage& img);

// FNV-1a 64-bit content hash.
std::uint64_t fnv1a64(const std::string& bytes);

} // namespace corrlab
