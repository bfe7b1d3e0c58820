// Benchmark of the data-parallel kernels against their serial reference
// implementations. Both paths produce identical output; this tool reports the
// wall-clock ratio.
#include <omp.h>

#include <cstdio>
#include <cstring>

#include "corrlab/render.hpp"

using namespace corrlab;

namespace {

template <typename F>
double timed(F&& fn) {
    double t0 = omp_get_wtime();
    fn();
    return omp_get_wtime() - t0;
}

void bench_hausdorff(int grid) {
    Correspondence A = from_uniformizer(family_map(cplx(0.2, 0.1)));
    Correspondence B = from_uniformizer(family_map(cplx(0.7, -0.3)));
    double d_serial = 0, d_parallel = 0;
    double ts = timed([&] { d_serial = hausdorff_distance(A, B, grid, nullptr, false); });
    double tp = timed([&] { d_parallel = hausdorff_distance(A, B, grid, nullptr, true); });
    std::printf("hausdorff grid=%-5d serial %7.3f s   parallel %7.3f s   x%.2f   %s\n", grid, ts,
                tp, ts / tp, d_serial == d_parallel ? "identical" : "MISMATCH");
}

void bench_dynamical(int px, int width) {
    GridSpec grid{cplx(0.0), 2.0, px};
    BasinBudget bud;
    bud.width_cap = width;
    std::uint64_t hs = 0, hp = 0;
    double ts = timed([&] { hs = fnv1a64(to_ppm(render_dynamical_plane(cplx(0.0), grid, bud, false))); });
    double tp = timed([&] { hp = fnv1a64(to_ppm(render_dynamical_plane(cplx(0.0), grid, bud, true))); });
    std::printf("render-dyn px=%-4d   serial %7.3f s   parallel %7.3f s   x%.2f   %s\n", px, ts,
                tp, ts / tp, hs == hp ? "identical" : "MISMATCH");
}

void bench_parameter(int px) {
    GridSpec grid{cplx(0.0), 4.0, px};
    BasinBudget bud;
    bud.depth_cap = 16;
    bud.width_cap = 48;
    std::uint64_t hs = 0, hp = 0;
    double ts = timed([&] { hs = fnv1a64(to_ppm(render_parameter_plane(grid, bud, false))); });
    double tp = timed([&] { hp = fnv1a64(to_ppm(render_parameter_plane(grid, bud, true))); });
    std::printf("render-bers px=%-4d  serial %7.3f s   parallel %7.3f s   x%.2f   %s\n", px, ts,
                tp, ts / tp, hs == hp ? "identical" : "MISMATCH");
}

} // namespace

int main(int argc, char** argv) {
    bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    std::printf("threads: %d\n", omp_get_max_threads());
    bench_hausdorff(quick ? 48 : 128);
    bench_dynamical(quick ? 24 : 64, 64);
    bench_parameter(quick ? 16 : 32);
    return 0;
}
