#include <chrono>
#include <cstdio>
#include <random>
#include <string>

#include <CLI11.hpp>

#include "rmk/gf2rows.hpp"
#include "rmk/sweep.hpp"
#include "rmk/witness.hpp"

// Compares the OpenMP kernels against their serial reference
// implementations on synthetic workloads.

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
}

void bench_elim(std::size_t nrows, std::size_t ncols) {
    std::mt19937_64 rng(12345);
    std::bernoulli_distribution bit(0.15);
    std::vector<rmk::BitRow> rows;
    for (std::size_t i = 0; i < nrows; ++i) {
        rmk::BitRow r = rmk::BitRow::zeros(ncols);
        for (std::size_t c = 0; c < ncols; ++c)
            if (bit(rng)) r.set(c);
        rows.push_back(std::move(r));
    }
    auto t0 = std::chrono::steady_clock::now();
    auto ser = rmk::echelonize_serial(rows, ncols, false);
    double t_ser = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    auto par = rmk::echelonize(rows, ncols, false, true);
    double t_par = ms_since(t0);
    std::printf("elimination %zux%zu  rank %zu  serial %.1f ms  parallel %.1f ms  "
                "speedup %.2fx  match %s\n",
                nrows, ncols, ser.rank(), t_ser, t_par, t_ser / t_par,
                (ser.rows == par.rows && ser.rank() == par.rank()) ? "yes" : "NO");
}

void bench_masses(long npoints, int k) {
    auto cloud = rmk::gaussian_cloud(3, npoints, 7);
    rmk::HyperplaneArrangement h;
    h.normals = rmk::Mat(k, 3);
    for (int i = 0; i < k; ++i) h.normals(i, i % 3) = 1.0;
    h.offsets.assign(k, 0.1);
    auto t0 = std::chrono::steady_clock::now();
    auto ser = rmk::orthant_masses(cloud, h);
    double t_ser = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    auto par = rmk::orthant_masses_parallel(cloud, h);
    double t_par = ms_since(t0);
    std::printf("orthant masses N=%ld k=%d  serial %.1f ms  parallel %.1f ms  speedup %.2fx  "
                "match %s\n",
                npoints, k, t_ser, t_par, t_ser / t_par, ser == par ? "yes" : "NO");
}

void bench_sweep() {
    rmk::SweepSpec spec;
    spec.problem = rmk::Problem::rattray;
    spec.n = {2, 9};
    spec.m = {1, 8};
    spec.k = {2, 3};
    spec.variant = rmk::RattrayVariant::odd_sym;
    spec.orth = true;
    auto t0 = std::chrono::steady_clock::now();
    auto ser = rmk::run_sweep_serial(spec);
    double t_ser = ms_since(t0);
    t0 = std::chrono::steady_clock::now();
    auto par = rmk::run_sweep(spec);
    double t_par = ms_since(t0);
    std::printf("verdict sweep %ld rows  serial %.1f ms  parallel %.1f ms  speedup %.2fx  "
                "match %s\n",
                static_cast<long>(ser.size()), t_ser, t_par, t_ser / t_par,
                rmk::sweep_csv(ser) == rmk::sweep_csv(par) ? "yes" : "NO");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP kernel comparison"};
    std::size_t rows = 1000, cols = 24000;
    long npoints = 2000000;
    int k = 3;
    bool do_elim = false, do_masses = false, do_sweep = false;
    app.add_flag("--elim", do_elim, "bit-packed elimination");
    app.add_flag("--masses", do_masses, "orthant mass accumulation");
    app.add_flag("--sweep", do_sweep, "verdict sweep");
    app.add_option("--rows", rows);
    app.add_option("--cols", cols);
    app.add_option("--points", npoints);
    app.add_option("--k", k);
    CLI11_PARSE(app, argc, argv);

    if (!do_elim && !do_masses && !do_sweep) do_elim = do_masses = do_sweep = true;
    if (do_elim) bench_elim(rows, cols);
    if (do_masses) bench_masses(npoints, k);
    if (do_sweep) bench_sweep();
    return 0;
}
