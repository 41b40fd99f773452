#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "rmk/witness.hpp"

using namespace rmk;

namespace {

std::vector<double> unit_random(std::mt19937_64& rng, int n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> v(n);
    double norm = 0.0;
    do {
        norm = 0.0;
        for (auto& x : v) {
            x = gauss(rng);
            norm += x * x;
        }
    } while (norm < 1e-12);
    norm = std::sqrt(norm);
    for (auto& x : v) x /= norm;
    return v;
}

}  // namespace

TEST_CASE("generated functions are odd in each argument and symmetric") {
    std::mt19937_64 rng(7);
    for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
        OddSymFunction f = random_odd_sym(4, seed, 2);
        for (int trial = 0; trial < 1000; ++trial) {
            auto x = unit_random(rng, 4), y = unit_random(rng, 4);
            double v = f.eval(x.data(), y.data());
            std::vector<double> nx = x, ny = y;
            for (auto& c : nx) c = -c;
            for (auto& c : ny) c = -c;
            CHECK(std::fabs(f.eval(nx.data(), y.data()) + v) < 1e-12);
            CHECK(std::fabs(f.eval(x.data(), ny.data()) + v) < 1e-12);
            CHECK(std::fabs(f.eval(y.data(), x.data()) - v) < 1e-12);
        }
    }
}

TEST_CASE("same seed gives the same function") {
    OddSymFunction a = random_odd_sym(5, 42, 3);
    OddSymFunction b = random_odd_sym(5, 42, 3);
    CHECK(a.bilinear.a == b.bilinear.a);
    CHECK(a.mod_weights == b.mod_weights);
    REQUIRE(a.mod_forms.size() == b.mod_forms.size());
    for (std::size_t j = 0; j < a.mod_forms.size(); ++j)
        CHECK(a.mod_forms[j].a == b.mod_forms[j].a);
    OddSymFunction c = random_odd_sym(5, 43, 3);
    CHECK(a.bilinear.a != c.bilinear.a);
}

TEST_CASE("analytic gradients match finite differences") {
    std::mt19937_64 rng(11);
    OddSymFunction f = random_odd_sym(3, 5, 2);
    for (int trial = 0; trial < 20; ++trial) {
        auto x = unit_random(rng, 3), y = unit_random(rng, 3);
        std::vector<double> gx(3), gy(3);
        f.grad(x.data(), y.data(), gx.data(), gy.data());
        const double h = 1e-6;
        for (int i = 0; i < 3; ++i) {
            auto xp = x, xm = x;
            xp[i] += h;
            xm[i] -= h;
            double fd = (f.eval(xp.data(), y.data()) - f.eval(xm.data(), y.data())) / (2 * h);
            CHECK(std::fabs(fd - gx[i]) < 1e-6 * (1.0 + std::fabs(fd)));
            auto yp = y, ym = y;
            yp[i] += h;
            ym[i] -= h;
            fd = (f.eval(x.data(), yp.data()) - f.eval(x.data(), ym.data())) / (2 * h);
            CHECK(std::fabs(fd - gy[i]) < 1e-6 * (1.0 + std::fabs(fd)));
        }
    }
}

TEST_CASE("frame residuals") {
    // the inner product annihilates every orthonormal frame
    OddSymFunction inner;
    inner.n = 3;
    inner.bilinear = Mat(3, 3);
    for (int i = 0; i < 3; ++i) inner.bilinear(i, i) = 1.0;

    Frame id3;
    id3.vectors = Mat(3, 3);
    for (int i = 0; i < 3; ++i) id3.vectors(i, i) = 1.0;
    CHECK(id3.gram_error() < 1e-15);
    for (double r : frame_residual({inner}, id3)) CHECK(r == 0.0);

    // a diagonal form with distinct eigenvalues vanishes on the standard basis
    OddSymFunction diag;
    diag.n = 3;
    diag.bilinear = Mat(3, 3);
    diag.bilinear(0, 0) = 1.5;
    diag.bilinear(1, 1) = -0.4;
    diag.bilinear(2, 2) = 2.25;
    for (double r : frame_residual({diag}, id3)) CHECK(r == 0.0);

    // generically nonzero on a random frame
    std::mt19937_64 rng(3);
    OddSymFunction f = random_odd_sym(3, 9, 1);
    Frame random_frame;
    random_frame.vectors = Mat(2, 3);
    auto u = unit_random(rng, 3);
    auto v = unit_random(rng, 3);
    for (int i = 0; i < 3; ++i) {
        random_frame.vectors(0, i) = u[i];
        random_frame.vectors(1, i) = v[i];
    }
    double mx = 0.0;
    for (double r : frame_residual({f}, random_frame)) mx = std::max(mx, std::fabs(r));
    CHECK(mx > 1e-8);

    // residual vector length is m * k(k-1)/2
    CHECK(frame_residual({inner, diag}, id3).size() == 6);
}

TEST_CASE("frame search solves the pure bilinear case (diagonalization)") {
    OddSymFunction f = random_odd_sym(3, 21, 0);
    auto res = search_frame({f}, 3, 3, 1e-10, 40, 77);
    REQUIRE(res.found);
    CHECK(res.residual_inf <= 1e-10);
    CHECK(res.frame.gram_error() <= 1e-10);
}

TEST_CASE("frame search solves modulated instances and reproduces bitwise") {
    std::vector<OddSymFunction> fs = {random_odd_sym(3, 31, 2)};
    auto a = search_frame(fs, 3, 3, 1e-9, 60, 5);
    auto b = search_frame(fs, 3, 3, 1e-9, 60, 5);
    REQUIRE(a.found);
    REQUIRE(b.found);
    CHECK(a.frame.vectors.a == b.frame.vectors.a);
    CHECK(a.restarts_used == b.restarts_used);
    CHECK(a.residual == b.residual);

    // independent re-evaluation at the reported frame stays below tol
    auto fresh = frame_residual(fs, a.frame);
    double mx = 0.0;
    for (double r : fresh) mx = std::max(mx, std::fabs(r));
    CHECK(mx <= 1e-9);

    auto c = search_frame(fs, 3, 3, 1e-9, 60, 6);
    REQUIRE(c.found);  // different seed still succeeds
}

TEST_CASE("halving offsets") {
    SampledMeasure four;
    four.points = Mat(4, 1);
    four.points(0, 0) = 1;
    four.points(1, 0) = 2;
    four.points(2, 0) = 3;
    four.points(3, 0) = 4;
    four.weights.assign(4, 0.25);
    four.uniform_weights = true;
    CHECK(halving_offset(four, {1.0}) == doctest::Approx(2.5));

    // symmetric-about-origin set halves at zero
    SampledMeasure sym;
    sym.points = Mat(6, 2);
    double pts[6][2] = {{1, 2}, {-1, -2}, {0.5, -3}, {-0.5, 3}, {2, 0}, {-2, 0}};
    for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 2; ++j) sym.points(i, j) = pts[i][j];
    sym.weights.assign(6, 1.0 / 6);
    sym.uniform_weights = true;
    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 10; ++trial) {
        auto dir = unit_random(rng, 2);
        CHECK(std::fabs(halving_offset(sym, dir)) < 1e-12);
    }

    // non-uniform weights: median sits inside the heavy atom
    SampledMeasure heavy;
    heavy.points = Mat(3, 1);
    heavy.points(0, 0) = -1;
    heavy.points(1, 0) = 0;
    heavy.points(2, 0) = 5;
    heavy.weights = {0.2, 0.6, 0.2};
    heavy.uniform_weights = false;
    CHECK(halving_offset(heavy, {1.0}) == doctest::Approx(0.0));

    // Monte-Carlo bound for a seeded Gaussian cloud
    SampledMeasure cloud = gaussian_cloud(3, 20000, 4);
    for (int trial = 0; trial < 5; ++trial) {
        auto dir = unit_random(rng, 3);
        CHECK(std::fabs(halving_offset(cloud, dir)) < 0.05);
    }
    CHECK_THROWS_AS(halving_offset(cloud, std::vector<double>{0.0, 0.0, 0.0}),
                    std::invalid_argument);
}

TEST_CASE("orthant masses") {
    SampledMeasure cloud = gaussian_cloud(2, 40000, 9);
    HyperplaneArrangement axes;
    axes.normals = Mat(2, 2);
    axes.normals(0, 0) = 1.0;
    axes.normals(1, 1) = 1.0;
    axes.offsets = {0.0, 0.0};
    axes.orthogonal = true;
    CHECK(axes.orthogonality_error() < 1e-15);

    auto masses = orthant_masses(cloud, axes);
    REQUIRE(masses.size() == 4);
    double total = 0.0;
    for (double m : masses) {
        CHECK(m == doctest::Approx(0.25).epsilon(0.05));
        total += m;
    }
    CHECK(total <= 1.0 + 1e-15);

    // parallel kernel agrees exactly on uniform weights
    auto par = orthant_masses_parallel(cloud, axes);
    CHECK(par == masses);

    // k = 1 halving: both sides within atomic resolution of 1/2
    HyperplaneArrangement half;
    half.normals = Mat(1, 2);
    half.normals(0, 0) = 0.6;
    half.normals(0, 1) = 0.8;
    std::vector<double> dir = {0.6, 0.8};
    half.offsets = {halving_offset(cloud, dir)};
    auto two = orthant_masses(cloud, half);
    REQUIRE(two.size() == 2);
    CHECK(std::fabs(two[0] - 0.5) <= 1e-4);
    CHECK(std::fabs(two[1] - 0.5) <= 1e-4);

    // boundary atoms belong to no orthant: masses plus boundary weight sum to one
    SampledMeasure grid;
    grid.points = Mat(3, 2);
    grid.points(0, 0) = 0.0;  // on the vertical axis
    grid.points(0, 1) = 1.0;
    grid.points(1, 0) = 1.0;
    grid.points(1, 1) = 1.0;
    grid.points(2, 0) = -1.0;
    grid.points(2, 1) = -1.0;
    grid.weights.assign(3, 1.0 / 3);
    grid.uniform_weights = true;
    auto gm = orthant_masses(grid, axes);
    double sum = 0.0;
    for (double m : gm) sum += m;
    CHECK(sum == doctest::Approx(2.0 / 3));
}

TEST_CASE("exact equipartition of a reflection-symmetric product measure") {
    // orbit of one point under coordinate sign flips
    SampledMeasure orbit;
    orbit.points = Mat(4, 2);
    double pts[4][2] = {{1.2, 0.7}, {-1.2, 0.7}, {1.2, -0.7}, {-1.2, -0.7}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 2; ++j) orbit.points(i, j) = pts[i][j];
    orbit.weights.assign(4, 0.25);
    orbit.uniform_weights = true;
    HyperplaneArrangement axes;
    axes.normals = Mat(2, 2);
    axes.normals(0, 0) = 1.0;
    axes.normals(1, 1) = 1.0;
    axes.offsets = {0.0, 0.0};
    auto masses = orthant_masses(orbit, axes);
    for (double m : masses) CHECK(m == doctest::Approx(0.25));
}

TEST_CASE("equipartition search: two lines quarter a planar cloud") {
    std::vector<SampledMeasure> mus = {gaussian_cloud(2, 20000, 13)};
    auto res = search_equipartition(mus, 2, 2, 2, /*orth=*/false, /*free_offsets=*/true, 8e-3,
                                    12, 99);
    REQUIRE(res.found);
    CHECK(res.worst_deviation <= 8e-3);
    CHECK(res.offsets_mode == "free");
    for (double m : res.masses) CHECK(m == doctest::Approx(0.25).epsilon(0.08));
}

TEST_CASE("equipartition search: orthogonal pair in dimension 3 with halving offsets") {
    std::vector<SampledMeasure> mus = {gaussian_cloud(3, 20000, 17)};
    auto res = search_equipartition(mus, 3, 2, 2, /*orth=*/true, /*free_offsets=*/false, 8e-3,
                                    12, 100);
    REQUIRE(res.found);
    CHECK(res.arrangement.orthogonality_error() <= 1e-10);
    CHECK(res.offsets_mode == "halving");

    // reproducible
    auto res2 = search_equipartition(mus, 3, 2, 2, true, false, 8e-3, 12, 100);
    CHECK(res2.found);
    CHECK(res.arrangement.normals.a == res2.arrangement.normals.a);
    CHECK(res.restarts_used == res2.restarts_used);
}

TEST_CASE("measure loader") {
    std::istringstream good("0.0 1.0 0.5\n# comment\n1.0 0.0 0.5\n");
    SampledMeasure mu = load_measure(good);
    CHECK(mu.points.rows == 2);
    CHECK(mu.points.cols == 2);
    CHECK(mu.weights[0] == doctest::Approx(0.5));
    CHECK(mu.uniform_weights);

    std::istringstream bad("1.0 2.0\nbroken line\n");
    CHECK_THROWS_AS(load_measure(bad), std::invalid_argument);
    std::istringstream negw("1.0 2.0 -0.5\n");
    CHECK_THROWS_AS(load_measure(negw), std::invalid_argument);
    std::istringstream empty("\n# nothing\n");
    CHECK_THROWS_AS(load_measure(empty), std::invalid_argument);
    std::istringstream wrongdim("1.0 2.0 1.0\n1.0 2.0 3.0 1.0\n");
    CHECK_THROWS_AS(load_measure(wrongdim), std::invalid_argument);
}
