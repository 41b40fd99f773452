#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rmk/gf2rows.hpp"

using namespace rmk;

namespace {

std::vector<BitRow> random_rows(std::mt19937_64& rng, std::size_t nrows, std::size_t ncols,
                                double density) {
    std::bernoulli_distribution bit(density);
    std::vector<BitRow> rows;
    for (std::size_t i = 0; i < nrows; ++i) {
        BitRow r = BitRow::zeros(ncols);
        for (std::size_t c = 0; c < ncols; ++c)
            if (bit(rng)) r.set(c);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace

TEST_CASE("first_set") {
    BitRow r = BitRow::zeros(200);
    CHECK(r.first_set() == BitRow::npos);
    r.set(130);
    CHECK(r.first_set() == 130);
    r.set(7);
    CHECK(r.first_set() == 7);
}

TEST_CASE("rank of known matrices") {
    // rows over 4 columns: 1100, 0110, 1010 (dependent), 0001
    std::vector<BitRow> rows(4, BitRow::zeros(4));
    rows[0].set(0);
    rows[0].set(1);
    rows[1].set(1);
    rows[1].set(2);
    rows[2].set(0);
    rows[2].set(2);
    rows[3].set(3);
    auto ef = echelonize(rows, 4, false, false);
    CHECK(ef.rank() == 3);
}

TEST_CASE("reduce decides span membership and tracks provenance") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        auto rows = random_rows(rng, 12, 40, 0.3);
        auto ef = echelonize(rows, 40, true, false);

        // combos reproduce the echelon rows
        for (std::size_t i = 0; i < ef.rows.size(); ++i) {
            BitRow sum = BitRow::zeros(40);
            for (std::size_t j = 0; j < rows.size(); ++j)
                if (ef.combos[i].get(j)) sum ^= rows[j];
            CHECK(sum == ef.rows[i]);
        }

        // random combinations of the input rows reduce to zero with a
        // provenance combo that reproduces the query
        std::uniform_int_distribution<std::uint64_t> mask(1, (1ULL << rows.size()) - 1);
        for (int q = 0; q < 10; ++q) {
            std::uint64_t m = mask(rng);
            BitRow query = BitRow::zeros(40);
            for (std::size_t j = 0; j < rows.size(); ++j)
                if ((m >> j) & 1) query ^= rows[j];
            BitRow combo = BitRow::zeros(rows.size());
            BitRow residual = ef.reduce(query, &combo);
            CHECK(!residual.any());
            BitRow sum = BitRow::zeros(40);
            for (std::size_t j = 0; j < rows.size(); ++j)
                if (combo.get(j)) sum ^= rows[j];
            CHECK(sum == query);
        }
    }
}

TEST_CASE("appending an independent row grows the rank by one") {
    std::mt19937_64 rng(17);
    auto rows = random_rows(rng, 10, 64, 0.4);
    auto ef = echelonize(rows, 64, false, false);
    BitRow outside = BitRow::zeros(64);
    // craft a row outside the span: reduce a random row and keep a nonzero residual
    for (int attempt = 0; attempt < 100; ++attempt) {
        auto cand = random_rows(rng, 1, 64, 0.5)[0];
        if (ef.reduce(cand).any()) {
            outside = cand;
            break;
        }
    }
    REQUIRE(ef.reduce(outside).any());
    auto with = rows;
    with.push_back(outside);
    CHECK(echelonize(with, 64, false, false).rank() == ef.rank() + 1);

    // a dependent row leaves the rank unchanged
    BitRow dependent = rows[0];
    dependent ^= rows[1];
    auto with2 = rows;
    with2.push_back(dependent);
    CHECK(echelonize(with2, 64, false, false).rank() == ef.rank());
}

TEST_CASE("parallel elimination matches the serial reference") {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 6; ++trial) {
        std::size_t nrows = 300 + 70 * trial, ncols = 500 + 40 * trial;
        auto rows = random_rows(rng, nrows, ncols, 0.2);
        auto par = echelonize(rows, ncols, true, true);
        auto ser = echelonize_serial(rows, ncols, true);
        CHECK(par.rank() == ser.rank());
        CHECK(par.pivots == ser.pivots);
        CHECK(par.rows == ser.rows);
        CHECK(par.combos == ser.combos);
    }
}
