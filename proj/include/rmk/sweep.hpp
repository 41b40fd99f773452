#ifndef RMK_SWEEP_HPP
#define RMK_SWEEP_HPP

#include <optional>
#include <string>
#include <vector>

#include "rmk/criteria.hpp"

// Range sweeps over instance grids. Work items are independent; the
// parallel runner distributes them with OpenMP and emits rows in grid
// order regardless of completion order. A plain serial runner is kept as
// the reference implementation.

namespace rmk {

struct Range {
    long lo = 0;
    long hi = -1;  // inclusive; empty when hi < lo
    long size() const { return hi < lo ? 0 : hi - lo + 1; }
};

enum class Problem { rattray, makeev };

struct SweepSpec {
    Problem problem = Problem::rattray;
    Range n, m, k;
    std::optional<Range> l;            // makeev only
    RattrayVariant variant = RattrayVariant::odd_sym;
    bool orth = false;
    int jobs = 0;                      // 0: library default
    long degree_cap = 0;               // 0: per-k default caps
};

struct SweepRow {
    long n = 0, m = 0, k = 0;
    long l = -1;                       // -1 when not applicable
    std::string variant;
    std::string verdict;               // decided_admissible | not_decided | capped | invalid
    std::vector<std::string> bounds_fired;
    long slice_degree = -1;
    long slice_dimension = -1;
    long ideal_rank = -1;
};

// test-element degree caps keeping slice sizes tractable
long default_degree_cap(int k);
// predicted degree of the test element for an instance
long predicted_test_degree(const SweepSpec& spec, long m, long k, long l);

std::vector<SweepRow> run_sweep(const SweepSpec& spec);        // OpenMP
std::vector<SweepRow> run_sweep_serial(const SweepSpec& spec); // reference

// fixed columns: n,m,k,l,variant,verdict,bounds_fired,slice_degree,slice_dim,ideal_rank
std::string sweep_csv(const std::vector<SweepRow>& rows);
std::string sweep_table(const std::vector<SweepRow>& rows);
long grid_cardinality(const SweepSpec& spec);

}  // namespace rmk

#endif
