#ifndef RMK_GF2ROWS_HPP
#define RMK_GF2ROWS_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

// Bit-packed GF(2) row vectors and Gaussian elimination. The eliminate
// kernel comes in two flavors: a plain serial reference and an OpenMP
// version that parallelizes the row-clearing loop. Both produce the same
// reduced row echelon form and the same provenance combinations.

namespace rmk {

struct BitRow {
    std::vector<std::uint64_t> w;

    static BitRow zeros(std::size_t nbits) {
        BitRow r;
        r.w.assign((nbits + 63) / 64, 0);
        return r;
    }
    bool get(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
    void set(std::size_t i) { w[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void flip(std::size_t i) { w[i >> 6] ^= std::uint64_t(1) << (i & 63); }
    void operator^=(const BitRow& o) {
        for (std::size_t i = 0; i < w.size(); ++i) w[i] ^= o.w[i];
    }
    bool any() const {
        for (auto x : w)
            if (x) return true;
        return false;
    }
    // index of the first (lowest) set bit; npos when empty
    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
    std::size_t first_set() const;

    friend bool operator==(const BitRow& a, const BitRow& b) { return a.w == b.w; }
};

// Reduced row echelon form with optional provenance tracking: combos[i]
// records which original rows sum to rows[i].
struct EchelonForm {
    std::size_t ncols = 0;
    std::vector<BitRow> rows;    // pivot-ascending, fully reduced
    std::vector<BitRow> combos;  // over original row indices, empty unless tracked
    std::vector<std::size_t> pivots;

    std::size_t rank() const { return rows.size(); }
    // reduce a copy of r against the echelon rows; when tracking and combo
    // is non-null, accumulates the provenance of every row used
    BitRow reduce(BitRow r, BitRow* combo = nullptr) const;
};

EchelonForm echelonize(std::vector<BitRow> rows, std::size_t ncols, bool track, bool parallel);
// serial reference implementation, kept for testing and benchmarking
EchelonForm echelonize_serial(std::vector<BitRow> rows, std::size_t ncols, bool track);

}  // namespace rmk

#endif
