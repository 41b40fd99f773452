#include "rmk/gf2rows.hpp"

#include <bit>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rmk {

std::size_t BitRow::first_set() const {
    for (std::size_t i = 0; i < w.size(); ++i)
        if (w[i]) return i * 64 + std::countr_zero(w[i]);
    return npos;
}

BitRow EchelonForm::reduce(BitRow r, BitRow* combo) const {
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (r.get(pivots[i])) {
            r ^= rows[i];
            if (combo && !combos.empty()) *combo ^= combos[i];
        }
    }
    return r;
}

namespace {

EchelonForm echelonize_impl(std::vector<BitRow> rows, std::size_t ncols, bool track,
                            bool parallel) {
    const std::size_t n = rows.size();
    std::vector<BitRow> combos;
    if (track) {
        combos.reserve(n);
        for (std::size_t i = 0; i < n; ++i) {
            BitRow c = BitRow::zeros(n);
            c.set(i);
            combos.push_back(std::move(c));
        }
    }

    std::vector<std::size_t> lead(n);
    for (std::size_t i = 0; i < n; ++i) lead[i] = rows[i].first_set();

    // the row-clearing loop only pays for itself on wide rows
    const std::size_t words = (ncols + 63) / 64;
    const bool wide = parallel && n > 256 && words >= 192;

    std::size_t r = 0;
    for (std::size_t step = 0; step < n; ++step) {
        // first remaining row with the leftmost pivot; first index wins ties
        std::size_t best = BitRow::npos, who = n;
        for (std::size_t i = r; i < n; ++i) {
            if (lead[i] < best) {
                best = lead[i];
                who = i;
            }
        }
        if (who == n || best == BitRow::npos) break;
        std::swap(rows[r], rows[who]);
        std::swap(lead[r], lead[who]);
        if (track) std::swap(combos[r], combos[who]);

        const std::size_t piv = lead[r];
        const BitRow& prow = rows[r];
        const BitRow* pcombo = track ? &combos[r] : nullptr;

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (wide)
#endif
        for (std::size_t i = 0; i < n; ++i) {
            if (i == r) continue;
            if (rows[i].get(piv)) {
                rows[i] ^= prow;
                if (pcombo) combos[i] ^= *pcombo;
                if (i > r) lead[i] = rows[i].first_set();
            }
        }
        ++r;
    }

    EchelonForm ef;
    ef.ncols = ncols;
    ef.rows.assign(rows.begin(), rows.begin() + r);
    if (track) ef.combos.assign(combos.begin(), combos.begin() + r);
    ef.pivots.assign(lead.begin(), lead.begin() + r);
    (void)wide;
    return ef;
}

}  // namespace

EchelonForm echelonize(std::vector<BitRow> rows, std::size_t ncols, bool track, bool parallel) {
    return echelonize_impl(std::move(rows), ncols, track, parallel);
}

EchelonForm echelonize_serial(std::vector<BitRow> rows, std::size_t ncols, bool track) {
    return echelonize_impl(std::move(rows), ncols, track, false);
}

}  // namespace rmk
