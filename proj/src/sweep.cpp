#include "rmk/sweep.hpp"

#include <exception>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rmk {

long default_degree_cap(int k) {
    if (k <= 2) return 200;
    if (k == 3) return 96;
    return 48;
}

long predicted_test_degree(const SweepSpec& spec, long m, long k, long l) {
    if (spec.problem == Problem::rattray) {
        if (k < 2) return 0;
        return k * (k - 1) / 2 * m * (spec.variant == RattrayVariant::odd ? 2 : 1);
    }
    long factors = 0, choose = 1;
    for (long i = 1; i <= l; ++i) {
        choose = choose * (k - i + 1) / i;  // C(k, i)
        factors += choose;
    }
    return m * factors - (spec.orth ? k : 0);
}

namespace {

std::string variant_string(const SweepSpec& spec) {
    std::string s;
    if (spec.problem == Problem::makeev)
        s = "makeev";
    else
        s = (spec.variant == RattrayVariant::odd) ? "odd" : "odd-sym";
    s += spec.orth ? "-orth" : "-free";
    return s;
}

struct GridPoint {
    long n, m, k, l;
};

std::vector<GridPoint> grid_points(const SweepSpec& spec) {
    std::vector<GridPoint> pts;
    Range lr = spec.l.value_or(Range{-1, -1});
    bool with_l = spec.problem == Problem::makeev;
    if (with_l && !spec.l) throw std::invalid_argument("makeev sweep needs an l range");
    for (long n = spec.n.lo; n <= spec.n.hi; ++n)
        for (long m = spec.m.lo; m <= spec.m.hi; ++m)
            for (long k = spec.k.lo; k <= spec.k.hi; ++k) {
                if (with_l) {
                    for (long l = lr.lo; l <= lr.hi; ++l) pts.push_back({n, m, k, l});
                } else {
                    pts.push_back({n, m, k, -1});
                }
            }
    return pts;
}

SweepRow evaluate_point(const SweepSpec& spec, const GridPoint& gp) {
    SweepRow row;
    row.n = gp.n;
    row.m = gp.m;
    row.k = gp.k;
    row.l = gp.l;
    row.variant = variant_string(spec);

    bool valid = gp.n >= gp.k && gp.k >= 1 && gp.m >= 1;
    if (spec.problem == Problem::makeev) valid = valid && gp.l >= 1 && gp.l <= gp.k;
    if (!valid) {
        row.verdict = "invalid";
        return row;
    }

    std::optional<int> lopt;
    if (spec.problem == Problem::makeev) lopt = static_cast<int>(gp.l);
    row.bounds_fired =
        bounds(static_cast<int>(gp.n), gp.m, static_cast<int>(gp.k), lopt).fired();

    long cap = spec.degree_cap > 0 ? spec.degree_cap : default_degree_cap(static_cast<int>(gp.k));
    if (gp.k > 6 || predicted_test_degree(spec, gp.m, gp.k, gp.l) > cap) {
        row.verdict = "capped";
        return row;
    }

    try {
        Verdict v;
        if (spec.problem == Problem::rattray)
            v = rattray(static_cast<int>(gp.n), gp.m, static_cast<int>(gp.k), spec.variant,
                        spec.orth);
        else
            v = makeev(static_cast<int>(gp.n), gp.m, static_cast<int>(gp.k),
                       static_cast<int>(gp.l), spec.orth);
        row.verdict = v.decided_admissible ? "decided_admissible" : "not_decided";
        if (v.have_certificate) {
            row.slice_degree = v.certificate.slice_degree;
            row.slice_dimension = v.certificate.slice_dimension;
            row.ideal_rank = v.certificate.ideal_rank;
        }
    } catch (const degree_cap_error&) {
        row.verdict = "capped";
    }
    return row;
}

}  // namespace

long grid_cardinality(const SweepSpec& spec) {
    long c = spec.n.size() * spec.m.size() * spec.k.size();
    if (spec.problem == Problem::makeev) c *= spec.l ? spec.l->size() : 0;
    return c;
}

std::vector<SweepRow> run_sweep_serial(const SweepSpec& spec) {
    auto pts = grid_points(spec);
    std::vector<SweepRow> rows(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) rows[i] = evaluate_point(spec, pts[i]);
    return rows;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec) {
    auto pts = grid_points(spec);
    std::vector<SweepRow> rows(pts.size());
#ifdef _OPENMP
    const long count = static_cast<long>(pts.size());
    std::exception_ptr failure;  // exceptions may not cross the omp region
    auto body = [&](long i) {
        try {
            rows[i] = evaluate_point(spec, pts[i]);
        } catch (...) {
#pragma omp critical
            if (!failure) failure = std::current_exception();
        }
    };
    if (spec.jobs > 0) {
#pragma omp parallel for schedule(dynamic) num_threads(spec.jobs)
        for (long i = 0; i < count; ++i) body(i);
    } else {
#pragma omp parallel for schedule(dynamic)
        for (long i = 0; i < count; ++i) body(i);
    }
    if (failure) std::rethrow_exception(failure);
#else
    for (std::size_t i = 0; i < pts.size(); ++i) rows[i] = evaluate_point(spec, pts[i]);
#endif
    return rows;
}

namespace {

std::string join(const std::vector<std::string>& v, char sep) {
    std::string s;
    for (const auto& x : v) {
        if (!s.empty()) s += sep;
        s += x;
    }
    return s;
}

std::string cell(long v) { return v < 0 ? std::string() : std::to_string(v); }

}  // namespace

std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "n,m,k,l,variant,verdict,bounds_fired,slice_degree,slice_dim,ideal_rank\n";
    for (const auto& r : rows) {
        os << r.n << ',' << r.m << ',' << r.k << ',' << cell(r.l) << ',' << r.variant << ','
           << r.verdict << ',' << join(r.bounds_fired, ';') << ',' << cell(r.slice_degree) << ','
           << cell(r.slice_dimension) << ',' << cell(r.ideal_rank) << '\n';
    }
    return os.str();
}

std::string sweep_table(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "   n   m   k   l  variant          verdict              bounds\n";
    for (const auto& r : rows) {
        std::string ls = r.l < 0 ? "-" : std::to_string(r.l);
        char buf[160];
        std::snprintf(buf, sizeof buf, "%4ld%4ld%4ld%4s  %-16s %-20s %s\n", r.n, r.m, r.k,
                      ls.c_str(), r.variant.c_str(), r.verdict.c_str(),
                      join(r.bounds_fired, ';').c_str());
        os << buf;
    }
    return os.str();
}

}  // namespace rmk
