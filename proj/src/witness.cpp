#include "rmk/witness.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rmk {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::mt19937_64 rng_for(std::uint64_t seed, std::uint64_t stream) {
    return std::mt19937_64(splitmix64(seed * 0x100000001b3ULL + stream));
}

Mat random_symmetric(std::mt19937_64& rng, int n, double scale) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Mat m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double v = gauss(rng) * scale;
            m(i, j) = v;
            m(j, i) = v;
        }
    return m;
}

double quad_form(const Mat& B, const double* x, const double* y) {
    double s = 0.0;
    for (std::size_t i = 0; i < B.rows; ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < B.cols; ++j) row += B(i, j) * y[j];
        s += x[i] * row;
    }
    return s;
}

void mat_vec(const Mat& B, const double* v, double* out) {
    for (std::size_t i = 0; i < B.rows; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < B.cols; ++j) s += B(i, j) * v[j];
        out[i] = s;
    }
}

}  // namespace

double OddSymFunction::eval(const double* x, const double* y) const {
    double bil = quad_form(bilinear, x, y);
    double mod = 1.0;
    for (std::size_t j = 0; j < mod_forms.size(); ++j)
        mod += mod_weights[j] * quad_form(mod_forms[j], x, x) * quad_form(mod_forms[j], y, y);
    return bil * mod;
}

void OddSymFunction::grad(const double* x, const double* y, double* gx, double* gy) const {
    std::vector<double> ay(n), ax(n), bx(n), by(n);
    mat_vec(bilinear, y, ay.data());
    mat_vec(bilinear, x, ax.data());
    double bil = 0.0;
    for (int i = 0; i < n; ++i) bil += x[i] * ay[i];
    double mod = 1.0;
    for (int i = 0; i < n; ++i) {
        gx[i] = 0.0;
        gy[i] = 0.0;
    }
    for (std::size_t j = 0; j < mod_forms.size(); ++j) {
        double px = quad_form(mod_forms[j], x, x);
        double qy = quad_form(mod_forms[j], y, y);
        mod += mod_weights[j] * px * qy;
        mat_vec(mod_forms[j], x, bx.data());
        mat_vec(mod_forms[j], y, by.data());
        for (int i = 0; i < n; ++i) {
            gx[i] += bil * mod_weights[j] * 2.0 * bx[i] * qy;
            gy[i] += bil * mod_weights[j] * px * 2.0 * by[i];
        }
    }
    for (int i = 0; i < n; ++i) {
        gx[i] += ay[i] * mod;
        gy[i] += ax[i] * mod;
    }
}

OddSymFunction random_odd_sym(int n, std::uint64_t seed, int n_modulations) {
    if (n < 2) throw std::invalid_argument("dimension must be >= 2");
    auto rng = rng_for(seed, 0x0dd5f1);
    OddSymFunction f;
    f.n = n;
    f.bilinear = random_symmetric(rng, n, 1.0);
    std::uniform_real_distribution<double> uw(-0.3, 0.3);
    for (int j = 0; j < n_modulations; ++j) {
        f.mod_forms.push_back(random_symmetric(rng, n, 1.0 / std::sqrt(double(n))));
        f.mod_weights.push_back(uw(rng));
    }
    return f;
}

double Frame::gram_error() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < vectors.rows; ++i)
        for (std::size_t j = i; j < vectors.rows; ++j) {
            double dot = 0.0;
            for (std::size_t c = 0; c < vectors.cols; ++c) dot += vectors(i, c) * vectors(j, c);
            worst = std::max(worst, std::fabs(dot - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

std::vector<double> frame_residual(const std::vector<OddSymFunction>& funcs, const Frame& f) {
    const std::size_t k = f.vectors.rows, n = f.vectors.cols;
    std::vector<double> r;
    r.reserve(funcs.size() * k * (k - 1) / 2);
    for (const auto& fn : funcs) {
        if (static_cast<std::size_t>(fn.n) != n)
            throw std::invalid_argument("function dimension does not match frame");
        for (std::size_t i = 0; i < k; ++i)
            for (std::size_t j = i + 1; j < k; ++j)
                r.push_back(fn.eval(&f.vectors.a[i * n], &f.vectors.a[j * n]));
    }
    return r;
}

namespace {

double inf_norm(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    return m;
}

double sq_norm(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return s;
}

Mat random_frame(std::mt19937_64& rng, int k, int n) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (true) {
        Mat e(k, n);
        for (auto& v : e.a) v = gauss(rng);
        try {
            return polar_rows(e);
        } catch (const std::runtime_error&) {
            // degenerate draw, try again
        }
    }
}

struct GnOutcome {
    bool ok = false;
    Frame frame;
    std::vector<double> residual;
    double rinf = std::numeric_limits<double>::infinity();
};

// orthonormal basis of the tangent space of the frame manifold at E, as
// k x n matrices: skew rotations among the frame rows plus motions of each
// row into the orthogonal complement of the frame
std::vector<Mat> tangent_basis(const Mat& e) {
    const std::size_t k = e.rows, n = e.cols;
    std::vector<Mat> basis;

    // complement of the row span via Gram-Schmidt over the standard basis
    std::vector<std::vector<double>> comp;
    for (std::size_t cand = 0; cand < n && comp.size() < n - k; ++cand) {
        std::vector<double> v(n, 0.0);
        v[cand] = 1.0;
        for (std::size_t i = 0; i < k; ++i) {
            double dot = 0.0;
            for (std::size_t c = 0; c < n; ++c) dot += v[c] * e(i, c);
            for (std::size_t c = 0; c < n; ++c) v[c] -= dot * e(i, c);
        }
        for (const auto& q : comp) {
            double dot = 0.0;
            for (std::size_t c = 0; c < n; ++c) dot += v[c] * q[c];
            for (std::size_t c = 0; c < n; ++c) v[c] -= dot * q[c];
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        if (norm < 1e-12) continue;
        norm = std::sqrt(norm);
        for (double& x : v) x /= norm;
        comp.push_back(std::move(v));
    }

    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i + 1; j < k; ++j) {
            Mat d(k, n);
            for (std::size_t c = 0; c < n; ++c) {
                d(i, c) = e(j, c) * inv_sqrt2;
                d(j, c) = -e(i, c) * inv_sqrt2;
            }
            basis.push_back(std::move(d));
        }
    for (std::size_t i = 0; i < k; ++i)
        for (const auto& q : comp) {
            Mat d(k, n);
            for (std::size_t c = 0; c < n; ++c) d(i, c) = q[c];
            basis.push_back(std::move(d));
        }
    return basis;
}

GnOutcome gauss_newton_frame(const std::vector<OddSymFunction>& funcs, Mat e0, double tol) {
    const int k = static_cast<int>(e0.rows), n = static_cast<int>(e0.cols);
    const int pairs = k * (k - 1) / 2;
    const int nr = static_cast<int>(funcs.size()) * pairs;
    const int nv = k * n;

    Frame cur{std::move(e0)};
    std::vector<double> r = frame_residual(funcs, cur);
    double f2 = sq_norm(r);
    double lam = 1e-3;
    std::vector<double> gx(n), gy(n);

    for (int iter = 0; iter < 200; ++iter) {
        if (inf_norm(r) <= tol * 1e-3 || f2 < 1e-28) break;

        // ambient Jacobian of the pair residuals
        Mat J(nr, nv);
        int row = 0;
        for (const auto& fn : funcs)
            for (int i = 0; i < k; ++i)
                for (int j = i + 1; j < k; ++j, ++row) {
                    fn.grad(&cur.vectors.a[i * n], &cur.vectors.a[j * n], gx.data(), gy.data());
                    for (int c = 0; c < n; ++c) {
                        J(row, i * n + c) = gx[c];
                        J(row, j * n + c) = gy[c];
                    }
                }

        // restrict to the tangent space: Jt = J * [vec(T_1) ... vec(T_D)]
        auto tangents = tangent_basis(cur.vectors);
        const int dim = static_cast<int>(tangents.size());
        Mat jt(nr, dim);
        for (int d = 0; d < dim; ++d)
            for (int q = 0; q < nr; ++q) {
                double s = 0.0;
                for (int c = 0; c < nv; ++c) s += J.a[q * nv + c] * tangents[d].a[c];
                jt(q, d) = s;
            }

        Mat h(dim, dim);
        for (int a = 0; a < dim; ++a)
            for (int b = a; b < dim; ++b) {
                double s = 0.0;
                for (int q = 0; q < nr; ++q) s += jt(q, a) * jt(q, b);
                h(a, b) = s;
                h(b, a) = s;
            }
        std::vector<double> g(dim, 0.0);
        for (int a = 0; a < dim; ++a)
            for (int q = 0; q < nr; ++q) g[a] += jt(q, a) * r[q];

        bool stepped = false;
        for (int attempt = 0; attempt < 16; ++attempt) {
            Mat hl = h;
            for (int a = 0; a < dim; ++a) hl(a, a) += lam;
            std::vector<double> eta, negg(dim);
            for (int a = 0; a < dim; ++a) negg[a] = -g[a];
            if (!spd_solve(hl, negg, eta)) {
                lam *= 8.0;
                continue;
            }
            Mat trial = cur.vectors;
            for (int d = 0; d < dim; ++d)
                for (int c = 0; c < nv; ++c) trial.a[c] += eta[d] * tangents[d].a[c];
            Mat retracted;
            try {
                retracted = polar_rows(trial);
            } catch (const std::runtime_error&) {
                lam *= 8.0;
                continue;
            }
            Frame cand{std::move(retracted)};
            std::vector<double> r2 = frame_residual(funcs, cand);
            double f22 = sq_norm(r2);
            if (f22 < f2) {
                cur = std::move(cand);
                r = std::move(r2);
                f2 = f22;
                lam = std::max(lam / 4.0, 1e-15);
                stepped = true;
                break;
            }
            lam *= 8.0;
            if (lam > 1e14) break;
        }
        if (!stepped) break;
    }

    GnOutcome out;
    out.frame = std::move(cur);
    out.residual = frame_residual(funcs, out.frame);  // fresh evaluation
    out.rinf = inf_norm(out.residual);
    out.ok = out.rinf <= tol && out.frame.gram_error() <= 1e-10;
    return out;
}

}  // namespace

FrameSearchResult search_frame(const std::vector<OddSymFunction>& funcs, int n, int k, double tol,
                               int max_restarts, std::uint64_t seed) {
    if (k < 1 || n < k) throw std::invalid_argument("need n >= k >= 1");
    for (const auto& f : funcs)
        if (f.n != n) throw std::invalid_argument("function dimension does not match n");
    if (tol <= 0) throw std::invalid_argument("tolerance must be positive");

    FrameSearchResult best;
    best.residual_inf = std::numeric_limits<double>::infinity();

    int chunk = 8;
#ifdef _OPENMP
    chunk = std::max(chunk, omp_get_max_threads());
#endif
    for (int base = 0; base < max_restarts && !best.found; base += chunk) {
        const int hi = std::min(base + chunk, max_restarts);
        std::vector<GnOutcome> outs(hi - base);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int rs = base; rs < hi; ++rs) {
            auto rng = rng_for(seed, 0xf7a3e5ULL + static_cast<std::uint64_t>(rs));
            outs[rs - base] = gauss_newton_frame(funcs, random_frame(rng, k, n), tol);
        }
        for (int rs = base; rs < hi; ++rs) {
            GnOutcome& o = outs[rs - base];
            if (o.rinf < best.residual_inf) {
                best.frame = o.frame;
                best.residual = o.residual;
                best.residual_inf = o.rinf;
            }
            if (o.ok) {  // smallest successful restart index wins
                best.found = true;
                best.frame = std::move(o.frame);
                best.residual = std::move(o.residual);
                best.residual_inf = o.rinf;
                best.restarts_used = rs + 1;
                break;
            }
        }
        if (!best.found) best.restarts_used = hi;
    }
    return best;
}

SampledMeasure gaussian_cloud(int n, long count, std::uint64_t seed) {
    if (count < 1) throw std::invalid_argument("need at least one point");
    auto rng = rng_for(seed, 0x9a55);
    std::normal_distribution<double> gauss(0.0, 1.0);
    SampledMeasure mu;
    mu.points = Mat(count, n);
    for (auto& v : mu.points.a) v = gauss(rng);
    mu.weights.assign(count, 1.0 / static_cast<double>(count));
    mu.uniform_weights = true;
    return mu;
}

SampledMeasure load_measure(std::istream& in, int expected_dim) {
    SampledMeasure mu;
    std::vector<std::vector<double>> rows;
    std::string line;
    int dim = expected_dim;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ls(line);
        std::vector<double> vals;
        double v;
        while (ls >> v) vals.push_back(v);
        if (!ls.eof()) throw std::invalid_argument("malformed measure line: " + line);
        if (vals.empty()) continue;
        if (dim < 0) dim = static_cast<int>(vals.size()) - 1;
        if (static_cast<int>(vals.size()) != dim + 1)
            throw std::invalid_argument("measure line has wrong field count: " + line);
        rows.push_back(std::move(vals));
    }
    if (rows.empty() || dim < 1) throw std::invalid_argument("empty measure file");
    mu.points = Mat(rows.size(), dim);
    mu.weights.resize(rows.size());
    double total = 0.0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (int j = 0; j < dim; ++j) mu.points(i, j) = rows[i][j];
        double w = rows[i][dim];
        if (!(w > 0.0)) throw std::invalid_argument("measure weights must be positive");
        mu.weights[i] = w;
        total += w;
    }
    for (auto& w : mu.weights) w /= total;
    mu.uniform_weights =
        std::all_of(mu.weights.begin(), mu.weights.end(),
                    [&](double w) { return std::fabs(w - mu.weights[0]) < 1e-15; });
    return mu;
}

double halving_offset(const SampledMeasure& mu, const std::vector<double>& direction) {
    const std::size_t nPts = mu.points.rows, n = mu.points.cols;
    if (direction.size() != n) throw std::invalid_argument("direction dimension mismatch");
    double norm2 = 0.0;
    for (double d : direction) norm2 += d * d;
    if (norm2 == 0.0) throw std::invalid_argument("direction must be nonzero");

    std::vector<double> proj(nPts);
    for (std::size_t i = 0; i < nPts; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j) s += mu.points(i, j) * direction[j];
        proj[i] = s;
    }

    if (mu.uniform_weights) {
        const std::size_t half = nPts / 2;
        if (nPts % 2 == 1) {
            std::nth_element(proj.begin(), proj.begin() + half, proj.end());
            return proj[half];
        }
        std::nth_element(proj.begin(), proj.begin() + half, proj.end());
        double upper = proj[half];
        double lower = *std::max_element(proj.begin(), proj.begin() + half);
        return 0.5 * (lower + upper);
    }

    std::vector<std::size_t> idx(nPts);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&proj](std::size_t a, std::size_t b) { return proj[a] < proj[b]; });
    double cum = 0.0;
    for (std::size_t r = 0; r < nPts; ++r) {
        double next = cum + mu.weights[idx[r]];
        if (next > 0.5 + 1e-12) return proj[idx[r]];  // crossing inside this atom
        if (std::fabs(next - 0.5) <= 1e-12) {
            double here = proj[idx[r]];
            double after = (r + 1 < nPts) ? proj[idx[r + 1]] : here;
            return 0.5 * (here + after);
        }
        cum = next;
    }
    return proj[idx.back()];
}

double HyperplaneArrangement::orthogonality_error() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < normals.rows; ++i)
        for (std::size_t j = i; j < normals.rows; ++j) {
            double dot = 0.0;
            for (std::size_t c = 0; c < normals.cols; ++c) dot += normals(i, c) * normals(j, c);
            worst = std::max(worst, std::fabs(dot - (i == j ? 1.0 : 0.0)));
        }
    return worst;
}

namespace {

// -1 / 0 / +1 side of point p against hyperplane i; 0 means on the boundary
inline int side_of(const SampledMeasure& mu, const HyperplaneArrangement& h, std::size_t p,
                   std::size_t i) {
    double s = 0.0;
    for (std::size_t j = 0; j < mu.points.cols; ++j) s += mu.points(p, j) * h.normals(i, j);
    double d = s - h.offsets[i];
    if (d > 0.0) return 1;
    if (d < 0.0) return -1;
    return 0;
}

}  // namespace

std::vector<double> orthant_masses(const SampledMeasure& mu, const HyperplaneArrangement& h) {
    const std::size_t k = h.normals.rows;
    const std::size_t cells = std::size_t(1) << k;
    std::vector<double> masses(cells, 0.0);
    std::vector<long> counts(cells, 0);  // uniform weights count atoms exactly
    for (std::size_t p = 0; p < mu.points.rows; ++p) {
        std::size_t idx = 0;
        bool boundary = false;
        for (std::size_t i = 0; i < k; ++i) {
            int s = side_of(mu, h, p, i);
            if (s == 0) {
                boundary = true;
                break;
            }
            if (s > 0) idx |= std::size_t(1) << i;
        }
        if (boundary) continue;
        if (mu.uniform_weights)
            ++counts[idx];
        else
            masses[idx] += mu.weights[p];
    }
    if (mu.uniform_weights)
        for (std::size_t c = 0; c < cells; ++c) masses[c] = counts[c] * mu.weights[0];
    return masses;
}

std::vector<double> orthant_masses_parallel(const SampledMeasure& mu,
                                            const HyperplaneArrangement& h) {
    const std::size_t k = h.normals.rows;
    const std::size_t cells = std::size_t(1) << k;
    const long npts = static_cast<long>(mu.points.rows);

    if (mu.uniform_weights) {
        std::vector<long> counts(cells, 0);
#ifdef _OPENMP
#pragma omp parallel
        {
            std::vector<long> local(cells, 0);
#pragma omp for schedule(static) nowait
            for (long p = 0; p < npts; ++p) {
                std::size_t idx = 0;
                bool boundary = false;
                for (std::size_t i = 0; i < k; ++i) {
                    int s = side_of(mu, h, static_cast<std::size_t>(p), i);
                    if (s == 0) {
                        boundary = true;
                        break;
                    }
                    if (s > 0) idx |= std::size_t(1) << i;
                }
                if (!boundary) ++local[idx];
            }
#pragma omp critical
            for (std::size_t c = 0; c < cells; ++c) counts[c] += local[c];
        }
#else
        for (long p = 0; p < npts; ++p) {
            std::size_t idx = 0;
            bool boundary = false;
            for (std::size_t i = 0; i < k; ++i) {
                int s = side_of(mu, h, static_cast<std::size_t>(p), i);
                if (s == 0) {
                    boundary = true;
                    break;
                }
                if (s > 0) idx |= std::size_t(1) << i;
            }
            if (!boundary) ++counts[idx];
        }
#endif
        std::vector<double> masses(cells, 0.0);
        for (std::size_t c = 0; c < cells; ++c) masses[c] = counts[c] * mu.weights[0];
        return masses;
    }
    return orthant_masses(mu, h);
}

namespace {

std::vector<unsigned> subset_masks(int k, int l) {
    std::vector<unsigned> masks;
    for (unsigned m = 1; m < (1u << k); ++m)
        if (__builtin_popcount(m) == l) masks.push_back(m);
    return masks;
}

struct EquipartObjective {
    const std::vector<SampledMeasure>* measures;
    int n, k, l;
    bool orth, free_offsets;
    std::vector<unsigned> masks;

    std::size_t dim() const {
        return static_cast<std::size_t>(k) * n + (free_offsets ? k : 0);
    }

    HyperplaneArrangement build(const std::vector<double>& theta) const {
        HyperplaneArrangement h;
        Mat v(k, n);
        std::copy(theta.begin(), theta.begin() + std::size_t(k) * n, v.a.begin());
        if (orth) {
            h.normals = polar_rows(v);
            h.orthogonal = true;
        } else {
            for (int i = 0; i < k; ++i) {
                double norm = 0.0;
                for (int j = 0; j < n; ++j) norm += v(i, j) * v(i, j);
                norm = std::sqrt(norm);
                if (norm < 1e-12) throw std::runtime_error("degenerate normal");
                for (int j = 0; j < n; ++j) v(i, j) /= norm;
            }
            h.normals = v;
        }
        h.offsets.resize(k);
        if (free_offsets) {
            for (int i = 0; i < k; ++i) h.offsets[i] = theta[std::size_t(k) * n + i];
        } else {
            const SampledMeasure& mu1 = (*measures)[0];
            for (int i = 0; i < k; ++i) {
                std::vector<double> dir(n);
                for (int j = 0; j < n; ++j) dir[j] = h.normals(i, j);
                h.offsets[i] = halving_offset(mu1, dir);
            }
        }
        return h;
    }

    // worst |mass - 2^-l| and the sum of squared deviations
    std::pair<double, double> deviations(const HyperplaneArrangement& h) const {
        const double target = std::ldexp(1.0, -l);
        double worst = 0.0, ss = 0.0;
        for (const auto& mu : *measures) {
            // sides once per hyperplane per point
            std::vector<signed char> sides(mu.points.rows * k);
            for (std::size_t p = 0; p < mu.points.rows; ++p)
                for (int i = 0; i < k; ++i)
                    sides[p * k + i] = static_cast<signed char>(side_of(mu, h, p, i));
            for (unsigned mask : masks) {
                std::vector<int> bits;
                for (int i = 0; i < k; ++i)
                    if (mask & (1u << i)) bits.push_back(i);
                std::vector<double> mass(std::size_t(1) << l, 0.0);
                for (std::size_t p = 0; p < mu.points.rows; ++p) {
                    std::size_t idx = 0;
                    bool boundary = false;
                    for (std::size_t b = 0; b < bits.size(); ++b) {
                        int s = sides[p * k + bits[b]];
                        if (s == 0) {
                            boundary = true;
                            break;
                        }
                        if (s > 0) idx |= std::size_t(1) << b;
                    }
                    if (!boundary) mass[idx] += mu.weights[p];
                }
                for (double ms : mass) {
                    double dev = std::fabs(ms - target);
                    worst = std::max(worst, dev);
                    ss += (ms - target) * (ms - target);
                }
            }
        }
        return {worst, ss};
    }

    double operator()(const std::vector<double>& theta) const {
        try {
            return deviations(build(theta)).second;
        } catch (const std::runtime_error&) {
            return 1e6;  // degenerate parameter point
        }
    }
};

// standard Nelder-Mead; the orthant-mass objective is piecewise constant,
// so a derivative-free search is the appropriate local method
template <typename F>
std::vector<double> nelder_mead(const F& fn, std::vector<double> x0, double step, int max_evals) {
    const std::size_t d = x0.size();
    std::vector<std::vector<double>> xs(d + 1, x0);
    std::vector<double> fs(d + 1);
    for (std::size_t i = 0; i < d; ++i) xs[i + 1][i] += step;
    for (std::size_t i = 0; i <= d; ++i) fs[i] = fn(xs[i]);
    int evals = static_cast<int>(d) + 1;

    while (evals < max_evals) {
        std::vector<std::size_t> ord(d + 1);
        std::iota(ord.begin(), ord.end(), 0);
        std::sort(ord.begin(), ord.end(),
                  [&fs](std::size_t a, std::size_t b) { return fs[a] < fs[b]; });
        if (fs[ord[0]] <= 1e-24 || fs[ord[d]] - fs[ord[0]] < 1e-18) break;

        std::vector<double> centroid(d, 0.0);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) centroid[j] += xs[ord[i]][j] / double(d);
        const std::size_t worst = ord[d];

        auto blend = [&](double coef) {
            std::vector<double> p(d);
            for (std::size_t j = 0; j < d; ++j)
                p[j] = centroid[j] + coef * (xs[worst][j] - centroid[j]);
            return p;
        };

        auto xr = blend(-1.0);
        double fr = fn(xr);
        ++evals;
        if (fr < fs[ord[0]]) {
            auto xe = blend(-2.0);
            double fe = fn(xe);
            ++evals;
            if (fe < fr) {
                xs[worst] = std::move(xe);
                fs[worst] = fe;
            } else {
                xs[worst] = std::move(xr);
                fs[worst] = fr;
            }
        } else if (fr < fs[ord[d - 1]]) {
            xs[worst] = std::move(xr);
            fs[worst] = fr;
        } else {
            auto xc = blend(fr < fs[worst] ? -0.5 : 0.5);
            double fc = fn(xc);
            ++evals;
            if (fc < std::min(fr, fs[worst])) {
                xs[worst] = std::move(xc);
                fs[worst] = fc;
            } else {
                for (std::size_t i = 1; i <= d; ++i) {
                    for (std::size_t j = 0; j < d; ++j)
                        xs[ord[i]][j] = xs[ord[0]][j] + 0.5 * (xs[ord[i]][j] - xs[ord[0]][j]);
                    fs[ord[i]] = fn(xs[ord[i]]);
                    evals += 1;
                }
            }
        }
    }
    std::size_t bi = 0;
    for (std::size_t i = 1; i <= d; ++i)
        if (fs[i] < fs[bi]) bi = i;
    return xs[bi];
}

}  // namespace

EquipartSearchResult search_equipartition(const std::vector<SampledMeasure>& measures, int n,
                                          int k, int l, bool orth, bool free_offsets, double tol,
                                          int max_restarts, std::uint64_t seed) {
    if (measures.empty()) throw std::invalid_argument("need at least one measure");
    if (k < 1 || l < 1 || l > k) throw std::invalid_argument("need 1 <= l <= k");
    if (n < k && orth) throw std::invalid_argument("orthogonal k-frame needs n >= k");
    for (const auto& mu : measures)
        if (static_cast<int>(mu.points.cols) != n)
            throw std::invalid_argument("measure dimension does not match n");

    EquipartObjective obj{&measures, n, k, l, orth, free_offsets, subset_masks(k, l)};
    const std::size_t dim = obj.dim();

    EquipartSearchResult best;
    best.worst_deviation = std::numeric_limits<double>::infinity();
    best.offsets_mode = free_offsets ? "free" : "halving";

    int chunk = 4;
#ifdef _OPENMP
    chunk = std::max(chunk, omp_get_max_threads());
#endif
    struct Local {
        bool ok = false;
        double worst = std::numeric_limits<double>::infinity();
        HyperplaneArrangement arr;
    };
    for (int base = 0; base < max_restarts && !best.found; base += chunk) {
        const int hi = std::min(base + chunk, max_restarts);
        std::vector<Local> outs(hi - base);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int rs = base; rs < hi; ++rs) {
            auto rng = rng_for(seed, 0xe9f1b3ULL + static_cast<std::uint64_t>(rs));
            std::normal_distribution<double> gauss(0.0, 1.0);
            std::vector<double> theta(dim);
            for (std::size_t i = 0; i < std::size_t(k) * n; ++i) theta[i] = gauss(rng);
            if (free_offsets) {
                // start offsets at the halving offsets of the drawn normals
                try {
                    std::vector<double> t0(theta.begin(), theta.begin() + std::size_t(k) * n);
                    EquipartObjective halved = obj;
                    halved.free_offsets = false;
                    HyperplaneArrangement h0 = halved.build(t0);
                    for (int i = 0; i < k; ++i) theta[std::size_t(k) * n + i] = h0.offsets[i];
                } catch (const std::runtime_error&) {
                    for (int i = 0; i < k; ++i) theta[std::size_t(k) * n + i] = 0.0;
                }
            }
            auto sol = nelder_mead(obj, std::move(theta), 0.35,
                                   static_cast<int>(600 * dim));
            Local& lo = outs[rs - base];
            try {
                HyperplaneArrangement h = obj.build(sol);
                lo.worst = obj.deviations(h).first;
                lo.arr = std::move(h);
                lo.ok = lo.worst <= tol;
            } catch (const std::runtime_error&) {
            }
        }
        for (int rs = base; rs < hi; ++rs) {
            Local& lo = outs[rs - base];
            if (lo.worst < best.worst_deviation) {
                best.worst_deviation = lo.worst;
                best.arrangement = lo.arr;
            }
            if (lo.ok) {
                best.found = true;
                best.arrangement = std::move(lo.arr);
                best.worst_deviation = lo.worst;
                best.restarts_used = rs + 1;
                break;
            }
        }
        if (!best.found) best.restarts_used = hi;
    }
    if (best.arrangement.normals.rows == static_cast<std::size_t>(k))
        best.masses = orthant_masses(measures[0], best.arrangement);
    return best;
}

}  // namespace rmk
