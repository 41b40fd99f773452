#ifndef RMK_SMALLMAT_HPP
#define RMK_SMALLMAT_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

// Dense helpers for the small systems in the witness searches (frames of
// at most a handful of vectors). Row-major storage.

namespace rmk {

struct Mat {
    std::size_t rows = 0, cols = 0;
    std::vector<double> a;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), a(r * c, 0.0) {}
    double& operator()(std::size_t i, std::size_t j) { return a[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a[i * cols + j]; }
};

inline Mat matmul(const Mat& x, const Mat& y) {
    if (x.cols != y.rows) throw std::invalid_argument("matmul shape mismatch");
    Mat z(x.rows, y.cols);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t k = 0; k < x.cols; ++k) {
            double v = x(i, k);
            if (v == 0.0) continue;
            for (std::size_t j = 0; j < y.cols; ++j) z(i, j) += v * y(k, j);
        }
    return z;
}

inline Mat transpose(const Mat& x) {
    Mat z(x.cols, x.rows);
    for (std::size_t i = 0; i < x.rows; ++i)
        for (std::size_t j = 0; j < x.cols; ++j) z(j, i) = x(i, j);
    return z;
}

// solve (A)x = b for symmetric positive definite A, in place Cholesky
inline bool spd_solve(Mat A, std::vector<double> b, std::vector<double>& x) {
    const std::size_t n = A.rows;
    if (A.cols != n || b.size() != n) throw std::invalid_argument("spd_solve shape mismatch");
    for (std::size_t j = 0; j < n; ++j) {
        double d = A(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= A(j, k) * A(j, k);
        if (d <= 0.0 || !std::isfinite(d)) return false;
        A(j, j) = std::sqrt(d);
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = A(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= A(i, k) * A(j, k);
            A(i, j) = s / A(j, j);
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= A(i, k) * b[k];
        b[i] = s / A(i, i);
    }
    x.assign(n, 0.0);
    for (std::size_t ii = n; ii-- > 0;) {
        double s = b[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= A(k, ii) * x[k];
        x[ii] = s / A(ii, ii);
    }
    return true;
}

// cyclic Jacobi eigendecomposition of a small symmetric matrix: A = V diag(lam) V^T
inline void jacobi_eigen(Mat A, Mat& V, std::vector<double>& lam) {
    const std::size_t n = A.rows;
    V = Mat(n, n);
    for (std::size_t i = 0; i < n; ++i) V(i, i) = 1.0;
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) off += A(p, q) * A(p, q);
        if (off < 1e-30) break;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::fabs(A(p, q)) < 1e-300) continue;
                double theta = (A(q, q) - A(p, p)) / (2.0 * A(p, q));
                double t = (theta >= 0 ? 1.0 : -1.0) /
                           (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
                for (std::size_t i = 0; i < n; ++i) {
                    double aip = A(i, p), aiq = A(i, q);
                    A(i, p) = c * aip - s * aiq;
                    A(i, q) = s * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    double apj = A(p, j), aqj = A(q, j);
                    A(p, j) = c * apj - s * aqj;
                    A(q, j) = s * apj + c * aqj;
                }
                for (std::size_t i = 0; i < n; ++i) {
                    double vip = V(i, p), viq = V(i, q);
                    V(i, p) = c * vip - s * viq;
                    V(i, q) = s * vip + c * viq;
                }
            }
    }
    lam.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) lam[i] = A(i, i);
}

// nearest row-orthonormal matrix: E -> (E E^T)^{-1/2} E
inline Mat polar_rows(const Mat& E) {
    Mat G = matmul(E, transpose(E));
    Mat V;
    std::vector<double> lam;
    jacobi_eigen(G, V, lam);
    const std::size_t k = E.rows;
    Mat S(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        if (lam[i] <= 1e-14) throw std::runtime_error("degenerate frame in polar retraction");
        lam[i] = 1.0 / std::sqrt(lam[i]);
    }
    for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) {
            double s = 0.0;
            for (std::size_t t = 0; t < k; ++t) s += V(i, t) * lam[t] * V(j, t);
            S(i, j) = s;
        }
    return matmul(S, E);
}

}  // namespace rmk

#endif
