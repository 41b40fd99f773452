#ifndef RMK_WITNESS_HPP
#define RMK_WITNESS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rmk/smallmat.hpp"

// Numeric certification of positive verdicts at small scale: orthonormal
// frames annihilating odd symmetric functions, and hyperplane arrangements
// equiparting sampled measures. Searches are deterministic functions of
// (seed, restart budget); restarts may run concurrently because every
// restart derives its generator from (seed, restart index).

namespace rmk {

// f(x,y) = x^T A y * (1 + sum_j c_j (x^T B_j x)(y^T B_j y)); odd in each
// argument and symmetric by construction
struct OddSymFunction {
    int n = 0;
    Mat bilinear;                    // symmetric
    std::vector<Mat> mod_forms;      // symmetric
    std::vector<double> mod_weights;

    double eval(const double* x, const double* y) const;
    void grad(const double* x, const double* y, double* gx, double* gy) const;
};

OddSymFunction random_odd_sym(int n, std::uint64_t seed, int n_modulations);

struct Frame {
    Mat vectors;  // k x n, rows are the frame vectors
    double gram_error() const;  // max |<e_i,e_j> - delta_ij|
};

// the m * k(k-1)/2 values f_l(e_i, e_j), i < j, function-major order
std::vector<double> frame_residual(const std::vector<OddSymFunction>& funcs, const Frame& f);

struct FrameSearchResult {
    bool found = false;
    Frame frame;
    std::vector<double> residual;
    double residual_inf = 0.0;
    int restarts_used = 0;
};

// multi-start damped Gauss-Newton with polar retraction to the frame
// manifold; not-found is a search failure, never a refutation
FrameSearchResult search_frame(const std::vector<OddSymFunction>& funcs, int n, int k, double tol,
                               int max_restarts, std::uint64_t seed);

struct SampledMeasure {
    Mat points;                      // N x n
    std::vector<double> weights;     // positive, sum 1
    bool uniform_weights = false;
};

SampledMeasure gaussian_cloud(int n, long count, std::uint64_t seed);
// text format: one point per line, n coordinates then a weight,
// whitespace separated; '#' starts a comment
SampledMeasure load_measure(std::istream& in, int expected_dim = -1);

// offset alpha making the two open halfspaces orthogonal to `direction`
// as balanced as the atoms allow; exact half-ties resolve to the midpoint
// between the neighboring projections
double halving_offset(const SampledMeasure& mu, const std::vector<double>& direction);

struct HyperplaneArrangement {
    Mat normals;                  // k x n unit rows
    std::vector<double> offsets;  // size k
    bool orthogonal = false;
    double orthogonality_error() const;  // max |<v_i,v_j> - delta_ij|
};

// weights of the 2^k open orthants; bit i of the index is set when
// <x, v_i> > alpha_i; boundary atoms belong to no orthant
std::vector<double> orthant_masses(const SampledMeasure& mu, const HyperplaneArrangement& h);
// OpenMP variant (bit-identical for uniform weights, where it counts atoms)
std::vector<double> orthant_masses_parallel(const SampledMeasure& mu,
                                            const HyperplaneArrangement& h);

struct EquipartSearchResult {
    bool found = false;
    HyperplaneArrangement arrangement;
    std::vector<double> masses;   // full 2^k orthant masses of the first measure
    double worst_deviation = 0.0; // max over l-subsets, measures, orthants
    int restarts_used = 0;
    std::string offsets_mode;     // "halving" | "free"
};

// minimizes the squared deviation of every l-subset orthant mass from
// 2^-l over a derivative-free simplex search (orthant masses of sampled
// measures are piecewise constant); when orth, normals form a k-frame and
// offsets either halve the first measure per direction or stay free
EquipartSearchResult search_equipartition(const std::vector<SampledMeasure>& measures, int n,
                                          int k, int l, bool orth, bool free_offsets, double tol,
                                          int max_restarts, std::uint64_t seed);

}  // namespace rmk

#endif
