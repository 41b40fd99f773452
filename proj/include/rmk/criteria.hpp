#ifndef RMK_CRITERIA_HPP
#define RMK_CRITERIA_HPP

#include <optional>
#include <string>
#include <vector>

#include "rmk/charclass.hpp"
#include "rmk/ideal.hpp"

// Decision procedures: each criterion is a sufficiency test, so verdicts
// are either "decided admissible" or "not decided by this criterion" --
// never an impossibility claim.

namespace rmk {

enum class RattrayVariant { odd, odd_sym };

struct Verdict {
    bool decided_admissible = false;
    std::string criterion;
    bool have_certificate = false;
    MembershipCertificate certificate;  // of the test element against the index ideal
    std::vector<std::string> notes;     // vacuous cases, bound pre-checks that fired
    // extra data reported by the 2-frame Grassmannian criterion
    long height = -1;
    bool height_capped = false;
};

// test element prod_{a<b}(t_a+t_b)^{m(*2 when odd without sym)} against
// <t_i^n> (free) or the dual-class ideal <wbar_{n-k+1}..wbar_n> (orth)
Verdict rattray(int n, long m, int k, RattrayVariant variant, bool orth, bool parallel = false);

// minimal power of two >= n
long min_pow2_at_least(long n);
// closed form for 2-frames: P(n) >= m + 2
bool rattray2_closed_form(int n, long m);

// decides y^m two ways (quotient of the square-group cohomology by x, and
// the two-variable Grassmannian model); also reports the height of y
Verdict rattray2_grassmann(int n, long m, bool parallel = false);

// 3-frame criterion over F2[x,y,w,t]/<xy>
Verdict rattray3(int n, long m, bool parallel = false);

// test element from the weight-filtered product of linear forms against
// <t_i^{n+1}> (free; oriented affine hyperplanes live on S^n) or the
// dual-class ideal (orth)
Verdict makeev(int n, long m, int k, int l, bool orth, bool parallel = false);

struct BoundReport {
    bool rattray_sym_free = false;   // (k-1) m < n
    bool rattray_odd_free = false;   // 2 (k-1) m < n
    bool has_makeev = false;
    bool makeev_rough = false;       // n >= m * sum_{i=0..l} C(k-1, i)
    bool makeev_pow2 = false;        // l == k and n >= 2^{q+k-1} + r, m = 2^q + r
    std::vector<std::string> fired() const;
};

BoundReport bounds(int n, long m, int k, std::optional<int> l);

// index ideals, exposed for tests and sweeps
IdealBasis rattray_free_ideal(const AlgebraPtr& polyk, int n);
IdealBasis makeev_free_ideal(const AlgebraPtr& polyk, int n);
// <wbar_{n-k+1},...,wbar_n> of the tautological total class prod (1+t_i)
IdealBasis stiefel_dual_ideal(const AlgebraPtr& polyk, int n);

}  // namespace rmk

#endif
