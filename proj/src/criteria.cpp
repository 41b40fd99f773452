#include "rmk/criteria.hpp"

#include <stdexcept>

namespace rmk {

namespace {

long binomial(long n, long r) {
    if (r < 0 || r > n) return 0;
    long acc = 1;
    for (long i = 1; i <= r; ++i) acc = acc * (n - r + i) / i;
    return acc;
}

void validate_instance(int n, long m, int k) {
    if (k < 1) throw std::invalid_argument("k must be >= 1");
    if (n < k) throw std::invalid_argument("n must be >= k");
    if (m < 1) throw std::invalid_argument("m must be >= 1");
}

std::string variant_name(RattrayVariant v, bool orth) {
    std::string s = (v == RattrayVariant::odd) ? "rattray-odd" : "rattray-odd-sym";
    s += orth ? "-orth" : "-free";
    return s;
}

}  // namespace

IdealBasis rattray_free_ideal(const AlgebraPtr& polyk, int n) {
    std::vector<Poly> gens;
    for (std::size_t i = 0; i < polyk->nvars(); ++i)
        gens.push_back(pow(Poly::variable(polyk, static_cast<int>(i)), n));
    return IdealBasis(polyk, std::move(gens));
}

IdealBasis makeev_free_ideal(const AlgebraPtr& polyk, int n) {
    return rattray_free_ideal(polyk, n + 1);
}

IdealBasis stiefel_dual_ideal(const AlgebraPtr& polyk, int n) {
    const int k = static_cast<int>(polyk->nvars());
    Poly total = Poly::one(polyk);
    for (int i = 0; i < k; ++i) total = total * (Poly::one(polyk) + Poly::variable(polyk, i));
    auto duals = invert_total_class(total_class(total, k), n);  // wbar_1..wbar_n
    std::vector<Poly> gens(duals.begin() + (n - k), duals.end());
    return IdealBasis(polyk, std::move(gens));
}

Verdict rattray(int n, long m, int k, RattrayVariant variant, bool orth, bool parallel) {
    validate_instance(n, m, k);
    Verdict v;
    v.criterion = variant_name(variant, orth);
    if (k == 1) {
        // no pairs i < j: the empty product never lies in a proper ideal
        v.decided_admissible = true;
        v.notes.push_back("vacuous: k = 1 leaves no pair conditions");
        return v;
    }
    const bool doubled = (variant == RattrayVariant::odd);
    AlgebraPtr alg = Algebra::free_poly(k);
    Poly test = euler_rattray(alg, m, doubled);
    IdealBasis ideal = orth ? stiefel_dual_ideal(alg, n) : rattray_free_ideal(alg, n);
    v.certificate = contains(test, ideal, parallel);
    v.have_certificate = true;
    v.decided_admissible = !v.certificate.member;
    return v;
}

long min_pow2_at_least(long n) {
    long p = 1;
    while (p < n) p <<= 1;
    return p;
}

bool rattray2_closed_form(int n, long m) {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    return min_pow2_at_least(n) >= m + 2;
}

Verdict rattray2_grassmann(int n, long m, bool parallel) {
    if (n < 2) throw std::invalid_argument("n must be >= 2");
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    Verdict v;
    v.criterion = "rattray2-grassmann";

    // route 1: F2[x,y,w]/<xy>, ideal of the dual classes of 1+(x+y)+w
    // in degrees n-1, n, enlarged by x
    D8Classes d8 = d8_classes();
    auto duals_d8 = invert_total_class(total_class(d8.total_plane, 2), n);
    std::vector<Poly> gens_d8 = {duals_d8[n - 2], duals_d8[n - 1],
                                 Poly::variable(d8.alg, 0)};
    IdealBasis ideal_d8(d8.alg, std::move(gens_d8));
    bool member_d8 = contains(d8_euler_power(d8, m), ideal_d8, parallel).member;

    // route 2: Grassmannian model F2[y,w] with total class 1 + y + w
    AlgebraPtr gr = Algebra::weighted({{"y", 1}, {"w", 2}});
    Poly y = Poly::variable(gr, 0);
    Poly total = Poly::one(gr) + y + Poly::variable(gr, 1);
    auto duals = invert_total_class(total_class(total, 2), n);
    IdealBasis ideal_gr(gr, {duals[n - 2], duals[n - 1]});
    MembershipCertificate cert = contains(pow(y, m), ideal_gr, parallel);

    if (member_d8 != cert.member)
        throw std::logic_error("square-group and Grassmannian membership routes disagree");

    v.certificate = cert;
    v.have_certificate = true;
    v.decided_admissible = !cert.member;
    v.notes.push_back("square-group route agrees");

    // height of the degree-1 class in the quotient; the quotient vanishes
    // above the manifold dimension 2(n-2)
    long d_max = std::max<long>(2L * (n - 2), 1);
    HeightResult h = height(y, ideal_gr, d_max, parallel);
    v.height = h.height;
    v.height_capped = h.capped;
    return v;
}

Verdict rattray3(int n, long m, bool parallel) {
    if (n < 3) throw std::invalid_argument("n must be >= 3");
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    Verdict v;
    v.criterion = "rattray3";
    W3Classes c = w3_classes(m);
    auto duals = invert_total_class(total_class(c.total, 3), n);
    IdealBasis ideal(c.alg, {duals[n - 3], duals[n - 2], duals[n - 1]});
    if (c.test_element.is_zero()) {
        v.have_certificate = false;
        v.decided_admissible = false;
        v.notes.push_back("test element vanishes");
        return v;
    }
    v.certificate = contains(c.test_element, ideal, parallel);
    v.have_certificate = true;
    v.decided_admissible = !v.certificate.member;
    return v;
}

Verdict makeev(int n, long m, int k, int l, bool orth, bool parallel) {
    validate_instance(n, m, k);
    if (l < 1 || l > k) throw std::invalid_argument("l must satisfy 1 <= l <= k");
    Verdict v;
    v.criterion = orth ? "makeev-orth" : "makeev-free";
    AlgebraPtr alg = Algebra::free_poly(k);
    Poly test = euler_makeev(alg, l, m, orth);
    IdealBasis ideal = orth ? stiefel_dual_ideal(alg, n) : makeev_free_ideal(alg, n);
    v.certificate = contains(test, ideal, parallel);
    v.have_certificate = true;
    v.decided_admissible = !v.certificate.member;
    return v;
}

std::vector<std::string> BoundReport::fired() const {
    std::vector<std::string> out;
    if (rattray_sym_free) out.push_back("deg-bound-sym");
    if (rattray_odd_free) out.push_back("deg-bound-odd");
    if (has_makeev && makeev_rough) out.push_back("makeev-rough");
    if (has_makeev && makeev_pow2) out.push_back("makeev-pow2");
    return out;
}

BoundReport bounds(int n, long m, int k, std::optional<int> l) {
    BoundReport r;
    r.rattray_sym_free = static_cast<long>(k - 1) * m < n;
    r.rattray_odd_free = 2L * (k - 1) * m < n;
    if (l) {
        r.has_makeev = true;
        long s = 0;
        for (int i = 0; i <= *l; ++i) s += binomial(k - 1, i);
        r.makeev_rough = n >= m * s;
        if (*l == k) {
            long q = 0;
            while ((2L << q) <= m) ++q;  // 2^q <= m < 2^{q+1}
            long rr = m - (1L << q);
            r.makeev_pow2 = n >= (1L << (q + k - 1)) + rr;
        }
    }
    return r;
}

}  // namespace rmk
