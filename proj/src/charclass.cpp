#include "rmk/charclass.hpp"

#include <stdexcept>

namespace rmk {

TotalClass total_class(const Poly& w, long L) {
    if (!w.algebra()) throw algebra_error("total class of a detached polynomial");
    TotalClass tc;
    tc.alg = w.algebra();
    tc.comp.reserve(L + 1);
    for (long d = 0; d <= L; ++d) tc.comp.push_back(homogeneous_component(w, d));
    if (!tc.comp[0].is_one()) throw std::invalid_argument("total class must start with 1");
    return tc;
}

Poly elementary_symmetric(const AlgebraPtr& a, int i) {
    const int k = static_cast<int>(a->nvars());
    if (i < 1 || i > k) throw std::invalid_argument("elementary symmetric index out of range");
    std::vector<Monomial> terms;
    std::vector<int> pick(i);
    // enumerate all i-subsets of the variables
    for (int j = 0; j < i; ++j) pick[j] = j;
    while (true) {
        Monomial m = Monomial::unit(k);
        for (int j = 0; j < i; ++j) m.e[pick[j]] = 1;
        terms.push_back(std::move(m));
        int j = i - 1;
        while (j >= 0 && pick[j] == k - i + j) --j;
        if (j < 0) break;
        ++pick[j];
        for (int t = j + 1; t < i; ++t) pick[t] = pick[t - 1] + 1;
    }
    return Poly::from_terms(a, std::move(terms));
}

std::vector<Poly> invert_total_class(const TotalClass& total, long L) {
    if (total.comp.empty() || !total.comp[0].is_one())
        throw std::invalid_argument("total class must start with 1");
    std::vector<Poly> dual;  // dual[l] is wbar_l, with dual[0] = 1
    dual.reserve(L + 1);
    dual.push_back(Poly::one(total.alg));
    const long span = static_cast<long>(total.comp.size()) - 1;
    for (long l = 1; l <= L; ++l) {
        Poly s = Poly::zero(total.alg);
        for (long i = 1; i <= std::min(l, span); ++i)
            s = s + total.comp[i] * dual[l - i];
        dual.push_back(std::move(s));
    }
    return std::vector<Poly>(dual.begin() + 1, dual.end());
}

std::vector<Poly> dual_classes(const Poly& total_poly, long L) {
    return invert_total_class(total_class(total_poly, std::min(L, std::max<long>(total_poly.degree(), 0))), L);
}

bool multinomial_odd(const std::vector<long>& parts) {
    long acc = 0;
    for (long p : parts) {
        if (acc & p) return false;
        acc |= p;
    }
    return true;
}

namespace {

void multinomial_terms(int k, long l, long j, std::vector<long>& iv, const AlgebraPtr& alg,
                       const std::vector<Poly>& elem, Poly& out) {
    if (j == k) {
        if (l != 0) return;
        if (!multinomial_odd(iv)) return;
        Poly term = Poly::one(alg);
        for (int idx = 0; idx < k; ++idx)
            if (iv[idx] > 0) term = term * pow(elem[idx], iv[idx]);
        out = out + term;
        return;
    }
    // variable w_{j+1} has weight j+1
    for (long i = 0; i * (j + 1) <= l; ++i) {
        iv[j] = i;
        multinomial_terms(k, l - i * (j + 1), j + 1, iv, alg, elem, out);
    }
    iv[j] = 0;
}

}  // namespace

Poly dual_class_multinomial(int k, long l) {
    if (l < 1) throw std::invalid_argument("dual class index must be >= 1");
    AlgebraPtr alg = Algebra::free_poly(k);
    std::vector<Poly> elem;
    elem.reserve(k);
    for (int i = 1; i <= k; ++i) elem.push_back(elementary_symmetric(alg, i));
    Poly out = Poly::zero(alg);
    std::vector<long> iv(k, 0);
    multinomial_terms(k, l, 0, iv, alg, elem, out);
    return out;
}

Poly euler_rattray(const AlgebraPtr& polyk, long m, bool doubled) {
    const int k = static_cast<int>(polyk->nvars());
    if (k < 2) throw std::invalid_argument("pair product needs k >= 2");
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    Poly base = Poly::one(polyk);
    for (int a = 0; a < k; ++a)
        for (int b = a + 1; b < k; ++b)
            base = base * (Poly::variable(polyk, a) + Poly::variable(polyk, b));
    return pow(base, m * (doubled ? 2 : 1));
}

Poly euler_rattray(int k, long m, bool doubled) {
    return euler_rattray(Algebra::free_poly(k), m, doubled);
}

Poly euler_makeev(const AlgebraPtr& polyk, int l, long m, bool orth) {
    const int k = static_cast<int>(polyk->nvars());
    if (l < 1 || l > k) throw std::invalid_argument("l must satisfy 1 <= l <= k");
    if (m < 0) throw std::invalid_argument("m must be >= 0");
    Poly prod = Poly::one(polyk);
    for (unsigned mask = 1; mask < (1u << k); ++mask) {
        int weight = __builtin_popcount(mask);
        if (weight > l) continue;
        Poly lin = Poly::zero(polyk);
        for (int i = 0; i < k; ++i)
            if (mask & (1u << i)) lin = lin + Poly::variable(polyk, i);
        prod = prod * pow(lin, m);
    }
    if (orth) {
        Monomial top = Monomial::unit(k);
        for (int i = 0; i < k; ++i) top.e[i] = 1;
        prod = divide_by_monomial(prod, top);  // throws when m = 0
    }
    return prod;
}

Poly euler_makeev(int k, int l, long m, bool orth) {
    return euler_makeev(Algebra::free_poly(k), l, m, orth);
}

D8Classes d8_classes() {
    D8Classes c;
    c.alg = Algebra::d8();
    Poly one = Poly::one(c.alg);
    Poly x = Poly::variable(c.alg, 0);
    Poly y = Poly::variable(c.alg, 1);
    Poly w = Poly::variable(c.alg, 2);
    c.total_r2 = one + y;
    c.total_plane = one + x + y + w;
    return c;
}

Poly d8_euler_power(const D8Classes& c, long m) {
    return pow(Poly::variable(c.alg, 1), m);
}

W3Classes w3_classes(long m) {
    if (m < 1) throw std::invalid_argument("m must be >= 1");
    W3Classes c;
    c.alg = Algebra::w3();
    Poly one = Poly::one(c.alg);
    Poly x = Poly::variable(c.alg, 0);
    Poly y = Poly::variable(c.alg, 1);
    Poly w = Poly::variable(c.alg, 2);
    Poly t = Poly::variable(c.alg, 3);
    c.total = (one + x + y + w) * (one + t);
    c.euler_r3 = y * (t * t + t * (x + y) + w);
    c.test_element = pow(c.euler_r3, m);
    c.m = m;
    return c;
}

}  // namespace rmk
