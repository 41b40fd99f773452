#include "rmk/ringquery.hpp"

#include <stdexcept>

#include "rmk/charclass.hpp"

namespace rmk {

std::string ring_dual(int k, long l) {
    AlgebraPtr alg = Algebra::free_poly(k);
    Poly total = Poly::one(alg);
    for (int i = 0; i < k; ++i) total = total * (Poly::one(alg) + Poly::variable(alg, i));
    auto duals = invert_total_class(total_class(total, k), l);
    return to_string(duals[l - 1]);
}

std::string ring_euler_rattray(int k, long m, bool doubled) {
    return to_string(euler_rattray(k, m, doubled));
}

std::string ring_euler_makeev(int k, int l, long m, bool orth) {
    return to_string(euler_makeev(k, l, m, orth));
}

std::string ring_d8(std::string_view component, long m, long l) {
    D8Classes c = d8_classes();
    if (component == "r2-total") return to_string(c.total_r2);
    if (component == "plane-total") return to_string(c.total_plane);
    if (component == "euler") return to_string(d8_euler_power(c, m));
    if (component == "dual") {
        auto duals = invert_total_class(total_class(c.total_plane, 2), l);
        return to_string(duals[l - 1]);
    }
    throw std::invalid_argument("unknown d8 component: " + std::string(component));
}

std::string ring_w3(std::string_view component, long m, long l) {
    W3Classes c = w3_classes(m);
    if (component == "total") return to_string(c.total);
    if (component == "euler") return to_string(c.euler_r3);
    if (component == "test") return to_string(c.test_element);
    if (component == "dual") {
        auto duals = invert_total_class(total_class(c.total, 3), l);
        return to_string(duals[l - 1]);
    }
    throw std::invalid_argument("unknown w3 component: " + std::string(component));
}

}  // namespace rmk
