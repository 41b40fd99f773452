#ifndef RMK_CHARCLASS_HPP
#define RMK_CHARCLASS_HPP

#include <vector>

#include "rmk/gf2poly.hpp"

// Characteristic class constructions: elementary symmetric classes, dual
// classes by total-class inversion (with the multinomial expansion as an
// independent second route), and the Euler classes of the representations
// driving the frame and mass-partition criteria.

namespace rmk {

// total class as homogeneous components indexed by degree; comp[0] == 1
struct TotalClass {
    AlgebraPtr alg;
    std::vector<Poly> comp;
};

// split an inhomogeneous polynomial into components 0..L; the degree-0
// component must be 1
TotalClass total_class(const Poly& w, long L);

// sum of all squarefree degree-i monomials of the algebra's variables
Poly elementary_symmetric(const AlgebraPtr& a, int i);

// duals 1..L from the convolution recursion derived from w * wbar = 1
std::vector<Poly> invert_total_class(const TotalClass& total, long L);

// convenience: duals of an explicit total-class polynomial
std::vector<Poly> dual_classes(const Poly& total_poly, long L);

// independent route to the dual class of the tautological total class
// prod (1 + t_i) over F2[t1..tk]: enumerate exponent solutions of
// i1 + 2 i2 + ... + k ik = l and keep terms whose multinomial coefficient
// is odd, then expand in the t variables
Poly dual_class_multinomial(int k, long l);

// the multinomial coefficient (sum parts)! / prod parts! is odd exactly
// when the binary digits of the parts add without carries
bool multinomial_odd(const std::vector<long>& parts);

// prod_{a<b} (t_a + t_b)^{m * (doubled ? 2 : 1)} over F2[t1..tk]
Poly euler_rattray(int k, long m, bool doubled);
Poly euler_rattray(const AlgebraPtr& polyk, long m, bool doubled);

// product over 0/1 coefficient vectors of Hamming weight 1..l of
// (sum s_i t_i)^m; when orth, divided by t1...tk
Poly euler_makeev(int k, int l, long m, bool orth);
Poly euler_makeev(const AlgebraPtr& polyk, int l, long m, bool orth);

struct D8Classes {
    AlgebraPtr alg;      // F2[x,y,w]/<xy>
    Poly total_r2;       // 1 + y
    Poly total_plane;    // 1 + (x + y) + w
};
D8Classes d8_classes();
// Euler class of m copies of the sign representation: y^m
Poly d8_euler_power(const D8Classes& c, long m);

struct W3Classes {
    AlgebraPtr alg;      // F2[x,y,w,t]/<xy>
    Poly total;          // (1 + x + y + w)(1 + t)
    Poly euler_r3;       // y(t^2 + t(x+y) + w)
    Poly test_element;   // y^m (t^2 + t(x+y) + w)^m
    long m = 0;
};
W3Classes w3_classes(long m);

}  // namespace rmk

#endif
