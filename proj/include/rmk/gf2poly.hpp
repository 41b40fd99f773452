#ifndef RMK_GF2POLY_HPP
#define RMK_GF2POLY_HPP

#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

// Exact arithmetic in graded commutative GF(2) algebras presented by
// weighted variables and monomial relations (monomials declared zero).
// Every value is immutable after construction and safe to share across
// threads.

namespace rmk {

struct algebra_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct degree_cap_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct divisibility_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct parse_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Exp = std::uint16_t;

struct VariableSpec {
    std::string name;
    int degree = 1;
};

// Exponent vector aligned with the variables of some Algebra.
struct Monomial {
    std::vector<Exp> e;

    Monomial() = default;
    explicit Monomial(std::vector<Exp> exps) : e(std::move(exps)) {}

    static Monomial unit(std::size_t nvars) { return Monomial(std::vector<Exp>(nvars, 0)); }

    std::size_t nvars() const { return e.size(); }
    bool is_unit() const;
    // true when this divides m exponent-wise
    bool divides(const Monomial& m) const;

    friend bool operator==(const Monomial& a, const Monomial& b) { return a.e == b.e; }
    friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a.e == b.e); }
};

class Algebra;
using AlgebraPtr = std::shared_ptr<const Algebra>;

class Algebra {
  public:
    Algebra(std::vector<VariableSpec> vars, std::vector<Monomial> zero_monomials,
            int max_var_exp = 255, long max_total_degree = 512);

    // F2[t1..tk], all variables of degree 1, no relations
    static AlgebraPtr free_poly(int k, int max_var_exp = 255, long max_total_degree = 512);
    // free polynomial algebra over arbitrary weighted variables
    static AlgebraPtr weighted(std::vector<VariableSpec> vars, int max_var_exp = 255,
                               long max_total_degree = 512);
    // F2[x,y,w]/<xy>, deg x = deg y = 1, deg w = 2
    static AlgebraPtr d8();
    // F2[x,y,w,t]/<xy>, deg t = 1
    static AlgebraPtr w3();

    std::size_t nvars() const { return vars_.size(); }
    const std::vector<VariableSpec>& vars() const { return vars_; }
    const std::vector<Monomial>& zero_monomials() const { return zero_monomials_; }
    int max_var_exp() const { return max_var_exp_; }
    long max_total_degree() const { return max_total_degree_; }

    int var_index(std::string_view name) const;  // -1 when absent
    long degree(const Monomial& m) const;
    // divisible by some zero monomial, i.e. normalizes to zero
    bool killed(const Monomial& m) const;
    bool same_presentation(const Algebra& other) const;

    // graded-lex: higher total degree first, then lexicographically larger
    // exponent vector first; defines the canonical term order
    bool mono_before(const Monomial& a, const Monomial& b) const;

  private:
    std::vector<VariableSpec> vars_;
    std::vector<Monomial> zero_monomials_;
    int max_var_exp_;
    long max_total_degree_;
};

// Polynomial as a finite set of normal-form monomials, each with
// coefficient 1; zero is the empty set. Terms are kept sorted in the
// canonical order so equality is structural.
class Poly {
  public:
    Poly() = default;  // detached value; usable only as a placeholder

    static Poly zero(AlgebraPtr a);
    static Poly one(AlgebraPtr a);
    static Poly term(AlgebraPtr a, Monomial m);
    static Poly variable(AlgebraPtr a, int index);
    // normal form of an arbitrary term list: cancels duplicate pairs mod 2,
    // drops killed monomials, sorts canonically
    static Poly from_terms(AlgebraPtr a, std::vector<Monomial> terms);

    const AlgebraPtr& algebra() const { return alg_; }
    const std::vector<Monomial>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_one() const { return terms_.size() == 1 && terms_[0].is_unit(); }
    long degree() const;        // max term degree, -1 for zero
    bool homogeneous() const;   // zero counts as homogeneous

    friend bool operator==(const Poly& p, const Poly& q);
    friend bool operator!=(const Poly& p, const Poly& q) { return !(p == q); }

  private:
    AlgebraPtr alg_;
    std::vector<Monomial> terms_;

    friend Poly operator+(const Poly&, const Poly&);
    friend Poly operator*(const Poly&, const Poly&);
    friend Poly mul_monomial(const Poly&, const Monomial&);
};

Poly operator+(const Poly& p, const Poly& q);
Poly operator*(const Poly& p, const Poly& q);
Poly mul_monomial(const Poly& p, const Monomial& m);
// identity on values, kept as the named operation; idempotent
Poly normal_form(const Poly& p);
Poly pow(const Poly& p, long e);
Poly homogeneous_component(const Poly& p, long d);
// exponent-wise division; every term of p must be divisible by m
Poly divide_by_monomial(const Poly& p, const Monomial& m);

// all normal-form monomials of weighted total degree d, canonical order
std::vector<Monomial> monomial_basis(const AlgebraPtr& a, long d);

// textual grammar: terms joined by '+', factors by '*', exponents with '^',
// e.g. "t1^6+t1^4*t2^2+t1^2*t2^4+t2^6"; "0" and "1" as expected
std::string to_string(const Monomial& m, const Algebra& a);
std::string to_string(const Poly& p);
Poly parse_poly(const AlgebraPtr& a, std::string_view text);

}  // namespace rmk

#endif
