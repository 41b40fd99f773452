#include "rmk/gf2poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace rmk {

bool Monomial::is_unit() const {
    return std::all_of(e.begin(), e.end(), [](Exp x) { return x == 0; });
}

bool Monomial::divides(const Monomial& m) const {
    if (e.size() != m.e.size()) return false;
    for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] > m.e[i]) return false;
    return true;
}

Algebra::Algebra(std::vector<VariableSpec> vars, std::vector<Monomial> zero_monomials,
                 int max_var_exp, long max_total_degree)
    : vars_(std::move(vars)),
      zero_monomials_(std::move(zero_monomials)),
      max_var_exp_(max_var_exp),
      max_total_degree_(max_total_degree) {
    for (const auto& v : vars_) {
        if (v.degree < 1) throw algebra_error("variable degree must be >= 1: " + v.name);
        if (v.name.empty()) throw algebra_error("empty variable name");
    }
    for (std::size_t i = 0; i < vars_.size(); ++i)
        for (std::size_t j = i + 1; j < vars_.size(); ++j)
            if (vars_[i].name == vars_[j].name)
                throw algebra_error("duplicate variable name: " + vars_[i].name);
    for (const auto& z : zero_monomials_) {
        if (z.nvars() != vars_.size())
            throw algebra_error("zero monomial arity does not match variable count");
        if (z.is_unit()) throw algebra_error("the unit monomial cannot be a relation");
    }
}

AlgebraPtr Algebra::free_poly(int k, int max_var_exp, long max_total_degree) {
    if (k < 1) throw algebra_error("free_poly needs at least one variable");
    std::vector<VariableSpec> vs;
    vs.reserve(k);
    for (int i = 1; i <= k; ++i) vs.push_back({"t" + std::to_string(i), 1});
    return std::make_shared<Algebra>(std::move(vs), std::vector<Monomial>{}, max_var_exp,
                                     max_total_degree);
}

AlgebraPtr Algebra::weighted(std::vector<VariableSpec> vars, int max_var_exp,
                             long max_total_degree) {
    return std::make_shared<Algebra>(std::move(vars), std::vector<Monomial>{}, max_var_exp,
                                     max_total_degree);
}

AlgebraPtr Algebra::d8() {
    std::vector<VariableSpec> vs = {{"x", 1}, {"y", 1}, {"w", 2}};
    // relation xy = 0
    std::vector<Monomial> zero = {Monomial({1, 1, 0})};
    return std::make_shared<Algebra>(std::move(vs), std::move(zero));
}

AlgebraPtr Algebra::w3() {
    std::vector<VariableSpec> vs = {{"x", 1}, {"y", 1}, {"w", 2}, {"t", 1}};
    std::vector<Monomial> zero = {Monomial({1, 1, 0, 0})};
    return std::make_shared<Algebra>(std::move(vs), std::move(zero));
}

int Algebra::var_index(std::string_view name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return static_cast<int>(i);
    return -1;
}

long Algebra::degree(const Monomial& m) const {
    if (m.nvars() != vars_.size())
        throw algebra_error("monomial arity does not match presentation");
    long d = 0;
    for (std::size_t i = 0; i < vars_.size(); ++i) d += static_cast<long>(m.e[i]) * vars_[i].degree;
    return d;
}

bool Algebra::killed(const Monomial& m) const {
    for (const auto& z : zero_monomials_)
        if (z.divides(m)) return true;
    return false;
}

bool Algebra::same_presentation(const Algebra& o) const {
    if (this == &o) return true;
    if (vars_.size() != o.vars_.size()) return false;
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name != o.vars_[i].name || vars_[i].degree != o.vars_[i].degree) return false;
    return zero_monomials_ == o.zero_monomials_;
}

bool Algebra::mono_before(const Monomial& a, const Monomial& b) const {
    long da = degree(a), db = degree(b);
    if (da != db) return da > db;
    return a.e > b.e;  // lexicographic on exponent vectors, larger first
}

namespace {

void check_mono(const Algebra& a, const Monomial& m) {
    if (m.nvars() != a.nvars()) throw algebra_error("monomial arity does not match presentation");
    long total = 0;
    for (std::size_t i = 0; i < m.nvars(); ++i) {
        if (m.e[i] > a.max_var_exp())
            throw degree_cap_error("per-variable exponent cap exceeded (" +
                                   std::to_string(a.max_var_exp()) + ")");
        total += static_cast<long>(m.e[i]) * a.vars()[i].degree;
    }
    if (total > a.max_total_degree())
        throw degree_cap_error("total degree cap exceeded (" +
                               std::to_string(a.max_total_degree()) + ")");
}

void require_compatible(const Poly& p, const Poly& q) {
    if (!p.algebra() || !q.algebra()) throw algebra_error("operation on a detached polynomial");
    if (!p.algebra()->same_presentation(*q.algebra()))
        throw algebra_error("operands live in different algebra presentations");
}

// sort canonically, cancel equal pairs mod 2, drop killed monomials
std::vector<Monomial> normalize_terms(const Algebra& a, std::vector<Monomial> ts) {
    for (const auto& m : ts) check_mono(a, m);
    std::sort(ts.begin(), ts.end(),
              [&a](const Monomial& x, const Monomial& y) { return a.mono_before(x, y); });
    std::vector<Monomial> out;
    out.reserve(ts.size());
    std::size_t i = 0;
    while (i < ts.size()) {
        std::size_t j = i;
        while (j < ts.size() && ts[j] == ts[i]) ++j;
        if ((j - i) % 2 == 1 && !a.killed(ts[i])) out.push_back(ts[i]);
        i = j;
    }
    return out;
}

}  // namespace

Poly Poly::zero(AlgebraPtr a) {
    Poly p;
    p.alg_ = std::move(a);
    return p;
}

Poly Poly::one(AlgebraPtr a) {
    Poly p;
    p.terms_.push_back(Monomial::unit(a->nvars()));
    p.alg_ = std::move(a);
    return p;
}

Poly Poly::term(AlgebraPtr a, Monomial m) {
    check_mono(*a, m);
    Poly p;
    if (!a->killed(m)) p.terms_.push_back(std::move(m));
    p.alg_ = std::move(a);
    return p;
}

Poly Poly::variable(AlgebraPtr a, int index) {
    if (index < 0 || static_cast<std::size_t>(index) >= a->nvars())
        throw algebra_error("variable index out of range");
    Monomial m = Monomial::unit(a->nvars());
    m.e[index] = 1;
    return term(std::move(a), std::move(m));
}

Poly Poly::from_terms(AlgebraPtr a, std::vector<Monomial> terms) {
    Poly p;
    p.terms_ = normalize_terms(*a, std::move(terms));
    p.alg_ = std::move(a);
    return p;
}

long Poly::degree() const {
    if (terms_.empty()) return -1;
    return alg_->degree(terms_.front());  // leading term has maximal degree
}

bool Poly::homogeneous() const {
    if (terms_.size() <= 1) return true;
    long d = alg_->degree(terms_.front());
    return alg_->degree(terms_.back()) == d;
}

bool operator==(const Poly& p, const Poly& q) {
    if (!p.algebra() && !q.algebra()) return true;
    if (!p.algebra() || !q.algebra()) return false;
    return p.algebra()->same_presentation(*q.algebra()) && p.terms() == q.terms();
}

Poly operator+(const Poly& p, const Poly& q) {
    require_compatible(p, q);
    const Algebra& a = *p.alg_;
    std::vector<Monomial> out;
    out.reserve(p.terms_.size() + q.terms_.size());
    // symmetric difference of two canonically sorted term sets
    std::size_t i = 0, j = 0;
    while (i < p.terms_.size() && j < q.terms_.size()) {
        if (p.terms_[i] == q.terms_[j]) {
            ++i;
            ++j;
        } else if (a.mono_before(p.terms_[i], q.terms_[j])) {
            out.push_back(p.terms_[i++]);
        } else {
            out.push_back(q.terms_[j++]);
        }
    }
    out.insert(out.end(), p.terms_.begin() + i, p.terms_.end());
    out.insert(out.end(), q.terms_.begin() + j, q.terms_.end());
    Poly r;
    r.alg_ = p.alg_;
    r.terms_ = std::move(out);
    return r;
}

Poly operator*(const Poly& p, const Poly& q) {
    require_compatible(p, q);
    const Algebra& a = *p.alg_;
    std::vector<Monomial> prods;
    prods.reserve(p.terms_.size() * q.terms_.size());
    const std::size_t nv = a.nvars();
    for (const auto& s : p.terms_) {
        for (const auto& t : q.terms_) {
            Monomial m;
            m.e.resize(nv);
            for (std::size_t v = 0; v < nv; ++v) {
                long sum = static_cast<long>(s.e[v]) + t.e[v];
                if (sum > a.max_var_exp())
                    throw degree_cap_error("per-variable exponent cap exceeded in product");
                m.e[v] = static_cast<Exp>(sum);
            }
            prods.push_back(std::move(m));
        }
    }
    Poly r;
    r.terms_ = normalize_terms(a, std::move(prods));
    r.alg_ = p.alg_;
    return r;
}

Poly mul_monomial(const Poly& p, const Monomial& m) {
    if (!p.algebra()) throw algebra_error("operation on a detached polynomial");
    const Algebra& a = *p.alg_;
    if (m.nvars() != a.nvars()) throw algebra_error("monomial arity does not match presentation");
    std::vector<Monomial> prods;
    prods.reserve(p.terms_.size());
    for (const auto& s : p.terms_) {
        Monomial t;
        t.e.resize(a.nvars());
        for (std::size_t v = 0; v < a.nvars(); ++v) {
            long sum = static_cast<long>(s.e[v]) + m.e[v];
            if (sum > a.max_var_exp())
                throw degree_cap_error("per-variable exponent cap exceeded in product");
            t.e[v] = static_cast<Exp>(sum);
        }
        if (!a.killed(t)) prods.push_back(std::move(t));
    }
    // multiplying by a fixed monomial preserves the canonical order
    Poly r;
    r.alg_ = p.alg_;
    r.terms_ = std::move(prods);
    return r;
}

Poly normal_form(const Poly& p) { return p; }

namespace {

// square is the Frobenius map in characteristic 2: term-wise exponent doubling
Poly square(const Poly& p) {
    const Algebra& a = *p.algebra();
    std::vector<Monomial> sq;
    sq.reserve(p.terms().size());
    for (const auto& t : p.terms()) {
        Monomial m;
        m.e.resize(t.nvars());
        for (std::size_t v = 0; v < t.nvars(); ++v) {
            long d = 2L * t.e[v];
            if (d > a.max_var_exp())
                throw degree_cap_error("per-variable exponent cap exceeded in power");
            m.e[v] = static_cast<Exp>(d);
        }
        check_mono(a, m);
        if (!a.killed(m)) sq.push_back(std::move(m));
    }
    return Poly::from_terms(p.algebra(), std::move(sq));
}

}  // namespace

Poly pow(const Poly& p, long e) {
    if (!p.algebra()) throw algebra_error("operation on a detached polynomial");
    if (e < 0) throw std::invalid_argument("negative exponent");
    if (e == 0) return Poly::one(p.algebra());
    Poly acc = Poly::one(p.algebra());
    bool started = false;
    for (int bit = 62; bit >= 0; --bit) {
        if (started) acc = square(acc);
        if ((e >> bit) & 1) {
            acc = started ? acc * p : p;
            started = true;
        }
    }
    return acc;
}

Poly homogeneous_component(const Poly& p, long d) {
    if (!p.algebra()) throw algebra_error("operation on a detached polynomial");
    std::vector<Monomial> keep;
    for (const auto& t : p.terms())
        if (p.algebra()->degree(t) == d) keep.push_back(t);
    return Poly::from_terms(p.algebra(), std::move(keep));
}

Poly divide_by_monomial(const Poly& p, const Monomial& m) {
    if (!p.algebra()) throw algebra_error("operation on a detached polynomial");
    if (m.nvars() != p.algebra()->nvars())
        throw algebra_error("monomial arity does not match presentation");
    std::vector<Monomial> out;
    out.reserve(p.terms().size());
    for (const auto& t : p.terms()) {
        if (!m.divides(t))
            throw divisibility_error("term " + to_string(t, *p.algebra()) +
                                     " is not divisible by " + to_string(m, *p.algebra()));
        Monomial q = t;
        for (std::size_t v = 0; v < q.nvars(); ++v) q.e[v] = static_cast<Exp>(q.e[v] - m.e[v]);
        out.push_back(std::move(q));
    }
    return Poly::from_terms(p.algebra(), std::move(out));
}

namespace {

void enumerate_basis(const Algebra& a, std::size_t var, long remaining, Monomial& cur,
                     std::vector<Monomial>& out) {
    if (var + 1 == a.nvars()) {
        int deg = a.vars()[var].degree;
        if (remaining % deg == 0 && remaining / deg <= a.max_var_exp()) {
            cur.e[var] = static_cast<Exp>(remaining / deg);
            if (!a.killed(cur)) out.push_back(cur);
            cur.e[var] = 0;
        }
        return;
    }
    int deg = a.vars()[var].degree;
    long emax = std::min<long>(remaining / deg, a.max_var_exp());
    for (long e = emax; e >= 0; --e) {  // descending: yields canonical order directly
        cur.e[var] = static_cast<Exp>(e);
        enumerate_basis(a, var + 1, remaining - e * deg, cur, out);
    }
    cur.e[var] = 0;
}

}  // namespace

std::vector<Monomial> monomial_basis(const AlgebraPtr& a, long d) {
    if (d < 0) throw std::invalid_argument("negative degree");
    if (d > a->max_total_degree()) throw degree_cap_error("basis degree exceeds total degree cap");
    std::vector<Monomial> out;
    if (d == 0) {
        out.push_back(Monomial::unit(a->nvars()));
        return out;
    }
    Monomial cur = Monomial::unit(a->nvars());
    enumerate_basis(*a, 0, d, cur, out);
    return out;
}

std::string to_string(const Monomial& m, const Algebra& a) {
    if (m.is_unit()) return "1";
    std::string s;
    for (std::size_t v = 0; v < m.nvars(); ++v) {
        if (m.e[v] == 0) continue;
        if (!s.empty()) s += '*';
        s += a.vars()[v].name;
        if (m.e[v] > 1) {
            s += '^';
            s += std::to_string(m.e[v]);
        }
    }
    return s;
}

std::string to_string(const Poly& p) {
    if (!p.algebra()) return "<detached>";
    if (p.is_zero()) return "0";
    std::string s;
    for (const auto& t : p.terms()) {
        if (!s.empty()) s += '+';
        s += to_string(t, *p.algebra());
    }
    return s;
}

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

Monomial parse_term(const Algebra& a, std::string_view term) {
    Monomial m = Monomial::unit(a.nvars());
    std::size_t pos = 0;
    while (pos < term.size()) {
        std::size_t star = term.find('*', pos);
        std::string_view factor = trim(term.substr(pos, star == std::string_view::npos
                                                            ? std::string_view::npos
                                                            : star - pos));
        pos = (star == std::string_view::npos) ? term.size() : star + 1;
        if (factor.empty()) throw parse_error("empty factor in term");
        if (factor == "1") continue;
        std::string_view name = factor;
        long exp = 1;
        std::size_t caret = factor.find('^');
        if (caret != std::string_view::npos) {
            name = trim(factor.substr(0, caret));
            std::string_view es = trim(factor.substr(caret + 1));
            if (es.empty()) throw parse_error("missing exponent after '^'");
            exp = 0;
            for (char c : es) {
                if (!std::isdigit(static_cast<unsigned char>(c)))
                    throw parse_error("bad exponent: " + std::string(es));
                exp = exp * 10 + (c - '0');
                if (exp > 100000) throw parse_error("exponent out of range");
            }
        }
        int idx = a.var_index(name);
        if (idx < 0) throw parse_error("unknown variable: " + std::string(name));
        long total = m.e[idx] + exp;
        if (total > a.max_var_exp()) throw degree_cap_error("parsed exponent exceeds cap");
        m.e[idx] = static_cast<Exp>(total);
    }
    return m;
}

}  // namespace

Poly parse_poly(const AlgebraPtr& a, std::string_view text) {
    std::string_view s = trim(text);
    if (s.empty()) throw parse_error("empty polynomial text");
    if (s == "0") return Poly::zero(a);
    std::vector<Monomial> terms;
    std::size_t pos = 0;
    while (pos <= s.size()) {
        std::size_t plus = s.find('+', pos);
        std::string_view term = trim(
            s.substr(pos, plus == std::string_view::npos ? std::string_view::npos : plus - pos));
        if (term.empty()) throw parse_error("empty term in polynomial text");
        terms.push_back(parse_term(*a, term));
        if (plus == std::string_view::npos) break;
        pos = plus + 1;
    }
    return Poly::from_terms(a, std::move(terms));
}

}  // namespace rmk
