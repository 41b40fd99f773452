#include "rmk/ideal.hpp"

#include <algorithm>
#include <stdexcept>

namespace rmk {

IdealBasis::IdealBasis(AlgebraPtr alg, std::vector<Poly> generators) : alg_(std::move(alg)) {
    if (!alg_) throw algebra_error("ideal basis needs an algebra");
    for (auto& g : generators) {
        if (g.is_zero()) continue;
        if (!g.algebra()->same_presentation(*alg_))
            throw algebra_error("generator lives in a different presentation");
        if (!g.homogeneous())
            throw std::invalid_argument("ideal generators must be homogeneous");
        degs_.push_back(g.degree());
        gens_.push_back(std::move(g));
    }
    monomial_route_ = alg_->zero_monomials().empty() &&
                      std::all_of(gens_.begin(), gens_.end(),
                                  [](const Poly& g) { return g.terms().size() == 1; });
}

namespace {

// column index of m in the canonically sorted basis
std::size_t column_of(const Algebra& a, const std::vector<Monomial>& basis, const Monomial& m) {
    auto it = std::lower_bound(basis.begin(), basis.end(), m,
                               [&a](const Monomial& x, const Monomial& y) {
                                   return a.mono_before(x, y);
                               });
    if (it == basis.end() || !(*it == m))
        throw std::logic_error("monomial missing from degree basis");
    return static_cast<std::size_t>(it - basis.begin());
}

BitRow encode(const Algebra& a, const std::vector<Monomial>& basis, const Poly& p) {
    BitRow r = BitRow::zeros(basis.size());
    for (const auto& t : p.terms()) r.set(column_of(a, basis, t));
    return r;
}

}  // namespace

std::shared_ptr<const Slice> IdealBasis::slice(long d, bool parallel) const {
    {
        std::lock_guard<std::mutex> lk(memo_->mx);
        auto it = memo_->slices.find(d);
        if (it != memo_->slices.end()) return it->second;
    }
    auto s = std::make_shared<Slice>();
    s->degree = d;
    s->basis = monomial_basis(alg_, d);
    std::vector<BitRow> rows;
    for (std::size_t gi = 0; gi < gens_.size(); ++gi) {
        if (degs_[gi] > d) continue;
        for (auto& mu : monomial_basis(alg_, d - degs_[gi])) {
            Poly prod = mul_monomial(gens_[gi], mu);
            if (prod.is_zero()) continue;
            rows.push_back(encode(*alg_, s->basis, prod));
            s->rows.push_back({static_cast<int>(gi), mu});
        }
    }
    s->ech = echelonize(std::move(rows), s->basis.size(), /*track=*/true, parallel);
    std::lock_guard<std::mutex> lk(memo_->mx);
    auto [it, inserted] = memo_->slices.emplace(d, std::move(s));
    return it->second;
}

std::vector<Poly> slice_span(const IdealBasis& basis, long d) {
    std::vector<Poly> out;
    for (std::size_t gi = 0; gi < basis.generators().size(); ++gi) {
        if (basis.degrees()[gi] > d) continue;
        for (auto& mu : monomial_basis(basis.algebra(), d - basis.degrees()[gi])) {
            Poly prod = mul_monomial(basis.generators()[gi], mu);
            if (!prod.is_zero()) out.push_back(std::move(prod));
        }
    }
    return out;
}

namespace {

// number of degree-d monomials in a free polynomial algebra whose exponent
// vector is termwise below the generator exponents: inclusion-exclusion
// over which generators divide
long count_basis(const AlgebraPtr& alg, long d) {
    if (d < 0) return 0;
    return static_cast<long>(monomial_basis(alg, d).size());
}

MembershipCertificate contains_monomial_route(const Poly& p, const IdealBasis& basis) {
    const long d = p.degree();
    MembershipCertificate cert;
    cert.slice_degree = d;
    cert.slice_dimension = count_basis(basis.algebra(), d);

    // rank of the slice = number of degree-d monomials divisible by some
    // generator (distinct monomials are independent)
    long free_count = 0;
    std::vector<Monomial> gmono(basis.generators().size());
    for (std::size_t gi = 0; gi < gmono.size(); ++gi)
        gmono[gi] = basis.generators()[gi].terms()[0];
    for (const auto& m : monomial_basis(basis.algebra(), d)) {
        bool div = false;
        for (const auto& g : gmono)
            if (g.divides(m)) {
                div = true;
                break;
            }
        if (!div) ++free_count;
    }
    cert.ideal_rank = cert.slice_dimension - free_count;

    std::vector<GeneratorMultipliers> combo(gmono.size());
    for (std::size_t gi = 0; gi < gmono.size(); ++gi)
        combo[gi].generator = static_cast<int>(gi);
    for (const auto& t : p.terms()) {
        bool placed = false;
        for (std::size_t gi = 0; gi < gmono.size(); ++gi) {
            if (gmono[gi].divides(t)) {
                Monomial mu = t;
                for (std::size_t v = 0; v < mu.nvars(); ++v)
                    mu.e[v] = static_cast<Exp>(mu.e[v] - gmono[gi].e[v]);
                combo[gi].multipliers.push_back(std::move(mu));
                placed = true;
                break;
            }
        }
        if (!placed) {
            cert.member = false;
            return cert;
        }
    }
    cert.member = true;
    for (auto& c : combo)
        if (!c.multipliers.empty()) cert.combination.push_back(std::move(c));
    return cert;
}

}  // namespace

namespace detail {

MembershipCertificate contains_via_elimination(const Poly& p, const IdealBasis& basis,
                                               bool parallel) {
    const long d = p.degree();
    auto slice = basis.slice(d, parallel);
    MembershipCertificate cert;
    cert.slice_degree = d;
    cert.slice_dimension = static_cast<long>(slice->dimension());
    cert.ideal_rank = static_cast<long>(slice->rank());

    BitRow q = encode(*basis.algebra(), slice->basis, p);
    BitRow combo = BitRow::zeros(slice->rows.size());
    BitRow residual = slice->ech.reduce(std::move(q), &combo);
    cert.member = !residual.any();
    if (cert.member) {
        std::vector<GeneratorMultipliers> per_gen(basis.generators().size());
        for (std::size_t gi = 0; gi < per_gen.size(); ++gi)
            per_gen[gi].generator = static_cast<int>(gi);
        for (std::size_t i = 0; i < slice->rows.size(); ++i)
            if (combo.get(i))
                per_gen[slice->rows[i].generator].multipliers.push_back(slice->rows[i].multiplier);
        for (auto& c : per_gen)
            if (!c.multipliers.empty()) cert.combination.push_back(std::move(c));
    }
    return cert;
}

}  // namespace detail

MembershipCertificate contains(const Poly& p, const IdealBasis& basis, bool parallel) {
    if (!p.algebra()) throw algebra_error("membership query on a detached polynomial");
    if (!p.algebra()->same_presentation(*basis.algebra()))
        throw algebra_error("query and ideal live in different presentations");
    if (!p.homogeneous())
        throw std::invalid_argument("membership is decided degree by degree; query must be homogeneous");
    if (p.is_zero()) {
        MembershipCertificate cert;
        cert.member = true;
        return cert;
    }
    if (basis.monomial_route()) return contains_monomial_route(p, basis);
    return detail::contains_via_elimination(p, basis, parallel);
}

bool verify_combination(const Poly& p, const IdealBasis& basis,
                        const MembershipCertificate& cert) {
    if (!cert.member) return false;
    Poly sum = Poly::zero(basis.algebra());
    for (const auto& gm : cert.combination) {
        if (gm.generator < 0 || gm.generator >= static_cast<int>(basis.generators().size()))
            return false;
        for (const auto& mu : gm.multipliers)
            sum = sum + mul_monomial(basis.generators()[gm.generator], mu);
    }
    return sum == p;
}

HeightResult height(const Poly& p, const IdealBasis& basis, long d_max, bool parallel) {
    if (p.is_zero()) throw std::invalid_argument("height of zero is undefined");
    if (!p.homogeneous()) throw std::invalid_argument("height needs a homogeneous element");
    if (p.degree() < 1) throw std::invalid_argument("height needs a positive-degree element");
    if (d_max < p.degree()) throw std::invalid_argument("d_max must be at least deg p");
    Poly acc = p;
    long h = 1;
    while (true) {
        if (acc.is_zero() || contains(acc, basis, parallel).member) return {h - 1, false};
        long next = acc.degree() + p.degree();
        if (next > d_max) return {h, true};
        acc = acc * p;
        ++h;
    }
}

}  // namespace rmk
