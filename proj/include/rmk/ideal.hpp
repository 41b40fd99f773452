#ifndef RMK_IDEAL_HPP
#define RMK_IDEAL_HPP

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "rmk/gf2poly.hpp"
#include "rmk/gf2rows.hpp"

// Degree-sliced membership decisions for homogeneous ideals over GF(2).
// A degree slice is spanned by monomial multiples of the generators;
// membership of a homogeneous element is a rank question on the slice,
// answered by bit-packed elimination. Monomial ideals over a free
// polynomial algebra take a direct divisibility route instead.

namespace rmk {

struct SliceRowRef {
    int generator;
    Monomial multiplier;
};

// eliminated degree-d slice of an ideal; immutable after construction
struct Slice {
    long degree = 0;
    std::vector<Monomial> basis;   // column order, canonical
    std::vector<SliceRowRef> rows; // provenance in enumeration order
    EchelonForm ech;               // tracked echelon form of the rows

    std::size_t dimension() const { return basis.size(); }
    std::size_t rank() const { return ech.rank(); }
};

class IdealBasis {
  public:
    // generators must be homogeneous; zero generators are dropped
    IdealBasis(AlgebraPtr alg, std::vector<Poly> generators);

    const AlgebraPtr& algebra() const { return alg_; }
    const std::vector<Poly>& generators() const { return gens_; }
    const std::vector<long>& degrees() const { return degs_; }
    // every generator is a single monomial and the algebra has no relations
    bool monomial_route() const { return monomial_route_; }

    // memoized eliminated slice; safe for concurrent use (single writer
    // per degree, concurrent readers afterwards)
    std::shared_ptr<const Slice> slice(long d, bool parallel = false) const;

  private:
    AlgebraPtr alg_;
    std::vector<Poly> gens_;
    std::vector<long> degs_;
    bool monomial_route_ = false;
    struct Memo {
        std::mutex mx;
        std::map<long, std::shared_ptr<const Slice>> slices;
    };
    std::unique_ptr<Memo> memo_ = std::make_unique<Memo>();
};

// the degree-d piece of the ideal: normal_form(mu * g) over all generators
// g and monomials mu of degree d - deg g, zero products omitted
std::vector<Poly> slice_span(const IdealBasis& basis, long d);

struct GeneratorMultipliers {
    int generator = 0;
    std::vector<Monomial> multipliers;
};

struct MembershipCertificate {
    bool member = false;
    long slice_degree = 0;
    long slice_dimension = 0;
    long ideal_rank = 0;
    std::vector<GeneratorMultipliers> combination;  // populated when member
};

// decide p in <basis>; p must be homogeneous (zero is trivially a member)
MembershipCertificate contains(const Poly& p, const IdealBasis& basis, bool parallel = false);

// recompute sum over the certificate combination and compare with p;
// uses polynomial arithmetic only
bool verify_combination(const Poly& p, const IdealBasis& basis,
                        const MembershipCertificate& cert);

struct HeightResult {
    long height = 0;
    bool capped = false;
};

// largest h with deg(p^h) <= d_max and p^h not in <basis>; 0 when p itself
// is a member; capped flags that the degree bound stopped the search
HeightResult height(const Poly& p, const IdealBasis& basis, long d_max, bool parallel = false);

namespace detail {
// full elimination route regardless of generator shape (testing hook)
MembershipCertificate contains_via_elimination(const Poly& p, const IdealBasis& basis,
                                               bool parallel);
}

}  // namespace rmk

#endif
