#ifndef BRANCHTOR_IDEALS_HPP
#define BRANCHTOR_IDEALS_HPP

#include "branchtor/echelon.hpp"
#include "branchtor/polynomial.hpp"
#include "branchtor/ring.hpp"

#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace branchtor {

struct MonomialIdeal {
    std::size_t nvars = 0;
    std::vector<Monomial> generators;  // antichain

    bool contains(const Monomial& m) const;
    bool is_unit() const;
    std::string to_string(const std::vector<std::string>& names) const;
};

MonomialIdeal minimalize(std::vector<Monomial> gens, std::size_t nvars);
bool monomial_membership(const MonomialIdeal& K, const Monomial& m);

// Linear relations among the images of all monomials of valuation <= bound,
// taken modulo t^{bound+1}: elements of I up to that precision.
struct RelationSearch {
    std::vector<Monomial> monomials;
    std::vector<Polynomial> kernel;
    std::size_t rank = 0;
};
RelationSearch relation_search(const Ring& ring, int bound, Exec exec = Exec::serial);

struct UndecidableError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Support { yes, no, undecided };
const char* to_string(Support s);

// Decides whether a monomial occurs in the support of some element of I, for
// a fixed set of candidate monomials sharing one precomputed elimination.
class SupportOracle
{
public:
    SupportOracle(RingPtr ring, int conductor, std::vector<Monomial> candidates, Exec exec = Exec::serial);

    Support in_support(const Monomial& m) const;
    // f in I (to precision) with m in its support; only when in_support(m) is yes.
    std::optional<Polynomial> witness(const Monomial& m) const;
    const std::vector<Monomial>& candidates() const { return candidates_; }

private:
    bool in_span(const Monomial& m) const;
    int index_of(const Monomial& m) const;
    const Echelon& tracked_others() const;

    RingPtr ring_;
    int conductor_;
    std::vector<Monomial> candidates_;
    std::vector<SparseVec> candidate_vectors_;
    std::vector<Monomial> others_;
    std::vector<SparseVec> other_vectors_;
    // relations among the candidates modulo the span of all other monomials
    std::vector<SparseVec> kernel_;
    std::vector<char> in_span_;
    Exec exec_;
    mutable std::once_flag tracked_once_;
    mutable Echelon tracked_;
};

struct MembershipResult {
    bool member = false;
    std::optional<Monomial> divisor;
    std::optional<Polynomial> witness;
    bool witness_exact = false;
    std::vector<Monomial> tested_divisors;
};

std::vector<Monomial> divisors_of_degree_at_least(const Monomial& m, int degree);

// Membership of m decided from an oracle whose candidates include every divisor
// of m of total degree >= 2. Throws UndecidableError like the function below.
MembershipResult membership_from_oracle(const SupportOracle& oracle, const Ring& ring, int conductor,
                                        const Monomial& m);

// m in Mono(I) iff some divisor of total degree >= 2 lies in the support of I.
// Throws UndecidableError when a divisor cannot be settled at this precision.
MembershipResult mono_support_membership(RingPtr ring, int conductor, const Monomial& m, Exec exec = Exec::serial);

}  // namespace branchtor

#endif
