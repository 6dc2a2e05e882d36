#ifndef BRANCHTOR_DIFFERENTIALS_HPP
#define BRANCHTOR_DIFFERENTIALS_HPP

#include "branchtor/echelon.hpp"
#include "branchtor/ideals.hpp"
#include "branchtor/polynomial.hpp"
#include "branchtor/ring.hpp"

#include <string>
#include <unordered_map>
#include <vector>

namespace branchtor {

// sum_i coeffs[i] * d(y_i) over the generators y of `ring`.
struct DifferentialElement {
    RingPtr ring;
    std::vector<Polynomial> coeffs;
    std::string label;

    DifferentialElement() = default;
    explicit DifferentialElement(RingPtr r);
    DifferentialElement(RingPtr r, std::vector<Polynomial> c);

    std::size_t size() const { return coeffs.size(); }
    std::vector<TruncatedSeries> series() const;
    bool is_zero() const;
    DifferentialElement& operator+=(const DifferentialElement& w);
    DifferentialElement& operator-=(const DifferentialElement& w);
    DifferentialElement& operator*=(const Rational& c);
    friend DifferentialElement operator+(DifferentialElement a, const DifferentialElement& b) { return a += b; }
    friend DifferentialElement operator-(DifferentialElement a, const DifferentialElement& b) { return a -= b; }
    friend DifferentialElement operator*(const Rational& c, DifferentialElement a) { return a *= c; }
    // Same coefficients read in another ring on the same variables.
    DifferentialElement in_ring(RingPtr other) const;
    std::string to_string() const;
};

// Sum_i r_i * dy_i/dt vanishes below t^{B - max v(y_i)}.
bool torsion_test(const DifferentialElement& w);
TruncatedSeries torsion_image(const DifferentialElement& w);

// Generators of an ideal J of k[z_1..z_m]; the monomial part must contain a
// pure power of every variable so that k[z]/J is finite-dimensional.
struct QuotientSpec {
    std::size_t nvars = 0;
    std::vector<Monomial> monomials;
    std::vector<Polynomial> polynomials;
    std::string description;
};

struct InfiniteQuotientError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

QuotientSpec square_of_maximal(std::size_t nvars, const std::string& description = "m^2");
// Adds the variables listed as degree-one generators.
void add_variables(QuotientSpec& q, const std::vector<std::size_t>& vars);

class ArtinianQuotient
{
public:
    explicit ArtinianQuotient(QuotientSpec spec);

    const QuotientSpec& spec() const { return spec_; }
    const MonomialIdeal& monomial_part() const { return ideal_; }
    std::size_t nvars() const { return spec_.nvars; }
    std::size_t dimension() const { return basis_.size(); }
    // Standard monomials outside the monomial part, largest first.
    const std::vector<Monomial>& standard() const { return standard_; }
    // Standard monomials surviving the polynomial generators.
    const std::vector<Monomial>& basis() const { return basis_; }

    // Coordinates over basis() of the class of p.
    std::vector<Rational> normal_form(const Polynomial& p) const;
    std::vector<Rational> multiply(const std::vector<Rational>& a, const std::vector<Rational>& b) const;
    Polynomial to_polynomial(const std::vector<Rational>& coords) const;

private:
    std::vector<Rational> standard_vector(const Polynomial& p) const;

    QuotientSpec spec_;
    MonomialIdeal ideal_;
    std::vector<Monomial> standard_;
    std::unordered_map<Monomial, int, MonomialHash> position_;
    Echelon echelon_;
    std::vector<Monomial> basis_;
    std::vector<int> basis_position_;
};

// Omega of k[z]/J as a vector space: basis() x dz_i modulo b * d(g) for the
// generators g of J and basis elements b. Column index is bidx * nvars + i.
class OmegaOfQuotient
{
public:
    explicit OmegaOfQuotient(ArtinianQuotient A, Exec exec = Exec::serial);

    const ArtinianQuotient& algebra() const { return A_; }
    std::size_t ambient_dimension() const { return A_.dimension() * A_.nvars(); }
    std::size_t dimension() const { return ambient_dimension() - relations_.rank(); }
    std::size_t relation_rank() const { return relations_.rank(); }

    std::vector<Rational> raw_vector(const std::vector<Polynomial>& coeffs) const;
    // Reduced class of sum coeffs[i] dz_i; zero vector iff the class vanishes.
    std::vector<Rational> class_of(const std::vector<Polynomial>& coeffs) const;
    std::vector<Rational> class_of(const DifferentialElement& w) const;
    bool is_zero(const std::vector<Polynomial>& coeffs) const;
    std::string describe(const std::vector<Rational>& cls, const std::vector<std::string>& names) const;

private:
    ArtinianQuotient A_;
    Echelon relations_;
};

bool class_nonzero_mod(const DifferentialElement& w, const QuotientSpec& J);
std::size_t independence_rank(const std::vector<DifferentialElement>& ws, const QuotientSpec& J,
                              Exec exec = Exec::serial);
std::size_t independence_rank(const std::vector<DifferentialElement>& ws, const OmegaOfQuotient& omega);

// Whether m * dX_u vanishes in Omega of k[X]/K, decided by monomial membership:
// it does iff m X_u lies in K and so does m X_u / X_i for every other X_i dividing m.
bool monomial_zero_test(const MonomialIdeal& K, const Monomial& m, std::size_t u);

// The criterion as literally displayed: X_u^{b_u+1} in K, or every partial of m X_u
// by another variable lies in K. Kept for comparison; it misjudges pure powers.
bool monomial_zero_test_literal(const MonomialIdeal& K, const Monomial& m, std::size_t u);

}  // namespace branchtor

#endif
