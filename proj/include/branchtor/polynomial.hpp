#ifndef BRANCHTOR_POLYNOMIAL_HPP
#define BRANCHTOR_POLYNOMIAL_HPP

#include "branchtor/rational.hpp"

#include <cstddef>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace branchtor {

using Monomial = std::vector<int>;

int total_degree(const Monomial& m);
bool divides(const Monomial& a, const Monomial& b);
Monomial unit_vector(std::size_t nvars, std::size_t i);
Monomial operator+(const Monomial& a, const Monomial& b);
Monomial operator-(const Monomial& a, const Monomial& b);  // requires divides(b, a)
int weighted_degree(const Monomial& m, const std::vector<int>& weights);

// Graded lex with x1 > x2 > ... within a degree.
struct GrlexLess {
    bool operator()(const Monomial& a, const Monomial& b) const;
};

struct MonomialHash {
    std::size_t operator()(const Monomial& m) const;
};

std::string monomial_string(const Monomial& m, const std::vector<std::string>& names);

// All monomials in nvars variables with weighted degree <= bound (weights > 0).
std::vector<Monomial> monomials_up_to(const std::vector<int>& weights, int bound);
std::vector<Monomial> monomials_of_degree_at_most(std::size_t nvars, int degree);

class Polynomial
{
public:
    using TermMap = std::map<Monomial, Rational, GrlexLess>;

    Polynomial() = default;
    explicit Polynomial(std::size_t nvars) : nvars_(nvars) {}
    static Polynomial constant(std::size_t nvars, const Rational& c);
    static Polynomial variable(std::size_t nvars, std::size_t i);
    static Polynomial term(const Monomial& m, const Rational& c);

    std::size_t nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    Rational coeff(const Monomial& m) const;
    Rational constant_term() const;
    void add_term(const Monomial& m, const Rational& c);

    Polynomial& operator+=(const Polynomial& q);
    Polynomial& operator-=(const Polynomial& q);
    Polynomial& operator*=(const Rational& c);
    friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
    friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
    friend Polynomial operator*(Polynomial p, const Rational& c) { return p *= c; }
    friend Polynomial operator*(const Rational& c, Polynomial p) { return p *= c; }
    friend Polynomial operator*(const Polynomial& p, const Polynomial& q);
    Polynomial operator-() const { return *this * Rational(-1); }
    bool operator==(const Polynomial& q) const { return terms_ == q.terms_; }

    Polynomial partial(std::size_t i) const;
    Polynomial times_monomial(const Monomial& m) const;
    // Keep only the terms accepted by keep.
    Polynomial filtered(const std::function<bool(const Monomial&)>& keep) const;
    // Re-embed into a larger variable set (new variables appended).
    Polynomial widened(std::size_t nvars) const;
    // Map variable k of this polynomial to variable index_map[k] of an nvars-variable ring.
    Polynomial embedded(std::size_t nvars, const std::vector<std::size_t>& index_map) const;

    std::string to_string(const std::vector<std::string>& names) const;

private:
    std::size_t nvars_ = 0;
    TermMap terms_;
};

// Grammar: sums of [coef*]name[^k]*... terms, e.g. "3*x1^2*x2 - 5/2*T1 + 7".
Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& names);
Monomial parse_monomial(const std::string& text, const std::vector<std::string>& names);

std::vector<std::string> default_names(std::size_t n, std::size_t s = 0);

}  // namespace branchtor

#endif
