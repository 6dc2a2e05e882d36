#ifndef BRANCHTOR_SERIES_HPP
#define BRANCHTOR_SERIES_HPP

#include "branchtor/rational.hpp"

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace branchtor {

inline constexpr int kInfiniteOrder = std::numeric_limits<int>::max();

inline bool is_infinite(int order) { return order == kInfiniteOrder; }

struct PrecisionError : std::logic_error {
    using std::logic_error::logic_error;
};

// Sorted by exponent, no zero coefficients.
using Terms = std::vector<std::pair<int, Rational>>;

// Power series in t known modulo t^{B+1}.
class TruncatedSeries
{
public:
    TruncatedSeries() = default;
    explicit TruncatedSeries(int precision);
    TruncatedSeries(Terms terms, int precision);

    static TruncatedSeries constant(const Rational& c, int precision);
    static TruncatedSeries monomial(const Rational& c, int exponent, int precision);
    static TruncatedSeries from_dense(const std::vector<Rational>& coeffs, int precision);

    int precision() const { return prec_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    int order() const { return terms_.empty() ? kInfiniteOrder : terms_.front().first; }
    Rational coeff(int exponent) const;
    Rational leading_coeff() const;
    std::vector<Rational> dense() const;

    // Re-truncate. Raising precision is only legal for exact data (caller's contract).
    TruncatedSeries with_precision(int precision) const;
    TruncatedSeries shifted(int k) const;   // multiply by t^k
    TruncatedSeries unshifted(int k) const; // divide by t^k; low terms must vanish

    TruncatedSeries operator-() const;
    TruncatedSeries& operator+=(const TruncatedSeries& g);
    TruncatedSeries& operator-=(const TruncatedSeries& g);
    TruncatedSeries& operator*=(const Rational& c);
    friend TruncatedSeries operator+(TruncatedSeries f, const TruncatedSeries& g) { return f += g; }
    friend TruncatedSeries operator-(TruncatedSeries f, const TruncatedSeries& g) { return f -= g; }
    friend TruncatedSeries operator*(TruncatedSeries f, const Rational& c) { return f *= c; }
    friend TruncatedSeries operator*(const Rational& c, TruncatedSeries f) { return f *= c; }
    friend TruncatedSeries operator*(const TruncatedSeries& f, const TruncatedSeries& g);
    bool operator==(const TruncatedSeries& g) const;

    std::string to_string(const std::string& var = "t") const;

private:
    Terms terms_;
    int prec_ = 0;
};

enum class SeriesOp { add, sub, mul };
TruncatedSeries arith(const TruncatedSeries& f, const TruncatedSeries& g, SeriesOp kind);

TruncatedSeries invert_unit(const TruncatedSeries& f);
TruncatedSeries nth_root_unit(const TruncatedSeries& f, int a);
// f^r for rational r; needs f(0) = 1 unless r is an integer.
TruncatedSeries pow_unit(const TruncatedSeries& f, const Rational& r);
TruncatedSeries substitute(const TruncatedSeries& f, const TruncatedSeries& s);
TruncatedSeries derivative(const TruncatedSeries& f);
// Compositional inverse of an order-one series.
TruncatedSeries reversion(const TruncatedSeries& s);

// Untruncated product of two polynomials in t.
Terms exact_product(const Terms& a, const Terms& b);
int degree(const Terms& p);

}  // namespace branchtor

#endif
