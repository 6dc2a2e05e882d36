#ifndef BRANCHTOR_BRANCH_HPP
#define BRANCHTOR_BRANCH_HPP

#include "branchtor/series.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace branchtor {

struct ParseError : std::runtime_error {
    int line, column;
    ParseError(const std::string& what, int line, int column);
};

struct BranchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct NumericalSemigroup {
    std::vector<int> generators;
    std::vector<char> member;  // member[v] for v in [0, bound]
    int frobenius = -1;
    bool contains(int v) const;
};

// Brute-force closure; gcd must be 1.
NumericalSemigroup numerical_semigroup(const std::vector<int>& a);

// R = k[[x_1, ..., x_n]] with x_i = alpha_i t^{a_i}.
struct Branch {
    std::vector<Terms> exact;  // generator polynomials in t (exact when `polynomial`)
    std::vector<int> valuations;
    std::vector<TruncatedSeries> generators;
    std::vector<TruncatedSeries> units;
    int precision = 0;
    int frobenius = 0;
    int margin = 0;
    bool polynomial = true;

    int n() const { return static_cast<int>(valuations.size()); }
    // Generator i known modulo t^{prec+1}; prec > precision needs polynomial data.
    TruncatedSeries generator_at(int i, int prec) const;
    TruncatedSeries unit_at(int i, int prec) const;
    std::string to_string() const;
};

// "t^8+t^9; t^9+t^15" (newlines allowed); errors carry line/column.
std::vector<Terms> parse_generators_text(const std::string& text);
// {"generators": [[[k, "p/q"], ...], ...]}
std::vector<Terms> parse_generators_json(const std::string& text);
std::vector<Terms> parse_generators(const std::string& text);  // sniffs the format

Branch parse_branch(const std::string& text, int precision_margin = 0);
Branch make_branch(std::vector<Terms> raw, int precision_margin = 0);

// Reduction of later generators by monomials in earlier ones; exact on polynomials.
std::vector<Terms> normalize_generators(std::vector<Terms> gens);
Branch normalize(const Branch& b);

// Same generators, working precision changed (polynomial data only when raising).
Branch at_precision(const Branch& b, int precision);

// Least positive exponent of alpha_j with nonzero coefficient, or kInfiniteOrder.
int unit_order(const Branch& b, int j);

struct Monomialization {
    Branch branch;          // generators re-expressed in s
    TruncatedSeries beta;   // beta^{a_d} = alpha_d
    TruncatedSeries beta_inv;
    TruncatedSeries s_of_t; // s = beta t
    TruncatedSeries t_of_s;
};

Monomialization monomialize_first(const Branch& b, int d);

}  // namespace branchtor

#endif
