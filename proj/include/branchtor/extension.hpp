#ifndef BRANCHTOR_EXTENSION_HPP
#define BRANCHTOR_EXTENSION_HPP

#include "branchtor/branch.hpp"
#include "branchtor/polynomial.hpp"
#include "branchtor/ring.hpp"
#include "branchtor/semigroup.hpp"

#include <memory>
#include <string>
#include <vector>

namespace branchtor {

struct ExtensionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Relation {
    enum class Kind { XT, TT };
    Kind kind = Kind::XT;
    int i = 0, j = 0;  // 0-based: (x_i, T_j) or (T_i, T_j)
    Polynomial lhs;    // in the n+s variables of S
    Polynomial rhs;    // in x_1..x_n only, embedded in the n+s variables
    TruncatedSeries rhs_series;
    std::string to_string(const std::vector<std::string>& names) const;
};

// S = R[c_R / x_1] with T_j = t^{b_j}.
struct ExtensionRing {
    Branch base;
    ValueSemigroup semigroup_R;
    int n = 0, s = 0;
    std::vector<int> b;
    int conductor_S = 0;
    std::vector<std::string> names;
    RingPtr ring;  // variables x_1..x_n, T_1..T_s in the original uniformizer
    std::shared_ptr<const StaircaseBasis> staircase_S;
    std::vector<Relation> relations;

    std::size_t nvars() const { return static_cast<std::size_t>(n + s); }
    std::size_t x(int i) const { return static_cast<std::size_t>(i); }
    std::size_t T(int j) const { return static_cast<std::size_t>(n + j); }
    std::vector<TruncatedSeries> t_generators() const;
    const Relation& xt(int i, int j) const { return relations.at(static_cast<std::size_t>(i * s + j)); }
};

bool conductor_in_square(const Branch& b, const ValueSemigroup& vs);

ExtensionRing build_extension(const Branch& b, const ValueSemigroup& vs, const StaircaseBasis& sb,
                              Exec exec = Exec::serial);

// Reruns the elimination over all n+s generators and checks c_S = c_R - a_1.
SemigroupResult semigroup_of_S(const ExtensionRing& e, Exec exec = Exec::serial);

// True when every relation has both sides equal and the right side in m^2.
bool relations_sound(const ExtensionRing& e);

// A second uniformizer s = beta t with beta^{a_d} = alpha_d, so that x_d = s^{a_d}
// exactly (d = -1 keeps s = t). Ring elements are coordinate free, so all
// series stay written in t and only the powers of s are needed.
struct Uniformizer {
    int d = -1;
    int high_precision = 0;
    TruncatedSeries beta;  // at high_precision

    // s^k as a series in t, for k >= 0.
    TruncatedSeries power(int k, int precision) const;
    TruncatedSeries ds_dt(int precision) const;
};

// high_precision = B + a_n + 2 leaves room for dividing by s^{a_1 - 1}.
Uniformizer make_uniformizer(const Branch& b, int d);

// z * s^{1-a} * dy/ds, known to precision B, where the inputs are known to
// high_precision and v(z) + v(y) >= a.
TruncatedSeries wronskian_coefficient(const TruncatedSeries& z, const TruncatedSeries& y, const Uniformizer& u, int a,
                                      int precision);

// T'_j = s^{b_j} written as T_j + f_j(x) + sum_{k>j} delta_{jk} T_k for the uniformizer of x_d.
struct Transport {
    int d = -1;
    std::vector<Polynomial> T_prime;   // n+s variables
    std::vector<Polynomial> f;         // x-part, n+s variables
    std::vector<std::vector<Rational>> delta;  // delta[j][k]
};

Transport transport_T_under_monomialization(const ExtensionRing& e, const Uniformizer& u);
Transport transport_T_under_monomialization(const ExtensionRing& e, int d);

}  // namespace branchtor

#endif
