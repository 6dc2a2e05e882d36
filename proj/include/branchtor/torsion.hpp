#ifndef BRANCHTOR_TORSION_HPP
#define BRANCHTOR_TORSION_HPP

#include "branchtor/branch.hpp"
#include "branchtor/differentials.hpp"
#include "branchtor/extension.hpp"
#include "branchtor/ideals.hpp"
#include "branchtor/semigroup.hpp"

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace branchtor {

// Everything computed once per branch and shared by the constructions.
struct Analysis {
    Branch branch;
    RingPtr R;
    ValueSemigroup semigroup;
    std::shared_ptr<const StaircaseBasis> staircase;
    int conductor = 0;
    bool conductor_in_square = false;
    std::shared_ptr<const ExtensionRing> extension;  // only when the conductor lies in m^2
    Exec exec = Exec::serial;

    int n() const { return branch.n(); }
    int a(int i) const { return branch.valuations.at(static_cast<std::size_t>(i)); }
    RingPtr S() const { return extension ? extension->ring : nullptr; }
};

Analysis analyze(const Branch& b, Exec exec = Exec::serial);

// p * P * dQ - q * Q * dP: torsion whenever P = s^p and Q = s^q for one uniformizer s.
DifferentialElement pair_torsion(RingPtr ring, const Polynomial& P, int p, const Polynomial& Q, int q);

std::vector<DifferentialElement> gamma_torsions(const ExtensionRing& e);
std::vector<DifferentialElement> bracket_torsions(const ExtensionRing& e);

// One stage of the elimination argument: classes of the remaining members in
// Omega of S/J; those that survive must be independent, and are then removed.
struct PeelStage {
    QuotientSpec quotient;
    std::vector<std::string> survivors;
    std::size_t rank = 0;
    bool independent = false;
};

struct PeelReport {
    std::vector<PeelStage> stages;
    std::size_t family_size = 0;
    std::size_t eliminated = 0;
    bool success = false;  // every member eliminated: the family is independent
};

PeelReport peel(const std::vector<DifferentialElement>& family, const std::vector<QuotientSpec>& stages,
                Exec exec = Exec::serial);

// <x_1..x_n> + <T>^2, then m_S^2.
std::vector<QuotientSpec> count_bound_stages(const ExtensionRing& e);

struct CountBound {
    int n = 0, s = 0;
    std::size_t bound = 0;  // ns + C(s,2)
    std::size_t achieved = 0;
    PeelReport report;
    bool holds() const { return achieved >= bound; }
};

CountBound count_bound(const ExtensionRing& e, Exec exec = Exec::serial);

struct ClassCheck {
    QuotientSpec quotient;
    bool nonzero = false;
    std::string surviving_class;
};

ClassCheck check_class(const DifferentialElement& w, const QuotientSpec& J, Exec exec = Exec::serial);

struct PullbackResult {
    std::size_t family_size = 0;
    std::size_t required = 0;  // ns + C(s,2) + 1
    bool rank_certified = false;
    bool t_rows_nonunit = false;
    bool existence = false;
    std::string reason;
    // explicit mode
    bool explicit_attempted = false;
    std::optional<DifferentialElement> explicit_element;  // over R
    std::vector<Rational> combination;
    bool explicit_torsion_ok = false;
    std::optional<ClassCheck> explicit_check;
};

PullbackResult pullback(const Analysis& A, const std::vector<DifferentialElement>& family, const PeelReport& peel,
                        const std::vector<QuotientSpec>& r_quotients = {});

struct TorsionCertificate {
    std::string criterion;
    std::string ring;  // "R" or "S"
    DifferentialElement element;
    bool torsion_ok = false;
    ClassCheck nonvanishing;
    std::optional<PeelReport> independence;
    std::optional<PullbackResult> pullback;
    std::optional<std::string> expected_class;
    std::optional<bool> matches_expected;
    std::optional<bool> monomial_zero;  // monomial criterion on the target class
    std::vector<std::string> notes;

    bool verified() const;
};

// Re-runs the torsion identity and the class computation from the stored data.
bool reverify(const TorsionCertificate& c);

// --- element builders; each returns nothing when its valuation conditions fail

// u dx_1 - a_1 x_{n-1} dx_n with u = x_{n-1} s^{1-a_1} dx_n/ds written in R (or S).
std::optional<DifferentialElement> wronskian_element(const Analysis& A, bool in_S);
// a_n x_n' dx_1 - a_1 x_1 dx_n' with x_n' = s^{a_n} in R when a_n >= c_R, else in S.
std::optional<DifferentialElement> a1_an_element(const Analysis& A);
// (a_2 x_1^{N-2} x_2 + g) dx_1 - a_1 x_1^{N-1} dx_2 in S.
std::optional<DifferentialElement> mN_element(const Analysis& A, int N,
                                              const std::shared_ptr<const StaircaseBasis>& preferred = nullptr);
// a_1 x_1 dy - theta y dx_1 with y = x_1^{N-2} x_2 - f = s^theta in R.
std::optional<DifferentialElement> lemma_element(const Analysis& A, int N,
                                                 const std::shared_ptr<const StaircaseBasis>& preferred = nullptr);
// a_j y_j dy_k - a_k y_k dy_j for two generators that agree with powers of one
// uniformizer up to the conductor; searched over uniformizers.
struct UnitOrderWitness {
    int uniformizer = -1;  // generator index, -1 for t
    int j = -1, k = -1;
    DifferentialElement element;
};
std::optional<UnitOrderWitness> unit_order_element(const Analysis& A, int preferred);

// --- certificates

TorsionCertificate tau_two_valuations(const Analysis& A);  // A1_AN or AN1_AN_SHIFTED
TorsionCertificate tau_aN_sum(const Analysis& A);
TorsionCertificate tau_unit_order(const Analysis& A, int chosen);

// Mono(I) facts about x_1, x_2 monomials of valuation at most theta.
struct MonoData {
    int N = 0;
    int theta = 0;
    std::vector<Monomial> candidates;
    std::vector<Support> answers;
    MembershipResult power;  // x_1^{N-1}
    MembershipResult mixed;  // x_1^{N-2} x_2
    bool decided = true;
    std::string undecided_reason;
};

MonoData mono_data(const Analysis& A, int N);
TorsionCertificate tau_mN(const Analysis& A, const MonoData& data);
TorsionCertificate tau_lemma_mN(const Analysis& A, const MonoData& data);

int minimal_N(int conductor, int a1);

}  // namespace branchtor

#endif
