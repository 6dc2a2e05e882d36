#ifndef BRANCHTOR_BERGER_HPP
#define BRANCHTOR_BERGER_HPP

#include "branchtor/torsion.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace branchtor {

// An integer inequality instantiated on the branch.
struct Evidence {
    std::string inequality;  // e.g. "o(alpha_3) + a_3 >= c_R"
    std::string instance;    // e.g. "8 + 12 = 20 >= 20"
    std::vector<std::pair<std::string, int>> values;
    bool holds = false;
};

struct CriterionReport {
    std::string id;  // UNIT_ORDER | A1_AN | AN1_AN_SHIFTED | AN_AN1 | M_POWER_N | LEMMA_MN
    bool applicable = false;  // the integer hypotheses hold
    bool fired = false;       // and a certificate was built and verified
    std::vector<Evidence> evidence;
    std::optional<TorsionCertificate> certificate;
    std::vector<std::string> notes;
};

struct UnitOrderCandidate {
    int i = 0, d = 0;  // 0-based
    int chosen = 0;
    int subcase = 0;   // 1: o(alpha_d) <= o(alpha_i) < inf, 2: d >= i
};

// Pairs (i, d) satisfying the unit-order hypothesis, in scan order.
std::vector<UnitOrderCandidate> unit_order_candidates(const Analysis& A);

CriterionReport check_unit_order(const Analysis& A);
// A1_AN, AN1_AN_SHIFTED and AN_AN1 in that order, stopping after the first that fires.
std::vector<CriterionReport> check_valuation_criteria(const Analysis& A);
CriterionReport check_mN(const Analysis& A);

// m^N inside the conductor, checked product by product over the generators.
bool power_in_conductor_direct(const Analysis& A, int N);

struct Flags {
    bool all_units_constant = false;  // looks quasi-homogeneous
    bool conductor_in_square = false;
};

struct CertifyReport {
    Analysis analysis;
    std::vector<int> unit_orders;  // kInfiniteOrder for constant units
    Flags flags;
    std::vector<CriterionReport> criteria;  // in pipeline order, up to the first that fired
    std::string outcome;                    // criterion id, or "UNDECIDED"

    bool certified() const { return outcome != "UNDECIDED"; }
    const CriterionReport* fired() const;
};

CertifyReport certify(const Analysis& A);
CertifyReport certify(const Branch& b, Exec exec = Exec::serial);

}  // namespace branchtor

#endif
