#ifndef BRANCHTOR_REPORT_HPP
#define BRANCHTOR_REPORT_HPP

#include "branchtor/berger.hpp"
#include "branchtor/search.hpp"
#include "branchtor/torsion.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace branchtor {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "branchtor/1";

std::string terms_string(const Terms& p, const std::string& var = "t");

// Pieces, each readable back without recomputing semigroups.
Json ring_json(const Ring& ring);
RingPtr ring_from_json(const Json& j);
Json quotient_json(const QuotientSpec& q, const std::vector<std::string>& names);
QuotientSpec quotient_from_json(const Json& j, const std::vector<std::string>& names);
Json element_json(const DifferentialElement& w);
DifferentialElement element_from_json(const Json& j, RingPtr ring);
Json certificate_json(const TorsionCertificate& c);
TorsionCertificate certificate_from_json(const Json& j);

Json analysis_json(const Analysis& A);
Json certify_json(const CertifyReport& r);
Json extension_json(const ExtensionRing& e, const CountBound& cb, bool sound);
Json membership_json(const Ring& ring, const Monomial& m, const MembershipResult* r, const std::string& undecided);
Json search_json(const SearchSummary& s);

std::string analysis_text(const Analysis& A);
std::string certify_text(const CertifyReport& r);
std::string extension_text(const ExtensionRing& e, const CountBound& cb, bool sound);
std::string membership_text(const Ring& ring, const Monomial& m, const MembershipResult* r,
                            const std::string& undecided);
std::string search_text(const SearchSummary& s);

// Re-verifies a stored certificate (or the fired one inside a certify report).
struct VerifyResult {
    bool ok = false;
    std::vector<std::string> checks;  // one line per check performed
};
VerifyResult verify_document(const Json& doc);

}  // namespace branchtor

#endif
