#include "branchtor/report.hpp"

#include "doctest.h"

using namespace branchtor;

namespace {

const char* kUnitOrder = "t^8+t^9; t^9+t^15; t^12+t^20; t^14";

}  // namespace

TEST_CASE("certify reports carry the schema and re-verify")
{
    for (const char* text : {kUnitOrder, "t^3; t^4; t^5", "t^4+t^5; t^5+t^6; t^6+t^7"}) {
        auto r = certify(parse_branch(text));
        Json j = certify_json(r);
        CHECK(j.at("schema") == "branchtor/1");
        CHECK(j.at("certified") == true);
        CHECK(j.at("outcome") == r.outcome);
        // the document survives serialization to text
        Json back = Json::parse(j.dump());
        auto v = verify_document(back);
        CHECK_MESSAGE(v.ok, text);
        CHECK(!v.checks.empty());
        // a bare certificate verifies too
        CHECK(verify_document(back.at("certificate")).ok);
    }
}

TEST_CASE("certificate round trip through JSON")
{
    auto r = certify(parse_branch(kUnitOrder));
    const TorsionCertificate& c = *r.fired()->certificate;
    Json j = certificate_json(c);
    TorsionCertificate back = certificate_from_json(Json::parse(j.dump()));
    CHECK(back.criterion == c.criterion);
    CHECK(back.element.coeffs == c.element.coeffs);
    CHECK(back.nonvanishing.surviving_class == c.nonvanishing.surviving_class);
    CHECK(reverify(back));
    CHECK(certificate_json(back).dump() == j.dump());
}

TEST_CASE("tampered certificates are rejected")
{
    auto r = certify(parse_branch(kUnitOrder));
    Json j = certify_json(r);

    Json bad_element = j;
    bad_element["certificate"]["element"]["coefficients"][0] = "1";
    CHECK(!verify_document(bad_element).ok);

    Json bad_class = j;
    bad_class["certificate"]["nonvanishing"]["surviving_class"] = "(1)*x1*dx1";
    CHECK(!verify_document(bad_class).ok);

    Json bad_schema = j;
    bad_schema["schema"] = "branchtor/0";
    CHECK(!verify_document(bad_schema).ok);
}

TEST_CASE("analysis JSON")
{
    Analysis A = analyze(parse_branch(kUnitOrder));
    Json j = analysis_json(A);
    CHECK(j.at("schema") == "branchtor/1");
    CHECK(j.at("conductor") == 20);
    CHECK(j.at("valuations") == Json::array({8, 9, 12, 14}));
    CHECK(j.at("unit_orders")[3].is_null());
    CHECK(j.at("precision") == A.branch.precision);
    CHECK(j.at("value_semigroup").at("gaps").back() == 19);
}

TEST_CASE("membership JSON")
{
    Branch b = parse_branch("t^3; t^4; t^5");
    RingPtr R = Ring::of_branch(b);
    Monomial xz = parse_monomial("x1*x3", R->names());
    auto res = mono_support_membership(R, 3, xz);
    Json j = membership_json(*R, xz, &res, "");
    CHECK(j.at("command") == "mono");
    CHECK(j.at("member") == true);
    CHECK(j.at("witness").is_string());
    CHECK(j.at("witness_exact") == true);

    Json u = membership_json(*R, xz, nullptr, "above the conductor");
    CHECK(u.at("member").is_null());
    CHECK(u.at("undecidable") == "above the conductor");
}

TEST_CASE("text output names the outcome")
{
    auto r = certify(parse_branch("t^3; t^4; t^5"));
    std::string text = certify_text(r);
    CHECK(text.find("A1_AN") != std::string::npos);
    CHECK(terms_string(Terms{{3, Rational(1)}, {5, Rational(-2)}}).find("t^3") != std::string::npos);
}
