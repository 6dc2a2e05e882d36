#include "branchtor/report.hpp"

#include <iomanip>
#include <sstream>

namespace branchtor {

namespace {

Json order_json(int o) { return is_infinite(o) ? Json(nullptr) : Json(o); }

std::string order_text(int o) { return is_infinite(o) ? std::string("inf") : std::to_string(o); }

std::string join(const std::vector<int>& v, const std::string& sep = " ")
{
    std::string out;
    for (std::size_t k = 0; k < v.size(); ++k) out += (k ? sep : "") + std::to_string(v[k]);
    return out;
}

std::vector<std::string> generator_strings(const Ring& ring)
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < ring.nvars(); ++i) out.push_back(terms_string(ring.exact(i)));
    return out;
}

Json peel_json(const PeelReport& p)
{
    Json stages = Json::array();
    for (auto& s : p.stages)
        stages.push_back({{"quotient", s.quotient.description},
                          {"survivors", s.survivors},
                          {"rank", s.rank},
                          {"independent", s.independent}});
    return {{"family_size", p.family_size}, {"eliminated", p.eliminated}, {"success", p.success}, {"stages", stages}};
}

PeelReport peel_from_json(const Json& j)
{
    PeelReport p;
    p.family_size = j.at("family_size").get<std::size_t>();
    p.eliminated = j.at("eliminated").get<std::size_t>();
    p.success = j.at("success").get<bool>();
    for (auto& s : j.at("stages")) {
        PeelStage st;
        st.quotient.description = s.at("quotient").get<std::string>();
        st.survivors = s.at("survivors").get<std::vector<std::string>>();
        st.rank = s.at("rank").get<std::size_t>();
        st.independent = s.at("independent").get<bool>();
        p.stages.push_back(std::move(st));
    }
    return p;
}

Json check_json(const ClassCheck& c, const std::vector<std::string>& names)
{
    return {{"quotient", quotient_json(c.quotient, names)}, {"nonzero", c.nonzero}, {"surviving_class", c.surviving_class}};
}

ClassCheck check_from_json(const Json& j, const std::vector<std::string>& names)
{
    ClassCheck c;
    c.quotient = quotient_from_json(j.at("quotient"), names);
    c.nonzero = j.at("nonzero").get<bool>();
    c.surviving_class = j.at("surviving_class").get<std::string>();
    return c;
}

Json pullback_json(const PullbackResult& p)
{
    Json j{{"family_size", p.family_size},
           {"required", p.required},
           {"rank_certified", p.rank_certified},
           {"t_rows_nonunit", p.t_rows_nonunit},
           {"existence", p.existence},
           {"reason", p.reason},
           {"explicit_attempted", p.explicit_attempted}};
    if (p.explicit_element) {
        const auto& w = *p.explicit_element;
        Json combo = Json::array();
        for (auto& c : p.combination) combo.push_back(to_string(c));
        j["explicit"] = {{"ring_data", ring_json(*w.ring)},
                         {"element", element_json(w)},
                         {"combination", combo},
                         {"torsion_ok", p.explicit_torsion_ok},
                         {"check", p.explicit_check ? check_json(*p.explicit_check, w.ring->names()) : Json(nullptr)}};
    } else {
        j["explicit"] = nullptr;
    }
    return j;
}

PullbackResult pullback_from_json(const Json& j)
{
    PullbackResult p;
    p.family_size = j.at("family_size").get<std::size_t>();
    p.required = j.at("required").get<std::size_t>();
    p.rank_certified = j.at("rank_certified").get<bool>();
    p.t_rows_nonunit = j.at("t_rows_nonunit").get<bool>();
    p.existence = j.at("existence").get<bool>();
    p.reason = j.at("reason").get<std::string>();
    p.explicit_attempted = j.at("explicit_attempted").get<bool>();
    const Json& ex = j.at("explicit");
    if (!ex.is_null()) {
        RingPtr ring = ring_from_json(ex.at("ring_data"));
        p.explicit_element = element_from_json(ex.at("element"), ring);
        for (auto& c : ex.at("combination")) p.combination.push_back(parse_rational(c.get<std::string>()));
        p.explicit_torsion_ok = ex.at("torsion_ok").get<bool>();
        if (!ex.at("check").is_null()) p.explicit_check = check_from_json(ex.at("check"), ring->names());
    }
    return p;
}

Json evidence_json(const Evidence& e)
{
    Json values = Json::object();
    for (auto& [k, v] : e.values) values[k] = v;
    return {{"inequality", e.inequality}, {"instance", e.instance}, {"holds", e.holds}, {"values", values}};
}

void analysis_fields(Json& j, const Analysis& A)
{
    std::vector<std::string> gens;
    for (auto& g : A.branch.exact) gens.push_back(terms_string(g));
    Json units = Json::array();
    for (int i = 0; i < A.n(); ++i) units.push_back(order_json(unit_order(A.branch, i)));
    j["branch"] = gens;
    j["valuations"] = A.branch.valuations;
    j["unit_orders"] = units;
    j["precision"] = A.branch.precision;
    j["value_semigroup"] = {{"attained", A.semigroup.attained}, {"gaps", A.semigroup.gaps}};
    j["conductor"] = A.conductor;
    j["extension_gaps"] = extension_gaps(A.semigroup, A.a(0));
    j["conductor_in_square"] = A.conductor_in_square;
}

std::string indent(const std::string& text, const std::string& pad)
{
    std::istringstream in(text);
    std::string line, out;
    while (std::getline(in, line)) out += pad + line + "\n";
    return out;
}

std::string certificate_text(const TorsionCertificate& c)
{
    std::ostringstream os;
    os << "criterion " << c.criterion << " in " << c.ring << "\n";
    os << "element   " << c.element.to_string() << "\n";
    os << "torsion identity: " << (c.torsion_ok ? "holds" : "FAILS") << "\n";
    os << "class modulo " << c.nonvanishing.quotient.description << ": "
       << (c.nonvanishing.nonzero ? c.nonvanishing.surviving_class : std::string("zero")) << "\n";
    if (c.expected_class)
        os << "expected class: " << *c.expected_class << (c.matches_expected.value_or(false) ? " (matches)" : " (differs)")
           << "\n";
    if (c.monomial_zero) os << "monomial criterion says the target class " << (*c.monomial_zero ? "vanishes" : "survives") << "\n";
    if (c.independence) {
        os << "independence of " << c.independence->family_size << " elements:\n";
        for (auto& s : c.independence->stages)
            os << "  modulo " << s.quotient.description << ": " << s.survivors.size() << " survive, rank " << s.rank
               << (s.independent ? "" : " (dependent)") << "\n";
        os << "  " << (c.independence->success ? "independent" : "not certified") << "\n";
    }
    if (c.pullback) {
        const auto& p = *c.pullback;
        os << "pullback to R: " << (p.existence ? "exists" : "not certified") << " (" << p.reason << ")\n";
        if (p.explicit_element) {
            os << "  explicit element: " << p.explicit_element->to_string() << "\n";
            os << "  torsion identity: " << (p.explicit_torsion_ok ? "holds" : "FAILS") << "\n";
            if (p.explicit_check)
                os << "  class modulo " << p.explicit_check->quotient.description << ": "
                   << (p.explicit_check->nonzero ? p.explicit_check->surviving_class : std::string("zero")) << "\n";
        }
    }
    for (auto& n : c.notes) os << "note: " << n << "\n";
    os << "verified: " << (c.verified() ? "yes" : "no") << "\n";
    return os.str();
}

}  // namespace

std::string terms_string(const Terms& p, const std::string& var)
{
    std::string s = TruncatedSeries(p, std::max(0, degree(p))).to_string(var);
    return s.substr(0, s.rfind(" + O("));
}

Json ring_json(const Ring& ring)
{
    Json gens = Json::array();
    for (std::size_t i = 0; i < ring.nvars(); ++i) {
        Json g = Json::array();
        for (auto& [e, c] : ring.exact(i)) g.push_back({e, to_string(c)});
        gens.push_back(g);
    }
    return {{"label", ring.label()},
            {"names", ring.names()},
            {"precision", ring.precision()},
            {"generators", gens},
            {"generators_text", generator_strings(ring)}};
}

RingPtr ring_from_json(const Json& j)
{
    std::vector<Terms> gens;
    for (auto& g : j.at("generators")) {
        Terms t;
        for (auto& term : g) t.emplace_back(term.at(0).get<int>(), parse_rational(term.at(1).get<std::string>()));
        gens.push_back(std::move(t));
    }
    return std::make_shared<Ring>(j.at("label").get<std::string>(), j.at("names").get<std::vector<std::string>>(),
                                  std::move(gens), j.at("precision").get<int>());
}

Json quotient_json(const QuotientSpec& q, const std::vector<std::string>& names)
{
    std::vector<std::string> monos, polys;
    for (auto& m : q.monomials) monos.push_back(monomial_string(m, names));
    for (auto& p : q.polynomials) polys.push_back(p.to_string(names));
    return {{"description", q.description}, {"nvars", q.nvars}, {"monomials", monos}, {"polynomials", polys}};
}

QuotientSpec quotient_from_json(const Json& j, const std::vector<std::string>& names)
{
    QuotientSpec q;
    q.description = j.at("description").get<std::string>();
    q.nvars = j.at("nvars").get<std::size_t>();
    for (auto& m : j.at("monomials")) q.monomials.push_back(parse_monomial(m.get<std::string>(), names));
    for (auto& p : j.at("polynomials")) q.polynomials.push_back(parse_polynomial(p.get<std::string>(), names));
    return q;
}

Json element_json(const DifferentialElement& w)
{
    std::vector<std::string> coeffs;
    for (auto& p : w.coeffs) coeffs.push_back(p.to_string(w.ring->names()));
    return {{"label", w.label}, {"coefficients", coeffs}};
}

DifferentialElement element_from_json(const Json& j, RingPtr ring)
{
    std::vector<Polynomial> coeffs;
    for (auto& c : j.at("coefficients")) coeffs.push_back(parse_polynomial(c.get<std::string>(), ring->names()));
    DifferentialElement w(ring, std::move(coeffs));
    w.label = j.at("label").get<std::string>();
    return w;
}

Json certificate_json(const TorsionCertificate& c)
{
    Json j;
    j["criterion"] = c.criterion;
    j["ring"] = c.ring;
    if (!c.element.ring) {
        j["ring_data"] = nullptr;
        j["element"] = nullptr;
        j["notes"] = c.notes;
        j["verified"] = false;
        return j;
    }
    const auto& names = c.element.ring->names();
    j["ring_data"] = ring_json(*c.element.ring);
    j["element"] = element_json(c.element);
    j["torsion_ok"] = c.torsion_ok;
    j["nonvanishing"] = check_json(c.nonvanishing, names);
    j["independence"] = c.independence ? peel_json(*c.independence) : Json(nullptr);
    j["pullback"] = c.pullback ? pullback_json(*c.pullback) : Json(nullptr);
    j["expected_class"] = c.expected_class ? Json(*c.expected_class) : Json(nullptr);
    j["matches_expected"] = c.matches_expected ? Json(*c.matches_expected) : Json(nullptr);
    j["monomial_zero"] = c.monomial_zero ? Json(*c.monomial_zero) : Json(nullptr);
    j["notes"] = c.notes;
    j["verified"] = c.verified();
    return j;
}

TorsionCertificate certificate_from_json(const Json& j)
{
    TorsionCertificate c;
    c.criterion = j.at("criterion").get<std::string>();
    c.ring = j.at("ring").get<std::string>();
    c.notes = j.at("notes").get<std::vector<std::string>>();
    if (j.at("ring_data").is_null()) return c;
    RingPtr ring = ring_from_json(j.at("ring_data"));
    c.element = element_from_json(j.at("element"), ring);
    c.torsion_ok = j.at("torsion_ok").get<bool>();
    c.nonvanishing = check_from_json(j.at("nonvanishing"), ring->names());
    if (!j.at("independence").is_null()) c.independence = peel_from_json(j.at("independence"));
    if (!j.at("pullback").is_null()) c.pullback = pullback_from_json(j.at("pullback"));
    if (!j.at("expected_class").is_null()) c.expected_class = j.at("expected_class").get<std::string>();
    if (!j.at("matches_expected").is_null()) c.matches_expected = j.at("matches_expected").get<bool>();
    if (!j.at("monomial_zero").is_null()) c.monomial_zero = j.at("monomial_zero").get<bool>();
    return c;
}

Json analysis_json(const Analysis& A)
{
    Json j{{"schema", kSchema}, {"command", "analyze"}};
    analysis_fields(j, A);
    return j;
}

Json certify_json(const CertifyReport& r)
{
    Json j{{"schema", kSchema}, {"command", "certify"}};
    Json analysis;
    analysis_fields(analysis, r.analysis);
    j["analysis"] = analysis;
    j["flags"] = {{"all_units_constant", r.flags.all_units_constant},
                  {"conductor_in_square", r.flags.conductor_in_square}};
    Json criteria = Json::array();
    for (auto& c : r.criteria) {
        Json ev = Json::array();
        for (auto& e : c.evidence) ev.push_back(evidence_json(e));
        criteria.push_back(
            {{"id", c.id}, {"applicable", c.applicable}, {"fired", c.fired}, {"evidence", ev}, {"notes", c.notes}});
    }
    j["criteria"] = criteria;
    j["outcome"] = r.outcome;
    j["certified"] = r.certified();
    const CriterionReport* f = r.fired();
    j["certificate"] = f && f->certificate ? certificate_json(*f->certificate) : Json(nullptr);
    return j;
}

Json extension_json(const ExtensionRing& e, const CountBound& cb, bool sound)
{
    std::vector<std::string> rel;
    for (auto& r : e.relations) rel.push_back(r.to_string(e.names));
    return {{"schema", kSchema},
            {"command", "extension"},
            {"n", e.n},
            {"s", e.s},
            {"gaps", e.b},
            {"conductor_R", e.semigroup_R.conductor},
            {"conductor_S", e.conductor_S},
            {"ring", ring_json(*e.ring)},
            {"relations", rel},
            {"relations_sound", sound},
            {"count_bound",
             {{"bound", cb.bound}, {"achieved", cb.achieved}, {"holds", cb.holds()}, {"report", peel_json(cb.report)}}}};
}

Json membership_json(const Ring& ring, const Monomial& m, const MembershipResult* r, const std::string& undecided)
{
    Json j{{"schema", kSchema},
           {"command", "mono"},
           {"monomial", monomial_string(m, ring.names())},
           {"valuation", ring.valuation(m)}};
    if (!r) {
        j["member"] = nullptr;
        j["undecidable"] = undecided;
        j["witness"] = nullptr;
        j["tested_divisors"] = Json::array();
        return j;
    }
    std::vector<std::string> tested;
    for (auto& d : r->tested_divisors) tested.push_back(monomial_string(d, ring.names()));
    j["member"] = r->member;
    j["divisor"] = r->divisor ? Json(monomial_string(*r->divisor, ring.names())) : Json(nullptr);
    j["witness"] = r->witness ? Json(r->witness->to_string(ring.names())) : Json(nullptr);
    j["witness_exact"] = r->witness_exact;
    j["tested_divisors"] = tested;
    return j;
}

Json search_json(const SearchSummary& s)
{
    const auto& c = s.config;
    Json samples = Json::array();
    for (auto& x : s.samples) {
        Json row{{"index", x.index},
                 {"input", x.input},
                 {"valuations", x.valuations},
                 {"conductor", x.conductor},
                 {"outcome", x.outcome}};
        if (!x.error.empty()) row["error"] = x.error;
        samples.push_back(row);
    }
    Json counts = Json::object();
    for (auto& [k, v] : s.counts) counts[k] = v;
    return {{"schema", kSchema},
            {"command", "search"},
            {"config",
             {{"seed", c.seed},
              {"samples", c.samples},
              {"n_min", c.n_min},
              {"n_max", c.n_max},
              {"valuation_min", c.valuation_min},
              {"valuation_max", c.valuation_max},
              {"max_perturbations", c.max_perturbations},
              {"perturbation_degree", c.perturbation_degree},
              {"coefficient_range", c.coefficient_range}}},
            {"counts", counts},
            {"total", s.samples.size()},
            {"undecided_rate", s.undecided_rate()},
            {"samples", samples}};
}

std::string analysis_text(const Analysis& A)
{
    std::ostringstream os;
    std::vector<std::string> units;
    for (int i = 0; i < A.n(); ++i) units.push_back(order_text(unit_order(A.branch, i)));
    os << "branch        " << A.branch.to_string() << "\n";
    os << "valuations    " << join(A.branch.valuations) << "\n";
    os << "unit orders  ";
    for (auto& u : units) os << " " << u;
    os << "\n";
    os << "precision     B = " << A.branch.precision << "\n";
    os << "value set     " << join(A.semigroup.attained) << "\n";
    os << "gaps          " << join(A.semigroup.gaps) << "\n";
    os << "conductor     c_R = " << A.conductor << "\n";
    os << "ext. gaps     " << join(extension_gaps(A.semigroup, A.a(0))) << "\n";
    os << "c_R in m^2    " << (A.conductor_in_square ? "yes" : "no") << "\n";
    return os.str();
}

std::string certify_text(const CertifyReport& r)
{
    std::ostringstream os;
    os << analysis_text(r.analysis);
    os << "flags         " << (r.flags.all_units_constant ? "all units constant (looks quasi-homogeneous)" : "non-constant units")
       << "\n";
    os << "criteria:\n";
    for (auto& c : r.criteria) {
        os << "  " << std::left << std::setw(16) << c.id
           << (c.fired ? "fired" : c.applicable ? "applies, not verified" : "does not apply") << "\n";
        for (auto& e : c.evidence) os << "      " << e.inequality << ": " << e.instance << "\n";
        for (auto& n : c.notes) os << "      note: " << n << "\n";
    }
    os << "outcome: " << r.outcome << "\n";
    if (const CriterionReport* f = r.fired(); f && f->certificate) os << indent(certificate_text(*f->certificate), "  ");
    return os.str();
}

std::string extension_text(const ExtensionRing& e, const CountBound& cb, bool sound)
{
    std::ostringstream os;
    os << "S = R[c_R / x1] with n = " << e.n << ", s = " << e.s << "\n";
    for (int j = 0; j < e.s; ++j) os << "  T" << j + 1 << " = t^" << e.b[j] << "\n";
    os << "conductor of S: " << e.conductor_S << "\n";
    os << "relations (" << e.relations.size() << (sound ? ", checked" : ", CHECK FAILED") << "):\n";
    for (auto& r : e.relations) os << "  " << r.to_string(e.names) << "\n";
    os << "count bound ns + C(s,2) = " << cb.bound << ", certified rank " << cb.achieved
       << (cb.holds() ? " (holds)" : " (SHORT)") << "\n";
    return os.str();
}

std::string membership_text(const Ring& ring, const Monomial& m, const MembershipResult* r,
                            const std::string& undecided)
{
    std::ostringstream os;
    os << "monomial " << monomial_string(m, ring.names()) << " (valuation " << ring.valuation(m) << ")\n";
    if (!r) {
        os << "member: undecided (" << undecided << ")\n";
        return os.str();
    }
    os << "member: " << (r->member ? "yes" : "no") << "\n";
    if (r->divisor) os << "divisor in the support: " << monomial_string(*r->divisor, ring.names()) << "\n";
    if (r->witness) os << "witness: " << r->witness->to_string(ring.names()) << (r->witness_exact ? " (exact)" : "") << "\n";
    os << "tested divisors:";
    for (auto& d : r->tested_divisors) os << " " << monomial_string(d, ring.names());
    os << "\n";
    return os.str();
}

std::string search_text(const SearchSummary& s)
{
    std::ostringstream os;
    os << "seed " << s.config.seed << ", " << s.samples.size() << " samples\n";
    for (auto& x : s.samples)
        os << std::setw(5) << x.index << "  c_R=" << std::setw(4) << x.conductor << "  " << std::left << std::setw(16)
           << x.outcome << std::right << "  " << x.input << (x.error.empty() ? "" : "  [" + x.error + "]") << "\n";
    os << "counts:\n";
    for (auto& [k, v] : s.counts) os << "  " << std::left << std::setw(16) << k << std::right << v << "\n";
    os << "undecided rate " << std::fixed << std::setprecision(3) << s.undecided_rate() << "\n";
    return os.str();
}

VerifyResult verify_document(const Json& doc)
{
    VerifyResult v;
    if (doc.contains("schema") && doc.at("schema") != kSchema) {
        v.checks.push_back("unknown schema " + doc.at("schema").dump());
        return v;
    }
    const Json* cj = &doc;
    if (doc.contains("command") && doc.at("command") == "certify") {
        if (doc.at("certificate").is_null()) {
            v.checks.push_back("report carries no certificate (outcome " + doc.at("outcome").get<std::string>() + ")");
            return v;
        }
        cj = &doc.at("certificate");
    }
    TorsionCertificate c = certificate_from_json(*cj);
    if (!c.element.ring) {
        v.checks.push_back("certificate has no element");
        return v;
    }
    bool torsion = torsion_test(c.element);
    v.checks.push_back(std::string("torsion identity: ") + (torsion ? "holds" : "FAILS"));
    auto cc = check_class(c.element, c.nonvanishing.quotient);
    v.checks.push_back("class modulo " + c.nonvanishing.quotient.description + ": " +
                       (cc.nonzero ? "nonzero" : "ZERO"));
    bool same_class = cc.surviving_class == c.nonvanishing.surviving_class;
    v.checks.push_back(std::string("class matches the stored one: ") + (same_class ? "yes" : "NO"));
    bool ok = torsion && cc.nonzero && same_class;
    if (c.independence) {
        v.checks.push_back(std::string("stored independence report: ") +
                           (c.independence->success ? "independent" : "not certified"));
        ok = ok && c.independence->success;
    }
    if (c.pullback) {
        v.checks.push_back(std::string("stored pullback existence: ") + (c.pullback->existence ? "yes" : "no"));
        ok = ok && c.pullback->existence;
        if (c.pullback->explicit_element) {
            bool t = torsion_test(*c.pullback->explicit_element);
            v.checks.push_back(std::string("explicit pullback torsion identity: ") + (t ? "holds" : "FAILS"));
            ok = ok && t;
        }
    }
    v.ok = ok;
    return v;
}

}  // namespace branchtor
