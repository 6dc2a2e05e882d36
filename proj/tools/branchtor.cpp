#include "branchtor/report.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

using namespace branchtor;

namespace {

enum Exit { kCertified = 0, kError = 1, kUndecided = 2 };

struct Options {
    std::string file;
    std::string inline_text;
    std::string format = "text";
    int margin = 0;
    std::string monomial;
    SearchConfig search;
};

std::string read_input(const Options& o)
{
    if (!o.inline_text.empty()) return o.inline_text;
    if (o.file.empty()) throw std::invalid_argument("no input: give a file path or -e \"...\"");
    std::ifstream in(o.file);
    if (!in) throw std::invalid_argument("cannot open " + o.file);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void emit(const Options& o, const Json& j, const std::string& text)
{
    if (o.format == "json")
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

int run_analyze(const Options& o)
{
    Analysis A = analyze(parse_branch(read_input(o), o.margin), Exec::parallel);
    emit(o, analysis_json(A), analysis_text(A));
    return kCertified;
}

int run_certify(const Options& o)
{
    CertifyReport r = certify(parse_branch(read_input(o), o.margin), Exec::parallel);
    emit(o, certify_json(r), certify_text(r));
    return r.certified() ? kCertified : kUndecided;
}

int run_extension(const Options& o)
{
    Analysis A = analyze(parse_branch(read_input(o), o.margin), Exec::parallel);
    if (!A.extension)
        throw std::invalid_argument("a_n >= c_R, so the conductor is not inside m^2 and S is not built");
    const ExtensionRing& e = *A.extension;
    CountBound cb = count_bound(e, Exec::parallel);
    bool sound = relations_sound(e);
    emit(o, extension_json(e, cb, sound), extension_text(e, cb, sound));
    return sound ? kCertified : kError;
}

int run_mono(const Options& o)
{
    if (o.monomial.empty()) throw std::invalid_argument("mono needs --monomial, for example --monomial \"x1^4\"");
    Analysis A = analyze(parse_branch(read_input(o), o.margin), Exec::parallel);
    Monomial m = parse_monomial(o.monomial, A.R->names());
    try {
        MembershipResult r = mono_support_membership(A.R, A.conductor, m, Exec::parallel);
        emit(o, membership_json(*A.R, m, &r, ""), membership_text(*A.R, m, &r, ""));
        return kCertified;
    } catch (const UndecidableError& err) {
        emit(o, membership_json(*A.R, m, nullptr, err.what()), membership_text(*A.R, m, nullptr, err.what()));
        return kUndecided;
    }
}

int run_search(const Options& o)
{
    SearchSummary s = run_search(o.search, Exec::parallel);
    emit(o, search_json(s), search_text(s));
    return kCertified;
}

int run_verify(const Options& o)
{
    Json doc = Json::parse(read_input(o));
    VerifyResult v = verify_document(doc);
    Json j{{"schema", kSchema}, {"command", "verify"}, {"ok", v.ok}, {"checks", v.checks}};
    std::string text;
    for (auto& c : v.checks) text += c + "\n";
    text += std::string("certificate ") + (v.ok ? "verified" : "NOT verified") + "\n";
    emit(o, j, text);
    return v.ok ? kCertified : kUndecided;
}

}  // namespace

int main(int argc, char** argv)
{
    Options o;
    CLI::App app{"Torsion certificates for curve branches given by power series parametrizations"};
    app.require_subcommand(1);

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("file", o.file, "input file (text or JSON generators)");
        sub->add_option("-e,--expr", o.inline_text, "inline parametrization, e.g. \"t^8+t^9; t^14\"");
        sub->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
        sub->add_option("--precision-margin", o.margin, "extra precision beyond the default bound")
            ->check(CLI::NonNegativeNumber);
    };

    auto* analyze_cmd = app.add_subcommand("analyze", "valuations, unit orders, value semigroup and conductor");
    auto* certify_cmd = app.add_subcommand("certify", "run the criteria and emit a torsion certificate");
    auto* extension_cmd = app.add_subcommand("extension", "build S = R[c/x1], its relations and the count bound");
    auto* mono_cmd = app.add_subcommand("mono", "decide whether a monomial lies in Mono(I)");
    auto* search_cmd = app.add_subcommand("search", "certify random branches and tabulate the outcomes");
    auto* verify_cmd = app.add_subcommand("verify", "re-verify a JSON certificate or certify report");
    for (auto* sub : {analyze_cmd, certify_cmd, extension_cmd, mono_cmd, verify_cmd}) add_input(sub);
    mono_cmd->add_option("--monomial", o.monomial, "monomial in x1..xn");

    search_cmd->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json"}));
    search_cmd->add_option("--seed", o.search.seed, "random seed");
    search_cmd->add_option("--samples", o.search.samples, "number of branches")->check(CLI::PositiveNumber);
    search_cmd->add_option("--n-min", o.search.n_min, "fewest generators")->check(CLI::Range(2, 8));
    search_cmd->add_option("--n-max", o.search.n_max, "most generators")->check(CLI::Range(2, 8));
    search_cmd->add_option("--valuation-min", o.search.valuation_min, "smallest valuation")->check(CLI::Range(2, 200));
    search_cmd->add_option("--valuation-max", o.search.valuation_max, "largest valuation")->check(CLI::Range(2, 200));
    search_cmd->add_option("--perturbations", o.search.max_perturbations, "extra terms per unit")
        ->check(CLI::Range(0, 8));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        // CLI11 has its own exit codes; keep to 0 for help and 1 otherwise
        return app.exit(err) == 0 ? kCertified : kError;
    }

    try {
        if (*analyze_cmd) return run_analyze(o);
        if (*certify_cmd) return run_certify(o);
        if (*extension_cmd) return run_extension(o);
        if (*mono_cmd) return run_mono(o);
        if (*search_cmd) {
            if (o.search.n_min > o.search.n_max || o.search.valuation_min > o.search.valuation_max)
                throw std::invalid_argument("empty search range");
            return run_search(o);
        }
        if (*verify_cmd) return run_verify(o);
    } catch (const ParseError& err) {
        std::cerr << "parse error: " << err.what() << "\n";
        return kError;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kError;
    }
    return kError;
}
