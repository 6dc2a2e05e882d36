#include "branchtor/branch.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

namespace branchtor {

ParseError::ParseError(const std::string& what, int line_, int column_)
    : std::runtime_error("line " + std::to_string(line_) + ", column " + std::to_string(column_) + ": " + what),
      line(line_), column(column_)
{
}

bool NumericalSemigroup::contains(int v) const
{
    if (v < 0) return false;
    if (v < static_cast<int>(member.size())) return member[v];
    return v > frobenius;
}

NumericalSemigroup numerical_semigroup(const std::vector<int>& a)
{
    if (a.empty()) throw BranchError("numerical semigroup needs generators");
    int g = 0;
    for (int x : a) {
        if (x <= 0) throw BranchError("semigroup generators must be positive");
        g = std::gcd(g, x);
    }
    if (g != 1) throw BranchError("gcd of generators is " + std::to_string(g) + ", not 1");
    NumericalSemigroup ns;
    ns.generators = a;
    int amin = *std::min_element(a.begin(), a.end());
    int amax = *std::max_element(a.begin(), a.end());
    int bound = amin * amax + amin;  // Frobenius < amin*amax
    ns.member.assign(bound + 1, 0);
    ns.member[0] = 1;
    for (int v = 1; v <= bound; ++v)
        for (int x : a)
            if (x <= v && ns.member[v - x]) {
                ns.member[v] = 1;
                break;
            }
    ns.frobenius = -1;
    for (int v = bound; v >= 0; --v)
        if (!ns.member[v]) {
            ns.frobenius = v;
            break;
        }
    return ns;
}

TruncatedSeries Branch::generator_at(int i, int prec) const
{
    if (prec > precision && !polynomial) throw PrecisionError("generator data is only known to the branch precision");
    return TruncatedSeries(exact.at(i), prec);
}

TruncatedSeries Branch::unit_at(int i, int prec) const
{
    return generator_at(i, prec + valuations.at(i)).unshifted(valuations.at(i)).with_precision(prec);
}

std::string Branch::to_string() const
{
    std::ostringstream os;
    for (int i = 0; i < n(); ++i) {
        if (i) os << "; ";
        TruncatedSeries p(exact[i], std::max(0, degree(exact[i])));
        std::string s = p.to_string();
        os << s.substr(0, s.rfind(" + O("));
    }
    return os.str();
}

namespace {

struct TextParser {
    const std::string& s;
    std::size_t pos = 0;
    int line = 1;
    std::size_t line_start = 0;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw ParseError(what, line, static_cast<int>(pos - line_start) + 1);
    }
    void skip()
    {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) {
            if (s[pos] == '\n') {
                ++line;
                line_start = pos + 1;
            }
            ++pos;
        }
    }
    bool at(char c)
    {
        skip();
        return pos < s.size() && s[pos] == c;
    }
    bool digit() const { return pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos])); }
    std::string digits()
    {
        std::size_t start = pos;
        while (digit()) ++pos;
        if (start == pos) fail("expected a number");
        return s.substr(start, pos - start);
    }
    Rational coefficient()
    {
        std::string num = digits();
        if (pos < s.size() && s[pos] == '/') {
            ++pos;
            std::string den = digits();
            if (den.find_first_not_of('0') == std::string::npos) fail("zero denominator");
            return parse_rational(num + "/" + den);
        }
        return parse_rational(num);
    }
    // term := coef | [coef ['*']] t ['^' int]
    std::pair<int, Rational> term()
    {
        skip();
        Rational c = 1;
        bool have_coef = false;
        if (digit()) {
            c = coefficient();
            have_coef = true;
            if (at('*')) {
                ++pos;
                skip();
                if (!(pos < s.size() && s[pos] == 't')) fail("expected 't' after '*'");
            }
        }
        skip();
        if (pos < s.size() && s[pos] == 't') {
            ++pos;
            int e = 1;
            if (at('^')) {
                ++pos;
                skip();
                if (!digit()) fail("expected exponent after '^'");
                e = std::stoi(digits());
            }
            return {e, c};
        }
        if (!have_coef) fail("expected a term such as 3/2*t^5");
        return {0, c};
    }
    Terms generator()
    {
        Terms terms;
        int sign = 1;
        skip();
        if (at('+') || at('-')) {
            sign = s[pos] == '-' ? -1 : 1;
            ++pos;
        }
        while (true) {
            auto [e, c] = term();
            terms.emplace_back(e, c * sign);
            skip();
            if (at('+') || at('-')) {
                sign = s[pos] == '-' ? -1 : 1;
                ++pos;
                continue;
            }
            break;
        }
        return TruncatedSeries(terms, std::max_element(terms.begin(), terms.end(), [](auto& a, auto& b) {
                                          return a.first < b.first;
                                      })->first)
            .terms();
    }
};

Terms scaled_monic(Terms p)
{
    Rational inv = 1 / p.front().second;
    for (auto& t : p) t.second *= inv;
    return p;
}

Terms subtract(const Terms& a, const Terms& b)
{
    int top = std::max(degree(a), degree(b));
    return (TruncatedSeries(a, top) - TruncatedSeries(b, top)).terms();
}

Terms power(const Terms& p, int e)
{
    Terms r{{0, Rational(1)}};
    for (int k = 0; k < e; ++k) r = exact_product(r, p);
    return r;
}

// Lexicographically largest exponent vector over a[0..i) summing to target.
std::vector<int> representation(const std::vector<int>& a, int count, int target)
{
    // reach[j][v]: v is a combination of a[j..count)
    std::vector<std::vector<char>> reach(count + 1, std::vector<char>(target + 1, 0));
    reach[count][0] = 1;
    for (int j = count - 1; j >= 0; --j)
        for (int v = 0; v <= target; ++v)
            reach[j][v] = reach[j + 1][v] || (v >= a[j] && reach[j][v - a[j]]);
    if (!reach[0][target]) return {};
    std::vector<int> e(count, 0);
    int v = target;
    for (int j = 0; j < count; ++j) {
        int k = v / a[j];
        while (k >= 0 && !reach[j + 1][v - k * a[j]]) --k;
        e[j] = k;
        v -= k * a[j];
    }
    return e;
}

}  // namespace

std::vector<Terms> parse_generators_text(const std::string& text)
{
    TextParser p{text};
    std::vector<Terms> gens;
    p.skip();
    if (p.pos >= text.size()) p.fail("empty input");
    while (true) {
        p.skip();
        if (p.pos >= text.size()) break;
        gens.push_back(p.generator());
        p.skip();
        if (p.pos >= text.size()) break;
        if (text[p.pos] != ';') p.fail("expected ';' between generators");
        ++p.pos;
    }
    return gens;
}

std::vector<Terms> parse_generators_json(const std::string& text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 1, static_cast<int>(e.byte));
    }
    if (!j.contains("generators") || !j["generators"].is_array())
        throw ParseError("JSON input needs a \"generators\" array", 1, 1);
    std::vector<Terms> gens;
    for (auto& g : j["generators"]) {
        Terms terms;
        for (auto& t : g) {
            if (!t.is_array() || t.size() != 2) throw ParseError("each term must be [exponent, \"p/q\"]", 1, 1);
            int e = t[0].get<int>();
            Rational c = t[1].is_string() ? parse_rational(t[1].get<std::string>()) : Rational(t[1].get<long>());
            terms.emplace_back(e, c);
        }
        int top = 0;
        for (auto& tt : terms) top = std::max(top, tt.first);
        gens.push_back(TruncatedSeries(terms, top).terms());
    }
    return gens;
}

std::vector<Terms> parse_generators(const std::string& text)
{
    auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') return parse_generators_json(text);
    return parse_generators_text(text);
}

Branch parse_branch(const std::string& text, int precision_margin)
{
    return make_branch(parse_generators(text), precision_margin);
}

std::vector<Terms> normalize_generators(std::vector<Terms> gens)
{
    for (auto& g : gens) {
        if (g.empty()) throw BranchError("zero generator");
        if (g.front().first <= 0) throw BranchError("generator of order 0: every generator must lie in (t)");
        g = scaled_monic(std::move(g));
    }
    int max_degree = 0;
    for (auto& g : gens) max_degree = std::max(max_degree, degree(g));
    const int cap = 4 * max_degree + 64;

    for (int iter = 0; iter < 100000; ++iter) {
        std::stable_sort(gens.begin(), gens.end(), [](const Terms& a, const Terms& b) {
            return a.front().first < b.front().first;
        });
        std::vector<int> a;
        for (auto& g : gens) a.push_back(g.front().first);
        int target = -1;
        std::vector<int> e;
        for (int i = 1; i < static_cast<int>(gens.size()); ++i) {
            e = representation(a, i, a[i]);
            if (!e.empty()) {
                target = i;
                break;
            }
        }
        if (target < 0) return gens;

        Terms product{{0, Rational(1)}};
        for (int j = 0; j < target; ++j)
            if (e[j]) product = exact_product(product, power(gens[j], e[j]));
        Terms reduced = subtract(gens[target], product);
        if (reduced.empty())
            throw BranchError("generator " + std::to_string(target + 1) +
                              " is redundant (it reduces to zero); re-enter a smaller presentation");
        int v = reduced.front().first;
        std::vector<int> earlier(a.begin(), a.begin() + target);
        int g = 0;
        for (int x : earlier) g = std::gcd(g, x);
        if (g == 1 && v > numerical_semigroup(earlier).frobenius)
            throw BranchError("generator " + std::to_string(target + 1) +
                              " is redundant (it lies in the conductor of the earlier generators)");
        if (v > cap)
            throw BranchError("generator " + std::to_string(target + 1) +
                              " reduces past the working precision and is treated as redundant");
        gens[target] = scaled_monic(std::move(reduced));
    }
    throw BranchError("normalization did not terminate");
}

Branch make_branch(std::vector<Terms> raw, int precision_margin)
{
    if (raw.size() == 1) throw BranchError("a single generator gives a regular ring; Omega is free");
    if (raw.size() < 2) throw BranchError("need at least two generators");
    auto gens = normalize_generators(std::move(raw));
    if (gens.size() < 2) throw BranchError("fewer than 2 generators after normalization");
    Branch b;
    b.exact = std::move(gens);
    int g = 0;
    for (auto& x : b.exact) {
        b.valuations.push_back(x.front().first);
        g = std::gcd(g, x.front().first);
    }
    if (g != 1) throw BranchError("gcd of valuations is " + std::to_string(g) + ": not a branch with integral closure k[[t]]");
    b.frobenius = numerical_semigroup(b.valuations).frobenius;
    b.margin = precision_margin;
    b.precision = b.frobenius + 1 + 2 * b.valuations.back() + precision_margin;
    for (int i = 0; i < b.n(); ++i) {
        b.generators.push_back(TruncatedSeries(b.exact[i], b.precision));
        b.units.push_back(b.unit_at(i, b.precision));
    }
    return b;
}

Branch normalize(const Branch& b)
{
    if (!b.polynomial) return b;
    return make_branch(b.exact, b.margin);
}

Branch at_precision(const Branch& b, int precision)
{
    if (precision > b.precision && !b.polynomial) throw PrecisionError("cannot raise precision of series data");
    Branch out = b;
    out.precision = precision;
    for (int i = 0; i < b.n(); ++i) {
        if (b.polynomial) {
            out.generators[i] = b.generator_at(i, precision);
            out.units[i] = b.unit_at(i, precision);
        } else {
            out.generators[i] = b.generators[i].with_precision(precision);
            out.units[i] = b.units[i].with_precision(std::min(precision, b.units[i].precision()));
        }
    }
    return out;
}

int unit_order(const Branch& b, int j)
{
    if (j < 0 || j >= b.n()) throw std::out_of_range("unit index out of range");
    for (auto& [e, c] : b.units[j].terms())
        if (e > 0) return e;
    return kInfiniteOrder;
}

Monomialization monomialize_first(const Branch& b, int d)
{
    if (d < 0 || d >= b.n()) throw std::out_of_range("generator index out of range");
    Monomialization m;
    m.beta = nth_root_unit(b.units[d], b.valuations[d]);
    m.beta_inv = invert_unit(m.beta);
    m.s_of_t = m.beta.shifted(1);
    m.t_of_s = reversion(m.s_of_t);
    m.branch = b;
    m.branch.polynomial = false;
    for (int i = 0; i < b.n(); ++i) {
        TruncatedSeries x = substitute(b.generators[i], m.t_of_s);
        m.branch.generators[i] = x;
        m.branch.exact[i] = x.terms();
        // the unit is only determined modulo t^{B - a_i + 1}
        m.branch.units[i] = x.unshifted(b.valuations[i]);
    }
    return m;
}

}  // namespace branchtor
