#include "branchtor/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace branchtor {

int total_degree(const Monomial& m) { return std::accumulate(m.begin(), m.end(), 0); }

bool divides(const Monomial& a, const Monomial& b)
{
    if (a.size() != b.size()) throw std::invalid_argument("monomial dimension mismatch");
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] > b[i]) return false;
    return true;
}

Monomial unit_vector(std::size_t nvars, std::size_t i)
{
    Monomial m(nvars, 0);
    m.at(i) = 1;
    return m;
}

Monomial operator+(const Monomial& a, const Monomial& b)
{
    Monomial m(a);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += b[i];
    return m;
}

Monomial operator-(const Monomial& a, const Monomial& b)
{
    Monomial m(a);
    for (std::size_t i = 0; i < m.size(); ++i) {
        m[i] -= b[i];
        if (m[i] < 0) throw std::invalid_argument("monomial quotient not defined");
    }
    return m;
}

int weighted_degree(const Monomial& m, const std::vector<int>& weights)
{
    int v = 0;
    for (std::size_t i = 0; i < m.size(); ++i) v += m[i] * weights[i];
    return v;
}

bool GrlexLess::operator()(const Monomial& a, const Monomial& b) const
{
    int da = total_degree(a), db = total_degree(b);
    if (da != db) return da < db;
    // larger exponent in an earlier variable means larger monomial
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

std::size_t MonomialHash::operator()(const Monomial& m) const
{
    std::size_t h = m.size();
    for (int e : m) h ^= static_cast<std::size_t>(e) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

std::string monomial_string(const Monomial& m, const std::vector<std::string>& names)
{
    std::string out;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0) continue;
        if (!out.empty()) out += "*";
        out += names.at(i);
        if (m[i] > 1) out += "^" + std::to_string(m[i]);
    }
    return out.empty() ? "1" : out;
}

std::vector<Monomial> monomials_up_to(const std::vector<int>& weights, int bound)
{
    std::vector<Monomial> out;
    if (bound < 0) return out;
    Monomial cur(weights.size(), 0);
    auto rec = [&](auto&& self, std::size_t i, int budget) -> void {
        if (i == weights.size()) {
            out.push_back(cur);
            return;
        }
        for (int e = 0; e * weights[i] <= budget; ++e) {
            cur[i] = e;
            self(self, i + 1, budget - e * weights[i]);
        }
        cur[i] = 0;
    };
    rec(rec, 0, bound);
    return out;
}

std::vector<Monomial> monomials_of_degree_at_most(std::size_t nvars, int degree)
{
    return monomials_up_to(std::vector<int>(nvars, 1), degree);
}

Polynomial Polynomial::constant(std::size_t nvars, const Rational& c)
{
    Polynomial p(nvars);
    p.add_term(Monomial(nvars, 0), c);
    return p;
}

Polynomial Polynomial::variable(std::size_t nvars, std::size_t i)
{
    Polynomial p(nvars);
    p.add_term(unit_vector(nvars, i), 1);
    return p;
}

Polynomial Polynomial::term(const Monomial& m, const Rational& c)
{
    Polynomial p(m.size());
    p.add_term(m, c);
    return p;
}

Rational Polynomial::coeff(const Monomial& m) const
{
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

Rational Polynomial::constant_term() const { return coeff(Monomial(nvars_, 0)); }

void Polynomial::add_term(const Monomial& m, const Rational& c)
{
    if (m.size() != nvars_) throw std::invalid_argument("polynomial term has wrong variable count");
    if (branchtor::is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (branchtor::is_zero(it->second)) terms_.erase(it);
    }
}

Polynomial& Polynomial::operator+=(const Polynomial& q)
{
    if (nvars_ == 0 && terms_.empty()) nvars_ = q.nvars_;
    for (auto& [m, c] : q.terms_) add_term(m, c);
    return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& q)
{
    if (nvars_ == 0 && terms_.empty()) nvars_ = q.nvars_;
    for (auto& [m, c] : q.terms_) add_term(m, -c);
    return *this;
}

Polynomial& Polynomial::operator*=(const Rational& c)
{
    if (branchtor::is_zero(c)) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.second *= c;
    return *this;
}

Polynomial operator*(const Polynomial& p, const Polynomial& q)
{
    Polynomial r(std::max(p.nvars(), q.nvars()));
    for (auto& [a, ca] : p.terms())
        for (auto& [b, cb] : q.terms()) r.add_term(a + b, ca * cb);
    return r;
}

Polynomial Polynomial::partial(std::size_t i) const
{
    Polynomial r(nvars_);
    for (auto& [m, c] : terms_) {
        if (m[i] == 0) continue;
        Monomial d = m;
        d[i] -= 1;
        r.add_term(d, c * m[i]);
    }
    return r;
}

Polynomial Polynomial::times_monomial(const Monomial& m) const
{
    Polynomial r(nvars_);
    for (auto& [a, c] : terms_) r.terms_.emplace(a + m, c);
    return r;
}

Polynomial Polynomial::filtered(const std::function<bool(const Monomial&)>& keep) const
{
    Polynomial r(nvars_);
    for (auto& [m, c] : terms_)
        if (keep(m)) r.terms_.emplace(m, c);
    return r;
}

Polynomial Polynomial::widened(std::size_t nvars) const
{
    std::vector<std::size_t> map(nvars_);
    std::iota(map.begin(), map.end(), 0);
    return embedded(nvars, map);
}

Polynomial Polynomial::embedded(std::size_t nvars, const std::vector<std::size_t>& index_map) const
{
    Polynomial r(nvars);
    for (auto& [m, c] : terms_) {
        Monomial w(nvars, 0);
        for (std::size_t k = 0; k < m.size(); ++k) w.at(index_map.at(k)) += m[k];
        r.add_term(w, c);
    }
    return r;
}

std::string Polynomial::to_string(const std::vector<std::string>& names) const
{
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    // highest terms first reads more naturally
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rational a = abs(c);
        os << (sgn(c) < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        bool is_const = total_degree(m) == 0;
        if (is_const) {
            os << a.get_str();
        } else {
            if (a != 1) os << a.get_str() << "*";
            os << monomial_string(m, names);
        }
        first = false;
    }
    return os.str();
}

namespace {

struct TermParser {
    const std::string& s;
    const std::vector<std::string>& names;
    std::size_t pos = 0;

    [[noreturn]] void fail(const std::string& what) const
    {
        throw std::invalid_argument("polynomial parse error at column " + std::to_string(pos + 1) + ": " + what);
    }
    void skip()
    {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    int integer()
    {
        skip();
        std::size_t start = pos;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
        if (start == pos) fail("expected integer");
        return std::stoi(s.substr(start, pos - start));
    }
    // factor: rational | name [^ int]
    void factor(Monomial& m, Rational& c)
    {
        skip();
        if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            std::size_t start = pos;
            while (pos < s.size() && (std::isdigit(static_cast<unsigned char>(s[pos])) || s[pos] == '/')) ++pos;
            c *= parse_rational(s.substr(start, pos - start));
            return;
        }
        std::size_t best = names.size(), best_len = 0;
        for (std::size_t i = 0; i < names.size(); ++i) {
            const auto& n = names[i];
            if (n.size() > best_len && s.compare(pos, n.size(), n) == 0) {
                std::size_t end = pos + n.size();
                if (end < s.size() && std::isalnum(static_cast<unsigned char>(s[end])) &&
                    std::isalnum(static_cast<unsigned char>(n.back())) && std::isdigit(static_cast<unsigned char>(s[end])))
                    continue;
                best = i;
                best_len = n.size();
            }
        }
        if (best == names.size()) fail("unknown variable");
        pos += best_len;
        skip();
        int e = 1;
        if (pos < s.size() && s[pos] == '^') {
            ++pos;
            e = integer();
        }
        m[best] += e;
    }
};

}  // namespace

Polynomial parse_polynomial(const std::string& text, const std::vector<std::string>& names)
{
    Polynomial p(names.size());
    TermParser tp{text, names};
    tp.skip();
    if (tp.pos >= text.size()) tp.fail("empty polynomial");
    bool expect_term = true;
    int sign = 1;
    while (true) {
        tp.skip();
        if (tp.pos < text.size() && (text[tp.pos] == '+' || text[tp.pos] == '-')) {
            sign = text[tp.pos] == '-' ? -sign : sign;
            ++tp.pos;
            expect_term = true;
            continue;
        }
        if (!expect_term) tp.fail("expected '+' or '-'");
        Monomial m(names.size(), 0);
        Rational c = sign;
        tp.factor(m, c);
        while (true) {
            tp.skip();
            if (tp.pos < text.size() && text[tp.pos] == '*') {
                ++tp.pos;
                tp.factor(m, c);
            } else {
                break;
            }
        }
        p.add_term(m, c);
        sign = 1;
        expect_term = false;
        tp.skip();
        if (tp.pos >= text.size()) break;
    }
    return p;
}

Monomial parse_monomial(const std::string& text, const std::vector<std::string>& names)
{
    Polynomial p = parse_polynomial(text, names);
    if (p.size() != 1 || p.terms().begin()->second != 1)
        throw std::invalid_argument("'" + text + "' is not a monic monomial");
    return p.terms().begin()->first;
}

std::vector<std::string> default_names(std::size_t n, std::size_t s)
{
    std::vector<std::string> names;
    for (std::size_t i = 1; i <= n; ++i) names.push_back("x" + std::to_string(i));
    for (std::size_t j = 1; j <= s; ++j) names.push_back("T" + std::to_string(j));
    return names;
}

}  // namespace branchtor
