#include "branchtor/series.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace branchtor {

namespace {

void require_same(const TruncatedSeries& f, const TruncatedSeries& g)
{
    if (f.precision() != g.precision())
        throw PrecisionError("series precision mismatch: " + std::to_string(f.precision()) + " vs " +
                             std::to_string(g.precision()));
}

bool is_integer(const Rational& r) { return r.get_den() == 1; }

}  // namespace

TruncatedSeries::TruncatedSeries(int precision) : prec_(precision)
{
    if (precision < 0) throw PrecisionError("negative precision");
}

TruncatedSeries::TruncatedSeries(Terms terms, int precision) : prec_(precision)
{
    if (precision < 0) throw PrecisionError("negative precision");
    std::sort(terms.begin(), terms.end(), [](auto& a, auto& b) { return a.first < b.first; });
    for (auto& [e, c] : terms) {
        if (e < 0) throw std::invalid_argument("negative exponent in series");
        if (e > prec_ || branchtor::is_zero(c)) continue;
        if (!terms_.empty() && terms_.back().first == e) {
            terms_.back().second += c;
            if (branchtor::is_zero(terms_.back().second)) terms_.pop_back();
        } else {
            terms_.emplace_back(e, std::move(c));
        }
    }
}

TruncatedSeries TruncatedSeries::constant(const Rational& c, int precision)
{
    return TruncatedSeries({{0, c}}, precision);
}

TruncatedSeries TruncatedSeries::monomial(const Rational& c, int exponent, int precision)
{
    return TruncatedSeries({{exponent, c}}, precision);
}

TruncatedSeries TruncatedSeries::from_dense(const std::vector<Rational>& coeffs, int precision)
{
    TruncatedSeries f(precision);
    int top = std::min<int>(precision + 1, coeffs.size());
    for (int k = 0; k < top; ++k)
        if (!branchtor::is_zero(coeffs[k])) f.terms_.emplace_back(k, coeffs[k]);
    return f;
}

Rational TruncatedSeries::coeff(int exponent) const
{
    auto it = std::lower_bound(terms_.begin(), terms_.end(), exponent,
                               [](const auto& t, int e) { return t.first < e; });
    if (it != terms_.end() && it->first == exponent) return it->second;
    return 0;
}

Rational TruncatedSeries::leading_coeff() const { return terms_.empty() ? Rational(0) : terms_.front().second; }

std::vector<Rational> TruncatedSeries::dense() const
{
    std::vector<Rational> d(prec_ + 1);
    for (auto& [e, c] : terms_) d[e] = c;
    return d;
}

TruncatedSeries TruncatedSeries::with_precision(int precision) const
{
    TruncatedSeries g(precision);
    for (auto& t : terms_)
        if (t.first <= precision) g.terms_.push_back(t);
    return g;
}

TruncatedSeries TruncatedSeries::shifted(int k) const
{
    TruncatedSeries g(prec_);
    for (auto& [e, c] : terms_)
        if (e + k <= prec_) g.terms_.emplace_back(e + k, c);
    return g;
}

TruncatedSeries TruncatedSeries::unshifted(int k) const
{
    if (k > prec_) throw PrecisionError("cannot divide by t^k beyond precision");
    if (order() < k) throw std::domain_error("series not divisible by t^" + std::to_string(k));
    TruncatedSeries g(prec_ - k);
    for (auto& [e, c] : terms_) g.terms_.emplace_back(e - k, c);
    return g;
}

TruncatedSeries TruncatedSeries::operator-() const
{
    TruncatedSeries g = *this;
    for (auto& t : g.terms_) t.second = -t.second;
    return g;
}

TruncatedSeries& TruncatedSeries::operator+=(const TruncatedSeries& g)
{
    require_same(*this, g);
    Terms out;
    out.reserve(terms_.size() + g.terms_.size());
    auto a = terms_.begin();
    auto b = g.terms_.begin();
    while (a != terms_.end() || b != g.terms_.end()) {
        if (b == g.terms_.end() || (a != terms_.end() && a->first < b->first)) {
            out.push_back(std::move(*a++));
        } else if (a == terms_.end() || b->first < a->first) {
            out.push_back(*b++);
        } else {
            Rational c = a->second + b->second;
            if (!branchtor::is_zero(c)) out.emplace_back(a->first, std::move(c));
            ++a, ++b;
        }
    }
    terms_ = std::move(out);
    return *this;
}

TruncatedSeries& TruncatedSeries::operator-=(const TruncatedSeries& g) { return *this += -g; }

TruncatedSeries& TruncatedSeries::operator*=(const Rational& c)
{
    if (branchtor::is_zero(c)) {
        terms_.clear();
        return *this;
    }
    for (auto& t : terms_) t.second *= c;
    return *this;
}

namespace {

// Common denominator of the coefficients and the numerators over it. Gives up
// (returns false) when the denominators are so unrelated that the common one
// is much longer than any single one.
bool over_common_denominator(const Terms& p, Integer& den, std::vector<Integer>& nums)
{
    den = 1;
    std::size_t longest = 0;
    for (auto& [e, c] : p) {
        longest = std::max(longest, mpz_sizeinbase(c.get_den_mpz_t(), 2));
        mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), c.get_den_mpz_t());
    }
    if (mpz_sizeinbase(den.get_mpz_t(), 2) > 4 * longest + 64) return false;
    nums.resize(p.size());
    for (std::size_t k = 0; k < p.size(); ++k) {
        mpz_divexact(nums[k].get_mpz_t(), den.get_mpz_t(), p[k].second.get_den_mpz_t());
        nums[k] *= p[k].second.get_num();
    }
    return true;
}

}  // namespace

TruncatedSeries operator*(const TruncatedSeries& f, const TruncatedSeries& g)
{
    require_same(f, g);
    int B = f.precision();
    TruncatedSeries h(B);
    if (f.is_zero() || g.is_zero() || f.order() + g.order() > B) return h;
    const Terms& ft = f.terms();
    const Terms& gt = g.terms();
    std::vector<char> touched(B + 1, 0);

    // integer convolution over a common denominator: one gcd per output
    // coefficient instead of one per partial product
    Integer df, dg;
    std::vector<Integer> nf, ng;
    if (over_common_denominator(ft, df, nf) && over_common_denominator(gt, dg, ng)) {
        std::vector<Integer> acc(B + 1);
        for (std::size_t a = 0; a < ft.size(); ++a) {
            for (std::size_t b = 0; b < gt.size(); ++b) {
                int e = ft[a].first + gt[b].first;
                if (e > B) break;
                mpz_addmul(acc[e].get_mpz_t(), nf[a].get_mpz_t(), ng[b].get_mpz_t());
                touched[e] = 1;
            }
        }
        const Integer den = df * dg;
        for (int e = 0; e <= B; ++e) {
            if (!touched[e] || sgn(acc[e]) == 0) continue;
            Rational q(acc[e], den);
            q.canonicalize();
            h.terms_.emplace_back(e, std::move(q));
        }
        return h;
    }

    std::vector<Rational> acc(B + 1);
    Rational tmp;
    for (auto& [ea, ca] : ft) {
        for (auto& [eb, cb] : gt) {
            int e = ea + eb;
            if (e > B) break;
            mpq_mul(tmp.get_mpq_t(), ca.get_mpq_t(), cb.get_mpq_t());
            acc[e] += tmp;
            touched[e] = 1;
        }
    }
    for (int e = 0; e <= B; ++e)
        if (touched[e] && !branchtor::is_zero(acc[e])) h.terms_.emplace_back(e, std::move(acc[e]));
    return h;
}

bool TruncatedSeries::operator==(const TruncatedSeries& g) const
{
    return prec_ == g.prec_ && terms_ == g.terms_;
}

std::string TruncatedSeries::to_string(const std::string& var) const
{
    std::ostringstream os;
    bool first = true;
    for (auto& [e, c] : terms_) {
        Rational a = abs(c);
        os << (sgn(c) < 0 ? (first ? "-" : " - ") : (first ? "" : " + "));
        bool unit = a == 1;
        if (!unit || e == 0) os << a.get_str();
        if (e > 0) os << (unit ? "" : "*") << var << (e > 1 ? "^" + std::to_string(e) : "");
        first = false;
    }
    if (first) os << "0";
    os << " + O(" << var << "^" << prec_ + 1 << ")";
    return os.str();
}

TruncatedSeries arith(const TruncatedSeries& f, const TruncatedSeries& g, SeriesOp kind)
{
    switch (kind) {
    case SeriesOp::add: return f + g;
    case SeriesOp::sub: return f - g;
    case SeriesOp::mul: return f * g;
    }
    throw std::invalid_argument("unknown series operation");
}

TruncatedSeries pow_unit(const TruncatedSeries& f, const Rational& r)
{
    if (f.order() != 0) throw std::domain_error("pow_unit: argument is not a unit");
    const Rational& f0 = f.terms().front().second;
    Rational g0;
    if (f0 == 1) {
        g0 = 1;
    } else if (is_integer(r)) {
        long k = r.get_num().get_si();
        Rational base = k < 0 ? Rational(1 / f0) : f0;
        g0 = 1;
        for (long i = 0; i < std::abs(k); ++i) g0 *= base;
    } else {
        throw std::domain_error("pow_unit: fractional power needs constant term 1");
    }
    int B = f.precision();
    // k f0 g_k = sum_{j=1..k} ((r+1) j - k) f_j g_{k-j}
    std::vector<Rational> g(B + 1);
    g[0] = g0;
    Rational rp1 = r + 1, w, tmp;
    for (int k = 1; k <= B; ++k) {
        Rational acc;
        for (auto& [j, fj] : f.terms()) {
            if (j == 0) continue;
            if (j > k) break;
            if (branchtor::is_zero(g[k - j])) continue;
            w = rp1 * j - k;
            tmp = w * fj;
            tmp *= g[k - j];
            acc += tmp;
        }
        g[k] = acc / (f0 * k);
    }
    return TruncatedSeries::from_dense(g, B);
}

TruncatedSeries invert_unit(const TruncatedSeries& f)
{
    if (f.order() != 0) throw std::domain_error("invert_unit: series is not a unit");
    return pow_unit(f, Rational(-1));
}

TruncatedSeries nth_root_unit(const TruncatedSeries& f, int a)
{
    if (a <= 0) throw std::invalid_argument("nth_root_unit: root index must be positive");
    if (f.order() != 0 || f.terms().front().second != 1)
        throw std::domain_error("nth_root_unit: constant term must be 1");
    return pow_unit(f, Rational(1, a));
}

TruncatedSeries substitute(const TruncatedSeries& f, const TruncatedSeries& s)
{
    if (s.order() != 1) throw std::domain_error("substitute: inner series must have order 1");
    int B = f.precision();
    TruncatedSeries inner = s.with_precision(B);
    if (f.is_zero()) return TruncatedSeries(B);
    // blocks of k coefficients: f = sum_j F_j(s) (s^k)^j with deg F_j < k, so
    // about 2 sqrt(deg f) products instead of deg f
    const int D = degree(f.terms());
    const int k = std::max(1, static_cast<int>(std::ceil(std::sqrt(static_cast<double>(D + 1)))));
    std::vector<TruncatedSeries> powers{TruncatedSeries::constant(1, B)};
    for (int r = 1; r <= k; ++r) powers.push_back(powers.back() * inner);
    const int blocks = D / k + 1;
    std::vector<std::vector<Rational>> dense(static_cast<std::size_t>(blocks));
    for (auto& [e, c] : f.terms()) {
        auto& acc = dense[static_cast<std::size_t>(e / k)];
        if (acc.empty()) acc.resize(static_cast<std::size_t>(B) + 1);
        for (auto& [pe, pc] : powers[static_cast<std::size_t>(e % k)].terms()) acc[static_cast<std::size_t>(pe)] += c * pc;
    }
    auto block = [&](int j) {
        auto& acc = dense[static_cast<std::size_t>(j)];
        return acc.empty() ? TruncatedSeries(B) : TruncatedSeries::from_dense(acc, B);
    };
    TruncatedSeries result = block(blocks - 1);
    for (int j = blocks - 2; j >= 0; --j) result = result * powers[static_cast<std::size_t>(k)] + block(j);
    return result;
}

TruncatedSeries derivative(const TruncatedSeries& f)
{
    int B = f.precision();
    Terms d;
    for (auto& [e, c] : f.terms())
        if (e > 0) d.emplace_back(e - 1, c * e);
    return TruncatedSeries(std::move(d), B > 0 ? B - 1 : 0);
}

TruncatedSeries reversion(const TruncatedSeries& s)
{
    if (s.order() != 1) throw std::domain_error("reversion: series must have order 1");
    const int B = s.precision();
    if (!(s.coeff(1) == 1)) {
        // reduce to a leading coefficient 1: t(u) = r(u / c) for r the reversion of s / c
        const Rational c = s.coeff(1);
        TruncatedSeries r = reversion(s * (1 / c));
        Terms scaled;
        Rational f = 1;
        int last = 0;
        for (auto& [e, v] : r.terms()) {
            while (last < e) {
                f /= c;
                ++last;
            }
            scaled.emplace_back(e, v * f);
        }
        return TruncatedSeries(std::move(scaled), B);
    }
    // Newton: if t is right through degree p then t - (s(t) - u) t' is right
    // through degree 2p, since s'(t(u)) t'(u) = 1 for the true inverse
    TruncatedSeries t(Terms{{1, Rational(1)}}, std::min(B, 1));
    for (int p = 1; p < B;) {
        const int q = std::min(2 * p, B);
        TruncatedSeries tq = t.with_precision(q);
        TruncatedSeries err = substitute(s.with_precision(q), tq) - TruncatedSeries(Terms{{1, Rational(1)}}, q);
        TruncatedSeries dt(derivative(tq).terms(), q);
        t = tq - err * dt;
        p = q;
    }
    return t.with_precision(B);
}

Terms exact_product(const Terms& a, const Terms& b)
{
    int top = degree(a) + degree(b);
    TruncatedSeries fa(a, std::max(top, 0)), fb(b, std::max(top, 0));
    return (fa * fb).terms();
}

int degree(const Terms& p) { return p.empty() ? -1 : p.back().first; }

}  // namespace branchtor
