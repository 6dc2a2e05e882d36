#include "branchtor/differentials.hpp"

#include <algorithm>
#include <sstream>

namespace branchtor {

DifferentialElement::DifferentialElement(RingPtr r) : ring(std::move(r))
{
    coeffs.assign(ring->nvars(), Polynomial(ring->nvars()));
}

DifferentialElement::DifferentialElement(RingPtr r, std::vector<Polynomial> c) : ring(std::move(r)), coeffs(std::move(c))
{
    if (coeffs.size() != ring->nvars()) throw std::invalid_argument("differential has wrong number of coefficients");
    for (auto& p : coeffs)
        if (p.nvars() != ring->nvars()) throw std::invalid_argument("coefficient lives in the wrong polynomial ring");
}

std::vector<TruncatedSeries> DifferentialElement::series() const
{
    std::vector<TruncatedSeries> out;
    for (auto& p : coeffs) out.push_back(ring->evaluate(p));
    return out;
}

bool DifferentialElement::is_zero() const
{
    return std::all_of(coeffs.begin(), coeffs.end(), [](const Polynomial& p) { return p.is_zero(); });
}

DifferentialElement& DifferentialElement::operator+=(const DifferentialElement& w)
{
    if (w.coeffs.size() != coeffs.size()) throw std::invalid_argument("differentials over different rings");
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] += w.coeffs[i];
    return *this;
}

DifferentialElement& DifferentialElement::operator-=(const DifferentialElement& w)
{
    if (w.coeffs.size() != coeffs.size()) throw std::invalid_argument("differentials over different rings");
    for (std::size_t i = 0; i < coeffs.size(); ++i) coeffs[i] -= w.coeffs[i];
    return *this;
}

DifferentialElement& DifferentialElement::operator*=(const Rational& c)
{
    for (auto& p : coeffs) p *= c;
    return *this;
}

DifferentialElement DifferentialElement::in_ring(RingPtr other) const
{
    if (other->nvars() != ring->nvars()) throw std::invalid_argument("rings have different variables");
    return DifferentialElement(std::move(other), coeffs);
}

std::string DifferentialElement::to_string() const
{
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i].is_zero()) continue;
        os << (first ? "" : " + ") << "(" << coeffs[i].to_string(ring->names()) << ")*d" << ring->names()[i];
        first = false;
    }
    return first ? "0" : os.str();
}

TruncatedSeries torsion_image(const DifferentialElement& w)
{
    const Ring& R = *w.ring;
    TruncatedSeries acc(R.precision() - 1);
    for (std::size_t i = 0; i < w.coeffs.size(); ++i) {
        if (w.coeffs[i].is_zero()) continue;
        acc += R.evaluate(w.coeffs[i]).with_precision(R.precision() - 1) * derivative(R.generator(i));
    }
    return acc;
}

bool torsion_test(const DifferentialElement& w)
{
    const auto& vals = w.ring->valuations();
    const int maxval = vals.empty() ? 0 : *std::max_element(vals.begin(), vals.end());
    const int limit = w.ring->precision() - maxval;
    auto img = torsion_image(w);
    return img.is_zero() || img.order() >= limit;
}

QuotientSpec square_of_maximal(std::size_t nvars, const std::string& description)
{
    QuotientSpec q;
    q.nvars = nvars;
    q.description = description;
    for (std::size_t i = 0; i < nvars; ++i)
        for (std::size_t j = i; j < nvars; ++j) q.monomials.push_back(unit_vector(nvars, i) + unit_vector(nvars, j));
    return q;
}

void add_variables(QuotientSpec& q, const std::vector<std::size_t>& vars)
{
    for (auto v : vars) q.monomials.push_back(unit_vector(q.nvars, v));
}

ArtinianQuotient::ArtinianQuotient(QuotientSpec spec) : spec_(std::move(spec))
{
    const std::size_t m = spec_.nvars;
    for (auto& p : spec_.polynomials)
        if (p.nvars() != m) throw std::invalid_argument("quotient generator has wrong variable count");
    ideal_ = minimalize(spec_.monomials, m);
    std::vector<int> cap(m, -1);
    for (auto& g : ideal_.generators) {
        int support = 0, var = -1;
        for (std::size_t i = 0; i < m; ++i)
            if (g[i] > 0) ++support, var = static_cast<int>(i);
        if (support == 0) std::fill(cap.begin(), cap.end(), 0);
        if (support == 1) cap[var] = g[var];
    }
    for (std::size_t i = 0; i < m; ++i)
        if (cap[i] < 0) throw InfiniteQuotientError("quotient '" + spec_.description + "' has no power of variable " +
                                                    std::to_string(i + 1) + " in its monomial part");

    if (!ideal_.is_unit()) {
        Monomial cur(m, 0);
        auto rec = [&](auto&& self, std::size_t i) -> void {
            if (i == m) {
                standard_.push_back(cur);
                return;
            }
            for (int e = 0; e < cap[i]; ++e) {
                cur[i] = e;
                Monomial probe = cur;
                if (ideal_.contains(probe)) break;
                self(self, i + 1);
            }
            cur[i] = 0;
        };
        rec(rec, 0);
    }
    std::sort(standard_.begin(), standard_.end(), [](const Monomial& a, const Monomial& b) { return GrlexLess()(b, a); });
    for (int k = 0; k < static_cast<int>(standard_.size()); ++k) position_.emplace(standard_[k], k);

    echelon_ = Echelon(static_cast<int>(standard_.size()), false);
    for (auto& p : spec_.polynomials)
        for (auto& b : standard_) echelon_.insert(standard_vector(p.times_monomial(b)), 0);
    for (int k = 0; k < static_cast<int>(standard_.size()); ++k)
        if (!echelon_.is_pivot(k)) {
            basis_.push_back(standard_[k]);
            basis_position_.push_back(k);
        }
}

std::vector<Rational> ArtinianQuotient::standard_vector(const Polynomial& p) const
{
    std::vector<Rational> v(standard_.size());
    for (auto& [mono, c] : p.terms()) {
        auto it = position_.find(mono);
        if (it != position_.end()) v[it->second] += c;
    }
    return v;
}

std::vector<Rational> ArtinianQuotient::normal_form(const Polynomial& p) const
{
    if (p.nvars() != spec_.nvars) throw std::invalid_argument("normal_form: wrong variable count");
    auto v = standard_vector(p);
    echelon_.reduce(v);
    std::vector<Rational> out(basis_.size());
    for (std::size_t k = 0; k < basis_.size(); ++k) out[k] = v[basis_position_[k]];
    return out;
}

Polynomial ArtinianQuotient::to_polynomial(const std::vector<Rational>& coords) const
{
    Polynomial p(spec_.nvars);
    for (std::size_t k = 0; k < coords.size(); ++k)
        if (!branchtor::is_zero(coords[k])) p.add_term(basis_[k], coords[k]);
    return p;
}

std::vector<Rational> ArtinianQuotient::multiply(const std::vector<Rational>& a, const std::vector<Rational>& b) const
{
    return normal_form(to_polynomial(a) * to_polynomial(b));
}

OmegaOfQuotient::OmegaOfQuotient(ArtinianQuotient A, Exec exec) : A_(std::move(A))
{
    const std::size_t m = A_.nvars();
    const std::size_t dim = A_.dimension();
    relations_ = Echelon(static_cast<int>(dim * m), false, exec);
    std::vector<Polynomial> gens;
    for (auto& g : A_.monomial_part().generators) gens.push_back(Polynomial::term(g, 1));
    for (auto& p : A_.spec().polynomials) gens.push_back(p);
    std::vector<std::vector<Polynomial>> partials;
    for (auto& g : gens) {
        std::vector<Polynomial> d;
        for (std::size_t i = 0; i < m; ++i) d.push_back(g.partial(i));
        partials.push_back(std::move(d));
    }
    std::vector<SparseVec> rows;
    for (auto& d : partials)
        for (auto& b : A_.basis()) {
            std::vector<Polynomial> coeffs;
            for (std::size_t i = 0; i < m; ++i) coeffs.push_back(d[i].times_monomial(b));
            auto v = to_sparse(raw_vector(coeffs));
            if (!v.empty()) rows.push_back(std::move(v));
        }
    std::vector<int> ids(rows.size(), 0);
    relations_.insert_batch(rows, ids);
}

std::vector<Rational> OmegaOfQuotient::raw_vector(const std::vector<Polynomial>& coeffs) const
{
    const std::size_t m = A_.nvars();
    if (coeffs.size() != m) throw std::invalid_argument("differential and quotient have different variables");
    std::vector<Rational> v(A_.dimension() * m);
    for (std::size_t i = 0; i < m; ++i) {
        if (coeffs[i].is_zero()) continue;
        auto nf = A_.normal_form(coeffs[i]);
        for (std::size_t k = 0; k < nf.size(); ++k) v[k * m + i] = nf[k];
    }
    return v;
}

std::vector<Rational> OmegaOfQuotient::class_of(const std::vector<Polynomial>& coeffs) const
{
    auto v = raw_vector(coeffs);
    relations_.reduce(v);
    return v;
}

std::vector<Rational> OmegaOfQuotient::class_of(const DifferentialElement& w) const
{
    return class_of(w.coeffs);
}

bool OmegaOfQuotient::is_zero(const std::vector<Polynomial>& coeffs) const
{
    auto v = class_of(coeffs);
    return std::all_of(v.begin(), v.end(), [](const Rational& c) { return branchtor::is_zero(c); });
}

std::string OmegaOfQuotient::describe(const std::vector<Rational>& cls, const std::vector<std::string>& names) const
{
    const std::size_t m = A_.nvars();
    std::ostringstream os;
    bool first = true;
    for (std::size_t col = 0; col < cls.size(); ++col) {
        if (branchtor::is_zero(cls[col])) continue;
        const Monomial& b = A_.basis()[col / m];
        os << (first ? "" : " + ") << "(" << to_string(cls[col]) << ")";
        if (total_degree(b) > 0) os << "*" << monomial_string(b, names);
        os << "*d" << names[col % m];
        first = false;
    }
    return first ? "0" : os.str();
}

bool class_nonzero_mod(const DifferentialElement& w, const QuotientSpec& J)
{
    OmegaOfQuotient omega{ArtinianQuotient(J)};
    return !omega.is_zero(w.coeffs);
}

std::size_t independence_rank(const std::vector<DifferentialElement>& ws, const OmegaOfQuotient& omega)
{
    Echelon e(static_cast<int>(omega.ambient_dimension()), false);
    for (auto& w : ws) e.insert(omega.class_of(w), 0);
    return e.rank();
}

std::size_t independence_rank(const std::vector<DifferentialElement>& ws, const QuotientSpec& J, Exec exec)
{
    OmegaOfQuotient omega(ArtinianQuotient(J), exec);
    return independence_rank(ws, omega);
}

namespace {

void check_monomial_args(const MonomialIdeal& K, const Monomial& m, std::size_t u)
{
    if (m.size() != K.nvars || u >= m.size()) throw std::invalid_argument("monomial_zero_test: dimension mismatch");
    if (K.contains(m)) throw std::invalid_argument("monomial_zero_test: m already lies in K");
    if (m[u] < 1) throw std::invalid_argument("monomial_zero_test: m is not divisible by X_u");
}

}  // namespace

bool monomial_zero_test(const MonomialIdeal& K, const Monomial& m, std::size_t u)
{
    check_monomial_args(K, m, u);
    Monomial top = m;
    top[u] += 1;
    if (!K.contains(top)) return false;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i == u || m[i] == 0) continue;
        Monomial q = top;
        q[i] -= 1;
        if (!K.contains(q)) return false;
    }
    return true;
}

bool monomial_zero_test_literal(const MonomialIdeal& K, const Monomial& m, std::size_t u)
{
    check_monomial_args(K, m, u);
    Monomial power(m.size(), 0);
    power[u] = m[u] + 1;
    if (K.contains(power)) return true;
    Monomial top = m;
    top[u] += 1;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (i == u) continue;
        // the partial derivative is zero when X_i does not divide m X_u
        if (top[i] == 0) continue;
        Monomial q = top;
        q[i] -= 1;
        if (!K.contains(q)) return false;
    }
    return true;
}

}  // namespace branchtor
