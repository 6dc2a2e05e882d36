#include "branchtor/ring.hpp"

namespace branchtor {

Ring::Ring(std::string label, std::vector<std::string> names, std::vector<Terms> exact, int precision, bool exact_data)
    : label_(std::move(label)), names_(std::move(names)), exact_(std::move(exact)), precision_(precision),
      exact_data_(exact_data)
{
    if (names_.size() != exact_.size()) throw std::invalid_argument("ring: names and generators differ in count");
    for (auto& g : exact_) {
        if (g.empty()) throw std::invalid_argument("ring: zero generator");
        valuations_.push_back(g.front().first);
        gens_.emplace_back(g, precision_);
    }
}

std::shared_ptr<Ring> Ring::of_branch(const Branch& b)
{
    return std::make_shared<Ring>("R", default_names(b.n()), b.exact, b.precision, b.polynomial);
}

TruncatedSeries Ring::generator_at(std::size_t i, int prec) const
{
    if (prec > precision_ && !exact_data_) throw PrecisionError("generator only known to ring precision");
    return TruncatedSeries(exact_.at(i), prec);
}

TruncatedSeries Ring::monomial_series(const Monomial& m) const
{
    if (m.size() != nvars()) throw std::invalid_argument("monomial has wrong variable count");
    if (valuation(m) > precision_) return TruncatedSeries(precision_);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = cache_.find(m);
        if (it != cache_.end()) return it->second;
    }
    TruncatedSeries result(precision_);
    std::size_t last = nvars();
    for (std::size_t i = nvars(); i-- > 0;)
        if (m[i] > 0) {
            last = i;
            break;
        }
    if (last == nvars()) {
        result = TruncatedSeries::constant(1, precision_);
    } else {
        Monomial parent = m;
        parent[last] -= 1;
        result = monomial_series(parent) * gens_[last];
    }
    std::lock_guard<std::mutex> lock(mutex_);
    cache_.emplace(m, result);
    return result;
}

void Ring::prime_cache(const std::vector<Monomial>& monomials, const std::vector<TruncatedSeries>& series) const
{
    std::lock_guard<std::mutex> lock(mutex_);
    for (std::size_t k = 0; k < monomials.size(); ++k) cache_.emplace(monomials[k], series[k]);
}

TruncatedSeries Ring::evaluate(const Polynomial& p) const
{
    TruncatedSeries out(precision_);
    for (auto& [m, c] : p.terms()) {
        if (valuation(m) > precision_) continue;
        out += monomial_series(m) * c;
    }
    return out;
}

TruncatedSeries Ring::evaluate_at(const Polynomial& p, int prec) const
{
    if (prec == precision_) return evaluate(p);
    std::vector<TruncatedSeries> g;
    for (std::size_t i = 0; i < nvars(); ++i) g.push_back(generator_at(i, prec));
    TruncatedSeries out(prec);
    for (auto& [m, c] : p.terms()) {
        if (valuation(m) > prec) continue;
        TruncatedSeries term = TruncatedSeries::constant(c, prec);
        for (std::size_t i = 0; i < nvars(); ++i)
            for (int e = 0; e < m[i]; ++e) term = term * g[i];
        out += term;
    }
    return out;
}

Terms Ring::evaluate_exact(const Polynomial& p) const
{
    if (!exact_data_) throw PrecisionError("exact evaluation needs polynomial generators");
    int top = 0;
    for (auto& [m, c] : p.terms()) {
        int d = 0;
        for (std::size_t i = 0; i < nvars(); ++i) d += m[i] * std::max(0, degree(exact_[i]));
        top = std::max(top, d);
    }
    return evaluate_at(p, top).terms();
}

}  // namespace branchtor
