#ifndef BRANCHTOR_RING_HPP
#define BRANCHTOR_RING_HPP

#include "branchtor/branch.hpp"
#include "branchtor/echelon.hpp"
#include "branchtor/polynomial.hpp"
#include "branchtor/series.hpp"

#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

namespace branchtor {

// A subring k[[y_1, ..., y_m]] of k[[t]] with each y_i a polynomial in t.
// The branch ring R uses y = x; the extension S appends the T_j.
class Ring
{
public:
    Ring(std::string label, std::vector<std::string> names, std::vector<Terms> exact, int precision,
         bool exact_data = true);

    static std::shared_ptr<Ring> of_branch(const Branch& b);

    const std::string& label() const { return label_; }
    std::size_t nvars() const { return names_.size(); }
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<int>& valuations() const { return valuations_; }
    int precision() const { return precision_; }
    const TruncatedSeries& generator(std::size_t i) const { return gens_.at(i); }
    const Terms& exact(std::size_t i) const { return exact_.at(i); }
    TruncatedSeries generator_at(std::size_t i, int prec) const;
    int valuation(const Monomial& m) const { return weighted_degree(m, valuations_); }

    // Phi(m) mod t^{B+1}; cached, safe to call from several threads.
    TruncatedSeries monomial_series(const Monomial& m) const;
    TruncatedSeries evaluate(const Polynomial& p) const;
    // Evaluation at another precision, no cache (needs exact generator data above B).
    TruncatedSeries evaluate_at(const Polynomial& p, int prec) const;
    // Untruncated image of p in k[t] (exact data only).
    Terms evaluate_exact(const Polynomial& p) const;

    void prime_cache(const std::vector<Monomial>& monomials, const std::vector<TruncatedSeries>& series) const;

private:
    std::string label_;
    std::vector<std::string> names_;
    std::vector<Terms> exact_;
    std::vector<int> valuations_;
    std::vector<TruncatedSeries> gens_;
    int precision_;
    bool exact_data_;
    mutable std::mutex mutex_;
    mutable std::unordered_map<Monomial, TruncatedSeries, MonomialHash> cache_;
};

using RingPtr = std::shared_ptr<const Ring>;

}  // namespace branchtor

#endif
