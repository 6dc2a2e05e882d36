#include "branchtor/search.hpp"

#include <algorithm>
#include <numeric>
#include <random>

namespace branchtor {

namespace {

std::mt19937_64 stream(const SearchConfig& cfg, int index, int attempt)
{
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(attempt)};
    return std::mt19937_64(seq);
}

int draw(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

bool minimal_generating_set(const std::vector<int>& a)
{
    for (std::size_t i = 0; i < a.size(); ++i) {
        // is a[i] a sum of the smaller ones?
        std::vector<char> reach(static_cast<std::size_t>(a[i]) + 1, 0);
        reach[0] = 1;
        for (int v = 1; v <= a[i]; ++v)
            for (std::size_t j = 0; j < i; ++j)
                if (v >= a[j] && reach[static_cast<std::size_t>(v - a[j])]) reach[static_cast<std::size_t>(v)] = 1;
        if (reach[static_cast<std::size_t>(a[i])]) return false;
    }
    return true;
}

std::vector<int> draw_valuations(const SearchConfig& cfg, std::mt19937_64& rng)
{
    const int span = cfg.valuation_max - cfg.valuation_min + 1;
    for (int tries = 0; tries < 10000; ++tries) {
        int n = draw(rng, cfg.n_min, cfg.n_max);
        n = std::min(n, span);
        std::vector<int> pool(static_cast<std::size_t>(span));
        std::iota(pool.begin(), pool.end(), cfg.valuation_min);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<int> a(pool.begin(), pool.begin() + n);
        std::sort(a.begin(), a.end());
        int g = 0;
        for (int x : a) g = std::gcd(g, x);
        if (g == 1 && minimal_generating_set(a)) return a;
    }
    throw std::invalid_argument("search: no valid valuation set in the requested range");
}

}  // namespace

std::vector<int> sample_valuations(const SearchConfig& cfg, int index)
{
    auto rng = stream(cfg, index, 0);
    return draw_valuations(cfg, rng);
}

Branch sample_branch(const SearchConfig& cfg, int index)
{
    for (int attempt = 0; attempt < 1000; ++attempt) {
        auto rng = stream(cfg, index, attempt);
        auto a = draw_valuations(cfg, rng);
        std::vector<Terms> gens;
        for (int v : a) {
            std::map<int, Rational> terms{{v, Rational(1)}};
            int k = draw(rng, 0, cfg.max_perturbations);
            for (int q = 0; q < k; ++q) {
                int e = draw(rng, 1, cfg.perturbation_degree);
                int c = draw(rng, 1, cfg.coefficient_range) * (draw(rng, 0, 1) ? 1 : -1);
                terms[v + e] += Rational(c);
            }
            Terms t;
            for (auto& [e, c] : terms)
                if (!branchtor::is_zero(c)) t.emplace_back(e, c);
            gens.push_back(std::move(t));
        }
        try {
            Branch b = make_branch(gens);
            if (b.valuations == a) return b;
        } catch (const BranchError&) {
        }
    }
    throw std::runtime_error("search: could not draw a branch for sample " + std::to_string(index));
}

double SearchSummary::undecided_rate() const
{
    if (samples.empty()) return 0;
    auto it = counts.find("UNDECIDED");
    return it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(samples.size());
}

SearchSummary run_search(const SearchConfig& cfg, Exec exec)
{
    SearchSummary out;
    out.config = cfg;
    out.samples.resize(static_cast<std::size_t>(std::max(0, cfg.samples)));
    const int count = static_cast<int>(out.samples.size());
#pragma omp parallel for schedule(dynamic, 1) if (exec == Exec::parallel)
    for (int k = 0; k < count; ++k) {
        SearchSample& s = out.samples[static_cast<std::size_t>(k)];
        s.index = k;
        try {
            Branch b = sample_branch(cfg, k);
            s.input = b.to_string();
            s.valuations = b.valuations;
            CertifyReport rep = certify(b, Exec::serial);
            s.conductor = rep.analysis.conductor;
            s.outcome = rep.outcome;
        } catch (const std::exception& ex) {
            s.outcome = "ERROR";
            s.error = ex.what();
        }
    }
    for (auto& s : out.samples) out.counts[s.outcome] += 1;
    return out;
}

}  // namespace branchtor
