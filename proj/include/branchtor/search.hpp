#ifndef BRANCHTOR_SEARCH_HPP
#define BRANCHTOR_SEARCH_HPP

#include "branchtor/berger.hpp"
#include "branchtor/branch.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace branchtor {

struct SearchConfig {
    std::uint64_t seed = 1;
    int samples = 100;
    int n_min = 2, n_max = 4;
    int valuation_min = 2, valuation_max = 30;
    int max_perturbations = 2;    // extra terms per unit
    int perturbation_degree = 12; // largest exponent of a perturbation term inside the unit
    int coefficient_range = 3;    // perturbation coefficients in [-r, r] minus 0
};

// Sample `index` of the stream fixed by cfg.seed; independent of every other index.
Branch sample_branch(const SearchConfig& cfg, int index);

// Valuations only (no perturbation): a minimal generating set with gcd 1.
std::vector<int> sample_valuations(const SearchConfig& cfg, int index);

struct SearchSample {
    int index = 0;
    std::string input;
    std::vector<int> valuations;
    int conductor = 0;
    std::string outcome;  // criterion id, UNDECIDED or ERROR
    std::string error;
};

struct SearchSummary {
    SearchConfig config;
    std::vector<SearchSample> samples;   // in index order
    std::map<std::string, int> counts;   // per outcome
    double undecided_rate() const;
};

// Fans the samples out over threads; results are stored by index, so the
// summary does not depend on scheduling.
SearchSummary run_search(const SearchConfig& cfg, Exec exec = Exec::parallel);

}  // namespace branchtor

#endif
