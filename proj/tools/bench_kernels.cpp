#include "branchtor/kernels.hpp"
#include "branchtor/search.hpp"
#include "branchtor/semigroup.hpp"

#include "CLI11.hpp"

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>

using namespace branchtor;

namespace {

double seconds(const std::function<void()>& f, int repeat)
{
    double best = 1e300;
    for (int r = 0; r < repeat; ++r) {
        auto t0 = std::chrono::steady_clock::now();
        f();
        auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double>(t1 - t0).count());
    }
    return best;
}

void row(const char* kernel, const std::string& input, double serial, double parallel, bool agree)
{
    std::printf("%-18s %-34s %10.4f %10.4f %8.2fx  %s\n", kernel, input.c_str(), serial, parallel,
                parallel > 0 ? serial / parallel : 0.0, agree ? "same" : "DIFFERENT");
}

}  // namespace

int main(int argc, char** argv)
{
    int repeat = 3;
    int samples = 12;
    std::vector<std::string> inputs{"t^22; t^23+t^27; t^24+t^27; t^25+t^27; t^26+t^27",
                                    "t^30; t^31+t^36; t^32+t^36; t^33+t^36; t^34+t^36"};
    CLI::App app{"Serial reference against the OpenMP kernels"};
    app.add_option("--repeat", repeat, "timing repetitions, best one is kept")->check(CLI::PositiveNumber);
    app.add_option("--samples", samples, "branches in the search benchmark")->check(CLI::PositiveNumber);
    app.add_option("-e,--expr", inputs, "branches to benchmark");
    CLI11_PARSE(app, argc, argv);

    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-18s %-34s %10s %10s %9s  %s\n", "kernel", "input", "serial s", "parallel s", "speedup", "result");
    bool all_agree = true;

    for (auto& text : inputs) {
        Branch b = parse_branch(text);
        RingPtr ring = Ring::of_branch(b);
        std::string label = text.substr(0, 32);
        auto monos = monomials_up_to(b.valuations, b.precision);

        std::vector<TruncatedSeries> ts, tp;
        // a fresh ring each time, since rings cache monomial series
        double s = seconds([&] { ts = monomial_series_table(*Ring::of_branch(b), monos, Exec::serial); }, repeat);
        double p = seconds([&] { tp = monomial_series_table(*Ring::of_branch(b), monos, Exec::parallel); }, repeat);
        bool same = ts == tp;
        all_agree = all_agree && same;
        row("monomial_table", label, s, p, same);

        auto order = staircase_order(*ring, ring->nvars(), {});
        StaircaseBasis ss, sp;
        s = seconds([&] { ss = build_staircase(Ring::of_branch(b), order, Exec::serial); }, repeat);
        p = seconds([&] { sp = build_staircase(Ring::of_branch(b), order, Exec::parallel); }, repeat);
        same = ss.pivots() == sp.pivots();
        all_agree = all_agree && same;
        row("staircase", label, s, p, same);

        std::vector<SparseVec> vs;
        for (auto& f : ts) vs.push_back(series_vector(f));
        std::vector<SparseVec> rs, rp;
        s = seconds([&] { rs = reduce_batch(ss.echelon(), vs, Exec::serial); }, repeat);
        p = seconds([&] { rp = reduce_batch(ss.echelon(), vs, Exec::parallel); }, repeat);
        same = rs == rp;
        all_agree = all_agree && same;
        row("reduce_batch", label, s, p, same);
    }

    SearchConfig cfg;
    cfg.seed = 7;
    cfg.samples = samples;
    cfg.valuation_max = 20;
    SearchSummary a, c;
    double s = seconds([&] { a = run_search(cfg, Exec::serial); }, 1);
    double p = seconds([&] { c = run_search(cfg, Exec::parallel); }, 1);
    bool same = a.counts == c.counts;
    for (std::size_t k = 0; same && k < a.samples.size(); ++k)
        same = a.samples[k].input == c.samples[k].input && a.samples[k].outcome == c.samples[k].outcome;
    all_agree = all_agree && same;
    row("search", std::to_string(samples) + " samples, seed 7", s, p, same);

    return all_agree ? 0 : 1;
}
