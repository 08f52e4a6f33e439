#include <benchmark/benchmark.h>

#include "confl/critical_pairs.hpp"
#include "confl/dataset.hpp"
#include "confl/generator.hpp"
#include "confl/rewrite.hpp"
#include "confl/trs_io.hpp"

using namespace confl;

namespace {

Trs fixture(std::uint64_t index) {
    GenConfig cfg;
    cfg.seed = 7;
    return gen_trs_at(cfg, index).trs;
}

void BM_ParseTrs(benchmark::State& state) {
    std::string text = print_trs(fixture(1));
    for (auto _ : state) benchmark::DoNotOptimize(parse_trs(text));
}
BENCHMARK(BM_ParseTrs);

void BM_Unify(benchmark::State& state) {
    Trs trs = fixture(2);
    std::vector<std::pair<TermPtr, TermPtr>> pairs;
    for (std::size_t i = 0; i < trs.rules.size(); ++i)
        for (std::size_t j = 0; j < trs.rules.size(); ++j)
            pairs.emplace_back(rename_rule(trs.rules[i], "a").lhs,
                               rename_rule(trs.rules[j], "b").lhs);
    for (auto _ : state) {
        for (const auto& [a, b] : pairs) benchmark::DoNotOptimize(unify(a, b));
    }
}
BENCHMARK(BM_Unify);

void BM_OneStepReducts(benchmark::State& state) {
    Trs trs = fixture(3);
    TermPtr t = trs.rules.front().lhs;
    for (auto _ : state) benchmark::DoNotOptimize(one_step_reducts(t, trs));
}
BENCHMARK(BM_OneStepReducts);

void BM_CriticalPairs(benchmark::State& state) {
    Trs trs = fixture(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(critical_pairs(trs));
}
BENCHMARK(BM_CriticalPairs)->Arg(3)->Arg(11)->Arg(42);

void BM_GenerateTrs(benchmark::State& state) {
    GenConfig cfg;
    cfg.seed = 11;
    std::uint64_t i = 0;
    for (auto _ : state) benchmark::DoNotOptimize(gen_trs_at(cfg, i++));
}
BENCHMARK(BM_GenerateTrs);

void BM_CanonicalForm(benchmark::State& state) {
    Trs trs = fixture(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(canonical_form(trs));
}
BENCHMARK(BM_CanonicalForm)->Arg(3)->Arg(11)->Arg(42);

}  // namespace
