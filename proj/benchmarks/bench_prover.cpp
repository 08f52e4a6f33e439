#include <benchmark/benchmark.h>

#include "confl/generator.hpp"
#include "confl/procs.hpp"
#include "confl/strategy.hpp"
#include "confl/termination.hpp"
#include "confl/trs_io.hpp"

using namespace confl;

namespace {

Trs gramlich() {
    return parse_trs("(VAR x)\n(RULES f(g(x),h(x)) -> a\n g(b) -> d\n h(c) -> d)");
}

Trs small(std::uint64_t index) {
    GenConfig cfg;
    cfg.max_funs = 3;
    cfg.max_consts = 2;
    cfg.max_vars = 2;
    cfg.max_rules = 4;
    cfg.max_term_size = 7;
    cfg.seed = 20240601;
    return gen_trs_at(cfg, index).trs;
}

void BM_Nonconfluence(benchmark::State& state) {
    Trs trs = gramlich();
    NonconfluenceConfig cfg;
    cfg.steps = static_cast<int>(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(proc_nonconfluence(trs, cfg));
}
BENCHMARK(BM_Nonconfluence)->Arg(1)->Arg(2)->Arg(4);

void BM_ProveTermination(benchmark::State& state) {
    Trs trs = small(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(prove_termination(trs));
}
BENCHMARK(BM_ProveTermination)->Arg(0)->Arg(5)->Arg(9);

void BM_KnuthBendix(benchmark::State& state) {
    Trs trs = small(static_cast<std::uint64_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(proc_knuth_bendix(trs));
}
BENCHMARK(BM_KnuthBendix)->Arg(0)->Arg(5)->Arg(9);

void BM_FullStrategy(benchmark::State& state) {
    StrategyDefs defs = parse_strategy(
        "AUTO = ((orthogonal | strongly_closed -steps 7 | ((redundant_remove -steps 4)?; kb)) "
        "|| (nonconfluence -steps 2 -tcap -fun | nonconfluence -steps 3 -tcap -nf))!");
    std::vector<Trs> corpus;
    for (std::uint64_t i = 0; i < 20; ++i) corpus.push_back(small(i));
    for (auto _ : state) {
        for (const Trs& trs : corpus)
            benchmark::DoNotOptimize(eval_strategy(defs, trs, Duration(500)));
    }
}
BENCHMARK(BM_FullStrategy)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
