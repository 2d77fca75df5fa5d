// Serial reference against the OpenMP kernel for the full seam score table.
#include "unshred/assembler.hpp"
#include "unshred/stitch_eval.hpp"

#include <benchmark/benchmark.h>

#include <vector>

namespace {

std::vector<unshred::MatchStrip> corpus_strips(int strips_per_page)
{
    std::vector<unshred::BinaryRaster> pages;
    for (std::uint64_t s = 0; s < 2; ++s) {
        pages.push_back(unshred::generate_corpus(unshred::DocClass::Typeset, 256, 256, 40 + s));
    }
    const auto shredded = unshred::shred_document(pages, strips_per_page, 7);
    std::vector<unshred::MatchStrip> out;
    for (const auto& s : shredded.set.strips) {
        out.emplace_back(s.id, s.raster, false);
    }
    return out;
}

const unshred::TemplateBank& bank()
{
    static const unshred::TemplateBank b = unshred::build_template_bank();
    return b;
}

void BM_Serial(benchmark::State& state)
{
    const auto strips = corpus_strips(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(unshred::build_score_table_serial(strips, bank(), false));
    }
    state.SetItemsProcessed(state.iterations() * 4 * static_cast<long long>(strips.size() * (strips.size() - 1)));
}

void BM_Parallel(benchmark::State& state)
{
    const auto strips = corpus_strips(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(unshred::build_score_table_parallel(strips, bank(), false));
    }
    state.SetItemsProcessed(state.iterations() * 4 * static_cast<long long>(strips.size() * (strips.size() - 1)));
}

}  // namespace

BENCHMARK(BM_Serial)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_Parallel)->Arg(8)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
