#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "ragleak/defense.hpp"
#include "ragleak/embedding.hpp"
#include "ragleak/metrics.hpp"
#include "ragleak/retrieval.hpp"
#include "ragleak/rng.hpp"
#include "ragleak/wordlist.hpp"

using namespace ragleak;

namespace {

std::string make_text(std::size_t words, std::uint64_t seed) {
    const auto& list = builtin_wordlist();
    Rng rng(seed);
    std::string out;
    out.reserve(words * 8);
    for (std::size_t i = 0; i < words; ++i) {
        if (i > 0) out.push_back(' ');
        out += list[rng.below(list.size())];
    }
    return out;
}

KnowledgeBase make_kb(std::size_t chunks, std::size_t words_per_chunk) {
    Document doc{"bench", make_text(chunks * words_per_chunk, 1), "bench"};
    ChunkingParams params;
    params.max_words = words_per_chunk;
    params.overlap_words = words_per_chunk / 5;
    KnowledgeBase kb;
    kb.params = params;
    auto all = chunk_document(doc, params);
    all.resize(std::min(all.size(), chunks));
    kb.chunks = std::move(all);
    return kb;
}

void BM_EmbedChunk(benchmark::State& state) {
    HashedNgramEmbedder embedder;
    const auto text = make_text(1500, 7);
    for (auto _ : state) {
        benchmark::DoNotOptimize(embedder.embed(text));
    }
}
BENCHMARK(BM_EmbedChunk);

void BM_Retrieve100(benchmark::State& state) {
    const auto kb = make_kb(100, 300);
    const auto index = index_build(kb, std::make_shared<HashedNgramEmbedder>());
    RetrieverConfig cfg;
    const auto query = make_text(300, 9);
    for (auto _ : state) {
        benchmark::DoNotOptimize(retrieve(index, query, cfg));
    }
}
BENCHMARK(BM_Retrieve100);

void BM_EedFull(benchmark::State& state) {
    const auto a = make_text(static_cast<std::size_t>(state.range(0)), 3);
    auto b = a;
    b[b.size() / 2] = 'X';
    for (auto _ : state) {
        benchmark::DoNotOptimize(eed(a, b));
    }
}
BENCHMARK(BM_EedFull)->Arg(100)->Arg(400);

void BM_EedBounded(benchmark::State& state) {
    const auto a = make_text(1500, 3);
    auto b = a;
    b[b.size() / 2] = 'X';
    const std::size_t limit = a.size() / 10;
    for (auto _ : state) {
        benchmark::DoNotOptimize(levenshtein_bounded(a, b, limit));
    }
}
BENCHMARK(BM_EedBounded);

void BM_GrepDefense(benchmark::State& state) {
    const auto kb = make_kb(100, 300);
    const GrepDefense defense(kb);
    const auto response = "Context: " + kb.chunks[3].text + "\n\n" + kb.chunks[4].text + "\nAnswer:";
    for (auto _ : state) {
        benchmark::DoNotOptimize(defense.apply(response));
    }
}
BENCHMARK(BM_GrepDefense);

}  // namespace

BENCHMARK_MAIN();
