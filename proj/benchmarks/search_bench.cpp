#include <benchmark/benchmark.h>

#include <random>

#include "dreams/search.hpp"

namespace {

using namespace dreams;

ModelDocument corpus(std::size_t links) {
    IdGenerator ids(stepping_clock(std::chrono::system_clock::time_point{}, std::chrono::milliseconds(1)), 11);
    auto doc = create_model(ModelKind::impact_model, "bench", ids);
    const char* words[] = {"quality", "protocol", "sketch", "fluency", "budget", "review", "trust", "Qualität"};
    std::mt19937_64 rng(links);
    std::vector<std::string> nodes;
    for (std::size_t i = 0; i <= links; ++i) {
        nodes.push_back(add_node(doc, NodeKind::key_factor, std::string(words[rng() % 8]) + " " + std::to_string(i),
                                 std::nullopt, {}, ids));
    }
    for (std::size_t i = 0; i < links; ++i) {
        const auto l = add_link(doc, nodes[i], nodes[i + 1], Polarity::positive, ids);
        attach_evidence(doc, l, EvidenceKind::reference,
                        std::string(words[rng() % 8]) + " observed in " + words[rng() % 8] + " study", "p.1", ids);
    }
    return doc;
}

void BM_BuildIndex(benchmark::State& state) {
    const auto doc = corpus(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(search::build_index(doc));
}
BENCHMARK(BM_BuildIndex)->Arg(100)->Arg(1000);

void BM_Query(benchmark::State& state) {
    const auto doc = corpus(static_cast<std::size_t>(state.range(0)));
    const auto index = search::build_index(doc);
    search::SearchQuery q;
    q.text = "qual stud";
    for (auto _ : state) benchmark::DoNotOptimize(search::query(index, doc, q));
}
BENCHMARK(BM_Query)->Arg(100)->Arg(1000);

}  // namespace
BENCHMARK_MAIN();
