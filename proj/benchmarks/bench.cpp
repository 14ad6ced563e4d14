#include <benchmark/benchmark.h>

#include <fstream>
#include <sstream>

#include "ptsem/maximality.hpp"
#include "ptsem/traces.hpp"

namespace {

using namespace ptsem;

Net load(const char* name) {
  std::ifstream in(std::string(PTSEM_FIXTURES_DIR) + "/" + name, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_net(buf.str());
}

void BM_Explore(benchmark::State& state) {
  Net net = load("fig2.net");
  for (auto _ : state) {
    auto result = explore(net);
    benchmark::DoNotOptimize(result.sequences.size());
  }
}
BENCHMARK(BM_Explore);

void BM_CanonicalForm(benchmark::State& state) {
  Net net = load("fig2.net");
  Process p = proc(net, net.word("a b d c"), TokenPolicy::Fifo);
  for (auto _ : state) {
    auto form = canonical_form(p);
    benchmark::DoNotOptimize(form.size());
  }
}
BENCHMARK(BM_CanonicalForm);

void BM_ClassIdentify(benchmark::State& state) {
  Net net = load("fig2.net");
  ExploreResult fs = explore(net);
  for (auto _ : state) {
    ClassCache cache(net);
    for (const auto& seq : fs.sequences) {
      benchmark::DoNotOptimize(cache.identify(proc(net, seq, TokenPolicy::Fifo)));
    }
  }
}
BENCHMARK(BM_ClassIdentify);

void BM_TraceClosure(benchmark::State& state) {
  Net net = load("fig2.net");
  auto word = net.word("a b d c");
  for (auto _ : state) {
    auto cls = trace_class(net, word);
    benchmark::DoNotOptimize(cls.members.size());
  }
}
BENCHMARK(BM_TraceClosure);

void BM_Correspondence(benchmark::State& state) {
  Net net = load("fig2.net");
  for (auto _ : state) {
    auto report = correspondence_check(net, 4);
    benchmark::DoNotOptimize(report.trace_class_count);
  }
}
BENCHMARK(BM_Correspondence);

void BM_EnumerateMaximal(benchmark::State& state) {
  Net net = load("fig1.net");
  for (auto _ : state) {
    auto report = enumerate_maximal(net);
    benchmark::DoNotOptimize(report.maximal_class_count);
  }
}
BENCHMARK(BM_EnumerateMaximal);

}  // namespace

BENCHMARK_MAIN();
