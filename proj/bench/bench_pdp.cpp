#include "paarc/enforcement/pdp.hpp"
#include "support/gen.hpp"

#include <benchmark/benchmark.h>

using namespace paarc;
using namespace paarc::enforcement;

namespace {

struct Workload {
    PolicyStoreSnapshot snap;
    std::vector<ServiceRequest> reqs;
};

const Workload& workload(std::size_t n) {
    static std::map<std::size_t, Workload> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    gen::Rng rng(2024);
    Workload w;
    w.snap.version = 1;
    for (int i = 0; i < 24; ++i) w.snap.policies.push_back(gen::random_policy(rng, "p" + std::to_string(i), 6));
    for (std::size_t i = 0; i < n; ++i) {
        ServiceRequest r;
        r.request_id = "r" + std::to_string(i);
        r.requester = "av-" + std::to_string(i % 50);
        r.service_id = "fleet";
        r.action = i % 2 ? "enroll" : "telemetry";
        r.attrs = gen::random_context(rng);
        w.reqs.push_back(std::move(r));
    }
    return cache.emplace(n, std::move(w)).first->second;
}

void BM_DecideBatchSerial(benchmark::State& state) {
    const auto& w = workload(static_cast<std::size_t>(state.range(0)));
    Pdp pdp;
    for (auto _ : state) benchmark::DoNotOptimize(decide_batch_serial(pdp, w.reqs, w.snap));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_DecideBatchParallel(benchmark::State& state) {
    const auto& w = workload(static_cast<std::size_t>(state.range(0)));
    Pdp pdp;
    for (auto _ : state) benchmark::DoNotOptimize(decide_batch(pdp, w.reqs, w.snap));
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_DecideBatchSerial)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();
BENCHMARK(BM_DecideBatchParallel)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond)->UseRealTime();

BENCHMARK_MAIN();
