// Times the OpenMP kernels against their serial references and checks that
// both produce the same result.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <random>
#include <string>
#include <thread>

#include <nlohmann/json.hpp>

#include "factjudge/judge_pipeline.hpp"
#include "factjudge/serial/reference.hpp"
#include "factjudge/stats_tests.hpp"
#include "factjudge/verdict_parser.hpp"

using namespace factjudge;

namespace {

double best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    best = std::min(best, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count());
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms, bool same) {
  std::printf("%-22s serial %9.2f ms  parallel %9.2f ms  speedup %5.2fx  %s\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, same ? "match" : "MISMATCH");
}

void bench_tukey(int groups, int per_group) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> noise(0.0, 1.0);
  std::vector<LabeledGroup> g;
  for (int i = 0; i < groups; ++i) {
    LabeledGroup lg{"g" + std::to_string(100 + i), std::vector<double>(per_group)};
    for (auto& x : lg.values) x = noise(rng) + 0.05 * i;
    g.push_back(std::move(lg));
  }
  std::vector<PairwiseComparison> a, b;
  const double s = best_of(3, [&] { a = serial::tukey_hsd(g); });
  const double p = best_of(3, [&] { b = tukey_hsd(g); });
  const std::string name = "tukey k=" + std::to_string(groups);
  report(name.c_str(), s, p, a == b);
}

// Judge calls dominate a real run, so the transport sleeps to stand in for
// network latency.
void bench_pipeline(int records, int latency_ms, int threads) {
  std::vector<EvalRecord> data;
  for (int i = 0; i < records; ++i) {
    const std::string id = std::to_string(1000 + i);
    data.push_back({"r" + id, "question " + id, "gold answer " + id, "candidate answer " + id, std::nullopt, i % 2 == 0});
  }
  Verdict v{0.9, 0.8, 0, 0, 1, 0.85, "fine"};
  const std::string reply =
      nlohmann::json{{"choices", {{{"message", {{"role", "assistant"}, {"content", serialize_verdict(v)}}}}}}}.dump();
  GatewayOptions opts;
  opts.transport = std::make_shared<CallbackTransport>([&](const HttpRequest&) {
    std::this_thread::sleep_for(std::chrono::milliseconds(latency_ms));
    return HttpReply{200, reply, TransportFailure::None, ""};
  });
  ProviderConfig provider;
  provider.name = "bench";
  provider.endpoint_url = "http://bench.invalid/v1/chat/completions";
  provider.model = "bench-model";

  RunResult a, b;
  const double s = best_of(1, [&] {
    LlmGateway gw(opts);
    CallCache cache;
    a = serial::run_evaluation(data, builtin_weighted_template(), provider, {}, gw, cache);
  });
  const double p = best_of(1, [&] {
    LlmGateway gw(opts);
    CallCache cache;
    b = run_evaluation(data, builtin_weighted_template(), provider, {}, threads, gw, cache);
  });
  const std::string name = "pipeline n=" + std::to_string(records) + " t=" + std::to_string(threads);
  report(name.c_str(), s, p, a == b);
}

}  // namespace

int main(int argc, char** argv) {
  const int threads = argc > 1 ? std::atoi(argv[1]) : 8;
  bench_tukey(6, 200);
  bench_tukey(24, 100);
  bench_tukey(48, 50);
  bench_pipeline(192, 5, threads);
  return 0;
}
