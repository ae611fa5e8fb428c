#include "erw/cylinder.hpp"

#include <algorithm>
#include <atomic>
#include <stdexcept>
#include <thread>

#include "erw/rng.hpp"
#include "erw/visited_store.hpp"
#include "erw/walk.hpp"

namespace erw {

CylinderExperiment run_cylinder_experiment(uint64_t t, int32_t radius,
                                           uint32_t replicas,
                                           uint64_t master_seed,
                                           uint32_t threads) {
  if (radius < 1)
    throw std::invalid_argument("cylinder experiment: radius must be >= 1");
  if (t < 2 || replicas < 2)
    throw std::invalid_argument("cylinder experiment: trivial sizes");

  std::vector<uint32_t> counts(replicas, 0);
  const auto run_replica = [&](uint32_t rep) {
    RngStream rng(master_seed, rep);
    WalkState<ColumnStore> walk(kOrigin, {kOrigin});
    CylinderVisitCounter counter(radius);
    for (uint64_t u = 1; u < t; ++u) {
      walk.step(rng);
      counter.observe(walk.position());
    }
    counts[rep] = uint32_t(counter.count());
  };

  const uint32_t workers = std::max<uint32_t>(1, std::min(threads, replicas));
  if (workers == 1) {
    for (uint32_t rep = 0; rep < replicas; ++rep) run_replica(rep);
  } else {
    std::atomic<uint32_t> next{0};
    auto worker = [&] {
      for (;;) {
        const uint32_t rep = next.fetch_add(1, std::memory_order_relaxed);
        if (rep >= replicas) return;
        run_replica(rep);
      }
    };
    std::vector<std::thread> pool;
    for (uint32_t i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  CylinderExperiment out;
  out.t = t;
  out.radius = radius;
  out.replicas = replicas;
  for (uint32_t c : counts) {
    if (c >= out.histogram.size()) out.histogram.resize(size_t(c) + 1, 0);
    ++out.histogram[c];
  }
  out.tail = fit::tail_fit(out.histogram, fit::log_floor(double(t)));
  return out;
}

}  // namespace erw
