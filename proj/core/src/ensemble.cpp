#include "erw/ensemble.hpp"

#include <algorithm>
#include <atomic>
#include <cstring>
#include <stdexcept>
#include <thread>

namespace erw {

void EnsembleConfig::validate() const {
  if (horizons.empty())
    throw std::invalid_argument("ensemble: empty horizon schedule");
  for (size_t i = 0; i < horizons.size(); ++i) {
    if (horizons[i] < 1)
      throw std::invalid_argument("ensemble: horizons must be >= 1");
    if (i > 0 && horizons[i] <= horizons[i - 1])
      throw std::invalid_argument("ensemble: horizons must strictly increase");
  }
  if (replicas < 2) throw std::invalid_argument("ensemble: need >= 2 replicas");
  if (targets.empty())
    throw std::invalid_argument("ensemble: need at least one target");
  if (mode == WalkMode::DriftHalfSpace && !(drift_p > 0.0 && drift_p <= 1.0))
    throw std::invalid_argument("ensemble: drift probability outside (0,1]");
}

uint64_t EnsembleConfig::fingerprint() const {
  uint64_t d = mix64(master_seed);
  d = mix64(d ^ uint64_t(replicas));
  d = mix64(d ^ uint64_t(mode));
  uint64_t pbits;
  static_assert(sizeof(pbits) == sizeof(drift_p));
  std::memcpy(&pbits, &drift_p, sizeof(pbits));
  d = mix64(d ^ (mode == WalkMode::DriftHalfSpace ? pbits : 0));
  for (uint64_t h : horizons) d = mix64(d ^ h);
  for (const Site& s : targets) d = mix64(d ^ pack_site(s));
  return d;
}

std::string visit_stat_name(const Site& target) {
  return "v_" + std::to_string(target.x) + "_" + std::to_string(target.y) +
         "_" + std::to_string(target.z);
}

void HorizonStats::merge(const HorizonStats& other) {
  for (size_t i = 0; i < visits.size(); ++i) visits[i].merge(other.visits[i]);
  distinct_sites.merge(other.distinct_sites);
  distinct_floor.merge(other.distinct_floor);
  floor_hits.merge(other.floor_hits);
  height.merge(other.height);
  drift_residual5.merge(other.drift_residual5);
  if (other.visit_histogram.size() > visit_histogram.size())
    visit_histogram.resize(other.visit_histogram.size(), 0);
  for (size_t i = 0; i < other.visit_histogram.size(); ++i)
    visit_histogram[i] += other.visit_histogram[i];
}

EnsembleStats::EnsembleStats(const EnsembleConfig& config) : config_(config) {
  config_.validate();
  horizons_.resize(config_.horizons.size());
  for (auto& h : horizons_) h.visits.resize(config_.targets.size());
}

void EnsembleStats::merge(const EnsembleStats& other) {
  if (config_.fingerprint() != other.config_.fingerprint())
    throw std::invalid_argument("ensemble merge: config mismatch");
  for (size_t i = 0; i < horizons_.size(); ++i)
    horizons_[i].merge(other.horizons_[i]);
  replicas_seen_ += other.replicas_seen_;
}

namespace {

// Values snapshotted per (replica, horizon): one visit count per target,
// then N, DF, F, z, 5z+5|Vis|-F.
constexpr size_t kFixedSlots = 5;

template <class Store>
void fill_replica(const EnsembleConfig& config, uint32_t replica,
                  int64_t* out) {
  RngStream rng(config.master_seed, replica);
  WalkState<Store> walk(kOrigin, config.targets, config.mode, config.drift_p);
  const size_t stride = config.targets.size() + kFixedSlots;
  for (size_t h = 0; h < config.horizons.size(); ++h) {
    walk.run(config.horizons[h] - walk.time(), rng);
    int64_t* row = out + h * stride;
    for (size_t i = 0; i < config.targets.size(); ++i)
      row[i] = int64_t(walk.visits(i));
    row[config.targets.size() + 0] = int64_t(walk.distinct_sites());
    row[config.targets.size() + 1] = int64_t(walk.distinct_floor());
    row[config.targets.size() + 2] = int64_t(walk.floor_hits());
    row[config.targets.size() + 3] = int64_t(walk.position().z);
    row[config.targets.size() + 4] = walk.martingale_times5();
  }
}

}  // namespace

EnsembleStats run_ensemble_range(const EnsembleConfig& config, uint32_t first,
                                 uint32_t count) {
  config.validate();
  const size_t stride = config.targets.size() + kFixedSlots;
  const size_t per_replica = config.horizons.size() * stride;
  std::vector<int64_t> slots(size_t(count) * per_replica);

  const uint32_t threads =
      std::max<uint32_t>(1, std::min<uint32_t>(config.threads, count));
  if (threads == 1) {
    for (uint32_t i = 0; i < count; ++i)
      fill_replica<ColumnStore>(config, first + i,
                                slots.data() + size_t(i) * per_replica);
  } else {
    std::atomic<uint32_t> next{0};
    auto worker = [&] {
      for (;;) {
        const uint32_t i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count) return;
        fill_replica<ColumnStore>(config, first + i,
                                  slots.data() + size_t(i) * per_replica);
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (uint32_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  // Ordered fold over the replica index.
  EnsembleStats stats(config);
  for (uint32_t i = 0; i < count; ++i) {
    const int64_t* base = slots.data() + size_t(i) * per_replica;
    for (size_t h = 0; h < config.horizons.size(); ++h) {
      const int64_t* row = base + h * stride;
      HorizonStats& hs = stats.horizons_[h];
      for (size_t k = 0; k < config.targets.size(); ++k)
        hs.visits[k].add(row[k]);
      hs.distinct_sites.add(row[config.targets.size() + 0]);
      hs.distinct_floor.add(row[config.targets.size() + 1]);
      hs.floor_hits.add(row[config.targets.size() + 2]);
      hs.height.add(row[config.targets.size() + 3]);
      hs.drift_residual5.add(row[config.targets.size() + 4]);
      const auto v = uint64_t(row[0]);
      if (v >= hs.visit_histogram.size()) hs.visit_histogram.resize(v + 1, 0);
      ++hs.visit_histogram[v];
    }
  }
  stats.replicas_seen_ = count;
  return stats;
}

EnsembleStats run_ensemble(const EnsembleConfig& config) {
  return run_ensemble_range(config, 0, config.replicas);
}

std::vector<EnsembleStats::Row> EnsembleStats::rows() const {
  std::vector<Row> out;
  const auto emit = [&](uint64_t t, const std::string& stat,
                        const stats::IntAccumulator& acc, double scale) {
    const auto ci = acc.ci95();
    out.push_back(Row{t, stat, acc.mean() * scale, ci.lo * scale,
                      ci.hi * scale, acc.count()});
  };
  for (size_t h = 0; h < horizons_.size(); ++h) {
    const uint64_t t = config_.horizons[h];
    const HorizonStats& hs = horizons_[h];
    for (size_t k = 0; k < config_.targets.size(); ++k)
      emit(t, visit_stat_name(config_.targets[k]), hs.visits[k], 1.0);
    emit(t, "n", hs.distinct_sites, 1.0);
    emit(t, "df", hs.distinct_floor, 1.0);
    emit(t, "f", hs.floor_hits, 1.0);
    emit(t, "z", hs.height, 1.0);
    emit(t, "m", hs.drift_residual5, 0.2);
  }
  return out;
}

std::vector<ReturnsPoint> estimate_returns(const EnsembleStats& stats) {
  std::vector<ReturnsPoint> out;
  for (size_t h = 0; h < stats.horizons().size(); ++h) {
    const auto& acc = stats.at_horizon(h).visits.at(0);
    out.push_back(ReturnsPoint{stats.config().horizons[h], acc.mean(),
                               acc.ci95()});
  }
  return out;
}

}  // namespace erw
