#pragma once

#include <algorithm>
#include <cassert>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "erw/rng.hpp"
#include "erw/site.hpp"
#include "erw/visited_store.hpp"

namespace erw {

enum class WalkMode : uint8_t {
  HalfSpace,       // floor 1/5-law, visited SRW, new vertex drops
  Symmetric,       // full space, mirror-visited, excited steps toward z = 0
  DriftHalfSpace,  // experimental: new vertex drops only with probability p
};

/// Classifies a vertex against a visited set: floor at z == 0, otherwise
/// visited or new by membership. Rejects z < 0 in half-space mode.
template <class Store>
StepKind classify(const Site& pos, const Store& store, bool half_space = true) {
  if (half_space && pos.z < 0)
    throw std::domain_error("classify: z < 0 in half-space mode");
  if (pos.z == 0) return StepKind::Floor;
  const Site key{pos.x, pos.y, pos.z < 0 ? -pos.z : pos.z};
  return store.contains(key) ? StepKind::Visited : StepKind::New;
}

/// One walking process: position, visited set and running counters.
///
/// Counter conventions (t is the number of completed moves):
///   floor_hits()     #{u < t : z(u) == 0}
///   new_sites()      #{u < t : vertex at time u was new}; equals |Vis(t)|
///   distinct_floor() distinct floor points occupied at times u < t
///   distinct_sites() distinct vertices occupied at times u < t
///   visits(i)        #{0 <= u <= t : position(u) == target i}, so a walk
///                    started on its target begins with one visit.
template <class Store>
class WalkState {
 public:
  explicit WalkState(Site start, std::vector<Site> targets = {kOrigin},
                     WalkMode mode = WalkMode::HalfSpace, double drift_p = 1.0)
      : pos_(start),
        start_(start),
        mode_(mode),
        drift_p_(drift_p),
        targets_(std::move(targets)),
        visits_(targets_.size(), 0) {
    if (mode != WalkMode::Symmetric && start.z < 0)
      throw std::domain_error("WalkState: start below the floor");
    if (mode == WalkMode::DriftHalfSpace && !(drift_p > 0.0 && drift_p <= 1.0))
      throw std::domain_error("WalkState: drift probability outside (0, 1]");
    for (size_t i = 0; i < targets_.size(); ++i)
      if (pos_ == targets_[i]) visits_[i] = 1;
  }

  /// Seeds the visited set from a configuration (sorted insertion keeps the
  /// column intervals contiguous). Callers validate legality beforehand.
  void preload(std::span<const Site> config) {
    std::vector<Site> sorted(config.begin(), config.end());
    std::sort(sorted.begin(), sorted.end(), [](const Site& a, const Site& b) {
      if (a.x != b.x) return a.x < b.x;
      if (a.y != b.y) return a.y < b.y;
      return a.z < b.z;
    });
    for (const Site& s : sorted) store_.insert(s);
  }

  void step(RngStream& rng) {
    switch (mode_) {
      case WalkMode::HalfSpace: {
        if (pos_.z == 0) {
          depart_floor();
          move(rng.below(5));
        } else if (store_.contains(pos_)) {
          move(rng.below(6));
        } else {
          depart_new(pos_);
          move(5);
        }
        break;
      }
      case WalkMode::Symmetric:
        step_symmetric(rng);
        break;
      case WalkMode::DriftHalfSpace: {
        if (pos_.z == 0) {
          depart_floor();
          move(rng.below(5));
        } else if (store_.contains(pos_)) {
          move(rng.below(6));
        } else {
          depart_new(pos_);
          move(rng.next_unit() < drift_p_ ? 5 : int(rng.below(6)));
        }
        break;
      }
    }
    assert(mode_ == WalkMode::Symmetric || pos_.z >= 0);
  }

  void run(uint64_t steps, RngStream& rng) {
    for (uint64_t i = 0; i < steps; ++i) step(rng);
  }

  StepKind kind() const {
    return classify(pos_, store_, mode_ != WalkMode::Symmetric);
  }

  /// Applies one move by index into kMoves, recording the departure under
  /// `k`. Used by the coupled stepper, which picks moves for both walkers.
  void apply_move(StepKind k, int m) {
    assert(k == kind());
    switch (k) {
      case StepKind::Floor:
        assert(m >= 0 && m < 5);
        depart_floor();
        break;
      case StepKind::Visited:
        assert(m >= 0 && m < 6);
        break;
      case StepKind::New:
        assert(m == 5 || (mode_ == WalkMode::Symmetric && m == 4));
        depart_new(canonical(pos_));
        break;
    }
    move(m);
  }

  const Site& position() const { return pos_; }
  const Site& start() const { return start_; }
  uint64_t time() const { return t_; }
  uint64_t floor_hits() const { return floor_hits_; }
  uint64_t new_sites() const { return new_sites_; }
  uint64_t distinct_floor() const { return distinct_floor_; }
  uint64_t distinct_sites() const { return new_sites_ + distinct_floor_; }
  uint64_t visits(size_t i = 0) const { return visits_.at(i); }
  const std::vector<Site>& targets() const { return targets_; }
  WalkMode mode() const { return mode_; }

  /// 5*z(t) + 5*new_sites(t) - floor_hits(t); zero-mean for half-space
  /// walks, kept as an exact integer.
  int64_t martingale_times5() const {
    return 5 * int64_t(pos_.z) + 5 * int64_t(new_sites_) -
           int64_t(floor_hits_);
  }

  const Store& store() const { return store_; }
  Store& store() { return store_; }

  /// Digest of position, clock, counters and visited set; two walks with
  /// equal digests at a checkpoint are in identical states.
  uint64_t state_digest() const {
    uint64_t d = mix64(pack_site(pos_));
    d = mix64(d ^ t_);
    d = mix64(d ^ floor_hits_);
    d = mix64(d ^ new_sites_);
    d = mix64(d ^ distinct_floor_);
    for (uint64_t v : visits_) d = mix64(d ^ v);
    return mix64(d ^ store_.fingerprint());
  }

 private:
  static Site canonical(const Site& s) {
    return Site{s.x, s.y, s.z < 0 ? -s.z : s.z};
  }

  void step_symmetric(RngStream& rng) {
    if (pos_.z == 0) {
      depart_floor();
      const uint32_t r = rng.below(10);
      move(r < 8 ? int(r >> 1) : (r == 8 ? 4 : 5));
    } else if (store_.contains(canonical(pos_))) {
      move(rng.below(6));
    } else {
      depart_new(canonical(pos_));
      move(pos_.z > 0 ? 5 : 4);  // excited step heads toward the middle
    }
  }

  void depart_floor() {
    ++floor_hits_;
    if (floor_seen_.test_and_set(pos_.x, pos_.y)) ++distinct_floor_;
  }

  void depart_new(const Site& key) {
    ++new_sites_;
    store_.insert(key);
  }

  void move(int m) {
    pos_.x += kMoves[m][0];
    pos_.y += kMoves[m][1];
    pos_.z += kMoves[m][2];
    ++t_;
    for (size_t i = 0; i < targets_.size(); ++i)
      if (pos_ == targets_[i]) ++visits_[i];
  }

  Site pos_;
  Site start_;
  WalkMode mode_;
  double drift_p_;
  Store store_;
  FloorMap floor_seen_;
  uint64_t t_ = 0;
  uint64_t floor_hits_ = 0;
  uint64_t new_sites_ = 0;
  uint64_t distinct_floor_ = 0;
  std::vector<Site> targets_;
  std::vector<uint64_t> visits_;
};

/// Image of a path under (x, y, z) -> (x, y, |z|). Folding a symmetric walk
/// yields a half-space walk in distribution.
inline std::vector<Site> fold(std::span<const Site> path) {
  std::vector<Site> out;
  out.reserve(path.size());
  for (const Site& s : path)
    out.push_back(Site{s.x, s.y, s.z < 0 ? -s.z : s.z});
  return out;
}

}  // namespace erw
