#include "erw/coupling.hpp"

#include <unordered_set>

#include "erw/legality.hpp"
#include "erw/stats.hpp"

namespace erw {

namespace {

std::string site_str(const Site& s) {
  return "(" + std::to_string(s.x) + "," + std::to_string(s.y) + "," +
         std::to_string(s.z) + ")";
}

}  // namespace

CouplingState::CouplingState(Site w, std::span<const Site> vis_r,
                             std::span<const Site> vis_s, Site target,
                             bool checked)
    : r_(w, {target}),
      s_(w, {target}),
      target_(target),
      checked_(checked) {
  if (w.z < 0)
    throw std::invalid_argument("coupling: start below the floor");
  if (target.z != 0)
    throw std::invalid_argument("coupling: target must be a floor vertex");
  if (const auto verdict = is_legal_configuration(vis_r); !verdict)
    throw std::invalid_argument("coupling: lower configuration illegal: " +
                                verdict.reason);
  if (const auto verdict = is_legal_configuration(vis_s); !verdict)
    throw std::invalid_argument("coupling: upper configuration illegal: " +
                                verdict.reason);
  std::unordered_set<Site, SiteHash> upper(vis_s.begin(), vis_s.end());
  for (const Site& s : vis_r)
    if (!upper.count(s))
      throw std::invalid_argument("coupling: configurations not nested at " +
                                  site_str(s));
  r_.preload(vis_r);
  s_.preload(vis_s);
  if (w == target_) visits_r_ = visits_s_ = 1;
}

void CouplingState::step(RngStream& rng) {
  const StepKind kind_r = r_.kind();
  const StepKind kind_s = s_.kind();

  if (checked_ && r_.position() == s_.position() &&
      kind_s == StepKind::New && kind_r == StepKind::Visited)
    throw CouplingViolation(5, tau_,
                            "shared vertex new for upper, visited for lower");

  const Site before_r = r_.position();
  bool moved_r = false, moved_s = false;

  if (kind_r == kind_s) {
    int m;
    if (kind_r == StepKind::New)
      m = 5;
    else if (kind_r == StepKind::Floor)
      m = int(rng.below(5));
    else
      m = int(rng.below(6));
    r_.apply_move(kind_r, m);
    s_.apply_move(kind_s, m);
    moved_r = moved_s = true;
  } else if (kind_r == StepKind::New) {
    r_.apply_move(kind_r, 5);
    moved_r = true;
  } else if (kind_s == StepKind::New) {
    s_.apply_move(kind_s, 5);
    moved_s = true;
  } else {
    // one visited, one on the floor: the visited walker leads
    const bool r_leads = kind_r == StepKind::Visited;
    const int m = int(rng.below(6));
    if (r_leads) {
      r_.apply_move(StepKind::Visited, m);
      moved_r = true;
      if (m != 5) {
        s_.apply_move(StepKind::Floor, m);
        moved_s = true;
      }
    } else {
      s_.apply_move(StepKind::Visited, m);
      moved_s = true;
      if (m != 5) {
        r_.apply_move(StepKind::Floor, m);
        moved_r = true;
      }
    }
  }

  ++tau_;
  if (!moved_r) ++wait_r_;
  if (!moved_s) ++wait_s_;
  if (checked_ && kind_r == StepKind::New && moved_r)
    pending_subset_.push_back(before_r);

  if (moved_r && r_.position() == target_ && r_.time() <= horizon_)
    ++visits_r_;
  if (moved_s && s_.position() == target_ && s_.time() <= horizon_)
    ++visits_s_;

  if (checked_) check_invariants();
}

void CouplingState::check_invariants() {
  const Site pr = r_.position();
  const Site ps = s_.position();
  if (pr.x != ps.x || pr.y != ps.y)
    throw CouplingViolation(1, tau_, "lateral positions diverged " +
                                         site_str(pr) + " vs " + site_str(ps));
  if (int64_t(pr.z) - int64_t(wait_r_) != int64_t(ps.z) - int64_t(wait_s_))
    throw CouplingViolation(2, tau_, "z minus wait mismatch");
  if (pr.z > ps.z)
    throw CouplingViolation(3, tau_, "lower walker above upper walker");
  if (ps.z == 0 && pr != ps)
    throw CouplingViolation(3, tau_, "upper on floor but positions differ");
  if (tau_ != r_.time() + wait_r_ || tau_ != s_.time() + wait_s_)
    throw CouplingViolation(2, tau_, "clock bookkeeping broken");
  if (ps == target_ && pr != target_)
    throw CouplingViolation(3, tau_, "upper at target without lower");
  if (s_.kind() != StepKind::New) {
    if (!s_.store().downward_closed())
      throw CouplingViolation(4, tau_, "upper visited set not closed");
    for (const Site& site : pending_subset_)
      if (!s_.store().contains(site))
        throw CouplingViolation(
            4, tau_, "lower visited " + site_str(site) + " missing in upper");
    pending_subset_.clear();
  }
}

DominanceReport run_coupling(Site w, std::span<const Site> vis_r,
                             std::span<const Site> vis_s, uint64_t t, Site v,
                             bool checked, RngStream& rng) {
  CouplingState pair(w, vis_r, vis_s, v, checked);
  pair.set_horizon(t);
  DominanceReport report;
  try {
    while (pair.real_time_lower() < t || pair.real_time_upper() < t)
      pair.step(rng);
  } catch (const CouplingViolation& violation) {
    report.violation = violation.what();
  }
  report.visits_lower = pair.capped_visits_lower();
  report.visits_upper = pair.capped_visits_upper();
  report.wait_lower = pair.wait_lower();
  report.wait_upper = pair.wait_upper();
  report.coupling_steps = pair.tau();
  report.dominance_ok =
      !report.violation && report.visits_lower >= report.visits_upper;
  return report;
}

ConditionedVisitReport conditioned_visit_bound_experiment(
    Site v, uint64_t t, uint32_t replicas, uint64_t master_seed,
    uint32_t min_events) {
  if (v.z != 0)
    throw std::invalid_argument("conditioned bound: v must be a floor vertex");

  stats::IntAccumulator conditioned;
  stats::IntAccumulator origin_returns;

  // Reference side: fresh origin walks, replica indices offset so the two
  // ensembles never share a stream.
  for (uint32_t rep = 0; rep < replicas; ++rep) {
    RngStream rng(master_seed, uint64_t(rep) | (uint64_t(1) << 40));
    WalkState<ColumnStore> walk(kOrigin, {kOrigin});
    walk.run(t, rng);
    origin_returns.add(int64_t(walk.visits(0)));
  }

  ConditionedVisitReport report;
  report.replicas = replicas;
  report.origin_mean = origin_returns.mean();
  report.origin_se = origin_returns.std_error();

  if (v == kOrigin) {
    // Conditioning on a visit to the start is vacuous; the two experiments
    // are the same one.
    report.conditioned_mean = report.origin_mean;
    report.conditioned_se = report.origin_se;
    report.conditioning_events = replicas;
    report.enough_events = true;
    return report;
  }

  for (uint32_t rep = 0; rep < replicas; ++rep) {
    RngStream rng(master_seed, rep);
    WalkState<ColumnStore> walk(kOrigin, {v});
    uint64_t u = 0;
    for (; u < t && walk.visits(0) == 0; ++u) walk.step(rng);
    if (walk.visits(0) == 0) continue;  // never reached v
    walk.run(t, rng);                   // t further moves from the hit
    conditioned.add(int64_t(walk.visits(0)));
  }
  report.conditioning_events = conditioned.count();
  report.conditioned_mean = conditioned.mean();
  report.conditioned_se = conditioned.std_error();
  report.enough_events = conditioned.count() >= min_events;
  return report;
}

}  // namespace erw
