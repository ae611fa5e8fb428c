#include "erw/legality.hpp"

#include <algorithm>
#include <unordered_set>

namespace erw {

namespace {

std::string site_str(const Site& s) {
  return "(" + std::to_string(s.x) + "," + std::to_string(s.y) + "," +
         std::to_string(s.z) + ")";
}

}  // namespace

LegalityVerdict is_legal_configuration(std::span<const Site> config,
                                       Connectivity convention) {
  std::vector<Site> sites(config.begin(), config.end());
  std::sort(sites.begin(), sites.end(), [](const Site& a, const Site& b) {
    if (a.x != b.x) return a.x < b.x;
    if (a.y != b.y) return a.y < b.y;
    return a.z < b.z;
  });
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());

  for (const Site& s : sites)
    if (s.z < 1)
      return {false, "contains floor or sub-floor vertex " + site_str(s), s};

  std::unordered_set<Site, SiteHash> member(sites.begin(), sites.end());
  for (const Site& s : sites)
    if (s.z > 1 && !member.count(Site{s.x, s.y, s.z - 1}))
      return {false,
              "not downward-closed: " + site_str(s) + " lacks " +
                  site_str(Site{s.x, s.y, s.z - 1}),
              s};

  if (sites.empty()) return {true, "", std::nullopt};

  // Flood components over the 6-neighbourhood.
  std::unordered_set<Site, SiteHash> seen;
  size_t components = 0;
  for (const Site& root : sites) {
    if (seen.count(root)) continue;
    ++components;
    bool touches_floor_level = false;
    std::vector<Site> stack{root};
    seen.insert(root);
    while (!stack.empty()) {
      const Site cur = stack.back();
      stack.pop_back();
      if (cur.z == 1) touches_floor_level = true;
      for (int m = 0; m < 6; ++m) {
        const Site nb = offset(cur, m);
        if (member.count(nb) && seen.insert(nb).second) stack.push_back(nb);
      }
    }
    if (convention == Connectivity::FloorAdjoined && !touches_floor_level)
      return {false,
              "component at " + site_str(root) + " not anchored to the floor",
              root};
  }

  if (convention == Connectivity::Strict && components > 1)
    return {false,
            "configuration splits into " + std::to_string(components) +
                " components",
            std::nullopt};

  return {true, "", std::nullopt};
}

}  // namespace erw
