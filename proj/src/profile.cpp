#include "ftl/profile.hpp"

#include <algorithm>

namespace ftl {

State Profile::at(double y) const {
  const auto it = std::upper_bound(x.begin(), x.end(), y);
  return u[static_cast<std::size_t>(it - x.begin())];
}

Profile Profile::simplified() const {
  Profile p;
  p.u.push_back(u.front());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const State &next = u[k + 1];
    if (!p.x.empty() && x[k] == p.x.back()) {
      // zero-length cell: the later state wins
      p.u.back() = next;
      if (p.u.size() >= 2 && p.u[p.u.size() - 2] == next) {
        p.u.pop_back();
        p.x.pop_back();
      }
      continue;
    }
    if (next == p.u.back()) continue;
    p.x.push_back(x[k]);
    p.u.push_back(next);
  }
  return p;
}

Profile constant_profile(const State &s) {
  Profile p;
  p.u.push_back(s);
  return p;
}

}  // namespace ftl
