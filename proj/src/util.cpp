#include "svp/util.hpp"

#include <algorithm>

namespace svp {

std::vector<std::vector<int>> scc_components(int n, const std::function<bool(int, int)>& edge) {
  // pass 1: finish order on the forward graph
  std::vector<int> order;
  order.reserve(std::size_t(n));
  std::vector<char> seen(std::size_t(n), 0);
  for (int root = 0; root < n; ++root) {
    if (seen[std::size_t(root)]) continue;
    std::vector<std::pair<int, int>> stack{{root, 0}};
    seen[std::size_t(root)] = 1;
    while (!stack.empty()) {
      int u = stack.back().first;
      bool descended = false;
      while (stack.back().second < n) {
        int v = stack.back().second++;
        if (edge(u, v) && !seen[std::size_t(v)]) {
          seen[std::size_t(v)] = 1;
          stack.push_back({v, 0});
          descended = true;
          break;
        }
      }
      if (!descended) {
        order.push_back(u);
        stack.pop_back();
      }
    }
  }
  // pass 2: reverse reachability in decreasing finish order
  std::vector<std::vector<int>> components;
  std::fill(seen.begin(), seen.end(), 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    if (seen[std::size_t(*it)]) continue;
    std::vector<int> comp, stack{*it};
    seen[std::size_t(*it)] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      comp.push_back(u);
      for (int v = 0; v < n; ++v)
        if (edge(v, u) && !seen[std::size_t(v)]) {
          seen[std::size_t(v)] = 1;
          stack.push_back(v);
        }
    }
    std::sort(comp.begin(), comp.end());
    components.push_back(std::move(comp));
  }
  return components;
}

}  // namespace svp
