#include "mutualcover/maxflow.hpp"

#include <algorithm>
#include <limits>
#include <queue>

#include "mutualcover/error.hpp"

namespace mutualcover {

std::size_t FlowNetwork::add_node() {
  adj_.emplace_back();
  return adj_.size() - 1;
}

std::size_t FlowNetwork::add_edge(std::size_t from, std::size_t to,
                                  Capacity cap) {
  require(from < adj_.size() && to < adj_.size(), ErrorKind::kInvalidArgument,
          "edge endpoint out of range");
  require(cap >= 0, ErrorKind::kInvalidArgument, "negative capacity");
  const std::size_t e = to_.size() / 2;
  adj_[from].push_back(to_.size());
  to_.push_back(to);
  cap_.push_back(cap);
  adj_[to].push_back(to_.size());
  to_.push_back(from);
  cap_.push_back(0);
  return e;
}

bool FlowNetwork::levels(std::size_t s, std::size_t t) {
  level_.assign(adj_.size(), -1);
  level_[s] = 0;
  std::queue<std::size_t> q;
  q.push(s);
  while (!q.empty()) {
    const std::size_t v = q.front();
    q.pop();
    for (std::size_t a : adj_[v]) {
      if (cap_[a] > 0 && level_[to_[a]] < 0) {
        level_[to_[a]] = level_[v] + 1;
        q.push(to_[a]);
      }
    }
  }
  return level_[t] >= 0;
}

FlowNetwork::Capacity FlowNetwork::push(std::size_t v, std::size_t t,
                                        Capacity limit) {
  if (v == t) return limit;
  for (std::size_t& i = next_[v]; i < adj_[v].size(); ++i) {
    const std::size_t a = adj_[v][i];
    const std::size_t w = to_[a];
    if (cap_[a] <= 0 || level_[w] != level_[v] + 1) continue;
    const Capacity got = push(w, t, std::min(limit, cap_[a]));
    if (got > 0) {
      cap_[a] -= got;
      cap_[a ^ 1] += got;
      return got;
    }
  }
  return 0;
}

FlowNetwork::Capacity FlowNetwork::solve(std::size_t s, std::size_t t) {
  require(s != t, ErrorKind::kInvalidArgument, "source equals sink");
  Capacity total = 0;
  while (levels(s, t)) {
    next_.assign(adj_.size(), 0);
    while (const Capacity f =
               push(s, t, std::numeric_limits<Capacity>::max())) {
      total += f;
    }
  }
  return total;
}

}  // namespace mutualcover
