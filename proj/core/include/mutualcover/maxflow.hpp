#pragma once

// Integer maximum flow (Dinic). Edges can be added between solves; a later
// solve augments the flow already present.

#include <cstdint>
#include <vector>

namespace mutualcover {

class FlowNetwork {
 public:
  using Capacity = std::int64_t;

  explicit FlowNetwork(std::size_t nodes = 0) : adj_(nodes) {}

  std::size_t add_node();
  std::size_t nodes() const { return adj_.size(); }
  std::size_t edges() const { return to_.size() / 2; }

  // Returns an edge id usable with flow().
  std::size_t add_edge(std::size_t from, std::size_t to, Capacity cap);

  // Pushes as much additional flow from s to t as the residual graph allows
  // and returns the amount pushed by this call.
  Capacity solve(std::size_t s, std::size_t t);

  Capacity flow(std::size_t edge) const { return cap_[2 * edge + 1]; }
  Capacity capacity(std::size_t edge) const {
    return cap_[2 * edge] + cap_[2 * edge + 1];
  }

 private:
  bool levels(std::size_t s, std::size_t t);
  Capacity push(std::size_t v, std::size_t t, Capacity limit);

  // Arc 2e is the forward half of edge e, arc 2e+1 its reverse; cap_ holds
  // residual capacities.
  std::vector<std::vector<std::size_t>> adj_;
  std::vector<std::size_t> to_;
  std::vector<Capacity> cap_;
  std::vector<int> level_;
  std::vector<std::size_t> next_;
};

}  // namespace mutualcover
