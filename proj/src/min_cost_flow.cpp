#include "otnav/min_cost_flow.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

namespace otnav {

MinCostFlow::MinCostFlow(int node_count) : node_count_(node_count) {
  if (node_count < 0) throw std::invalid_argument("negative node count");
}

int MinCostFlow::add_arc(int from, int to, Value capacity, Value cost) {
  if (from < 0 || from >= node_count_ || to < 0 || to >= node_count_) {
    throw std::out_of_range("arc endpoint out of range");
  }
  if (cost < 0) throw std::invalid_argument("MinCostFlow needs non-negative arc costs");
  const int id = static_cast<int>(arcs_.size());
  arcs_.push_back({to, capacity, cost});
  arcs_.push_back({from, 0, -cost});
  adjacency_ready_ = false;
  return id;
}

void MinCostFlow::build_adjacency() {
  first_.assign(static_cast<std::size_t>(node_count_) + 1, 0);
  for (int a = 0; a < arc_count(); ++a) ++first_[arcs_[a ^ 1].to + 1];
  for (int v = 0; v < node_count_; ++v) first_[v + 1] += first_[v];
  out_.resize(arcs_.size());
  std::vector<int> fill(first_.begin(), first_.end() - 1);
  for (int a = 0; a < arc_count(); ++a) out_[fill[arcs_[a ^ 1].to]++] = a;
  adjacency_ready_ = true;
}

MinCostFlow::Result MinCostFlow::solve(int source, int sink, Value max_flow) {
  if (!adjacency_ready_) build_adjacency();
  constexpr Value kInf = std::numeric_limits<Value>::max() / 4;

  std::vector<Value> potential(node_count_, 0);
  std::vector<Value> dist(node_count_);
  std::vector<int> parent_arc(node_count_);
  std::vector<char> done(node_count_);
  using Entry = std::pair<Value, int>;

  Result result;
  while (result.flow < max_flow) {
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(parent_arc.begin(), parent_arc.end(), -1);
    std::fill(done.begin(), done.end(), 0);
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    dist[source] = 0;
    heap.emplace(0, source);
    while (!heap.empty()) {
      const auto [d, u] = heap.top();
      heap.pop();
      if (done[u]) continue;
      done[u] = 1;
      for (int i = first_[u]; i < first_[u + 1]; ++i) {
        const int a = out_[i];
        const Arc& arc = arcs_[a];
        if (arc.capacity <= 0) continue;
        const Value nd = d + arc.cost + potential[u] - potential[arc.to];
        if (nd < dist[arc.to]) {
          dist[arc.to] = nd;
          parent_arc[arc.to] = a;
          heap.emplace(nd, arc.to);
        }
      }
    }
    if (dist[sink] >= kInf) break;
    for (int v = 0; v < node_count_; ++v) {
      if (dist[v] < kInf) potential[v] += dist[v];
    }

    Value push = max_flow - result.flow;
    for (int v = sink; v != source; v = arcs_[parent_arc[v] ^ 1].to) {
      push = std::min(push, arcs_[parent_arc[v]].capacity);
    }
    for (int v = sink; v != source; v = arcs_[parent_arc[v] ^ 1].to) {
      const int a = parent_arc[v];
      arcs_[a].capacity -= push;
      arcs_[a ^ 1].capacity += push;
      result.cost += push * arcs_[a].cost;
    }
    result.flow += push;
  }
  return result;
}

}  // namespace otnav
