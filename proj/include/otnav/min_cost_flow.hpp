#pragma once

#include <cstdint>
#include <vector>

namespace otnav {

// Successive shortest paths with node potentials (Dijkstra on reduced costs).
// Arc costs must be non-negative. Arcs out of a node are scanned in insertion
// order and ties in the heap break toward the smaller node id, so results are
// deterministic for a fixed insertion order.
class MinCostFlow {
 public:
  using Value = std::int64_t;

  struct Result {
    Value flow = 0;
    Value cost = 0;
  };

  explicit MinCostFlow(int node_count);

  // Returns the arc id; its reverse residual arc is id ^ 1.
  int add_arc(int from, int to, Value capacity, Value cost);

  // Pushes up to `max_flow` units from source to sink along successively
  // cheapest augmenting paths.
  Result solve(int source, int sink, Value max_flow);

  Value flow(int arc) const { return arcs_[arc ^ 1].capacity; }
  int arc_from(int arc) const { return arcs_[arc ^ 1].to; }
  int arc_to(int arc) const { return arcs_[arc].to; }
  int node_count() const { return node_count_; }
  int arc_count() const { return static_cast<int>(arcs_.size()); }

 private:
  struct Arc {
    int to;
    Value capacity;
    Value cost;
  };

  void build_adjacency();

  int node_count_;
  std::vector<Arc> arcs_;
  std::vector<int> first_;      // CSR offsets into out_
  std::vector<int> out_;        // arc ids grouped by tail node
  bool adjacency_ready_ = false;
};

}  // namespace otnav
