#pragma once

// Dinic's maximum-flow algorithm over an exact capacity type (an integer type
// or any ordered ring with exact arithmetic).

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace pvmech {

template <class Capacity>
class MaxFlow {
 public:
  explicit MaxFlow(std::size_t nodes) : head_(nodes, npos) {}

  /// Adds a directed arc and returns its id (the paired reverse arc is id ^ 1).
  std::size_t add_arc(std::size_t from, std::size_t to, Capacity capacity) {
    const std::size_t id = to_.size();
    push(from, to, std::move(capacity));
    push(to, from, Capacity(0));
    return id;
  }

  std::size_t node_count() const { return head_.size(); }

  Capacity run(std::size_t source, std::size_t sink) {
    Capacity total(0);
    while (build_levels(source, sink)) {
      cursor_ = head_;
      while (true) {
        Capacity pushed = augment(source, sink);
        if (pushed == Capacity(0)) break;
        total += pushed;
      }
    }
    return total;
  }

  /// Nodes reachable from `source` in the residual graph of the last run.
  std::vector<bool> residual_reachable(std::size_t source) const {
    std::vector<bool> seen(head_.size(), false);
    std::vector<std::size_t> stack{source};
    seen[source] = true;
    while (!stack.empty()) {
      const std::size_t v = stack.back();
      stack.pop_back();
      for (std::size_t a = head_[v]; a != npos; a = next_[a]) {
        if (residual_[a] > Capacity(0) && !seen[to_[a]]) {
          seen[to_[a]] = true;
          stack.push_back(to_[a]);
        }
      }
    }
    return seen;
  }

  const Capacity& residual(std::size_t arc) const { return residual_[arc]; }

 private:
  static constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

  void push(std::size_t from, std::size_t to, Capacity capacity) {
    to_.push_back(to);
    residual_.push_back(std::move(capacity));
    next_.push_back(head_[from]);
    head_[from] = to_.size() - 1;
  }

  bool build_levels(std::size_t source, std::size_t sink) {
    level_.assign(head_.size(), -1);
    std::vector<std::size_t> queue{source};
    level_[source] = 0;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const std::size_t v = queue[q];
      for (std::size_t a = head_[v]; a != npos; a = next_[a]) {
        if (residual_[a] > Capacity(0) && level_[to_[a]] < 0) {
          level_[to_[a]] = level_[v] + 1;
          queue.push_back(to_[a]);
        }
      }
    }
    return level_[sink] >= 0;
  }

  // One augmenting path in the level graph, found iteratively.
  Capacity augment(std::size_t source, std::size_t sink) {
    path_.clear();
    std::size_t v = source;
    while (true) {
      if (v == sink) {
        Capacity bottleneck = residual_[path_.front()];
        for (std::size_t a : path_)
          if (residual_[a] < bottleneck) bottleneck = residual_[a];
        for (std::size_t a : path_) {
          residual_[a] -= bottleneck;
          residual_[a ^ 1] += bottleneck;
        }
        return bottleneck;
      }
      std::size_t& a = cursor_[v];
      while (a != npos && !(residual_[a] > Capacity(0) && level_[to_[a]] == level_[v] + 1)) a = next_[a];
      if (a != npos) {
        path_.push_back(a);
        v = to_[a];
        continue;
      }
      // Dead end: drop v from the level graph and retreat.
      level_[v] = -1;
      if (path_.empty()) return Capacity(0);
      const std::size_t back = path_.back();
      path_.pop_back();
      v = to_[back ^ 1];
      cursor_[v] = next_[cursor_[v]];
    }
  }

  std::vector<std::size_t> head_;
  std::vector<std::size_t> to_;
  std::vector<std::size_t> next_;
  std::vector<Capacity> residual_;
  std::vector<int> level_;
  std::vector<std::size_t> cursor_;
  std::vector<std::size_t> path_;
};

}  // namespace pvmech
