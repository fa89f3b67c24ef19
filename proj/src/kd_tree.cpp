#include "imgep/kd_tree.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace imgep {

namespace {

// Prune only when the geometric bound clearly exceeds the incumbent, so that
// rounding differences between tree distances and exact scores never hide a
// better (or equal, lower-id) candidate.
bool can_prune(double bound, double incumbent) {
  return bound > incumbent * (1.0 + 1e-9) + 1e-12;
}

bool better(double s1, std::size_t id1, double s2, std::size_t id2) {
  return s1 < s2 || (s1 == s2 && id1 < id2);
}

}  // namespace

KdTree::KdTree(std::size_t dim, std::size_t leaf_size) : dim_(dim), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  if (dim == 0) throw std::invalid_argument("kd-tree needs a positive dimension");
}

void KdTree::grow_box(Node& n, std::span<const double> p) const {
  if (n.lo.empty()) {
    n.lo.assign(p.begin(), p.end());
    n.hi.assign(p.begin(), p.end());
    return;
  }
  for (std::size_t d = 0; d < dim_; ++d) {
    n.lo[d] = std::min(n.lo[d], p[d]);
    n.hi[d] = std::max(n.hi[d], p[d]);
  }
}

double KdTree::box_distance(const Node& n, std::span<const double> q) const {
  if (n.lo.empty()) return std::numeric_limits<double>::infinity();
  double acc = 0.0;
  for (std::size_t d = 0; d < dim_; ++d) {
    double diff = 0.0;
    if (q[d] < n.lo[d]) diff = n.lo[d] - q[d];
    else if (q[d] > n.hi[d]) diff = q[d] - n.hi[d];
    acc += diff * diff;
  }
  return acc;
}

double KdTree::point_distance(std::size_t slot, std::span<const double> q) const {
  const double* p = coords_.data() + slot * dim_;
  double acc = 0.0;
  for (std::size_t d = 0; d < dim_; ++d) {
    const double diff = p[d] - q[d];
    acc += diff * diff;
  }
  return acc;
}

void KdTree::insert(std::span<const double> p, std::size_t id) {
  if (p.size() != dim_) throw std::invalid_argument("kd-tree point has wrong dimension");
  const std::size_t slot = ids_.size();
  coords_.insert(coords_.end(), p.begin(), p.end());
  ids_.push_back(id);
  ++since_rebuild_;

  if (nodes_.empty()) {
    nodes_.emplace_back();
  }
  int cur = 0;
  while (true) {
    grow_box(nodes_[cur], p);
    if (nodes_[cur].leaf()) break;
    const Node& n = nodes_[cur];
    cur = p[n.split_dim] < n.split_value ? n.left : n.right;
  }
  nodes_[cur].slots.push_back(slot);
  if (nodes_[cur].slots.size() > 2 * leaf_size_) split_leaf(cur);
}

void KdTree::split_leaf(int node) {
  std::vector<std::size_t> slots = std::move(nodes_[node].slots);
  nodes_[node].slots.clear();
  // Widest dimension of the leaf's box.
  std::size_t best_dim = 0;
  double best_spread = -1.0;
  for (std::size_t d = 0; d < dim_; ++d) {
    const double spread = nodes_[node].hi[d] - nodes_[node].lo[d];
    if (spread > best_spread) {
      best_spread = spread;
      best_dim = d;
    }
  }
  if (best_spread <= 0.0) {
    // All points coincide; keep an oversized leaf.
    nodes_[node].slots = std::move(slots);
    return;
  }
  const auto mid = slots.begin() + static_cast<std::ptrdiff_t>(slots.size() / 2);
  std::nth_element(slots.begin(), mid, slots.end(), [&](std::size_t a, std::size_t b) {
    return coords_[a * dim_ + best_dim] < coords_[b * dim_ + best_dim];
  });
  double split = coords_[*mid * dim_ + best_dim];
  if (split <= nodes_[node].lo[best_dim]) {
    // Many ties at the minimum: split just above it so both sides are non-empty.
    double next = std::numeric_limits<double>::infinity();
    for (std::size_t s : slots) {
      const double v = coords_[s * dim_ + best_dim];
      if (v > split) next = std::min(next, v);
    }
    split = next;
  }

  Node left, right;
  for (std::size_t s : slots) {
    Node& target = coords_[s * dim_ + best_dim] < split ? left : right;
    target.slots.push_back(s);
    grow_box(target, point(s));
  }
  nodes_[node].split_dim = best_dim;
  nodes_[node].split_value = split;
  nodes_.push_back(std::move(left));
  nodes_[node].left = static_cast<int>(nodes_.size() - 1);
  nodes_.push_back(std::move(right));
  nodes_[node].right = static_cast<int>(nodes_.size() - 1);
}

int KdTree::build(std::vector<std::size_t>& slots, std::size_t begin, std::size_t end) {
  const int idx = static_cast<int>(nodes_.size());
  nodes_.emplace_back();
  for (std::size_t i = begin; i < end; ++i) grow_box(nodes_[idx], point(slots[i]));
  if (end - begin <= leaf_size_) {
    nodes_[idx].slots.assign(slots.begin() + static_cast<std::ptrdiff_t>(begin),
                             slots.begin() + static_cast<std::ptrdiff_t>(end));
    return idx;
  }
  std::size_t best_dim = 0;
  double best_spread = -1.0;
  for (std::size_t d = 0; d < dim_; ++d) {
    const double spread = nodes_[idx].hi[d] - nodes_[idx].lo[d];
    if (spread > best_spread) {
      best_spread = spread;
      best_dim = d;
    }
  }
  if (best_spread <= 0.0) {
    nodes_[idx].slots.assign(slots.begin() + static_cast<std::ptrdiff_t>(begin),
                             slots.begin() + static_cast<std::ptrdiff_t>(end));
    return idx;
  }
  auto first = slots.begin() + static_cast<std::ptrdiff_t>(begin);
  auto last = slots.begin() + static_cast<std::ptrdiff_t>(end);
  std::sort(first, last, [&](std::size_t a, std::size_t b) {
    return coords_[a * dim_ + best_dim] < coords_[b * dim_ + best_dim];
  });
  // First position whose coordinate differs from its predecessor, nearest to the median.
  std::size_t mid = begin + (end - begin) / 2;
  auto value = [&](std::size_t i) { return coords_[slots[i] * dim_ + best_dim]; };
  while (mid > begin && value(mid) == value(mid - 1)) --mid;
  if (mid == begin) {
    mid = begin + (end - begin) / 2;
    while (mid < end && value(mid) == value(mid - 1)) ++mid;
  }
  const double split = value(mid);
  nodes_[idx].split_dim = best_dim;
  nodes_[idx].split_value = split;
  const int l = build(slots, begin, mid);
  const int r = build(slots, mid, end);
  nodes_[idx].left = l;
  nodes_[idx].right = r;
  return idx;
}

void KdTree::rebuild() {
  nodes_.clear();
  since_rebuild_ = 0;
  if (ids_.empty()) return;
  std::vector<std::size_t> slots(ids_.size());
  for (std::size_t i = 0; i < slots.size(); ++i) slots[i] = i;
  build(slots, 0, slots.size());
}

template <class Visit>
void KdTree::search(int node, std::span<const double> q, Visit& visit) const {
  const Node& n = nodes_[node];
  if (visit.prune(box_distance(n, q))) return;
  if (n.leaf()) {
    for (std::size_t s : n.slots) visit.offer(s);
    return;
  }
  const bool go_left = q[n.split_dim] < n.split_value;
  search(go_left ? n.left : n.right, q, visit);
  search(go_left ? n.right : n.left, q, visit);
}

std::optional<KdTree::Match> KdTree::nearest(std::span<const double> q, const ScoreFn& exact) const {
  if (q.size() != dim_) throw std::invalid_argument("kd-tree query has wrong dimension");
  if (ids_.empty()) return std::nullopt;
  struct Visitor {
    const KdTree& tree;
    std::span<const double> q;
    const ScoreFn& exact;
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_id = std::numeric_limits<std::size_t>::max();
    bool prune(double bound) const { return can_prune(bound, best); }
    void offer(std::size_t slot) {
      const std::size_t id = tree.ids_[slot];
      const double s = exact ? exact(id) : tree.point_distance(slot, q);
      if (better(s, id, best, best_id)) {
        best = s;
        best_id = id;
      }
    }
  } v{*this, q, exact};
  search(0, q, v);
  return Match{v.best_id, v.best};
}

std::vector<KdTree::Match> KdTree::k_nearest(std::span<const double> q, std::size_t k,
                                             const ScoreFn& exact) const {
  if (q.size() != dim_) throw std::invalid_argument("kd-tree query has wrong dimension");
  if (ids_.empty() || k == 0) return {};
  struct Order {
    bool operator()(const Match& a, const Match& b) const { return better(a.score, a.id, b.score, b.id); }
  };
  struct Visitor {
    const KdTree& tree;
    std::span<const double> q;
    const ScoreFn& exact;
    std::size_t k;
    std::priority_queue<Match, std::vector<Match>, Order> heap;  // worst on top
    bool prune(double bound) const {
      return heap.size() == k && can_prune(bound, heap.top().score);
    }
    void offer(std::size_t slot) {
      const std::size_t id = tree.ids_[slot];
      const double s = exact ? exact(id) : tree.point_distance(slot, q);
      if (heap.size() < k) {
        heap.push({id, s});
      } else if (better(s, id, heap.top().score, heap.top().id)) {
        heap.pop();
        heap.push({id, s});
      }
    }
  } v{*this, q, exact, k, {}};
  search(0, q, v);
  std::vector<Match> out;
  out.reserve(v.heap.size());
  while (!v.heap.empty()) {
    out.push_back(v.heap.top());
    v.heap.pop();
  }
  std::reverse(out.begin(), out.end());
  return out;
}

}  // namespace imgep
