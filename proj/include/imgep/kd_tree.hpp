#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace imgep {

/// Exact nearest-neighbour index with incremental insertion.
///
/// Points carry an integer id (their insertion rank in the owning archive).
/// Queries return the minimum of (score, id) in lexicographic order, so equal
/// scores resolve to the lowest id. By default the score is the squared
/// Euclidean distance in tree coordinates; callers may pass an exact scoring
/// function that must agree with that distance up to rounding, in which case
/// the tree only uses geometry for pruning (with a small safety margin) and
/// the returned answer is the exact arg-min of the supplied score.
class KdTree {
 public:
  struct Match {
    std::size_t id = 0;
    double score = 0.0;
  };
  using ScoreFn = std::function<double(std::size_t id)>;

  explicit KdTree(std::size_t dim, std::size_t leaf_size = 12);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  void insert(std::span<const double> point, std::size_t id);
  /// Rebuilds a balanced tree over the current points.
  void rebuild();
  /// Number of insertions since the last rebuild.
  std::size_t pending() const { return since_rebuild_; }

  std::optional<Match> nearest(std::span<const double> query, const ScoreFn& exact = {}) const;
  /// The k best matches sorted by (score, id).
  std::vector<Match> k_nearest(std::span<const double> query, std::size_t k,
                               const ScoreFn& exact = {}) const;

  std::span<const double> point(std::size_t slot) const {
    return {coords_.data() + slot * dim_, dim_};
  }

 private:
  struct Node {
    int left = -1;
    int right = -1;
    std::size_t split_dim = 0;
    double split_value = 0.0;
    std::vector<std::size_t> slots;  // leaf contents (indices into ids_)
    std::vector<double> lo, hi;      // bounding box
    bool leaf() const { return left < 0; }
  };

  int build(std::vector<std::size_t>& slots, std::size_t begin, std::size_t end);
  void split_leaf(int node);
  void grow_box(Node& n, std::span<const double> p) const;
  double box_distance(const Node& n, std::span<const double> q) const;
  double point_distance(std::size_t slot, std::span<const double> q) const;

  template <class Visit>
  void search(int node, std::span<const double> q, Visit& visit) const;

  std::size_t dim_;
  std::size_t leaf_size_;
  std::vector<double> coords_;
  std::vector<std::size_t> ids_;
  std::vector<Node> nodes_;
  std::size_t since_rebuild_ = 0;
};

}  // namespace imgep
