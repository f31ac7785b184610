#ifndef MESHCLOAK_QUADTREE_HPP
#define MESHCLOAK_QUADTREE_HPP

#include <cstdint>
#include <vector>

namespace meshcloak {

struct QuadPoint {
  double x = 0.0;
  double y = 0.0;
  std::int64_t id = 0;
};

// Point quadtree over planar points with axis-aligned closed-square range
// search. Immutable once built; concurrent range_search is safe.
class QuadTree {
 public:
  static constexpr std::size_t kDefaultLeafCapacity = 16;
  static constexpr int kMaxDepth = 32;

  // Throws ConfigError on an empty point set or non-finite coordinates.
  // Bounds are the tight bounding box of the inputs expanded by 1 m.
  explicit QuadTree(const std::vector<QuadPoint>& points,
                    std::size_t leaf_capacity = kDefaultLeafCapacity);

  std::size_t size() const { return size_; }
  double min_x() const { return min_x_; }
  double min_y() const { return min_y_; }
  double max_x() const { return max_x_; }
  double max_y() const { return max_y_; }

  // Ids of all points p with |p.x - cx| <= half_width and
  // |p.y - cy| <= half_width (boundary inclusive). Order unspecified.
  std::vector<std::int64_t> range_search(double cx, double cy, double half_width) const;
  void range_search(double cx, double cy, double half_width,
                    std::vector<std::int64_t>& out) const;

  int depth() const;

 private:
  struct Node {
    // children[0] = SW, [1] = SE, [2] = NW, [3] = NE; -1 when absent.
    std::int32_t children[4] = {-1, -1, -1, -1};
    std::vector<QuadPoint> points;  // only at leaves
    bool leaf = true;
  };

  void insert(std::int32_t node, double nx0, double ny0, double nx1, double ny1,
              const QuadPoint& p, int depth);
  void split(std::int32_t node, double nx0, double ny0, double nx1, double ny1, int depth);
  void search_node(std::int32_t node, double nx0, double ny0, double nx1, double ny1,
                   double qx0, double qy0, double qx1, double qy1,
                   std::vector<std::int64_t>& out) const;
  int depth_of(std::int32_t node) const;

  std::vector<Node> nodes_;
  std::size_t leaf_capacity_ = kDefaultLeafCapacity;
  std::size_t size_ = 0;
  double min_x_ = 0.0, min_y_ = 0.0, max_x_ = 0.0, max_y_ = 0.0;
};

}  // namespace meshcloak

#endif  // MESHCLOAK_QUADTREE_HPP
