#include "meshcloak/quadtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "meshcloak/error.hpp"

namespace meshcloak {

QuadTree::QuadTree(const std::vector<QuadPoint>& points, std::size_t leaf_capacity)
    : leaf_capacity_(std::max<std::size_t>(1, leaf_capacity)) {
  if (points.empty()) {
    throw ConfigError("empty index: quadtree needs at least one point");
  }
  min_x_ = min_y_ = std::numeric_limits<double>::infinity();
  max_x_ = max_y_ = -std::numeric_limits<double>::infinity();
  for (const QuadPoint& p : points) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw ConfigError("quadtree point with non-finite coordinates");
    }
    min_x_ = std::min(min_x_, p.x);
    min_y_ = std::min(min_y_, p.y);
    max_x_ = std::max(max_x_, p.x);
    max_y_ = std::max(max_y_, p.y);
  }
  min_x_ -= 1.0;
  min_y_ -= 1.0;
  max_x_ += 1.0;
  max_y_ += 1.0;

  nodes_.emplace_back();
  for (const QuadPoint& p : points) {
    insert(0, min_x_, min_y_, max_x_, max_y_, p, 0);
    ++size_;
  }
}

void QuadTree::insert(std::int32_t node, double nx0, double ny0, double nx1, double ny1,
                      const QuadPoint& p, int depth) {
  for (;;) {
    Node& n = nodes_[node];
    if (n.leaf) {
      if (n.points.size() < leaf_capacity_ || depth >= kMaxDepth) {
        n.points.push_back(p);
        return;
      }
      split(node, nx0, ny0, nx1, ny1, depth);
      continue;  // node is now internal
    }
    const double mx = 0.5 * (nx0 + nx1);
    const double my = 0.5 * (ny0 + ny1);
    const int qx = p.x < mx ? 0 : 1;
    const int qy = p.y < my ? 0 : 1;
    const int child = qy * 2 + qx;
    if (n.children[child] < 0) {
      n.children[child] = static_cast<std::int32_t>(nodes_.size());
      nodes_.emplace_back();
    }
    node = nodes_[node].children[child];
    nx0 = qx == 0 ? nx0 : mx;
    nx1 = qx == 0 ? mx : nx1;
    ny0 = qy == 0 ? ny0 : my;
    ny1 = qy == 0 ? my : ny1;
    ++depth;
  }
}

void QuadTree::split(std::int32_t node, double nx0, double ny0, double nx1, double ny1,
                     int depth) {
  std::vector<QuadPoint> points = std::move(nodes_[node].points);
  nodes_[node].points.clear();
  nodes_[node].leaf = false;
  for (const QuadPoint& p : points) {
    insert(node, nx0, ny0, nx1, ny1, p, depth);
  }
}

void QuadTree::range_search(double cx, double cy, double half_width,
                            std::vector<std::int64_t>& out) const {
  if (half_width < 0.0) {
    throw ConfigError("range_search: negative half_width");
  }
  search_node(0, min_x_, min_y_, max_x_, max_y_, cx - half_width, cy - half_width,
              cx + half_width, cy + half_width, out);
}

std::vector<std::int64_t> QuadTree::range_search(double cx, double cy,
                                                 double half_width) const {
  std::vector<std::int64_t> out;
  range_search(cx, cy, half_width, out);
  return out;
}

void QuadTree::search_node(std::int32_t node, double nx0, double ny0, double nx1,
                           double ny1, double qx0, double qy0, double qx1, double qy1,
                           std::vector<std::int64_t>& out) const {
  if (nx0 > qx1 || nx1 < qx0 || ny0 > qy1 || ny1 < qy0) {
    return;
  }
  const Node& n = nodes_[node];
  if (n.leaf) {
    for (const QuadPoint& p : n.points) {
      if (p.x >= qx0 && p.x <= qx1 && p.y >= qy0 && p.y <= qy1) {
        out.push_back(p.id);
      }
    }
    return;
  }
  const double mx = 0.5 * (nx0 + nx1);
  const double my = 0.5 * (ny0 + ny1);
  if (n.children[0] >= 0) search_node(n.children[0], nx0, ny0, mx, my, qx0, qy0, qx1, qy1, out);
  if (n.children[1] >= 0) search_node(n.children[1], mx, ny0, nx1, my, qx0, qy0, qx1, qy1, out);
  if (n.children[2] >= 0) search_node(n.children[2], nx0, my, mx, ny1, qx0, qy0, qx1, qy1, out);
  if (n.children[3] >= 0) search_node(n.children[3], mx, my, nx1, ny1, qx0, qy0, qx1, qy1, out);
}

int QuadTree::depth() const { return depth_of(0); }

int QuadTree::depth_of(std::int32_t node) const {
  const Node& n = nodes_[node];
  if (n.leaf) {
    return 0;
  }
  int d = 0;
  for (int c : n.children) {
    if (c >= 0) {
      d = std::max(d, 1 + depth_of(c));
    }
  }
  return d;
}

}  // namespace meshcloak
