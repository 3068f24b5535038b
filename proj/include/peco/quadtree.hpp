#pragma once

#include "peco/dataset.hpp"

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace peco::kernels {

/// Point-region quadtree over 2-D points with per-node center of mass, used
/// for Barnes-Hut summation. Leaves hold explicit point lists so coincident
/// points need no special casing.
class QuadTree {
public:
    struct Node {
        double cx = 0.0, cy = 0.0;   // box center
        double half = 0.0;           // box half-width
        double mx = 0.0, my = 0.0;   // center of mass
        std::int64_t count = 0;
        std::array<std::int32_t, 4> child{-1, -1, -1, -1};
        std::vector<std::int32_t> points;  // leaf members
        bool leaf() const { return child[0] < 0; }
    };

    /// `y` is n x 2.
    explicit QuadTree(const Eigen::Ref<const Matrix>& y, std::size_t leaf_capacity = 1);

    const Node& node(std::size_t i) const { return nodes_[i]; }
    const Node& root() const { return nodes_.front(); }
    std::size_t node_count() const { return nodes_.size(); }

private:
    void insert(std::size_t node, std::int32_t point, int depth);
    std::size_t quadrant(const Node& n, std::int32_t point) const;

    std::vector<std::array<double, 2>> pts_;
    std::vector<Node> nodes_;
    std::size_t leaf_capacity_;
};

}  // namespace peco::kernels
