#include "peco/quadtree.hpp"

#include <algorithm>
#include <limits>

namespace peco::kernels {

namespace {
constexpr int kMaxDepth = 48;
}

QuadTree::QuadTree(const Eigen::Ref<const Matrix>& y, std::size_t leaf_capacity)
    : leaf_capacity_(std::max<std::size_t>(leaf_capacity, 1)) {
    const auto n = static_cast<std::size_t>(y.rows());
    pts_.resize(n);
    double lo_x = std::numeric_limits<double>::infinity();
    double lo_y = lo_x;
    double hi_x = -lo_x;
    double hi_y = -lo_x;
    for (std::size_t i = 0; i < n; ++i) {
        pts_[i] = {y(static_cast<Eigen::Index>(i), 0), y(static_cast<Eigen::Index>(i), 1)};
        lo_x = std::min(lo_x, pts_[i][0]);
        hi_x = std::max(hi_x, pts_[i][0]);
        lo_y = std::min(lo_y, pts_[i][1]);
        hi_y = std::max(hi_y, pts_[i][1]);
    }
    Node root;
    if (n > 0) {
        root.cx = 0.5 * (lo_x + hi_x);
        root.cy = 0.5 * (lo_y + hi_y);
        root.half = 0.5 * std::max(hi_x - lo_x, hi_y - lo_y) + 1e-5;
    }
    nodes_.push_back(std::move(root));
    for (std::size_t i = 0; i < n; ++i) insert(0, static_cast<std::int32_t>(i), 0);
}

std::size_t QuadTree::quadrant(const Node& n, std::int32_t point) const {
    const auto& p = pts_[static_cast<std::size_t>(point)];
    return (p[0] >= n.cx ? 1U : 0U) + (p[1] >= n.cy ? 2U : 0U);
}

void QuadTree::insert(std::size_t idx, std::int32_t point, int depth) {
    const auto& p = pts_[static_cast<std::size_t>(point)];
    {
        Node& n = nodes_[idx];
        const auto c = static_cast<double>(n.count);
        n.mx = (n.mx * c + p[0]) / (c + 1.0);
        n.my = (n.my * c + p[1]) / (c + 1.0);
        ++n.count;
    }
    if (!nodes_[idx].leaf()) {
        const auto q = quadrant(nodes_[idx], point);
        insert(static_cast<std::size_t>(nodes_[idx].child[q]), point, depth + 1);
        return;
    }
    nodes_[idx].points.push_back(point);
    if (nodes_[idx].points.size() <= leaf_capacity_ || depth >= kMaxDepth) return;

    // Split: create four children and push the members down.
    const double h = nodes_[idx].half * 0.5;
    for (std::size_t q = 0; q < 4; ++q) {
        Node child;
        child.half = h;
        child.cx = nodes_[idx].cx + ((q & 1U) ? h : -h);
        child.cy = nodes_[idx].cy + ((q & 2U) ? h : -h);
        nodes_[idx].child[q] = static_cast<std::int32_t>(nodes_.size());
        nodes_.push_back(std::move(child));
    }
    std::vector<std::int32_t> members;
    members.swap(nodes_[idx].points);
    for (auto m : members) {
        const auto q = quadrant(nodes_[idx], m);
        insert(static_cast<std::size_t>(nodes_[idx].child[q]), m, depth + 1);
    }
}

}  // namespace peco::kernels
