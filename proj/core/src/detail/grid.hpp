#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace uavnet::detail {

struct Point {
    double x, y;
};

// Uniform bucket grid over a square window, for nearest-neighbour queries
// against one tier's points. Query cost is O(1) on average at bucket sizes
// near the mean point spacing.
class PlanarGrid {
public:
    PlanarGrid() = default;

    PlanarGrid(const std::vector<Point>& pts, double extent, double cell) {
        build(pts, extent, cell);
    }

    void build(const std::vector<Point>& pts, double extent, double cell) {
        points_ = pts;
        extent_ = extent;
        cell_ = cell;
        n_ = std::max(1, static_cast<int>(std::ceil(2.0 * extent / cell)));
        buckets_.assign(static_cast<std::size_t>(n_) * n_, {});
        for (int i = 0; i < static_cast<int>(points_.size()); ++i) {
            buckets_[bucket_of(points_[i])].push_back(i);
        }
    }

    bool empty() const { return points_.empty(); }

    // Index and squared distance of the nearest point to (qx, qy).
    // Returns -1 when the grid holds no points.
    int nearest(double qx, double qy, double* dist2_out) const {
        if (points_.empty()) return -1;
        const int cx = coord(qx);
        const int cy = coord(qy);
        int best = -1;
        double best2 = std::numeric_limits<double>::infinity();
        for (int ring = 0;; ++ring) {
            // Once a candidate is known, stop when the nearest possible
            // point of the next ring cannot beat it.
            if (best >= 0) {
                const double ring_min = (ring - 1) * cell_;
                if (ring_min > 0.0 && ring_min * ring_min > best2) break;
            }
            bool any_bucket = false;
            for (int dx = -ring; dx <= ring; ++dx) {
                for (int dy = -ring; dy <= ring; ++dy) {
                    if (std::max(std::abs(dx), std::abs(dy)) != ring) continue;
                    const int bx = cx + dx;
                    const int by = cy + dy;
                    if (bx < 0 || by < 0 || bx >= n_ || by >= n_) continue;
                    any_bucket = true;
                    for (int i : buckets_[static_cast<std::size_t>(by) * n_ + bx]) {
                        const double ddx = points_[i].x - qx;
                        const double ddy = points_[i].y - qy;
                        const double d2 = ddx * ddx + ddy * ddy;
                        if (d2 < best2) {
                            best2 = d2;
                            best = i;
                        }
                    }
                }
            }
            // A ring with no in-bounds bucket means the whole grid has been
            // visited (rings grow monotonically from a clamped centre).
            if (!any_bucket) break;
        }
        if (dist2_out) *dist2_out = best2;
        return best;
    }

    const Point& point(int i) const { return points_[i]; }

private:
    int coord(double v) const {
        const int c = static_cast<int>((v + extent_) / cell_);
        return std::clamp(c, 0, n_ - 1);
    }

    std::size_t bucket_of(const Point& p) const {
        return static_cast<std::size_t>(coord(p.y)) * n_ + coord(p.x);
    }

    std::vector<Point> points_;
    std::vector<std::vector<int>> buckets_;
    double extent_ = 0.0;
    double cell_ = 1.0;
    int n_ = 1;
};

}  // namespace uavnet::detail
