#include "nlpoisson/neighbors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlpoisson/error.hpp"

namespace nlpoisson {

CellGrid::CellGrid(std::span<const Point> points, int dimension, double cell_size)
    : points_(points), dimension_(dimension), cell_size_(cell_size) {
    if (!(cell_size_ > 0.0)) throw Error(ErrorCode::InvalidArgument, "cell size must be positive");
    for (std::size_t i = 0; i < points_.size(); ++i) {
        cells_[key_of(cell_of(points_[i]))].push_back(i);
    }
}

std::array<std::int64_t, 3> CellGrid::cell_of(const Point& x) const {
    std::array<std::int64_t, 3> cell = {0, 0, 0};
    for (int d = 0; d < dimension_; ++d) {
        cell[d] = static_cast<std::int64_t>(std::floor(x[d] / cell_size_));
    }
    return cell;
}

CellGrid::Key CellGrid::key_of(const std::array<std::int64_t, 3>& cell) const {
    // 21 bits per axis, offset to keep indices nonnegative.
    constexpr std::int64_t offset = 1 << 20;
    constexpr std::int64_t mask = (1 << 21) - 1;
    return ((cell[0] + offset) & mask) | (((cell[1] + offset) & mask) << 21) |
           (((cell[2] + offset) & mask) << 42);
}

void CellGrid::query(const Point& x, double radius, std::vector<std::size_t>& out) const {
    out.clear();
    const double r2 = radius * radius;
    const auto center = cell_of(x);
    const auto reach = static_cast<std::int64_t>(std::ceil(radius / cell_size_));
    std::array<std::int64_t, 3> lo = {0, 0, 0}, hi = {0, 0, 0};
    for (int d = 0; d < dimension_; ++d) {
        lo[d] = center[d] - reach;
        hi[d] = center[d] + reach;
    }
    for (auto i = lo[0]; i <= hi[0]; ++i) {
        for (auto j = lo[1]; j <= hi[1]; ++j) {
            for (auto k = lo[2]; k <= hi[2]; ++k) {
                const auto it = cells_.find(key_of({i, j, k}));
                if (it == cells_.end()) continue;
                for (std::size_t idx : it->second) {
                    if (squared_distance(points_[idx], x) < r2) out.push_back(idx);
                }
            }
        }
    }
    std::sort(out.begin(), out.end());
}

std::vector<std::size_t> CellGrid::query(const Point& x, double radius) const {
    std::vector<std::size_t> out;
    query(x, radius, out);
    return out;
}

double CellGrid::max_nearest_neighbor_distance(std::span<const Point> points, int dimension) {
    if (points.size() < 2) return 0.0;
    // Grow the search radius until every point has a neighbour.
    double lo = std::numeric_limits<double>::infinity();
    double hi = 0.0;
    for (const auto& p : points) {
        for (int d = 0; d < dimension; ++d) {
            lo = std::min(lo, p[d]);
            hi = std::max(hi, p[d]);
        }
    }
    double radius = std::max(hi - lo, 1e-300) / std::sqrt(static_cast<double>(points.size()));
    std::vector<std::size_t> found;
    for (;;) {
        CellGrid grid(points, dimension, radius);
        double worst = 0.0;
        bool complete = true;
        for (std::size_t i = 0; i < points.size() && complete; ++i) {
            grid.query(points[i], radius, found);
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k : found) {
                if (k != i) best = std::min(best, squared_distance(points[i], points[k]));
            }
            if (!std::isfinite(best)) {
                complete = false;
            } else {
                worst = std::max(worst, best);
            }
        }
        if (complete) return std::sqrt(worst);
        radius *= 2.0;
    }
}

}  // namespace nlpoisson
