#pragma once

#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "nlpoisson/point.hpp"

namespace nlpoisson {

/// Uniform background grid (cell lists) over a fixed point set.
///
/// Queries return every indexed point strictly closer than `radius` to the
/// query point, in increasing index order. The cell size should be at least
/// the query radius; only the 3^n surrounding cells are visited.
class CellGrid {
public:
    CellGrid(std::span<const Point> points, int dimension, double cell_size);

    double cell_size() const { return cell_size_; }

    void query(const Point& x, double radius, std::vector<std::size_t>& out) const;
    std::vector<std::size_t> query(const Point& x, double radius) const;

    /// Largest nearest-neighbour distance over the indexed points.
    static double max_nearest_neighbor_distance(std::span<const Point> points, int dimension);

private:
    using Key = std::int64_t;
    Key key_of(const std::array<std::int64_t, 3>& cell) const;
    std::array<std::int64_t, 3> cell_of(const Point& x) const;

    std::span<const Point> points_;
    int dimension_;
    double cell_size_;
    std::unordered_map<Key, std::vector<std::size_t>> cells_;
};

}  // namespace nlpoisson
