#ifndef FUZZYEPI_SPATIAL_HPP
#define FUZZYEPI_SPATIAL_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "fuzzyepi/population.hpp"

namespace fuzzyepi {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

/// Rectangular world with wrap-around on both axes. Positions live in
/// [0, width) x [0, height); distances use the minimal image convention.
struct TorusWorld {
    double width = 0.0;
    double height = 0.0;

    double wrap_x(double v) const noexcept { return wrap_coord(v, width); }
    double wrap_y(double v) const noexcept { return wrap_coord(v, height); }
    Vec2 wrap(Vec2 p) const noexcept { return {wrap_x(p.x), wrap_y(p.y)}; }

private:
    static double wrap_coord(double v, double extent) noexcept;
};

double torus_distance(Vec2 p, Vec2 q, const TorusWorld& world) noexcept;

struct QueryStats {
    int cells_visited = 0;
};

/// Uniform grid over the torus. Live (non-Dead) agents are binned by cell;
/// radius queries scan at most the 3x3 block of cells around the center, so
/// the query radius must not exceed the cell size. Positions are snapshotted
/// at rebuild; queries against the index are read-only and touch no agent
/// data, so any number of threads may query between rebuilds.
class GridIndex {
public:
    GridIndex() = default;

    /// Bins every non-Dead agent. Cell counts are floor(extent / cell_size)
    /// per axis (at least 1), so actual cells are never smaller than
    /// cell_size. Throws on cell_size <= 0.
    void rebuild(std::span<const Agent> agents, double cell_size, const TorusWorld& world);

    /// Ids (ascending) of snapshotted agents with torus distance <= r from
    /// center. Throws if r is too large for the 3x3 block to be exhaustive.
    std::vector<std::uint32_t> neighbors_within(Vec2 center, double r,
                                                QueryStats* stats = nullptr) const;

    int cols() const noexcept { return nx_; }
    int rows() const noexcept { return ny_; }
    double cell_width() const noexcept { return cell_w_; }
    double cell_height() const noexcept { return cell_h_; }
    std::uint64_t generation() const noexcept { return generation_; }
    std::size_t size() const noexcept { return ids_.size(); }

private:
    int cell_of_x(double x) const noexcept;
    int cell_of_y(double y) const noexcept;

    // CSR layout: ids_/pos_ grouped by cell, offsets_[c]..offsets_[c+1].
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> ids_;
    std::vector<Vec2> pos_;
    int nx_ = 0;
    int ny_ = 0;
    double cell_w_ = 0.0;
    double cell_h_ = 0.0;
    TorusWorld world_{};
    std::uint64_t generation_ = 0;
};

/// Brute-force reference: linear scan of all non-Dead agents. Definitional
/// oracle for GridIndex::neighbors_within.
std::vector<std::uint32_t> neighbors_within_naive(std::span<const Agent> agents, Vec2 center,
                                                  double r, const TorusWorld& world);

} // namespace fuzzyepi

#endif
