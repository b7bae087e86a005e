#include "fuzzyepi/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fuzzyepi {

double TorusWorld::wrap_coord(double v, double extent) noexcept {
    double w = std::fmod(v, extent);
    if (w < 0.0) w += extent;
    if (w >= extent) w = 0.0; // fmod of a tiny negative can round back to extent
    return w;
}

double torus_distance(Vec2 p, Vec2 q, const TorusWorld& world) noexcept {
    double dx = std::fabs(p.x - q.x);
    double dy = std::fabs(p.y - q.y);
    if (dx > world.width - dx) dx = world.width - dx;
    if (dy > world.height - dy) dy = world.height - dy;
    return std::sqrt(dx * dx + dy * dy);
}

void GridIndex::rebuild(std::span<const Agent> agents, double cell_size, const TorusWorld& world) {
    if (!(cell_size > 0.0)) throw std::invalid_argument("grid cell_size must be > 0");
    if (!(world.width > 0.0 && world.height > 0.0)) {
        throw std::invalid_argument("grid world extents must be > 0");
    }
    world_ = world;
    nx_ = std::max(1, static_cast<int>(world.width / cell_size));
    ny_ = std::max(1, static_cast<int>(world.height / cell_size));
    cell_w_ = world.width / nx_;
    cell_h_ = world.height / ny_;

    const std::size_t n_cells = static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
    std::vector<std::uint32_t> counts(n_cells, 0);
    for (const Agent& a : agents) {
        if (a.state == HealthState::Dead) continue;
        ++counts[static_cast<std::size_t>(cell_of_y(a.y)) * nx_ + cell_of_x(a.x)];
    }

    offsets_.assign(n_cells + 1, 0);
    for (std::size_t c = 0; c < n_cells; ++c) offsets_[c + 1] = offsets_[c] + counts[c];

    ids_.resize(offsets_[n_cells]);
    pos_.resize(offsets_[n_cells]);
    std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
    for (const Agent& a : agents) {
        if (a.state == HealthState::Dead) continue;
        const std::size_t c = static_cast<std::size_t>(cell_of_y(a.y)) * nx_ + cell_of_x(a.x);
        const std::uint32_t slot = cursor[c]++;
        ids_[slot] = a.id;
        pos_[slot] = {a.x, a.y};
    }
    ++generation_;
}

int GridIndex::cell_of_x(double x) const noexcept {
    const int c = static_cast<int>(x / cell_w_);
    return std::min(std::max(c, 0), nx_ - 1);
}

int GridIndex::cell_of_y(double y) const noexcept {
    const int c = static_cast<int>(y / cell_h_);
    return std::min(std::max(c, 0), ny_ - 1);
}

std::vector<std::uint32_t> GridIndex::neighbors_within(Vec2 center, double r,
                                                       QueryStats* stats) const {
    if (nx_ == 0) {
        if (stats) stats->cells_visited = 0;
        return {};
    }
    // The 3x3 block is exhaustive iff the radius fits inside one cell on
    // each axis, or the block already spans every cell of that axis.
    const bool ok_x = r <= cell_w_ || nx_ <= 3;
    const bool ok_y = r <= cell_h_ || ny_ <= 3;
    if (!(ok_x && ok_y)) {
        throw std::invalid_argument("query radius exceeds grid cell size");
    }

    const int cx = cell_of_x(center.x);
    const int cy = cell_of_y(center.y);

    // Distinct wrapped cells of the 3x3 block (duplicates collapse when an
    // axis has fewer than 3 cells).
    std::size_t cells[9];
    int n_cells = 0;
    for (int dy = -1; dy <= 1; ++dy) {
        const int gy = (cy + dy + ny_) % ny_;
        for (int dx = -1; dx <= 1; ++dx) {
            const int gx = (cx + dx + nx_) % nx_;
            const std::size_t c = static_cast<std::size_t>(gy) * nx_ + gx;
            bool seen = false;
            for (int k = 0; k < n_cells; ++k) {
                if (cells[k] == c) {
                    seen = true;
                    break;
                }
            }
            if (!seen) cells[n_cells++] = c;
        }
    }
    if (stats) stats->cells_visited = n_cells;

    std::vector<std::uint32_t> out;
    for (int k = 0; k < n_cells; ++k) {
        const std::size_t c = cells[k];
        for (std::uint32_t i = offsets_[c]; i < offsets_[c + 1]; ++i) {
            if (torus_distance(center, pos_[i], world_) <= r) out.push_back(ids_[i]);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::uint32_t> neighbors_within_naive(std::span<const Agent> agents, Vec2 center,
                                                  double r, const TorusWorld& world) {
    std::vector<std::uint32_t> out;
    for (const Agent& a : agents) {
        if (a.state == HealthState::Dead) continue;
        if (torus_distance(center, {a.x, a.y}, world) <= r) out.push_back(a.id);
    }
    std::sort(out.begin(), out.end());
    return out;
}

} // namespace fuzzyepi
