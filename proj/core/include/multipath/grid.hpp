#pragma once

#include "multipath/network.hpp"

#include <utility>
#include <vector>

namespace multipath {

/// A cell addressed through one particular path (0-based path index and
/// 0-based cell index along that path).
struct PathCellRef {
    int path = 0;
    int cell = 0;
    friend bool operator==(const PathCellRef&, const PathCellRef&) = default;
};

enum class PathEnd { left, right };

/// Uniform discretisation of every path with the shared-cell registry.
///
/// Each path is cut into cells of width dx (each arc length must be an
/// integer multiple of dx). Path cells covering the same arc segment are
/// aliases of one physical cell; totals are computed once per physical cell
/// and fanned out, so aliased cells always agree bitwise.
///
/// Ghost slots (one per path end) are not part of the registry. Ghosts of
/// paths that begin or end on the same arc end are grouped: their boundary
/// values add up to the total density seen from inside, mirroring how the
/// shared terminal cells sum their sub-densities.
class NetworkGrid {
public:
    /// Builds the grid; throws ModelError on non-divisible arc lengths or
    /// invalid paths.
    static NetworkGrid build(const Network& network, const std::vector<Path>& paths, double dx);

    double dx() const { return dx_; }
    int path_count() const { return static_cast<int>(cells_.size()); }
    int cell_count(int path) const { return static_cast<int>(cells_[path].size()); }
    int physical_cell_count() const { return static_cast<int>(aliases_.size()); }

    int physical_id(int path, int cell) const { return cells_[path][cell]; }
    /// Aliases of a physical cell, ordered by ascending (path, cell).
    const std::vector<PathCellRef>& aliases(int physical) const { return aliases_[physical]; }

    int ghost_group(int path, PathEnd end) const {
        return end == PathEnd::left ? ghost_left_[path] : ghost_right_[path];
    }
    int ghost_group_count() const { return static_cast<int>(ghost_members_.size()); }
    /// Path ends sharing a ghost location; ordered by ascending path.
    const std::vector<std::pair<int, PathEnd>>& ghost_group_members(int group) const {
        return ghost_members_[group];
    }

    /// A node with incoming and outgoing traffic among the arcs that carry
    /// at least one path.
    struct Junction {
        std::string node;
        int incoming_roads = 0;   // active in-degree
        int outgoing_roads = 0;   // active out-degree
        /// Per traversal: the cell just before / just after the node along
        /// the traversing path.
        std::vector<PathCellRef> cells_before;
        std::vector<PathCellRef> cells_after;
    };
    const std::vector<Junction>& junctions() const { return junctions_; }

    /// Largest number of incoming roads over junctions (at least 1); the
    /// factor tightening the time-step bound on networks with merges.
    int max_incoming_roads() const { return max_incoming_; }

    const Network& network() const { return network_; }
    const std::vector<Path>& paths() const { return paths_; }

    /// Center of a path cell in the path's own arclength coordinate.
    double cell_center([[maybe_unused]] int path, int cell) const { return (cell + 0.5) * dx_; }

    /// True when the path's last arc heads back into its first arc's tail,
    /// so periodic boundaries make sense.
    bool path_is_cycle(int path) const;

private:
    Network network_;
    std::vector<Path> paths_;
    double dx_ = 0.0;
    std::vector<std::vector<int>> cells_;              // [path][cell] -> physical id
    std::vector<std::vector<PathCellRef>> aliases_;    // [physical] -> refs
    std::vector<int> ghost_left_, ghost_right_;        // [path] -> group id
    std::vector<std::vector<std::pair<int, PathEnd>>> ghost_members_;
    std::vector<Junction> junctions_;
    int max_incoming_ = 1;
};

} // namespace multipath
