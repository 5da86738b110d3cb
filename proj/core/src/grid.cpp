#include "multipath/grid.hpp"
#include "multipath/errors.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace multipath {

namespace {

/// Cells per arc; rejects lengths that are not whole multiples of dx
/// (rounding would silently shift junction cells).
int arc_cell_count(const Arc& arc, double dx) {
    double ratio = arc.length / dx;
    double rounded = std::round(ratio);
    if (rounded < 1.0 || std::abs(ratio - rounded) > 1e-9 * ratio) {
        std::ostringstream msg;
        msg << "grid: length " << arc.length << " of arc '" << arc.id
            << "' is not an integer multiple of dx = " << dx;
        throw ModelError(msg.str());
    }
    return static_cast<int>(rounded);
}

} // namespace

NetworkGrid NetworkGrid::build(const Network& network, const std::vector<Path>& paths, double dx) {
    network.validate();
    validate_paths(network, paths);
    if (!(dx > 0.0))
        throw ModelError("grid: dx must be positive");

    NetworkGrid g;
    g.network_ = network;
    g.paths_ = paths;
    g.dx_ = dx;

    // Physical cells are keyed by (arc index, segment index); every path
    // covering that segment aliases the same id.
    std::map<std::pair<int, int>, int> segment_ids;
    g.cells_.resize(paths.size());
    for (std::size_t p = 0; p < paths.size(); ++p) {
        for (const std::string& aid : paths[p].arcs) {
            int ai = network.arc_index(aid);
            int n = arc_cell_count(network.arcs[ai], dx);
            for (int s = 0; s < n; ++s) {
                auto [it, fresh] = segment_ids.try_emplace({ai, s},
                                       static_cast<int>(segment_ids.size()));
                if (fresh) g.aliases_.emplace_back();
                g.aliases_[it->second].push_back(
                    {static_cast<int>(p), static_cast<int>(g.cells_[p].size())});
                g.cells_[p].push_back(it->second);
            }
        }
    }

    // Ghost groups: path ends sharing the outer end of the same arc.
    std::map<std::pair<int, PathEnd>, int> ghost_ids;
    g.ghost_left_.resize(paths.size());
    g.ghost_right_.resize(paths.size());
    for (std::size_t p = 0; p < paths.size(); ++p) {
        int first = network.arc_index(paths[p].arcs.front());
        int last = network.arc_index(paths[p].arcs.back());
        for (auto [key, slot] : {std::pair{std::pair{first, PathEnd::left}, &g.ghost_left_[p]},
                                 std::pair{std::pair{last, PathEnd::right}, &g.ghost_right_[p]}}) {
            auto [it, fresh] = ghost_ids.try_emplace(key, static_cast<int>(ghost_ids.size()));
            if (fresh) g.ghost_members_.emplace_back();
            g.ghost_members_[it->second].push_back({static_cast<int>(p), key.second});
            *slot = it->second;
        }
    }

    // Junctions over the arcs actually carrying paths.
    std::set<int> active;
    for (const Path& p : paths)
        for (const std::string& aid : p.arcs)
            active.insert(network.arc_index(aid));
    std::map<std::string, Junction> junctions;
    for (int ai : active) {
        const Arc& a = network.arcs[ai];
        junctions[a.head].incoming_roads += 1;
        junctions[a.tail].outgoing_roads += 1;
    }
    // Record the cells flanking each node crossed by a path.
    for (std::size_t p = 0; p < paths.size(); ++p) {
        int offset = 0;
        for (std::size_t i = 0; i + 1 < paths[p].arcs.size(); ++i) {
            const Arc& a = network.arcs[network.arc_index(paths[p].arcs[i])];
            offset += arc_cell_count(a, dx);
            Junction& j = junctions[a.head];
            j.cells_before.push_back({static_cast<int>(p), offset - 1});
            j.cells_after.push_back({static_cast<int>(p), offset});
        }
    }
    for (auto& [node, j] : junctions) {
        if (j.incoming_roads == 0 || j.outgoing_roads == 0)
            continue;  // pure source or sink, no junction cell
        j.node = node;
        g.max_incoming_ = std::max(g.max_incoming_, j.incoming_roads);
        g.junctions_.push_back(std::move(j));
    }
    return g;
}

bool NetworkGrid::path_is_cycle(int path) const {
    const Arc& first = network_.arcs[network_.arc_index(paths_[path].arcs.front())];
    const Arc& last = network_.arcs[network_.arc_index(paths_[path].arcs.back())];
    return last.head == first.tail;
}

} // namespace multipath
