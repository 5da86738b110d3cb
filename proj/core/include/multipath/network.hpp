#pragma once

#include <string>
#include <vector>

namespace multipath {

/// Directed road segment between two junction nodes.
struct Arc {
    std::string id;
    std::string tail;
    std::string head;
    double length = 0.0;
};

/// Directed road graph. Nodes are plain identifiers; all geometry lives on
/// the arcs.
struct Network {
    std::vector<std::string> nodes;
    std::vector<Arc> arcs;

    /// Checks structural invariants: at least one arc, positive lengths,
    /// unique ids, endpoints listed among the nodes.
    void validate() const;

    int node_index(const std::string& id) const;  // -1 when absent
    int arc_index(const std::string& id) const;   // -1 when absent

    /// Number of listed arcs entering / leaving the node.
    int in_degree(const std::string& node) const;
    int out_degree(const std::string& node) const;
};

/// One driver population's full route: an ordered, head-to-tail connected
/// arc sequence with no repeated arc.
struct Path {
    int id = 0;
    std::vector<std::string> arcs;
};

/// Checks each path against the network (connectivity, no repeats) and that
/// path ids are exactly 1..N with no duplicates.
void validate_paths(const Network& network, const std::vector<Path>& paths);

} // namespace multipath
