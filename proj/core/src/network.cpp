#include "multipath/network.hpp"
#include "multipath/errors.hpp"

#include <set>
#include <sstream>

namespace multipath {

void Network::validate() const {
    if (arcs.empty())
        throw ModelError("network: at least one arc required");
    std::set<std::string> node_ids(nodes.begin(), nodes.end());
    if (node_ids.size() != nodes.size())
        throw ModelError("network: duplicate node id");
    std::set<std::string> arc_ids;
    for (const Arc& a : arcs) {
        if (!arc_ids.insert(a.id).second)
            throw ModelError("network: duplicate arc id '" + a.id + "'");
        if (!(a.length > 0.0)) {
            std::ostringstream msg;
            msg << "network: arc '" << a.id << "' has non-positive length " << a.length;
            throw ModelError(msg.str());
        }
        if (!node_ids.count(a.tail))
            throw ModelError("network: arc '" + a.id + "' references unknown tail node '" + a.tail + "'");
        if (!node_ids.count(a.head))
            throw ModelError("network: arc '" + a.id + "' references unknown head node '" + a.head + "'");
    }
}

int Network::node_index(const std::string& id) const {
    for (std::size_t i = 0; i < nodes.size(); ++i)
        if (nodes[i] == id) return static_cast<int>(i);
    return -1;
}

int Network::arc_index(const std::string& id) const {
    for (std::size_t i = 0; i < arcs.size(); ++i)
        if (arcs[i].id == id) return static_cast<int>(i);
    return -1;
}

int Network::in_degree(const std::string& node) const {
    int n = 0;
    for (const Arc& a : arcs)
        if (a.head == node) ++n;
    return n;
}

int Network::out_degree(const std::string& node) const {
    int n = 0;
    for (const Arc& a : arcs)
        if (a.tail == node) ++n;
    return n;
}

void validate_paths(const Network& network, const std::vector<Path>& paths) {
    if (paths.empty())
        throw ModelError("paths: at least one path required");
    std::set<int> ids;
    for (const Path& p : paths) {
        if (!ids.insert(p.id).second)
            throw ModelError("paths: duplicate path id " + std::to_string(p.id));
        if (p.arcs.empty())
            throw ModelError("paths: path " + std::to_string(p.id) + " has no arcs");
        std::set<std::string> seen;
        const Arc* prev = nullptr;
        for (const std::string& aid : p.arcs) {
            int ai = network.arc_index(aid);
            if (ai < 0)
                throw ModelError("paths: path " + std::to_string(p.id) +
                                 " references unknown arc '" + aid + "'");
            if (!seen.insert(aid).second)
                throw ModelError("paths: path " + std::to_string(p.id) +
                                 " repeats arc '" + aid + "'");
            const Arc& arc = network.arcs[ai];
            if (prev && prev->head != arc.tail)
                throw ModelError("paths: path " + std::to_string(p.id) + " is disconnected at arc '" +
                                 aid + "' (previous head '" + prev->head + "', tail '" + arc.tail + "')");
            prev = &arc;
        }
    }
    // Path ids name the equation index, so they must form 1..N.
    int expect = 1;
    for (int id : ids) {
        if (id != expect)
            throw ModelError("paths: ids must be exactly 1..N (missing id " +
                             std::to_string(expect) + ")");
        ++expect;
    }
}

} // namespace multipath
