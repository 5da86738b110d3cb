#pragma once

#include "multipath/field.hpp"
#include "multipath/flux.hpp"
#include "multipath/grid.hpp"
#include "multipath/network.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace multipath {

/// Initial data of one path: a constant or an explicit per-cell list.
struct InitialSpec {
    bool constant = true;
    double value = 0.0;
    std::vector<double> cells;
    friend bool operator==(const InitialSpec&, const InitialSpec&) = default;
};

/// Parsed network description: everything a simulation needs, validated.
///
/// Text format (sections in brackets, '#' comments):
///   [nodes]        one id per line
///   [arcs]         id tail head length
///   [paths]        id arc-id...
///   [flux]         kind quadratic|tabulated, rho_max v, scale v, sample rho flow
///   [grid]         dx v
///   [boundaries]   path left|right dirichlet v | zero_flux | periodic
///   [initial]      path constant v | path cells v...
struct NetworkFile {
    Network network;
    std::vector<Path> paths;
    FluxModel flux;
    double dx = 0.0;
    std::vector<BoundaryCondition> left;    // by path order
    std::vector<BoundaryCondition> right;
    std::vector<InitialSpec> initial;
};

/// Parses and fully validates a document; diagnostics carry "name:line:".
NetworkFile parse_network_file(std::istream& in, const std::string& name = "<input>");
NetworkFile parse_network_string(const std::string& text, const std::string& name = "<input>");
NetworkFile load_network_file(const std::string& path);

/// Canonical text rendering; parse(render(model)) reproduces the model.
std::string render_network_file(const NetworkFile& file);

bool operator==(const NetworkFile& a, const NetworkFile& b);

/// Builds the grid and the initial field described by a parsed file.
NetworkGrid make_grid(const NetworkFile& file);
DensityField make_field(const NetworkFile& file, const NetworkGrid& grid);

/// One output row: cell state of one path at one time.
struct SnapshotRecord {
    double time = 0.0;
    int path = 0;        ///< 1-based path id
    int cell = 0;        ///< 0-based cell index along the path
    double x = 0.0;      ///< cell center in path arclength
    double mu = 0.0;
    double omega = 0.0;
    double pi = 0.0;     ///< mu / omega, 0 on empty cells
};

/// Rows for every (path, cell) of one time level, ordered by (path, cell).
/// Cells shared by several paths appear once per path, with equal omega.
std::vector<SnapshotRecord> make_snapshot_records(const NetworkGrid& grid, const PathArray& mu,
                                                  const PathArray& omega, double time);

/// CSV with header "time,path,cell,x,mu,omega,pi"; floating-point values
/// carry 12 significant digits and the byte stream is deterministic.
/// Records must arrive sorted by (time, path, cell).
void write_snapshots_csv(const std::vector<SnapshotRecord>& records, std::ostream& out);
void write_snapshots_csv(const std::vector<SnapshotRecord>& records, const std::string& path);

} // namespace multipath
