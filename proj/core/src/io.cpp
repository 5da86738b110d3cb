#include "multipath/io.hpp"
#include "multipath/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

namespace multipath {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

// Lossless rendering for the network-file round trip.
std::string fmt_exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct Cursor {
    const std::string& name;
    int line = 0;

    [[noreturn]] void fail(const std::string& msg) const {
        throw ModelError(name + ":" + std::to_string(line) + ": " + msg);
    }
};

std::vector<std::string> tokens_of(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string tok;
    while (is >> tok) out.push_back(tok);
    return out;
}

double parse_number(const Cursor& at, const std::string& tok, const char* what) {
    try {
        std::size_t used = 0;
        double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        at.fail(std::string("expected a number for ") + what + ", got '" + tok + "'");
    }
}

int parse_int(const Cursor& at, const std::string& tok, const char* what) {
    try {
        std::size_t used = 0;
        int v = std::stoi(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        at.fail(std::string("expected an integer for ") + what + ", got '" + tok + "'");
    }
}

} // namespace

NetworkFile parse_network_file(std::istream& in, const std::string& name) {
    NetworkFile file;
    Cursor at{name};

    std::string section;
    bool have_dx = false;
    std::string flux_kind = "quadratic";
    double rho_max = 1.0, scale = 1.0;
    std::vector<double> sample_rho, sample_flow;
    int flux_line = 0, dx_line = 0;
    std::map<std::string, int> arc_lines;
    // boundary/initial statements keyed by path id, resolved at the end
    struct BcStmt { int line; PathEnd end; BoundaryCondition bc; };
    struct InitStmt { int line; InitialSpec spec; };
    std::map<int, std::vector<BcStmt>> bc_stmts;
    std::map<int, InitStmt> init_stmts;

    std::string raw;
    while (std::getline(in, raw)) {
        ++at.line;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::vector<std::string> tok = tokens_of(raw);
        if (tok.empty()) continue;

        if (tok[0].front() == '[') {
            if (tok.size() != 1 || tok[0].back() != ']')
                at.fail("malformed section header '" + raw + "'");
            section = tok[0].substr(1, tok[0].size() - 2);
            static const char* known[] = {"nodes", "arcs", "paths", "flux",
                                          "grid", "boundaries", "initial"};
            if (std::find_if(std::begin(known), std::end(known),
                             [&](const char* k) { return section == k; }) == std::end(known))
                at.fail("unknown section '" + section + "'");
            continue;
        }
        if (section.empty())
            at.fail("content before the first section header");

        if (section == "nodes") {
            if (tok.size() != 1) at.fail("expected one node id per line");
            file.network.nodes.push_back(tok[0]);
        } else if (section == "arcs") {
            if (tok.size() != 4) at.fail("expected: id tail head length");
            Arc a{tok[0], tok[1], tok[2], parse_number(at, tok[3], "arc length")};
            file.network.arcs.push_back(a);
            arc_lines[a.id] = at.line;
        } else if (section == "paths") {
            if (tok.size() < 2) at.fail("expected: path-id arc-id...");
            Path p;
            p.id = parse_int(at, tok[0], "path id");
            p.arcs.assign(tok.begin() + 1, tok.end());
            file.paths.push_back(std::move(p));
        } else if (section == "flux") {
            flux_line = at.line;
            if (tok[0] == "kind") {
                if (tok.size() != 2 || (tok[1] != "quadratic" && tok[1] != "tabulated"))
                    at.fail("flux kind must be 'quadratic' or 'tabulated'");
                flux_kind = tok[1];
            } else if (tok[0] == "rho_max") {
                if (tok.size() != 2) at.fail("expected: rho_max value");
                rho_max = parse_number(at, tok[1], "rho_max");
            } else if (tok[0] == "scale") {
                if (tok.size() != 2) at.fail("expected: scale value");
                scale = parse_number(at, tok[1], "scale");
            } else if (tok[0] == "sample") {
                if (tok.size() != 3) at.fail("expected: sample rho flow");
                sample_rho.push_back(parse_number(at, tok[1], "sample density"));
                sample_flow.push_back(parse_number(at, tok[2], "sample flow"));
            } else {
                at.fail("unknown flux field '" + tok[0] + "'");
            }
        } else if (section == "grid") {
            if (tok[0] != "dx" || tok.size() != 2) at.fail("expected: dx value");
            file.dx = parse_number(at, tok[1], "dx");
            have_dx = true;
            dx_line = at.line;
        } else if (section == "boundaries") {
            if (tok.size() < 3) at.fail("expected: path-id left|right kind [value]");
            BcStmt s;
            s.line = at.line;
            int pid = parse_int(at, tok[0], "path id");
            if (tok[1] == "left") s.end = PathEnd::left;
            else if (tok[1] == "right") s.end = PathEnd::right;
            else at.fail("path end must be 'left' or 'right'");
            if (tok[2] == "dirichlet") {
                if (tok.size() != 4) at.fail("dirichlet needs a value");
                s.bc = BoundaryCondition::dirichlet(parse_number(at, tok[3], "boundary density"));
            } else if (tok[2] == "zero_flux") {
                if (tok.size() != 3) at.fail("zero_flux takes no value");
                s.bc = BoundaryCondition::zero_flux();
            } else if (tok[2] == "periodic") {
                if (tok.size() != 3) at.fail("periodic takes no value");
                s.bc = BoundaryCondition::periodic();
            } else {
                at.fail("unknown boundary kind '" + tok[2] + "'");
            }
            bc_stmts[pid].push_back(s);
        } else if (section == "initial") {
            if (tok.size() < 2) at.fail("expected: path-id constant v | path-id cells v...");
            InitStmt s;
            s.line = at.line;
            int pid = parse_int(at, tok[0], "path id");
            if (tok[1] == "constant") {
                if (tok.size() != 3) at.fail("constant needs one value");
                s.spec.constant = true;
                s.spec.value = parse_number(at, tok[2], "initial density");
            } else if (tok[1] == "cells") {
                s.spec.constant = false;
                for (std::size_t i = 2; i < tok.size(); ++i)
                    s.spec.cells.push_back(parse_number(at, tok[i], "initial density"));
            } else {
                at.fail("expected 'constant' or 'cells'");
            }
            if (init_stmts.count(pid)) at.fail("duplicate initial data for path " + std::to_string(pid));
            init_stmts.emplace(pid, std::move(s));
        }
    }

    // Structural validation with positions where we have them.
    at.line = flux_line;
    try {
        if (flux_kind == "quadratic") {
            if (!sample_rho.empty()) at.fail("quadratic flux takes no samples");
            file.flux = FluxModel::quadratic(rho_max, scale);
        } else {
            file.flux = FluxModel::tabulated(sample_rho, sample_flow);
        }
    } catch (const ModelError& e) {
        at.fail(e.what());
    }

    try {
        file.network.validate();
        validate_paths(file.network, file.paths);
    } catch (const ModelError& e) {
        throw ModelError(name + ": " + e.what());
    }
    std::sort(file.paths.begin(), file.paths.end(),
              [](const Path& a, const Path& b) { return a.id < b.id; });

    if (!have_dx) throw ModelError(name + ": missing [grid] dx");
    at.line = dx_line;
    if (!(file.dx > 0.0)) at.fail("dx must be positive");
    for (const Arc& a : file.network.arcs) {
        double ratio = a.length / file.dx;
        if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || ratio < 0.5) {
            at.line = arc_lines[a.id];
            at.fail("length " + fmt(a.length) + " of arc '" + a.id +
                    "' is not an integer multiple of dx = " + fmt(file.dx));
        }
    }

    const int n_paths = static_cast<int>(file.paths.size());
    file.left.assign(n_paths, BoundaryCondition::zero_flux());
    file.right.assign(n_paths, BoundaryCondition::zero_flux());
    std::vector<char> have_left(n_paths, 0), have_right(n_paths, 0);
    for (const auto& [pid, stmts] : bc_stmts) {
        if (pid < 1 || pid > n_paths) {
            at.line = stmts.front().line;
            at.fail("boundary for unknown path " + std::to_string(pid));
        }
        for (const BcStmt& s : stmts) {
            at.line = s.line;
            char& seen = s.end == PathEnd::left ? have_left[pid - 1] : have_right[pid - 1];
            if (seen) at.fail("duplicate boundary for path " + std::to_string(pid));
            seen = true;
            if (s.bc.kind == BoundaryKind::dirichlet &&
                (s.bc.value < 0.0 || s.bc.value > file.flux.rho_max()))
                at.fail("boundary density " + fmt(s.bc.value) + " outside [0, " +
                        fmt(file.flux.rho_max()) + "]");
            (s.end == PathEnd::left ? file.left : file.right)[pid - 1] = s.bc;
        }
    }
    for (int p = 0; p < n_paths; ++p)
        if (!have_left[p] || !have_right[p])
            throw ModelError(name + ": path " + std::to_string(p + 1) +
                             " is missing a boundary condition (both ends required)");

    file.initial.assign(n_paths, InitialSpec{});
    for (auto& [pid, s] : init_stmts) {
        at.line = s.line;
        if (pid < 1 || pid > n_paths)
            at.fail("initial data for unknown path " + std::to_string(pid));
        auto check_range = [&](double v) {
            if (v < 0.0 || v > file.flux.rho_max())
                at.fail("initial density " + fmt(v) + " outside [0, " +
                        fmt(file.flux.rho_max()) + "]");
        };
        if (s.spec.constant) check_range(s.spec.value);
        else for (double v : s.spec.cells) check_range(v);
        file.initial[pid - 1] = std::move(s.spec);
    }
    return file;
}

NetworkFile parse_network_string(const std::string& text, const std::string& name) {
    std::istringstream in(text);
    return parse_network_file(in, name);
}

NetworkFile load_network_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelError("cannot open '" + path + "'");
    return parse_network_file(in, path);
}

std::string render_network_file(const NetworkFile& file) {
    std::ostringstream out;
    out << "[nodes]\n";
    for (const std::string& n : file.network.nodes) out << n << "\n";
    out << "\n[arcs]\n";
    for (const Arc& a : file.network.arcs)
        out << a.id << " " << a.tail << " " << a.head << " " << fmt_exact(a.length) << "\n";
    out << "\n[paths]\n";
    for (const Path& p : file.paths) {
        out << p.id;
        for (const std::string& a : p.arcs) out << " " << a;
        out << "\n";
    }
    out << "\n[flux]\n";
    if (file.flux.is_quadratic()) {
        out << "kind quadratic\n";
        out << "rho_max " << fmt_exact(file.flux.rho_max()) << "\n";
        out << "scale " << fmt_exact(file.flux.quadratic_scale()) << "\n";
    } else {
        out << "kind tabulated\n";
        const auto& rho = file.flux.sample_densities();
        const auto& flow = file.flux.sample_flows();
        for (std::size_t i = 0; i < rho.size(); ++i)
            out << "sample " << fmt_exact(rho[i]) << " " << fmt_exact(flow[i]) << "\n";
    }
    out << "\n[grid]\n";
    out << "dx " << fmt_exact(file.dx) << "\n";
    out << "\n[boundaries]\n";
    auto bc_line = [&](int pid, const char* end, const BoundaryCondition& bc) {
        out << pid << " " << end << " ";
        switch (bc.kind) {
        case BoundaryKind::dirichlet: out << "dirichlet " << fmt_exact(bc.value); break;
        case BoundaryKind::zero_flux: out << "zero_flux"; break;
        case BoundaryKind::periodic: out << "periodic"; break;
        }
        out << "\n";
    };
    for (std::size_t p = 0; p < file.paths.size(); ++p) {
        bc_line(file.paths[p].id, "left", file.left[p]);
        bc_line(file.paths[p].id, "right", file.right[p]);
    }
    out << "\n[initial]\n";
    for (std::size_t p = 0; p < file.paths.size(); ++p) {
        const InitialSpec& s = file.initial[p];
        out << file.paths[p].id;
        if (s.constant) {
            out << " constant " << fmt_exact(s.value);
        } else {
            out << " cells";
            for (double v : s.cells) out << " " << fmt_exact(v);
        }
        out << "\n";
    }
    return out.str();
}

bool operator==(const NetworkFile& a, const NetworkFile& b) {
    auto arcs_eq = [](const Arc& x, const Arc& y) {
        return x.id == y.id && x.tail == y.tail && x.head == y.head && x.length == y.length;
    };
    if (a.network.nodes != b.network.nodes) return false;
    if (a.network.arcs.size() != b.network.arcs.size()) return false;
    for (std::size_t i = 0; i < a.network.arcs.size(); ++i)
        if (!arcs_eq(a.network.arcs[i], b.network.arcs[i])) return false;
    if (a.paths.size() != b.paths.size()) return false;
    for (std::size_t i = 0; i < a.paths.size(); ++i)
        if (a.paths[i].id != b.paths[i].id || a.paths[i].arcs != b.paths[i].arcs) return false;
    return a.flux == b.flux && a.dx == b.dx && a.left == b.left && a.right == b.right &&
           a.initial == b.initial;
}

NetworkGrid make_grid(const NetworkFile& file) {
    return NetworkGrid::build(file.network, file.paths, file.dx);
}

DensityField make_field(const NetworkFile& file, const NetworkGrid& grid) {
    DensityField field = DensityField::zeros(grid);
    field.left = file.left;
    field.right = file.right;
    for (int p = 0; p < grid.path_count(); ++p) {
        const InitialSpec& s = file.initial[p];
        if (s.constant) {
            std::fill(field.mu[p].begin(), field.mu[p].end(), s.value);
        } else {
            if (static_cast<int>(s.cells.size()) != grid.cell_count(p))
                throw ModelError("initial: path " + std::to_string(p + 1) + " lists " +
                                 std::to_string(s.cells.size()) + " cells, grid has " +
                                 std::to_string(grid.cell_count(p)));
            field.mu[p] = s.cells;
        }
    }
    return field;
}

std::vector<SnapshotRecord> make_snapshot_records(const NetworkGrid& grid, const PathArray& mu,
                                                  const PathArray& omega, double time) {
    std::vector<SnapshotRecord> rows;
    for (int p = 0; p < grid.path_count(); ++p) {
        for (int k = 0; k < grid.cell_count(p); ++k) {
            SnapshotRecord r;
            r.time = time;
            r.path = p + 1;
            r.cell = k;
            r.x = grid.cell_center(p, k);
            r.mu = mu[p][k];
            r.omega = omega[p][k];
            r.pi = r.omega > 0.0 ? r.mu / r.omega : 0.0;
            rows.push_back(r);
        }
    }
    return rows;
}

void write_snapshots_csv(const std::vector<SnapshotRecord>& records, std::ostream& out) {
    out << "time,path,cell,x,mu,omega,pi\n";
    for (const SnapshotRecord& r : records) {
        out << fmt(r.time) << ',' << r.path << ',' << r.cell << ',' << fmt(r.x) << ','
            << fmt(r.mu) << ',' << fmt(r.omega) << ',' << fmt(r.pi) << '\n';
    }
}

void write_snapshots_csv(const std::vector<SnapshotRecord>& records, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ModelError("cannot open '" + path + "' for writing");
    write_snapshots_csv(records, out);
    if (!out) throw ModelError("write failed for '" + path + "'");
}

} // namespace multipath
