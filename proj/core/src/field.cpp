#include "multipath/field.hpp"

#include <algorithm>

namespace multipath {

DensityField DensityField::zeros(const NetworkGrid& grid) {
    DensityField f;
    f.mu.resize(grid.path_count());
    for (int p = 0; p < grid.path_count(); ++p)
        f.mu[p].assign(grid.cell_count(p), 0.0);
    f.left.assign(grid.path_count(), BoundaryCondition::zero_flux());
    f.right.assign(grid.path_count(), BoundaryCondition::zero_flux());
    return f;
}

PathArray accumulate_omega(const NetworkGrid& grid, const PathArray& mu) {
    PathArray omega(mu.size());
    for (int p = 0; p < grid.path_count(); ++p)
        omega[p].assign(grid.cell_count(p), 0.0);
    for (int c = 0; c < grid.physical_cell_count(); ++c) {
        const auto& refs = grid.aliases(c);
        double total = 0.0;
        for (const PathCellRef& r : refs)
            total += mu[r.path][r.cell];
        for (const PathCellRef& r : refs)
            omega[r.path][r.cell] = total;
    }
    return omega;
}

AdmissibilityReport check_admissible(const NetworkGrid& grid, const PathArray& mu, double rho_max) {
    AdmissibilityReport report;
    for (int c = 0; c < grid.physical_cell_count(); ++c) {
        double total = 0.0;
        for (const PathCellRef& r : grid.aliases(c))
            total += mu[r.path][r.cell];
        report.max_omega = std::max(report.max_omega, total);
        if (total > rho_max + 1e-10)
            report.offenders.push_back(c);
    }
    return report;
}

PathArray turning_fractions(const NetworkGrid& grid, const PathArray& mu) {
    PathArray omega = accumulate_omega(grid, mu);
    PathArray pi(mu.size());
    for (int p = 0; p < grid.path_count(); ++p) {
        pi[p].assign(grid.cell_count(p), 0.0);
        for (int k = 0; k < grid.cell_count(p); ++k)
            if (omega[p][k] > 0.0)
                pi[p][k] = mu[p][k] / omega[p][k];
    }
    return pi;
}

std::vector<double> path_masses(const NetworkGrid& grid, const PathArray& mu) {
    std::vector<double> mass(mu.size(), 0.0);
    for (int p = 0; p < grid.path_count(); ++p) {
        double sum = 0.0;
        for (double v : mu[p]) sum += v;
        mass[p] = sum * grid.dx();
    }
    return mass;
}

} // namespace multipath
