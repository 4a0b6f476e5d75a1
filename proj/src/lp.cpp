#include "frenetkit/lp.hpp"

#include <cmath>
#include <limits>

namespace frenetkit {

bool in_convex_hull(const std::vector<Vec>& gens, const Vec& p,
                    const std::vector<std::uint8_t>& skip, double feas_tol) {
    if (gens.empty()) return false;
    const Eigen::Index n = p.size();
    std::vector<int> cols;
    cols.reserve(gens.size());
    for (std::size_t j = 0; j < gens.size(); ++j) {
        if (!skip.empty() && skip[j]) continue;
        if (gens[j].size() != n) throw DimensionMismatch("in_convex_hull: dimension mismatch");
        cols.push_back(static_cast<int>(j));
    }
    const int m = static_cast<int>(cols.size());
    if (m == 0) return false;
    const int rows = static_cast<int>(n) + 1;  // coordinates plus the sum-to-one row

    // tableau: [A | artificial identity | rhs], phase-1 objective appended
    Eigen::MatrixXd t(rows + 1, m + rows + 1);
    t.setZero();
    for (int j = 0; j < m; ++j) {
        t.block(0, j, n, 1) = gens[static_cast<std::size_t>(cols[static_cast<std::size_t>(j)])];
        t(rows - 1, j) = 1.0;
    }
    t.block(0, m + rows, n, 1) = p;
    t(rows - 1, m + rows) = 1.0;
    for (int i = 0; i < rows; ++i) {
        if (t(i, m + rows) < 0.0) t.row(i) = -t.row(i);
        t(i, m + i) = 1.0;
    }
    // artificial basis: reduced costs are the column sums for the original
    // variables and zero for the (basic) artificials
    t.row(rows) = t.topRows(rows).colwise().sum();
    for (int i = 0; i < rows; ++i) t(rows, m + i) = 0.0;
    std::vector<int> basis(static_cast<std::size_t>(rows));
    for (int i = 0; i < rows; ++i) basis[static_cast<std::size_t>(i)] = m + i;

    const double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
    const double pivot_tol = 1e-11 * scale;
    const int max_iters = 200 * (m + rows);

    for (int it = 0; it < max_iters; ++it) {
        // Bland: smallest improving column, smallest-index leaving row
        int enter = -1;
        for (int j = 0; j < m + rows; ++j) {
            if (t(rows, j) > pivot_tol) {
                enter = j;
                break;
            }
        }
        if (enter < 0) break;
        int leave = -1;
        double best = std::numeric_limits<double>::infinity();
        for (int i = 0; i < rows; ++i) {
            if (t(i, enter) > pivot_tol) {
                const double ratio = t(i, m + rows) / t(i, enter);
                if (ratio < best - 1e-15 ||
                    (std::abs(ratio - best) <= 1e-15 &&
                     (leave < 0 || basis[static_cast<std::size_t>(i)] <
                                       basis[static_cast<std::size_t>(leave)]))) {
                    best = ratio;
                    leave = i;
                }
            }
        }
        if (leave < 0) break;  // unbounded column; cannot improve feasibility
        t.row(leave) /= t(leave, enter);
        for (int i = 0; i <= rows; ++i) {
            if (i == leave) continue;
            const double f = t(i, enter);
            if (f != 0.0) t.row(i) -= f * t.row(leave);
        }
        basis[static_cast<std::size_t>(leave)] = enter;
    }
    const double infeasibility = t(rows, m + rows);
    return infeasibility <= feas_tol * std::max(1.0, p.cwiseAbs().maxCoeff());
}

}  // namespace frenetkit
