#include "frenetkit/batch.hpp"

#include "frenetkit/estimator.hpp"
#include "frenetkit/lp.hpp"
#include "frenetkit/witness.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace frenetkit {

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

bool use_parallel(Exec exec, std::size_t n) {
#ifndef _OPENMP
    (void)n;
    return exec == Exec::Parallel;  // degrades to the serial loop below anyway
#else
    switch (exec) {
        case Exec::Serial: return false;
        case Exec::Parallel: return true;
        case Exec::Auto: return n >= kParallelGrain && max_threads() > 1;
    }
    return false;
#endif
}

std::vector<std::uint8_t> membership_mask_serial(const FlagSimplex& C,
                                                 const std::vector<Vec>& points, double tol) {
    std::vector<std::uint8_t> mask(points.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i)
        mask[i] = flag_membership(C, points[i], tol) ? 1 : 0;
    return mask;
}

std::vector<std::uint8_t> membership_mask_parallel(const FlagSimplex& C,
                                                   const std::vector<Vec>& points, double tol) {
    std::vector<std::uint8_t> mask(points.size(), 0);
    const std::int64_t n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        mask[static_cast<std::size_t>(i)] =
            flag_membership(C, points[static_cast<std::size_t>(i)], tol) ? 1 : 0;
    return mask;
}

std::vector<std::uint8_t> membership_mask(const FlagSimplex& C, const std::vector<Vec>& points,
                                          double tol, Exec exec) {
    return use_parallel(exec, points.size()) ? membership_mask_parallel(C, points, tol)
                                             : membership_mask_serial(C, points, tol);
}

std::vector<Vec> residual_batch_serial(const std::vector<Vec>& points, const Vec& base,
                                       const Frame& prefix) {
    std::vector<Vec> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = residual(points[i], base, prefix);
    return out;
}

std::vector<Vec> residual_batch_parallel(const std::vector<Vec>& points, const Vec& base,
                                         const Frame& prefix) {
    std::vector<Vec> out(points.size());
    const std::int64_t n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] =
            residual(points[static_cast<std::size_t>(i)], base, prefix);
    return out;
}

std::vector<Vec> residual_batch(const std::vector<Vec>& points, const Vec& base,
                                const Frame& prefix, Exec exec) {
    return use_parallel(exec, points.size()) ? residual_batch_parallel(points, base, prefix)
                                             : residual_batch_serial(points, base, prefix);
}

std::vector<double> eval_batch_serial(const PLFormula& f, const std::vector<Vec>& points) {
    std::vector<double> out(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) out[i] = f(points[i]);
    return out;
}

std::vector<double> eval_batch_parallel(const PLFormula& f, const std::vector<Vec>& points) {
    std::vector<double> out(points.size());
    const std::int64_t n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i)
        out[static_cast<std::size_t>(i)] = f(points[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<double> eval_batch(const PLFormula& f, const std::vector<Vec>& points, Exec exec) {
    return use_parallel(exec, points.size()) ? eval_batch_parallel(f, points)
                                             : eval_batch_serial(f, points);
}

namespace {

std::uint8_t dependent_on_rest(const std::vector<Vec>& points, std::size_t i, double feas_tol) {
    std::vector<std::uint8_t> skip(points.size(), 0);
    skip[i] = 1;
    // exact duplicates: only the first occurrence may count as a generator
    for (std::size_t j = 0; j < points.size(); ++j)
        if (j != i && j > i && points[j] == points[i]) skip[j] = 1;
    for (std::size_t j = 0; j < i; ++j)
        if (points[j] == points[i]) return 1;
    return in_convex_hull(points, points[i], skip, feas_tol) ? 1 : 0;
}

}  // namespace

std::vector<std::uint8_t> convex_dependence_serial(const std::vector<Vec>& points,
                                                   double feas_tol) {
    std::vector<std::uint8_t> mask(points.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i)
        mask[i] = dependent_on_rest(points, i, feas_tol);
    return mask;
}

std::vector<std::uint8_t> convex_dependence_parallel(const std::vector<Vec>& points,
                                                     double feas_tol) {
    std::vector<std::uint8_t> mask(points.size(), 0);
    const std::int64_t n = static_cast<std::int64_t>(points.size());
#pragma omp parallel for schedule(dynamic, 8)
    for (std::int64_t i = 0; i < n; ++i)
        mask[static_cast<std::size_t>(i)] =
            dependent_on_rest(points, static_cast<std::size_t>(i), feas_tol);
    return mask;
}

std::vector<std::uint8_t> convex_dependence(const std::vector<Vec>& points, double feas_tol,
                                            Exec exec) {
    // LP per point is heavy; parallelize from a much smaller count
    const bool par = (exec == Exec::Parallel) ||
                     (exec == Exec::Auto && points.size() >= 64 && max_threads() > 1);
    return par ? convex_dependence_parallel(points, feas_tol)
               : convex_dependence_serial(points, feas_tol);
}

}  // namespace frenetkit
