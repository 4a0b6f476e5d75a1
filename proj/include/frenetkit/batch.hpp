#pragma once

#include <cstdint>
#include <vector>

#include "frenetkit/geometry.hpp"

namespace frenetkit {

class PLFormula;

/// Execution policy for the point-wise kernels. Every kernel computes one
/// output slot per input point, so the parallel variants are bitwise
/// identical to the serial references regardless of thread count.
enum class Exec { Serial, Parallel, Auto };

int max_threads();

/// Auto switches to the parallel path above this many points.
inline constexpr std::size_t kParallelGrain = 2048;

bool use_parallel(Exec exec, std::size_t n);

// --- flag-simplex membership over a point set -------------------------------
std::vector<std::uint8_t> membership_mask_serial(const FlagSimplex& C,
                                                 const std::vector<Vec>& points, double tol);
std::vector<std::uint8_t> membership_mask_parallel(const FlagSimplex& C,
                                                   const std::vector<Vec>& points, double tol);
std::vector<std::uint8_t> membership_mask(const FlagSimplex& C, const std::vector<Vec>& points,
                                          double tol, Exec exec = Exec::Auto);

// --- residuals of points against a prefix frame -----------------------------
std::vector<Vec> residual_batch_serial(const std::vector<Vec>& points, const Vec& base,
                                       const Frame& prefix);
std::vector<Vec> residual_batch_parallel(const std::vector<Vec>& points, const Vec& base,
                                         const Frame& prefix);
std::vector<Vec> residual_batch(const std::vector<Vec>& points, const Vec& base,
                                const Frame& prefix, Exec exec = Exec::Auto);

// --- piecewise-linear formula evaluation over a point set --------------------
std::vector<double> eval_batch_serial(const PLFormula& f, const std::vector<Vec>& points);
std::vector<double> eval_batch_parallel(const PLFormula& f, const std::vector<Vec>& points);
std::vector<double> eval_batch(const PLFormula& f, const std::vector<Vec>& points,
                               Exec exec = Exec::Auto);

// --- leave-one-out convex dependence -----------------------------------------
/// mask[i] = 1 iff points[i] lies in the convex hull of the other points.
std::vector<std::uint8_t> convex_dependence_serial(const std::vector<Vec>& points,
                                                   double feas_tol);
std::vector<std::uint8_t> convex_dependence_parallel(const std::vector<Vec>& points,
                                                     double feas_tol);
std::vector<std::uint8_t> convex_dependence(const std::vector<Vec>& points, double feas_tol,
                                            Exec exec = Exec::Auto);

}  // namespace frenetkit
