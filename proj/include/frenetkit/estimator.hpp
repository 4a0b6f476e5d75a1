#pragma once

#include <string>
#include <vector>

#include "frenetkit/geometry.hpp"

namespace frenetkit {

/// Finite sample of points converging to a designated base point. Points are
/// stored in convergence order: later entries are (eventually) closer to the
/// base.
struct PointSequence {
    Vec base;
    std::vector<Vec> points;
};

/// Checks the sequence contract: dimensions agree and no point coincides with
/// the base. Non-monotone distances produce warnings, not errors.
void validate_sequence(const PointSequence& seq, std::vector<std::string>* warnings = nullptr);

enum class LevelStatus { Converged, Diverged, ResidualFloor, Exhausted };

const char* to_string(LevelStatus s);

struct LevelDiagnostics {
    LevelStatus status = LevelStatus::Exhausted;
    Vec direction;                  // window-mean direction (unit), empty when none
    double spread = 0.0;            // max pairwise angle over the chosen window
    std::vector<int> window;        // sample indices backing the estimate
    std::vector<double> residual_norms;      // per sample index
    std::vector<double> angle_to_estimate;   // per sample index, NaN when floored
    std::vector<Vec> witnesses;     // two directions realizing the spread when diverged
};

struct FrameEstimate {
    Frame frame = Frame::empty(1);
    std::vector<LevelDiagnostics> levels;   // levels 1..k_attempted, in order
    std::vector<std::string> warnings;

    bool converged_through(int k) const;
    bool any_diverged() const;
};

struct EstimatorConfig {
    int window = 5;                  // directions per convergence window
    double angle_tol = 1e-4;         // max pairwise angle for "converged" (rad)
    double divergence_angle = 0.5;   // tail spread above this (and not shrinking) => diverged
    double floor_rel = 1e-13;        // residual floor, relative to the data scale
    Tolerances tol{};
};

/// Residual of p against base and the span of prefix:
/// (p - base) - proj_span(prefix)(p - base).
Vec residual(const Vec& p, const Vec& base, const Frame& prefix);

/// Derivative-free frame estimation. Per level the normalized residual
/// directions are scanned with a sliding window; the window with the smallest
/// angular spread carries the estimate, which keeps the result out of the
/// floating-point cancellation zone that the deepest samples eventually hit.
/// Estimation stops at the first level that does not converge.
FrameEstimate estimate_frame(const PointSequence& seq, int k_max,
                             const EstimatorConfig& cfg = {});

/// Frame from analytically supplied derivative vectors. Rank deficiency
/// propagates as "no frame at this depth" (RankDeficiency with the level).
Frame classical_frame(const std::vector<Vec>& derivatives, const Tolerances& tol = {});

// --- builtin curves -----------------------------------------------------------

enum class CurveKind {
    Helix,       // (cos t, sin t, t)
    Cubic,       // (t, t^3)
    Sin2,        // (t, t^2 sin(1/t)), t != 0
    Polynomial,  // rows of a coefficient matrix: x_r(t) = sum_j C(r,j) t^j
};

struct CurveSpec {
    CurveKind kind = CurveKind::Helix;
    Eigen::MatrixXd coeffs;  // Polynomial only; one row per output dimension

    int dim() const;
};

/// Geometric parameter schedule t_i = t0 + (t_start - t0) * ratio^i,
/// i = 0..count-1.
struct SamplePlan {
    double t0 = 0.0;
    double t_start = 0.5;
    double ratio = 0.5;
    int count = 20;
};

Vec curve_point(const CurveSpec& spec, double t);

/// Analytic derivatives phi'(t), ..., phi^(order)(t). Throws where a
/// derivative does not exist (Sin2 beyond order 1 at t = 0).
std::vector<Vec> curve_derivatives(const CurveSpec& spec, double t, int order);

/// Sample a curve along a plan. Points equal to the base are dropped with a
/// warning.
PointSequence sample_curve(const CurveSpec& spec, const SamplePlan& plan,
                           std::vector<std::string>* warnings = nullptr);

/// The oscillating-curve subsequences through the extremes of sin(1/t):
/// peaks t = 1/(2*pi*i + pi/2), troughs t = 1/(2*pi*i + 3*pi/2). Indices grow
/// geometrically (i = 2^j) so the parameters decay geometrically; a unit
/// index stride would need ~10^5 samples before the second-level direction
/// settles.
enum class Sin2Phase { Peaks, Troughs, Mixed };

PointSequence sample_sin2_phase(Sin2Phase phase, int count);

}  // namespace frenetkit
