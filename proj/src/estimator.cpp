#include "frenetkit/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace frenetkit {

void validate_sequence(const PointSequence& seq, std::vector<std::string>* warnings) {
    if (seq.base.size() < 1) throw DimensionMismatch("PointSequence: empty base");
    if (seq.points.empty()) throw Error("PointSequence: no points");
    bool monotone = true;
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < seq.points.size(); ++i) {
        if (seq.points[i].size() != seq.base.size())
            throw DimensionMismatch("PointSequence: point dimension mismatch");
        const double d = (seq.points[i] - seq.base).norm();
        if (d == 0.0)
            throw Error("PointSequence: point " + std::to_string(i) + " equals the base");
        if (d > prev) monotone = false;
        prev = d;
    }
    if (!monotone && warnings)
        warnings->push_back("distances to base are not monotonically decreasing");
}

const char* to_string(LevelStatus s) {
    switch (s) {
        case LevelStatus::Converged: return "converged";
        case LevelStatus::Diverged: return "diverged";
        case LevelStatus::ResidualFloor: return "residual_floor";
        case LevelStatus::Exhausted: return "exhausted";
    }
    return "unknown";
}

bool FrameEstimate::converged_through(int k) const {
    if (static_cast<int>(levels.size()) < k) return false;
    for (int j = 0; j < k; ++j)
        if (levels[static_cast<std::size_t>(j)].status != LevelStatus::Converged) return false;
    return true;
}

bool FrameEstimate::any_diverged() const {
    for (const auto& l : levels)
        if (l.status == LevelStatus::Diverged) return true;
    return false;
}

Vec residual(const Vec& p, const Vec& base, const Frame& prefix) {
    if (p.size() != base.size() || p.size() != prefix.dim())
        throw DimensionMismatch("residual: dimension mismatch");
    const Vec d = p - base;
    return d - project_onto_span(d, prefix);
}

namespace {

double window_spread(const std::vector<Vec>& dirs, std::size_t begin, int window) {
    double spread = 0.0;
    for (int a = 0; a < window; ++a)
        for (int b = a + 1; b < window; ++b)
            spread = std::max(spread, angle_between(dirs[begin + static_cast<std::size_t>(a)],
                                                    dirs[begin + static_cast<std::size_t>(b)]));
    return spread;
}

std::pair<int, int> spread_argmax(const std::vector<Vec>& dirs, std::size_t begin, int window) {
    double spread = -1.0;
    std::pair<int, int> arg{0, 1};
    for (int a = 0; a < window; ++a)
        for (int b = a + 1; b < window; ++b) {
            const double ang = angle_between(dirs[begin + static_cast<std::size_t>(a)],
                                             dirs[begin + static_cast<std::size_t>(b)]);
            if (ang > spread) {
                spread = ang;
                arg = {a, b};
            }
        }
    return arg;
}

}  // namespace

FrameEstimate estimate_frame(const PointSequence& seq, int k_max, const EstimatorConfig& cfg) {
    FrameEstimate out;
    validate_sequence(seq, &out.warnings);
    const int n_pts = static_cast<int>(seq.points.size());
    const Eigen::Index dim = seq.base.size();
    if (cfg.window < 3) throw Error("estimate_frame: window must be >= 3");
    if (cfg.window > n_pts)
        throw Error("estimate_frame: window (" + std::to_string(cfg.window) +
                    ") larger than sample count (" + std::to_string(n_pts) + ")");
    if (k_max < 1 || k_max > static_cast<int>(dim))
        throw Error("estimate_frame: k_max out of range");

    double scale = 0.0;
    for (const Vec& p : seq.points) scale = std::max(scale, (p - seq.base).norm());
    const double floor_abs = cfg.floor_rel * scale;
    const int w = cfg.window;

    std::vector<Vec> frame_vectors;
    for (int level = 0; level < k_max; ++level) {
        LevelDiagnostics diag;
        const Frame prefix(dim, frame_vectors, cfg.tol);

        diag.residual_norms.resize(static_cast<std::size_t>(n_pts));
        diag.angle_to_estimate.assign(static_cast<std::size_t>(n_pts),
                                      std::numeric_limits<double>::quiet_NaN());
        std::vector<int> valid_idx;
        std::vector<Vec> dirs;
        bool floored = false;
        for (int i = 0; i < n_pts; ++i) {
            const Vec r = residual(seq.points[static_cast<std::size_t>(i)], seq.base, prefix);
            const double nrm = r.norm();
            diag.residual_norms[static_cast<std::size_t>(i)] = nrm;
            if (nrm < floor_abs || nrm == 0.0) {
                floored = true;
                continue;
            }
            valid_idx.push_back(i);
            dirs.push_back(r / nrm);
        }

        const int n_valid = static_cast<int>(dirs.size());
        if (n_valid < w) {
            diag.status = floored ? LevelStatus::ResidualFloor : LevelStatus::Exhausted;
            out.levels.push_back(std::move(diag));
            break;
        }

        // pick the most self-consistent window anywhere in the sequence
        int best_begin = 0;
        double best_spread = std::numeric_limits<double>::infinity();
        for (int s = 0; s + w <= n_valid; ++s) {
            const double spread = window_spread(dirs, static_cast<std::size_t>(s), w);
            if (spread < best_spread) {
                best_spread = spread;
                best_begin = s;
            }
        }
        diag.spread = best_spread;
        for (int j = 0; j < w; ++j)
            diag.window.push_back(valid_idx[static_cast<std::size_t>(best_begin + j)]);

        Vec mean = Vec::Zero(dim);
        for (int j = 0; j < w; ++j) mean += dirs[static_cast<std::size_t>(best_begin + j)];
        mean -= project_onto_span(mean, prefix);
        const double mean_norm = mean.norm();
        if (mean_norm > 0.0) {
            diag.direction = mean / mean_norm;
            for (int i = 0; i < n_valid; ++i)
                diag.angle_to_estimate[static_cast<std::size_t>(valid_idx[static_cast<std::size_t>(i)])] =
                    angle_between(dirs[static_cast<std::size_t>(i)], diag.direction);
        }

        if (best_spread <= cfg.angle_tol && mean_norm > 0.0) {
            diag.status = LevelStatus::Converged;
            frame_vectors.push_back(diag.direction);
            out.levels.push_back(std::move(diag));
            continue;
        }

        // not converged: distinguish oscillation from slow convergence
        const double tail = window_spread(dirs, static_cast<std::size_t>(n_valid - w), w);
        double prev_tail = tail;
        if (n_valid >= 2 * w)
            prev_tail = window_spread(dirs, static_cast<std::size_t>(n_valid - 2 * w), w);
        if (tail > cfg.divergence_angle && tail >= 0.9 * prev_tail) {
            diag.status = LevelStatus::Diverged;
            const auto [a, b] = spread_argmax(dirs, static_cast<std::size_t>(n_valid - w), w);
            diag.witnesses = {dirs[static_cast<std::size_t>(n_valid - w + a)],
                              dirs[static_cast<std::size_t>(n_valid - w + b)]};
        } else if (floored) {
            diag.status = LevelStatus::ResidualFloor;
        } else {
            diag.status = LevelStatus::Exhausted;
        }
        out.levels.push_back(std::move(diag));
        break;
    }

    out.frame = Frame(dim, std::move(frame_vectors), cfg.tol);
    return out;
}

Frame classical_frame(const std::vector<Vec>& derivatives, const Tolerances& tol) {
    try {
        return gram_schmidt(derivatives, tol);
    } catch (const RankDeficiency& e) {
        throw RankDeficiency(e.index, "classical_frame: no frame of depth " +
                                          std::to_string(e.index) +
                                          " (derivatives are linearly dependent)");
    }
}

int CurveSpec::dim() const {
    switch (kind) {
        case CurveKind::Helix: return 3;
        case CurveKind::Cubic:
        case CurveKind::Sin2: return 2;
        case CurveKind::Polynomial: return static_cast<int>(coeffs.rows());
    }
    return 0;
}

Vec curve_point(const CurveSpec& spec, double t) {
    switch (spec.kind) {
        case CurveKind::Helix: {
            Vec p(3);
            p << std::cos(t), std::sin(t), t;
            return p;
        }
        case CurveKind::Cubic: {
            Vec p(2);
            p << t, t * t * t;
            return p;
        }
        case CurveKind::Sin2: {
            Vec p(2);
            p << t, (t == 0.0 ? 0.0 : t * t * std::sin(1.0 / t));
            return p;
        }
        case CurveKind::Polynomial: {
            if (spec.coeffs.rows() < 1) throw Error("curve_point: empty coefficient matrix");
            Vec p = Vec::Zero(spec.coeffs.rows());
            double power = 1.0;
            for (Eigen::Index j = 0; j < spec.coeffs.cols(); ++j) {
                p += power * spec.coeffs.col(j);
                power *= t;
            }
            return p;
        }
    }
    throw Error("curve_point: unknown curve kind");
}

std::vector<Vec> curve_derivatives(const CurveSpec& spec, double t, int order) {
    if (order < 1) throw Error("curve_derivatives: order must be >= 1");
    std::vector<Vec> out;
    out.reserve(static_cast<std::size_t>(order));
    switch (spec.kind) {
        case CurveKind::Helix: {
            for (int k = 1; k <= order; ++k) {
                Vec d(3);
                // derivatives of (cos, sin) cycle with period 4
                switch (k % 4) {
                    case 1: d << -std::sin(t), std::cos(t), (k == 1 ? 1.0 : 0.0); break;
                    case 2: d << -std::cos(t), -std::sin(t), 0.0; break;
                    case 3: d << std::sin(t), -std::cos(t), 0.0; break;
                    default: d << std::cos(t), std::sin(t), 0.0; break;
                }
                out.push_back(d);
            }
            return out;
        }
        case CurveKind::Cubic: {
            const double table[4][2] = {
                {1.0, 3.0 * t * t}, {0.0, 6.0 * t}, {0.0, 6.0}, {0.0, 0.0}};
            for (int k = 1; k <= order; ++k) {
                Vec d(2);
                if (k <= 4)
                    d << table[k - 1][0], table[k - 1][1];
                else
                    d.setZero();
                out.push_back(d);
            }
            return out;
        }
        case CurveKind::Sin2: {
            if (t == 0.0) {
                if (order > 1)
                    throw Error("curve_derivatives: the oscillating curve has no derivative of "
                                "order >= 2 at t = 0");
                Vec d(2);
                d << 1.0, 0.0;
                out.push_back(d);
                return out;
            }
            if (order > 2)
                throw Error("curve_derivatives: oscillating curve derivatives supported up to order 2");
            const double s = std::sin(1.0 / t);
            const double c = std::cos(1.0 / t);
            Vec d1(2);
            d1 << 1.0, 2.0 * t * s - c;
            out.push_back(d1);
            if (order == 2) {
                Vec d2(2);
                d2 << 0.0, 2.0 * s - (2.0 / t) * c - s / (t * t);
                out.push_back(d2);
            }
            return out;
        }
        case CurveKind::Polynomial: {
            Eigen::MatrixXd c = spec.coeffs;
            for (int k = 1; k <= order; ++k) {
                // differentiate the coefficient rows once per level
                Eigen::MatrixXd d(c.rows(), std::max<Eigen::Index>(c.cols() - 1, 1));
                d.setZero();
                for (Eigen::Index j = 1; j < c.cols(); ++j)
                    d.col(j - 1) = static_cast<double>(j) * c.col(j);
                c = d;
                double power = 1.0;
                Vec val = Vec::Zero(c.rows());
                for (Eigen::Index j = 0; j < c.cols(); ++j) {
                    val += power * c.col(j);
                    power *= t;
                }
                out.push_back(val);
            }
            return out;
        }
    }
    throw Error("curve_derivatives: unknown curve kind");
}

PointSequence sample_curve(const CurveSpec& spec, const SamplePlan& plan,
                           std::vector<std::string>* warnings) {
    if (!(plan.ratio > 0.0 && plan.ratio < 1.0))
        throw Error("sample_curve: ratio must lie in (0, 1)");
    if (plan.count < 3) throw Error("sample_curve: count must be >= 3");
    if (!(plan.t_start > plan.t0)) throw Error("sample_curve: t_start must exceed t0");
    PointSequence seq;
    seq.base = curve_point(spec, plan.t0);
    double step = plan.t_start - plan.t0;
    for (int i = 0; i < plan.count; ++i) {
        const double t = plan.t0 + step;
        const Vec p = curve_point(spec, t);
        if ((p - seq.base).norm() == 0.0) {
            if (warnings)
                warnings->push_back("dropped sample at t = " + std::to_string(t) +
                                    " (coincides with the base point)");
        } else {
            seq.points.push_back(p);
        }
        step *= plan.ratio;
    }
    if (seq.points.empty()) throw Error("sample_curve: all samples coincide with the base");
    return seq;
}

PointSequence sample_sin2_phase(Sin2Phase phase, int count) {
    if (count < 3) throw Error("sample_sin2_phase: count must be >= 3");
    constexpr double kPi = 3.14159265358979323846;
    std::vector<double> ts;
    double index = 1.0;
    for (int j = 0; j < count; ++j) {
        if (phase == Sin2Phase::Peaks || phase == Sin2Phase::Mixed)
            ts.push_back(1.0 / (2.0 * kPi * index + kPi / 2.0));
        if (phase == Sin2Phase::Troughs || phase == Sin2Phase::Mixed)
            ts.push_back(1.0 / (2.0 * kPi * index + 3.0 * kPi / 2.0));
        index *= 2.0;
    }
    std::sort(ts.begin(), ts.end(), std::greater<double>());
    PointSequence seq;
    seq.base = Vec::Zero(2);
    CurveSpec spec;
    spec.kind = CurveKind::Sin2;
    for (double t : ts) seq.points.push_back(curve_point(spec, t));
    return seq;
}

}  // namespace frenetkit
