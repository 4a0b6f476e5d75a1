#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "frenetkit/batch.hpp"
#include "frenetkit/geometry.hpp"

namespace frenetkit {

struct SampledSet;

/// One additive term of a nonnegative piecewise-linear formula over frame
/// coordinates s_i = <p - base, u_i> and chain coordinates r_i = s_i / scale_i.
struct PLTerm {
    enum class Kind {
        AbsCoord,    // |s_i|
        ChainFloor,  // (-r_i)^+   lower end of the chain
        ChainStep,   // (r_{i+1} - r_i)^+
        ChainCap,    // (r_1 - 1)^+
    };
    Kind kind;
    int index = 0;  // 1-based coordinate index where applicable
};

/// Nonnegative piecewise-linear function vanishing exactly on the flag simplex
/// of depth `level` spanned by the first `level` frame vectors (level 0 gives
/// the single point {base}). The frame must be a full orthonormal basis so
/// that the off-span coordinates s_{level+1}, ..., s_n are available.
class PLFormula {
  public:
    PLFormula(Vec base, Frame full_frame, std::vector<double> scales, int level,
              const Tolerances& tol = {});

    double operator()(const Vec& p) const;

    const Vec& base() const { return base_; }
    const Frame& frame() const { return frame_; }
    const std::vector<double>& scales() const { return scales_; }
    int level() const { return level_; }
    const std::vector<PLTerm>& terms() const { return terms_; }

    /// The flag simplex this formula vanishes on (level >= 1).
    FlagSimplex zero_set(const Tolerances& tol = {}) const;

  private:
    Vec base_;
    Frame frame_;                 // full orthonormal basis of R^n
    std::vector<double> scales_;  // one per chain level
    int level_;
    std::vector<PLTerm> terms_;
};

/// Deterministic extension of an orthonormal frame to a full basis of R^n:
/// canonical basis vectors are orthonormalized in index order, skipping the
/// near-dependent ones.
Frame complete_basis(const Frame& u, const Tolerances& tol = {});

/// Coordinates s_i = <p - x, u_i> of p in a full frame.
std::vector<double> frame_coordinates(const Vec& p, const Vec& x, const Frame& full_frame);

/// Witness pair for a flag simplex C on (x, u, scales): f1 vanishes exactly on
/// C, f2 exactly on the facet C' (last level dropped), and f2 restricted to C
/// is the affine map p -> <p - x, u_k>.
std::pair<PLFormula, PLFormula> build_witness(const Vec& x, const Frame& u,
                                              const std::vector<double>& scales,
                                              const Tolerances& tol = {});

double eval_pl(const PLFormula& f, const Vec& p);

struct RatioRow {
    std::int64_t multiplier = 1;
    double max_gap = 0.0;  // max over samples of f2 - m * f1
    int argmax = -1;       // sample index attaining the max
};

struct RatioTable {
    std::vector<RatioRow> rows;
    bool applicable = true;  // zero sets of f1 and f2 agree on the samples
    std::string note;
    std::int64_t certified_scale = 0;  // largest multiplier with a positive row, 0 = none

    bool certified() const { return applicable && certified_scale > 0; }
};

struct RatioConfig {
    std::vector<std::int64_t> multipliers = {1, 10, 100, 1000, 10000, 100000, 1000000};
    /// Zero-classification tolerance for the precondition guard. Must sit
    /// below the smallest genuinely nonzero formula value on the samples; the
    /// membership tolerance used elsewhere (1e-10) is far too coarse once
    /// sample offsets shrink quadratically.
    double zero_tol = 1e-14;
    Exec exec = Exec::Auto;
};

/// Multiplier ladder max_i(f2(x_i) - m * f1(x_i)) per m, with the guard that
/// f1 and f2 vanish on the same samples. A positive row at scale m witnesses
/// f2 > m * f1 somewhere on the set.
RatioTable ratio_table(const PLFormula& f1, const PLFormula& f2, const SampledSet& S,
                       const RatioConfig& cfg = {});

}  // namespace frenetkit
