#include "frenetkit/witness.hpp"

#include <algorithm>
#include <cmath>

#include "frenetkit/tangents.hpp"

namespace frenetkit {

namespace {

double pos_part(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

PLFormula::PLFormula(Vec base, Frame full_frame, std::vector<double> scales, int level,
                     const Tolerances& tol)
    : base_(std::move(base)), frame_(std::move(full_frame)), scales_(std::move(scales)),
      level_(level) {
    if (!frame_.is_full()) throw Error("PLFormula: frame must span the full space");
    if (base_.size() != frame_.dim()) throw DimensionMismatch("PLFormula: base/frame mismatch");
    if (level_ < 0 || level_ > frame_.size()) throw Error("PLFormula: level out of range");
    if (static_cast<int>(scales_.size()) < level_)
        throw Error("PLFormula: one scale per chain level required");
    for (int i = 0; i < level_; ++i)
        if (!(scales_[static_cast<std::size_t>(i)] > 0.0))
            throw Error("PLFormula: scales must be strictly positive");
    (void)tol;
    for (int j = level_ + 1; j <= frame_.size(); ++j)
        terms_.push_back({PLTerm::Kind::AbsCoord, j});
    if (level_ >= 1) {
        terms_.push_back({PLTerm::Kind::ChainFloor, level_});
        for (int i = 1; i < level_; ++i) terms_.push_back({PLTerm::Kind::ChainStep, i});
        terms_.push_back({PLTerm::Kind::ChainCap, 1});
    }
}

double PLFormula::operator()(const Vec& p) const {
    if (p.size() != base_.size()) throw DimensionMismatch("PLFormula: dimension mismatch");
    const Vec d = p - base_;
    double value = 0.0;
    // chain coordinates up front; |s_j| terms read raw coordinates
    std::vector<double> r(static_cast<std::size_t>(level_), 0.0);
    for (int i = 0; i < level_; ++i)
        r[static_cast<std::size_t>(i)] = d.dot(frame_[i]) / scales_[static_cast<std::size_t>(i)];
    for (const PLTerm& t : terms_) {
        switch (t.kind) {
            case PLTerm::Kind::AbsCoord:
                value += std::abs(d.dot(frame_[t.index - 1]));
                break;
            case PLTerm::Kind::ChainFloor:
                value += pos_part(-r[static_cast<std::size_t>(t.index - 1)]);
                break;
            case PLTerm::Kind::ChainStep:
                value += pos_part(r[static_cast<std::size_t>(t.index)] -
                                  r[static_cast<std::size_t>(t.index - 1)]);
                break;
            case PLTerm::Kind::ChainCap:
                value += pos_part(r[0] - 1.0);
                break;
        }
    }
    return value;
}

FlagSimplex PLFormula::zero_set(const Tolerances& tol) const {
    if (level_ < 1) throw Error("PLFormula::zero_set: level 0 vanishes on the base point only");
    return FlagSimplex(base_, frame_.prefix(level_),
                       std::vector<double>(scales_.begin(), scales_.begin() + level_), tol);
}

Frame complete_basis(const Frame& u, const Tolerances& tol) {
    const Eigen::Index n = u.dim();
    std::vector<Vec> vectors = u.vectors();
    for (Eigen::Index j = 0; j < n && static_cast<Eigen::Index>(vectors.size()) < n; ++j) {
        Vec e = Vec::Zero(n);
        e(j) = 1.0;
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& v : vectors) e -= e.dot(v) * v;
        if (e.norm() > std::max(tol.rank, 1e-6)) vectors.push_back(e / e.norm());
    }
    if (static_cast<Eigen::Index>(vectors.size()) != n)
        throw Error("complete_basis: could not extend to a full basis");
    return Frame(n, std::move(vectors), tol);
}

std::vector<double> frame_coordinates(const Vec& p, const Vec& x, const Frame& full_frame) {
    if (!full_frame.is_full()) throw Error("frame_coordinates: frame must span the full space");
    if (p.size() != x.size() || p.size() != full_frame.dim())
        throw DimensionMismatch("frame_coordinates: dimension mismatch");
    const Vec d = p - x;
    std::vector<double> s(static_cast<std::size_t>(full_frame.size()));
    for (int i = 0; i < full_frame.size(); ++i) s[static_cast<std::size_t>(i)] = d.dot(full_frame[i]);
    return s;
}

std::pair<PLFormula, PLFormula> build_witness(const Vec& x, const Frame& u,
                                              const std::vector<double>& scales,
                                              const Tolerances& tol) {
    if (u.size() < 1) throw Error("build_witness: empty frame");
    if (scales.size() != static_cast<std::size_t>(u.size()))
        throw Error("build_witness: one scale per frame vector required");
    for (double s : scales)
        if (!(s > 0.0)) throw Error("build_witness: nonpositive scale");
    const Frame full = complete_basis(u, tol);
    const int k = u.size();
    PLFormula f1(x, full, scales, k, tol);
    PLFormula f2(x, full, scales, k - 1, tol);
    return {std::move(f1), std::move(f2)};
}

double eval_pl(const PLFormula& f, const Vec& p) { return f(p); }

RatioTable ratio_table(const PLFormula& f1, const PLFormula& f2, const SampledSet& S,
                       const RatioConfig& cfg) {
    if (S.points.empty()) throw Error("ratio_table: empty sample set");
    if (cfg.multipliers.empty()) throw Error("ratio_table: no multipliers");
    for (std::size_t i = 1; i < cfg.multipliers.size(); ++i)
        if (cfg.multipliers[i] <= cfg.multipliers[i - 1])
            throw Error("ratio_table: multipliers must be positive and increasing");
    if (cfg.multipliers.front() <= 0) throw Error("ratio_table: multipliers must be positive");

    const std::vector<double> v1 = eval_batch(f1, S.points, cfg.exec);
    const std::vector<double> v2 = eval_batch(f2, S.points, cfg.exec);

    RatioTable table;
    for (std::size_t i = 0; i < S.points.size(); ++i) {
        const bool z1 = v1[i] <= cfg.zero_tol;
        const bool z2 = v2[i] <= cfg.zero_tol;
        if (z1 != z2) {
            table.applicable = false;
            table.note = "witness inapplicable: zero-set mismatch on X (sample " +
                         std::to_string(i) + ")";
            break;
        }
    }

    for (std::int64_t m : cfg.multipliers) {
        RatioRow row;
        row.multiplier = m;
        row.max_gap = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < S.points.size(); ++i) {
            const double gap = v2[i] - static_cast<double>(m) * v1[i];
            if (gap > row.max_gap) {
                row.max_gap = gap;
                row.argmax = static_cast<int>(i);
            }
        }
        if (row.max_gap > 0.0 && table.applicable) table.certified_scale = m;
        table.rows.push_back(row);
    }
    if (table.applicable && table.certified_scale == 0) table.note = "no certificate";
    return table;
}

}  // namespace frenetkit
