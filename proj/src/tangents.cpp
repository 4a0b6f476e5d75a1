#include "frenetkit/tangents.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "frenetkit/estimator.hpp"
#include "frenetkit/lp.hpp"

namespace frenetkit {

void validate_set(const SampledSet& S) {
    if (S.dim < 1) throw DimensionMismatch("SampledSet: dimension must be >= 1");
    if (S.points.size() < 2) throw Error("SampledSet: at least two points required");
    for (const Vec& p : S.points) {
        if (p.size() != S.dim) throw DimensionMismatch("SampledSet: point dimension mismatch");
        if (!p.allFinite()) throw Error("SampledSet: non-finite coordinates");
    }
    for (const Vec& b : S.bases)
        if (b.size() != S.dim) throw DimensionMismatch("SampledSet: base dimension mismatch");
}

const char* to_string(OutgoingVerdict v) {
    switch (v) {
        case OutgoingVerdict::Untested: return "untested";
        case OutgoingVerdict::Yes: return "yes";
        case OutgoingVerdict::No: return "no";
        case OutgoingVerdict::Vacuous: return "vacuous";
    }
    return "unknown";
}

namespace {

struct Detector {
    const SampledSet& S;
    const Vec& base;
    const DetectConfig& cfg;
    double floor_abs = 0.0;
    int max_depth = 0;
    std::vector<double> dist{};  // per sample index
    std::vector<TangentRecord> records{};

    bool converging(const std::vector<int>& members) const {
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (int i : members) {
            lo = std::min(lo, dist[static_cast<std::size_t>(i)]);
            hi = std::max(hi, dist[static_cast<std::size_t>(i)]);
        }
        return lo <= cfg.decay_ratio * hi;
    }

    void emit(const std::vector<Vec>& prefix, std::vector<int> determining, double spread) {
        TangentRecord rec;
        rec.base = base;
        rec.frame = Frame(base.size(), prefix, cfg.tol);
        rec.determining = std::move(determining);
        rec.spread = spread;
        records.push_back(std::move(rec));
    }

    /// Returns true when some record was emitted in this subtree.
    bool recurse(const std::vector<int>& members, std::vector<Vec>& prefix, double spread_here) {
        const Frame prefix_frame(base.size(), prefix, cfg.tol);
        std::vector<int> floored;
        std::vector<int> live;
        std::vector<Vec> dirs;
        for (int i : members) {
            const Vec r = residual(S.points[static_cast<std::size_t>(i)], base, prefix_frame);
            const double nrm = r.norm();
            if (nrm < floor_abs) {
                floored.push_back(i);
            } else {
                live.push_back(i);
                dirs.push_back(r / nrm);
            }
        }

        bool emitted = false;
        // points landing on the flat of the prefix span terminate here and
        // determine the prefix frame itself
        if (!prefix.empty() && static_cast<int>(floored.size()) >= cfg.min_points &&
            converging(floored)) {
            emit(prefix, floored, spread_here);
            emitted = true;
        }
        if (static_cast<int>(prefix.size()) >= max_depth ||
            static_cast<int>(live.size()) < cfg.window)
            return emitted;

        // coarse leader clustering of the live directions, in convergence order
        struct Cluster {
            Vec acc;
            std::vector<int> members;      // sample indices
            std::vector<int> dir_slots;    // positions into dirs/live
        };
        std::vector<Cluster> clusters;
        for (std::size_t s = 0; s < live.size(); ++s) {
            Cluster* home = nullptr;
            for (Cluster& c : clusters) {
                if (angle_between(c.acc, dirs[s]) <= cfg.cluster_angle) {
                    home = &c;
                    break;
                }
            }
            if (home == nullptr) {
                clusters.push_back({dirs[s], {live[s]}, {static_cast<int>(s)}});
            } else {
                home->acc += dirs[s];
                home->members.push_back(live[s]);
                home->dir_slots.push_back(static_cast<int>(s));
            }
        }

        for (const Cluster& c : clusters) {
            if (static_cast<int>(c.members.size()) < cfg.window || !converging(c.members))
                continue;
            // mode extraction on the cluster tail: anchor with the tightest
            // (window-1)-neighborhood, then its nearest directions
            const int tail_len =
                std::min<int>(4 * cfg.window, static_cast<int>(c.dir_slots.size()));
            const int tail_begin = static_cast<int>(c.dir_slots.size()) - tail_len;
            int best_pos = -1;
            double best_score = std::numeric_limits<double>::infinity();
            for (int a = 0; a < tail_len; ++a) {
                std::vector<double> ds;
                ds.reserve(static_cast<std::size_t>(tail_len) - 1);
                for (int b = 0; b < tail_len; ++b) {
                    if (b == a) continue;
                    ds.push_back(angle_between(
                        dirs[static_cast<std::size_t>(c.dir_slots[static_cast<std::size_t>(tail_begin + a)])],
                        dirs[static_cast<std::size_t>(c.dir_slots[static_cast<std::size_t>(tail_begin + b)])]));
                }
                std::sort(ds.begin(), ds.end());
                const double score = ds[static_cast<std::size_t>(cfg.window - 2)];
                if (score < best_score || (score == best_score && a > best_pos)) {
                    best_score = score;
                    best_pos = a;
                }
            }
            const int anchor_slot =
                c.dir_slots[static_cast<std::size_t>(tail_begin + best_pos)];
            std::vector<std::pair<double, int>> by_angle;
            for (int b = 0; b < tail_len; ++b) {
                const int slot = c.dir_slots[static_cast<std::size_t>(tail_begin + b)];
                by_angle.emplace_back(
                    angle_between(dirs[static_cast<std::size_t>(anchor_slot)],
                                  dirs[static_cast<std::size_t>(slot)]),
                    slot);
            }
            std::sort(by_angle.begin(), by_angle.end());
            std::vector<int> sel(static_cast<std::size_t>(cfg.window));
            for (int j = 0; j < cfg.window; ++j) sel[static_cast<std::size_t>(j)] = by_angle[static_cast<std::size_t>(j)].second;

            double spread = 0.0;
            for (std::size_t a = 0; a < sel.size(); ++a)
                for (std::size_t b = a + 1; b < sel.size(); ++b)
                    spread = std::max(spread,
                                      angle_between(dirs[static_cast<std::size_t>(sel[a])],
                                                    dirs[static_cast<std::size_t>(sel[b])]));
            if (spread > cfg.detect_tol) continue;

            Vec mean = Vec::Zero(base.size());
            for (int slot : sel) mean += dirs[static_cast<std::size_t>(slot)];
            mean -= project_onto_span(mean, prefix_frame);
            const double nrm = mean.norm();
            if (nrm <= cfg.tol.rank) continue;

            prefix.push_back(mean / nrm);
            const bool sub = recurse(c.members, prefix, spread);
            if (!sub && static_cast<int>(c.members.size()) >= cfg.min_points) {
                // terminal branch: the cluster itself determines the frame
                emit(prefix, c.members, spread);
                emitted = true;
            }
            emitted = emitted || sub;
            prefix.pop_back();
        }
        return emitted;
    }
};

}  // namespace

std::vector<TangentRecord> detect_tangent_frames(const SampledSet& S, const Vec& base,
                                                 const DetectConfig& cfg) {
    validate_set(S);
    if (base.size() != S.dim) throw DimensionMismatch("detect_tangent_frames: base dimension");
    if (cfg.window < 3) throw Error("detect_tangent_frames: window must be >= 3");

    Detector det{S, base, cfg};
    det.dist.resize(S.points.size(), 0.0);
    std::vector<int> idx;
    for (std::size_t i = 0; i < S.points.size(); ++i) {
        det.dist[i] = (S.points[i] - base).norm();
        if (det.dist[i] > 0.0 && det.dist[i] <= cfg.radius) idx.push_back(static_cast<int>(i));
    }
    if (static_cast<int>(idx.size()) < cfg.min_points)
        throw Error("detect_tangent_frames: only " + std::to_string(idx.size()) +
                    " samples near the base (min_points = " + std::to_string(cfg.min_points) + ")");

    double scale = 0.0;
    for (int i : idx) scale = std::max(scale, det.dist[static_cast<std::size_t>(i)]);
    det.floor_abs = cfg.floor_rel * scale;
    det.max_depth = cfg.max_depth > 0 ? std::min(cfg.max_depth, S.dim) : S.dim;

    std::sort(idx.begin(), idx.end(), [&](int a, int b) {
        const double da = det.dist[static_cast<std::size_t>(a)];
        const double db = det.dist[static_cast<std::size_t>(b)];
        return da != db ? da > db : a < b;
    });

    std::vector<Vec> prefix;
    det.recurse(idx, prefix, 0.0);
    return det.records;
}

OutgoingReport outgoing_test(const SampledSet& S, const TangentRecord& rec,
                             const OutgoingConfig& cfg) {
    validate_set(S);
    if (rec.frame.size() < 1) throw Error("outgoing_test: record has an empty frame");
    if (rec.determining.empty()) throw Error("outgoing_test: record has no determining points");
    const int k = rec.frame.size();

    double max_dist = 0.0;
    for (int i : rec.determining)
        max_dist = std::max(max_dist, (S.points[static_cast<std::size_t>(i)] - rec.base).norm());

    OutgoingReport rep;
    if (!cfg.scales.empty()) {
        if (cfg.scales.size() != static_cast<std::size_t>(k))
            throw Error("outgoing_test: scale override has wrong depth");
        rep.scales = cfg.scales;
    } else {
        rep.scales.assign(static_cast<std::size_t>(k), cfg.scale_factor * max_dist);
    }

    const FlagSimplex C(rec.base, rec.frame, rep.scales);
    std::vector<std::uint8_t> in_c = membership_mask(C, S.points, cfg.mem_tol, cfg.exec);
    // k = 1 degenerates the facet to the base point; depth-0 membership is
    // exactly that test
    std::vector<std::uint8_t> in_facet =
        membership_mask(C.facet(), S.points, cfg.mem_tol, cfg.exec);
    // the facet is a subset of the simplex; keep the tolerance classification
    // consistent with that
    for (std::size_t i = 0; i < S.points.size(); ++i) in_facet[i] = in_facet[i] & in_c[i];

    bool equal = true;
    for (std::size_t i = 0; i < S.points.size(); ++i) {
        rep.count_simplex += in_c[i];
        rep.count_facet += in_facet[i];
        if (in_c[i] && !in_facet[i]) {
            rep.witness_indices.push_back(static_cast<int>(i));
            equal = false;
        }
    }

    Vec top_offset = Vec::Zero(rec.base.size());
    for (int j = 0; j < k; ++j) top_offset += rep.scales[static_cast<std::size_t>(j)] * rec.frame[j];
    const double ball = top_offset.norm();
    for (int i : rec.determining)
        if ((S.points[static_cast<std::size_t>(i)] - rec.base).norm() <= ball) ++rep.tail_in_ball;

    if (!equal)
        rep.verdict = OutgoingVerdict::No;
    else
        rep.verdict = rep.tail_in_ball >= cfg.min_tail ? OutgoingVerdict::Yes
                                                       : OutgoingVerdict::Vacuous;
    return rep;
}

std::vector<int> extreme_points(const SampledSet& S, double feas_tol, Exec exec) {
    validate_set(S);
    const std::vector<std::uint8_t> dep = convex_dependence(S.points, feas_tol, exec);
    std::vector<int> out;
    for (std::size_t i = 0; i < dep.size(); ++i)
        if (!dep[i]) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<Vec> detect_bases(const SampledSet& S, const DetectConfig& cfg) {
    validate_set(S);
    if (!S.bases.empty()) return S.bases;

    Vec lo = S.points.front();
    Vec hi = S.points.front();
    for (const Vec& p : S.points) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
    }
    double radius = (hi - lo).norm() / 4.0;
    if (radius <= 0.0) return {};

    std::vector<int> cand(S.points.size());
    std::iota(cand.begin(), cand.end(), 0);
    for (int round = 0; round < 4 && !cand.empty(); ++round) {
        std::vector<int> keep;
        for (int i : cand) {
            int neighbors = 0;
            for (std::size_t j = 0; j < S.points.size(); ++j) {
                if (static_cast<int>(j) == i) continue;
                const double d = (S.points[j] - S.points[static_cast<std::size_t>(i)]).norm();
                if (d > 0.0 && d <= radius) ++neighbors;
            }
            if (neighbors >= cfg.min_points) keep.push_back(i);
        }
        cand.swap(keep);
        radius /= 2.0;
    }
    std::vector<Vec> bases;
    for (int i : cand) {
        bool close = false;
        for (const Vec& b : bases)
            if ((S.points[static_cast<std::size_t>(i)] - b).norm() <= radius) close = true;
        if (!close) bases.push_back(S.points[static_cast<std::size_t>(i)]);
    }
    return bases;
}

TangentReport analyze(const SampledSet& S, const AnalyzeConfig& cfg) {
    validate_set(S);
    TangentReport report;
    report.bases_used = detect_bases(S, cfg.detect);
    if (report.bases_used.empty())
        report.warnings.push_back("no accumulation base supplied or detected");

    for (const Vec& base : report.bases_used) {
        double min_sq = std::numeric_limits<double>::infinity();
        for (const Vec& p : S.points) {
            const double d2 = (p - base).squaredNorm();
            if (d2 > 0.0) min_sq = std::min(min_sq, d2);
        }
        if (min_sq < 100.0 * cfg.outgoing.mem_tol)
            report.warnings.push_back(
                "smallest squared sample offset is within 100x the membership tolerance; "
                "outgoing verdicts may be unreliable at this depth");

        std::vector<TangentRecord> recs;
        try {
            recs = detect_tangent_frames(S, base, cfg.detect);
        } catch (const Error& e) {
            report.warnings.push_back(std::string("base skipped: ") + e.what());
            continue;
        }
        for (TangentRecord& rec : recs) {
            rec.outgoing = outgoing_test(S, rec, cfg.outgoing);
            if (rec.outgoing.verdict == OutgoingVerdict::Yes) report.no_outgoing_tangent = false;
            for (int j = 1; j < rec.frame.size(); ++j) {
                TangentRecord prefix_rec;
                prefix_rec.base = rec.base;
                prefix_rec.frame = rec.frame.prefix(j);
                prefix_rec.determining = rec.determining;
                OutgoingReport pr = outgoing_test(S, prefix_rec, cfg.outgoing);
                if (pr.verdict == OutgoingVerdict::Yes) report.no_outgoing_tangent = false;
                rec.prefix_reports.push_back(std::move(pr));
            }
            report.records.push_back(std::move(rec));
        }
    }

    if (cfg.run_extreme) {
        report.extreme_indices = extreme_points(S, cfg.detect.tol.bary, cfg.outgoing.exec);
        // refinement trend: recount on the even-index half of the sample
        SampledSet half;
        half.dim = S.dim;
        for (std::size_t i = 0; i < S.points.size(); i += 2) half.points.push_back(S.points[i]);
        if (half.points.size() >= 2) {
            const int count_half =
                static_cast<int>(extreme_points(half, cfg.detect.tol.bary, cfg.outgoing.exec).size());
            const int count_full = static_cast<int>(report.extreme_indices.size());
            const int slack = std::max(2, count_half / 5);
            report.extreme_trend =
                count_full > count_half + slack ? "non-polyhedral" : "polyhedron-like";
        } else {
            report.extreme_trend = "n/a";
        }
    } else {
        report.extreme_trend = "n/a";
    }
    return report;
}

}  // namespace frenetkit
