#pragma once

#include <limits>
#include <string>
#include <vector>

#include "frenetkit/batch.hpp"
#include "frenetkit/geometry.hpp"

namespace frenetkit {

/// Finite sample of a compact set. Accumulation bases may be supplied; when
/// absent they are auto-detected by neighborhood refinement.
struct SampledSet {
    int dim = 0;
    std::vector<Vec> points;
    std::vector<Vec> bases;  // optional
};

void validate_set(const SampledSet& S);

enum class OutgoingVerdict { Untested, Yes, No, Vacuous };

const char* to_string(OutgoingVerdict v);

struct OutgoingReport {
    OutgoingVerdict verdict = OutgoingVerdict::Untested;
    std::vector<double> scales;        // flag scales tested
    int count_simplex = 0;             // |C  ∩ X|
    int count_facet = 0;               // |C' ∩ X|
    int tail_in_ball = 0;              // determining points inside the test ball
    std::vector<int> witness_indices;  // sample indices in C \ C'
};

/// A tangent frame detected at a base point, together with the subsequence of
/// sample indices that determines it (sorted by decreasing distance).
struct TangentRecord {
    Vec base;
    Frame frame = Frame::empty(1);
    std::vector<int> determining;
    double spread = 0.0;  // angular spread of the direction strand at the last level
    OutgoingReport outgoing;
    std::vector<OutgoingReport> prefix_reports;  // depths 1..k-1, filled by analyze()
};

struct DetectConfig {
    int min_points = 10;      // samples required near a base / per emitted record
    double radius = std::numeric_limits<double>::infinity();
    double cluster_angle = 0.3;  // coarse direction-cluster resolution (rad)
    double detect_tol = 0.05;    // strand spread accepted as "converging" (rad)
    double floor_rel = 1e-13;    // residual floor relative to the local scale
    double decay_ratio = 0.25;   // min/max distance ratio certifying convergence to base
    int window = 5;              // directions per strand estimate
    int max_depth = 0;           // 0 = ambient dimension
    Tolerances tol{};
};

struct OutgoingConfig {
    double mem_tol = 1e-10;     // absolute flag-membership tolerance
    int min_tail = 10;          // non-vacuity guard
    double scale_factor = 0.5;  // lambda = factor * max determining distance
    std::vector<double> scales;  // explicit override; empty = derive from the record
    Exec exec = Exec::Auto;
};

/// Tangent frames of the sample at `base`, found by recursive angular
/// clustering of normalized residual directions. Each record's frame is the
/// frame of its determining subsequence; branches whose members do not
/// converge to the base are discarded.
std::vector<TangentRecord> detect_tangent_frames(const SampledSet& S, const Vec& base,
                                                 const DetectConfig& cfg = {});

/// Decide whether the record's frame is outgoing: build the flag simplex C on
/// the frame and its facet C', classify every sample, and compare the two
/// membership sets. "yes" additionally requires min_tail determining points
/// inside the test ball; otherwise the verdict is "vacuous".
OutgoingReport outgoing_test(const SampledSet& S, const TangentRecord& rec,
                             const OutgoingConfig& cfg = {});

/// Indices of points not expressible as convex combinations of the others.
/// Exact duplicates keep their first occurrence only.
std::vector<int> extreme_points(const SampledSet& S, double feas_tol = 1e-9,
                                Exec exec = Exec::Auto);

struct AnalyzeConfig {
    DetectConfig detect{};
    OutgoingConfig outgoing{};
    bool run_extreme = true;
};

struct TangentReport {
    std::vector<TangentRecord> records;  // verdicts filled, including all frame prefixes
    std::vector<Vec> bases_used;
    std::vector<int> extreme_indices;
    std::string extreme_trend;  // "polyhedron-like", "non-polyhedral" or "n/a"
    bool no_outgoing_tangent = true;
    std::vector<std::string> warnings;
};

/// Full pipeline: bases (given or detected), tangent records per base,
/// outgoing verdicts for every record and every proper prefix of its frame,
/// extreme points and their refinement trend.
TangentReport analyze(const SampledSet& S, const AnalyzeConfig& cfg = {});

/// Accumulation-base auto-detection: points whose neighbor count within a
/// shrinking radius stays above min_points.
std::vector<Vec> detect_bases(const SampledSet& S, const DetectConfig& cfg = {});

}  // namespace frenetkit
