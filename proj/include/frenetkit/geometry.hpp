#pragma once

#include <Eigen/Dense>
#include <vector>

#include "frenetkit/errors.hpp"

namespace frenetkit {

using Vec = Eigen::VectorXd;

/// Numeric tolerances for the geometric predicates. All values assume
/// desk-scale coordinates (O(1)); every entry can be overridden per call.
struct Tolerances {
    double orth = 1e-9;   // orthonormality slack for frames
    double bary = 1e-9;   // barycentric membership slack
    double aff = 1e-9;    // distance to affine hull
    double rank = 1e-10;  // rank / degeneracy cutoff
};

/// Angle between two nonzero vectors in radians. Accurate down to ~1e-15 rad
/// (the acos formulation loses everything below ~1e-8).
double angle_between(const Vec& a, const Vec& b);

/// Ordered tuple of pairwise orthonormal unit vectors in R^n. May be empty
/// (k = 0), which is used for prefix spans.
class Frame {
  public:
    Frame(Eigen::Index dim, std::vector<Vec> vectors, const Tolerances& tol = {});

    static Frame empty(Eigen::Index dim) { return Frame(dim, {}); }

    Eigen::Index dim() const { return dim_; }
    int size() const { return static_cast<int>(vectors_.size()); }
    bool is_empty() const { return vectors_.empty(); }
    bool is_full() const { return size() == static_cast<int>(dim_); }
    const Vec& operator[](int i) const { return vectors_[static_cast<std::size_t>(i)]; }
    const std::vector<Vec>& vectors() const { return vectors_; }

    /// First k vectors as a frame.
    Frame prefix(int k) const;

  private:
    Eigen::Index dim_;
    std::vector<Vec> vectors_;
};

/// Orthogonal projection of v onto span(prefix). Empty prefix projects to 0.
Vec project_onto_span(const Vec& v, const Frame& prefix);

/// Orthonormalize `vectors` preserving the flag of spans (span of the first j
/// inputs equals span of the first j outputs). Throws RankDeficiency at the
/// first index whose residual drops below tol.rank (scaled by the input norm).
Frame gram_schmidt(const std::vector<Vec>& vectors, const Tolerances& tol = {});

/// d-simplex given by d+1 affinely independent vertices in R^n. Degeneracy is
/// rejected at construction via a Gram determinant test on unit edge vectors,
/// which keeps the test invariant under uniform scaling.
class Simplex {
  public:
    explicit Simplex(std::vector<Vec> vertices, const Tolerances& tol = {});

    Eigen::Index dim() const { return vertices_.front().size(); }
    int order() const { return static_cast<int>(vertices_.size()) - 1; }
    const std::vector<Vec>& vertices() const { return vertices_; }
    const Vec& vertex(int i) const { return vertices_[static_cast<std::size_t>(i)]; }

    /// Face spanned by the given vertex indices.
    Simplex face(const std::vector<int>& which, const Tolerances& tol = {}) const;

  private:
    std::vector<Vec> vertices_;
};

/// Affine coordinates of a point relative to a simplex, together with its
/// distance from the affine hull.
struct Barycentric {
    Eigen::VectorXd weights;  // one per vertex, sums to 1
    double off_hull = 0.0;    // euclidean distance to aff(T)

    bool inside(double tol_bary, double tol_aff) const;
};

/// Coordinates of p relative to T. Never throws; callers inspect off_hull.
Barycentric barycentric_coords(const Simplex& T, const Vec& p);

/// Strict variant: throws OffAffineHull when p is farther than tol.aff from
/// aff(T).
Barycentric barycentric(const Simplex& T, const Vec& p, const Tolerances& tol = {});

/// Smallest face of T containing z: the face spanned by the vertices whose
/// barycentric weight exceeds tol.bary. Throws NotInSimplex when z is not in T.
Simplex smallest_face(const Simplex& T, const Vec& z, const Tolerances& tol = {});

/// True iff z lies in F with every barycentric weight strictly above tol.bary.
/// Off-hull points yield false.
bool in_relint(const Simplex& F, const Vec& z, const Tolerances& tol = {});

/// Largest eta >= 0 with z + eta*u in T. Requires z in T and u nonzero;
/// returns 0 when u immediately leaves T or its affine hull.
double max_step(const Simplex& T, const Vec& z, const Vec& u, const Tolerances& tol = {});

/// Positive-cone membership: true iff x + rho*(y - x) lies in T for some
/// rho > 0 (or y == x). Requires x in T.
bool in_cone(const Simplex& T, const Vec& x, const Vec& y, const Tolerances& tol = {});

/// The simplex conv(x, x+s_1 u_1, ..., x+s_1 u_1+...+s_k u_k) for an
/// orthonormal frame u and strictly positive scales s. In coordinates
/// r_i = <p-x, u_i>/s_i membership is the chain
///   0 <= r_k <= r_{k-1} <= ... <= r_1 <= 1
/// together with a vanishing residual off span(u).
class FlagSimplex {
  public:
    FlagSimplex(Vec base, Frame frame, std::vector<double> scales, const Tolerances& tol = {});

    const Vec& base() const { return base_; }
    const Frame& frame() const { return frame_; }
    const std::vector<double>& scales() const { return scales_; }
    int depth() const { return static_cast<int>(scales_.size()); }

    /// Vertices x, x+s_1 u_1, ..., in order (depth()+1 of them).
    std::vector<Vec> vertex_list() const;
    Simplex to_simplex(const Tolerances& tol = {}) const;

    /// Same base and frame with the last level dropped. depth() may reach 0,
    /// in which case the flag degenerates to the single point {base}.
    FlagSimplex facet() const;

  private:
    Vec base_;
    Frame frame_;
    std::vector<double> scales_;
};

/// Chain-description membership test with a single absolute tolerance applied
/// both to the residual off span(u) and to the chain slacks.
bool flag_membership(const FlagSimplex& C, const Vec& p, double tol = 1e-9);

/// Scales of the intersection of two flag simplices over a shared base and
/// frame: nu_1 = min(lam_1, mu_1), nu_t = nu_{t-1} * min(lam_t/lam_{t-1},
/// mu_t/mu_{t-1}).
std::vector<double> intersect_scales(const std::vector<double>& lam,
                                     const std::vector<double>& mu);

/// Flag-simplex intersection. A and B must share base, frame and depth.
FlagSimplex intersect_flags(const FlagSimplex& A, const FlagSimplex& B,
                            const Tolerances& tol = {});

/// Build a flag simplex on frame u contained in T, starting at x in T. Each
/// scale is half the largest feasible step from the running top vertex; throws
/// NoPositiveStep when a level has no room (u not realizable inside T).
FlagSimplex find_flag_in_simplex(const Simplex& T, const Vec& x, const Frame& u,
                                 const Tolerances& tol = {});

}  // namespace frenetkit
