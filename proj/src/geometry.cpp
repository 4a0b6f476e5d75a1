#include "frenetkit/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace frenetkit {

namespace {

void check_finite(const Vec& v, const char* what) {
    if (v.size() < 1) throw DimensionMismatch(std::string(what) + ": empty vector");
    if (!v.allFinite()) throw Error(std::string(what) + ": non-finite coordinates");
}

void check_same_dim(const Vec& a, const Vec& b, const char* what) {
    if (a.size() != b.size()) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << a.size() << " vs " << b.size() << ")";
        throw DimensionMismatch(os.str());
    }
}

}  // namespace

double angle_between(const Vec& a, const Vec& b) {
    check_same_dim(a, b, "angle_between");
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) throw Error("angle_between: zero vector");
    const Vec ua = a / na;
    const Vec ub = b / nb;
    return 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm());
}

Frame::Frame(Eigen::Index dim, std::vector<Vec> vectors, const Tolerances& tol)
    : dim_(dim), vectors_(std::move(vectors)) {
    if (dim_ < 1) throw DimensionMismatch("Frame: dimension must be >= 1");
    if (static_cast<Eigen::Index>(vectors_.size()) > dim_)
        throw DimensionMismatch("Frame: more vectors than ambient dimension");
    for (std::size_t i = 0; i < vectors_.size(); ++i) {
        check_finite(vectors_[i], "Frame");
        if (vectors_[i].size() != dim_) throw DimensionMismatch("Frame: vector dimension mismatch");
        if (std::abs(vectors_[i].norm() - 1.0) > tol.orth)
            throw Error("Frame: vector " + std::to_string(i + 1) + " is not unit length");
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(vectors_[i].dot(vectors_[j])) > tol.orth)
                throw Error("Frame: vectors " + std::to_string(j + 1) + " and " +
                            std::to_string(i + 1) + " are not orthogonal");
        }
    }
}

Frame Frame::prefix(int k) const {
    if (k < 0 || k > size()) throw DimensionMismatch("Frame::prefix: bad length");
    return Frame(dim_, std::vector<Vec>(vectors_.begin(), vectors_.begin() + k));
}

Vec project_onto_span(const Vec& v, const Frame& prefix) {
    if (v.size() != prefix.dim()) throw DimensionMismatch("project_onto_span: dimension mismatch");
    Vec out = Vec::Zero(v.size());
    for (const Vec& u : prefix.vectors()) out += v.dot(u) * u;
    return out;
}

Frame gram_schmidt(const std::vector<Vec>& vectors, const Tolerances& tol) {
    if (vectors.empty()) throw DimensionMismatch("gram_schmidt: no input vectors");
    const Eigen::Index n = vectors.front().size();
    std::vector<Vec> ortho;
    ortho.reserve(vectors.size());
    for (std::size_t j = 0; j < vectors.size(); ++j) {
        check_finite(vectors[j], "gram_schmidt");
        if (vectors[j].size() != n) throw DimensionMismatch("gram_schmidt: mixed dimensions");
        Vec r = vectors[j];
        // two projection passes; the second removes the residue the first
        // leaves behind once norms shrink
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& u : ortho) r -= r.dot(u) * u;
        const double cutoff = tol.rank * std::max(1.0, vectors[j].norm());
        if (r.norm() <= cutoff) {
            throw RankDeficiency(static_cast<int>(j + 1),
                                 "gram_schmidt: rank deficiency at index " + std::to_string(j + 1));
        }
        ortho.push_back(r / r.norm());
    }
    return Frame(n, std::move(ortho), tol);
}

Simplex::Simplex(std::vector<Vec> vertices, const Tolerances& tol)
    : vertices_(std::move(vertices)) {
    if (vertices_.empty()) throw DegenerateSimplex("Simplex: no vertices");
    const Eigen::Index n = vertices_.front().size();
    for (const Vec& v : vertices_) {
        check_finite(v, "Simplex");
        if (v.size() != n) throw DimensionMismatch("Simplex: mixed vertex dimensions");
    }
    const int d = order();
    if (d > static_cast<int>(n)) throw DegenerateSimplex("Simplex: more vertices than dim+1");
    if (d == 0) return;
    Eigen::MatrixXd edges(n, d);
    for (int i = 0; i < d; ++i) {
        Vec e = vertices_[static_cast<std::size_t>(i + 1)] - vertices_.front();
        const double len = e.norm();
        if (len <= tol.rank) throw DegenerateSimplex("Simplex: coincident vertices");
        edges.col(i) = e / len;
    }
    const double gram_det = (edges.transpose() * edges).determinant();
    if (gram_det <= tol.rank)
        throw DegenerateSimplex("Simplex: affinely dependent vertices (gram determinant " +
                                std::to_string(gram_det) + ")");
}

Simplex Simplex::face(const std::vector<int>& which, const Tolerances& tol) const {
    if (which.empty()) throw DegenerateSimplex("Simplex::face: empty vertex selection");
    std::vector<Vec> vs;
    vs.reserve(which.size());
    for (int i : which) {
        if (i < 0 || i > order()) throw DimensionMismatch("Simplex::face: vertex index out of range");
        vs.push_back(vertices_[static_cast<std::size_t>(i)]);
    }
    return Simplex(std::move(vs), tol);
}

bool Barycentric::inside(double tol_bary, double tol_aff) const {
    if (off_hull > tol_aff) return false;
    return (weights.array() >= -tol_bary).all();
}

Barycentric barycentric_coords(const Simplex& T, const Vec& p) {
    check_same_dim(p, T.vertices().front(), "barycentric");
    const int d = T.order();
    Barycentric out;
    if (d == 0) {
        out.weights = Eigen::VectorXd::Ones(1);
        out.off_hull = (p - T.vertex(0)).norm();
        return out;
    }
    Eigen::MatrixXd edges(T.dim(), d);
    for (int i = 0; i < d; ++i) edges.col(i) = T.vertex(i + 1) - T.vertex(0);
    const Vec rhs = p - T.vertex(0);
    Eigen::VectorXd w = edges.colPivHouseholderQr().solve(rhs);
    out.off_hull = (edges * w - rhs).norm();
    out.weights = Eigen::VectorXd(d + 1);
    out.weights(0) = 1.0 - w.sum();
    out.weights.tail(d) = w;
    return out;
}

Barycentric barycentric(const Simplex& T, const Vec& p, const Tolerances& tol) {
    Barycentric b = barycentric_coords(T, p);
    if (b.off_hull > tol.aff)
        throw OffAffineHull(b.off_hull, "barycentric: point is off the affine hull by " +
                                            std::to_string(b.off_hull));
    return b;
}

Simplex smallest_face(const Simplex& T, const Vec& z, const Tolerances& tol) {
    Barycentric b = barycentric_coords(T, z);
    if (!b.inside(tol.bary, tol.aff)) throw NotInSimplex("smallest_face: point not in simplex");
    std::vector<int> keep;
    for (int i = 0; i <= T.order(); ++i)
        if (b.weights(i) > tol.bary) keep.push_back(i);
    if (keep.empty()) throw NotInSimplex("smallest_face: no carrying vertices");
    return T.face(keep, tol);
}

bool in_relint(const Simplex& F, const Vec& z, const Tolerances& tol) {
    if (z.size() != F.dim()) return false;
    Barycentric b = barycentric_coords(F, z);
    if (b.off_hull > tol.aff) return false;
    return (b.weights.array() > tol.bary).all();
}

double max_step(const Simplex& T, const Vec& z, const Vec& u, const Tolerances& tol) {
    check_same_dim(z, u, "max_step");
    const double ulen = u.norm();
    if (ulen <= 0.0) throw Error("max_step: zero direction");
    Barycentric at = barycentric_coords(T, z);
    if (!at.inside(tol.bary, tol.aff)) throw NotInSimplex("max_step: start point not in simplex");

    const int d = T.order();
    if (d == 0) return 0.0;
    Eigen::MatrixXd edges(T.dim(), d);
    for (int i = 0; i < d; ++i) edges.col(i) = T.vertex(i + 1) - T.vertex(0);
    Eigen::VectorXd c = edges.colPivHouseholderQr().solve(u);
    // directions leaving aff(T) never re-enter
    if ((edges * c - u).norm() > tol.aff * std::max(1.0, ulen)) return 0.0;

    Eigen::VectorXd dw(d + 1);
    dw(0) = -c.sum();
    dw.tail(d) = c;
    double eta = std::numeric_limits<double>::infinity();
    for (int i = 0; i <= d; ++i) {
        if (dw(i) < -tol.rank) {
            const double w = std::max(0.0, at.weights(i));
            eta = std::min(eta, w / -dw(i));
        }
    }
    if (!std::isfinite(eta)) return 0.0;  // cannot happen for genuine simplices
    return eta;
}

bool in_cone(const Simplex& T, const Vec& x, const Vec& y, const Tolerances& tol) {
    check_same_dim(x, y, "in_cone");
    const Vec u = y - x;
    if (u.norm() <= tol.rank) return true;
    return max_step(T, x, u, tol) > 0.0;
}

FlagSimplex::FlagSimplex(Vec base, Frame frame, std::vector<double> scales, const Tolerances& tol)
    : base_(std::move(base)), frame_(std::move(frame)), scales_(std::move(scales)) {
    check_finite(base_, "FlagSimplex");
    if (base_.size() != frame_.dim()) throw DimensionMismatch("FlagSimplex: base/frame dimension mismatch");
    if (scales_.size() != static_cast<std::size_t>(frame_.size()))
        throw DimensionMismatch("FlagSimplex: one scale per frame vector required");
    for (double s : scales_)
        if (!(s > 0.0) || !std::isfinite(s))
            throw Error("FlagSimplex: scales must be strictly positive");
    // orthonormality of the frame makes the vertices affinely independent;
    // assert it anyway on the cheap path
    if (depth() > 0) (void)to_simplex(tol);
}

std::vector<Vec> FlagSimplex::vertex_list() const {
    std::vector<Vec> vs;
    vs.reserve(scales_.size() + 1);
    Vec v = base_;
    vs.push_back(v);
    for (int i = 0; i < depth(); ++i) {
        v += scales_[static_cast<std::size_t>(i)] * frame_[i];
        vs.push_back(v);
    }
    return vs;
}

Simplex FlagSimplex::to_simplex(const Tolerances& tol) const {
    return Simplex(vertex_list(), tol);
}

FlagSimplex FlagSimplex::facet() const {
    if (depth() == 0) throw Error("FlagSimplex::facet: depth is already 0");
    return FlagSimplex(base_, frame_.prefix(depth() - 1),
                       std::vector<double>(scales_.begin(), scales_.end() - 1));
}

bool flag_membership(const FlagSimplex& C, const Vec& p, double tol) {
    if (p.size() != C.base().size()) throw DimensionMismatch("flag_membership: dimension mismatch");
    const Vec d = p - C.base();
    const int k = C.depth();
    Vec proj = Vec::Zero(p.size());
    double prev_ratio = 1.0;
    bool chain_ok = true;
    for (int i = 0; i < k; ++i) {
        const double s = d.dot(C.frame()[i]);
        proj += s * C.frame()[i];
        const double r = s / C.scales()[static_cast<std::size_t>(i)];
        if (r > prev_ratio + tol) chain_ok = false;
        prev_ratio = r;
    }
    if (prev_ratio < -tol) chain_ok = false;
    if (!chain_ok) return false;
    return (d - proj).norm() <= tol;
}

std::vector<double> intersect_scales(const std::vector<double>& lam, const std::vector<double>& mu) {
    if (lam.size() != mu.size()) throw DimensionMismatch("intersect_scales: depth mismatch");
    if (lam.empty()) return {};
    for (std::size_t i = 0; i < lam.size(); ++i)
        if (!(lam[i] > 0.0) || !(mu[i] > 0.0))
            throw Error("intersect_scales: scales must be strictly positive");
    std::vector<double> nu(lam.size());
    nu[0] = std::min(lam[0], mu[0]);
    for (std::size_t t = 1; t < lam.size(); ++t)
        nu[t] = nu[t - 1] * std::min(lam[t] / lam[t - 1], mu[t] / mu[t - 1]);
    return nu;
}

FlagSimplex intersect_flags(const FlagSimplex& A, const FlagSimplex& B, const Tolerances& tol) {
    if (A.depth() != B.depth()) throw DimensionMismatch("intersect_flags: depth mismatch");
    if ((A.base() - B.base()).norm() > tol.orth)
        throw Error("intersect_flags: flags do not share a base point");
    for (int i = 0; i < A.depth(); ++i)
        if ((A.frame()[i] - B.frame()[i]).norm() > tol.orth)
            throw Error("intersect_flags: flags do not share a frame");
    return FlagSimplex(A.base(), A.frame(), intersect_scales(A.scales(), B.scales()), tol);
}

FlagSimplex find_flag_in_simplex(const Simplex& T, const Vec& x, const Frame& u,
                                 const Tolerances& tol) {
    if (x.size() != T.dim() || u.dim() != T.dim())
        throw DimensionMismatch("find_flag_in_simplex: dimension mismatch");
    if (u.size() < 1) throw DimensionMismatch("find_flag_in_simplex: empty frame");
    std::vector<double> scales;
    scales.reserve(static_cast<std::size_t>(u.size()));
    Vec z = x;
    for (int level = 0; level < u.size(); ++level) {
        const double step = max_step(T, z, u[level], tol);
        if (!(step > tol.rank))
            throw NoPositiveStep(level + 1, "find_flag_in_simplex: no positive step at level " +
                                                std::to_string(level + 1));
        scales.push_back(step / 2.0);
        z += scales.back() * u[level];
    }
    return FlagSimplex(x, u, std::move(scales), tol);
}

}  // namespace frenetkit
