// Timings of the point-wise kernels, serial reference vs OpenMP.

#include <chrono>
#include <cstdio>
#include <random>

#include "frenetkit/batch.hpp"
#include "frenetkit/witness.hpp"

namespace fk = frenetkit;

namespace {

double now_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

template <typename F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const double t0 = now_seconds();
        fn();
        best = std::min(best, now_seconds() - t0);
    }
    return best;
}

std::vector<fk::Vec> random_points(std::size_t count, int dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<fk::Vec> pts(count);
    for (auto& p : pts) {
        p.resize(dim);
        for (int i = 0; i < dim; ++i) p(i) = gauss(rng);
    }
    return pts;
}

void row(const char* name, std::size_t n, double serial, double parallel) {
    std::printf("%-24s n=%-8zu serial %9.4f ms   parallel %9.4f ms   speedup %5.2fx\n",
                name, n, serial * 1e3, parallel * 1e3, serial / parallel);
}

}  // namespace

int main() {
    std::mt19937_64 rng(12345);
    const int dim = 3;
    std::printf("threads: %d\n", fk::max_threads());

    std::vector<fk::Vec> basis;
    for (int i = 0; i < dim; ++i) {
        fk::Vec e = fk::Vec::Zero(dim);
        e(i) = 1.0;
        basis.push_back(e);
    }
    const fk::Frame full(dim, basis);
    const fk::Vec origin = fk::Vec::Zero(dim);
    const fk::FlagSimplex C(origin, full.prefix(2), {1.0, 0.5});
    const fk::PLFormula f(origin, full, {1.0, 0.5, 0.25}, 2);

    for (std::size_t n : {std::size_t{20000}, std::size_t{200000}}) {
        const auto pts = random_points(n, dim, rng);
        const double ts = time_best_of(5, [&] { fk::membership_mask_serial(C, pts, 1e-9); });
        const double tp = time_best_of(5, [&] { fk::membership_mask_parallel(C, pts, 1e-9); });
        row("membership_mask", n, ts, tp);

        const double es = time_best_of(5, [&] { fk::eval_batch_serial(f, pts); });
        const double ep = time_best_of(5, [&] { fk::eval_batch_parallel(f, pts); });
        row("eval_batch", n, es, ep);

        const double rs =
            time_best_of(5, [&] { fk::residual_batch_serial(pts, origin, full.prefix(1)); });
        const double rp =
            time_best_of(5, [&] { fk::residual_batch_parallel(pts, origin, full.prefix(1)); });
        row("residual_batch", n, rs, rp);
    }

    for (std::size_t n : {std::size_t{128}, std::size_t{512}}) {
        const auto pts = random_points(n, dim, rng);
        const double cs = time_best_of(3, [&] { fk::convex_dependence_serial(pts, 1e-9); });
        const double cp = time_best_of(3, [&] { fk::convex_dependence_parallel(pts, 1e-9); });
        row("convex_dependence", n, cs, cp);
    }
    return 0;
}
