#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "frenetkit/io.hpp"

namespace fk = frenetkit;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerdict = 2;  // diverged estimate / outgoing tangent found

struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::string exec = "auto";
    std::optional<int> window;
    std::optional<double> angle_tol;
    std::optional<double> mem_tol;
    std::optional<int> min_tail;
    std::optional<int> min_points;
    std::vector<std::int64_t> multipliers;
};

fk::RunConfig resolve_config(const GlobalOpts& g) {
    fk::RunConfig cfg;
    if (!g.config_path.empty()) cfg = fk::config_from_json(fk::read_json_file(g.config_path));
    if (g.seed) {
        cfg.seed = *g.seed;
    } else if (const char* env = std::getenv("FRENET_KIT_SEED")) {
        cfg.seed = std::strtoull(env, nullptr, 10);
    }
    if (g.exec == "serial") cfg.exec = fk::Exec::Serial;
    else if (g.exec == "parallel") cfg.exec = fk::Exec::Parallel;
    else cfg.exec = fk::Exec::Auto;
    if (g.window) {
        cfg.estimator.window = *g.window;
        cfg.detect.window = *g.window;
    }
    if (g.angle_tol) cfg.estimator.angle_tol = *g.angle_tol;
    if (g.mem_tol) cfg.outgoing.mem_tol = *g.mem_tol;
    if (g.min_tail) cfg.outgoing.min_tail = *g.min_tail;
    if (g.min_points) cfg.detect.min_points = *g.min_points;
    if (!g.multipliers.empty()) cfg.ratio.multipliers = g.multipliers;
    cfg.outgoing.exec = cfg.exec;
    cfg.ratio.exec = cfg.exec;
    return cfg;
}

fk::CurveSpec parse_curve(const std::string& kind, const std::string& coeffs_json) {
    fk::CurveSpec spec;
    if (kind == "helix") spec.kind = fk::CurveKind::Helix;
    else if (kind == "cubic") spec.kind = fk::CurveKind::Cubic;
    else if (kind == "sin2") spec.kind = fk::CurveKind::Sin2;
    else if (kind == "poly") {
        spec.kind = fk::CurveKind::Polynomial;
        if (coeffs_json.empty())
            throw fk::Error("curve sample: --coeffs is required for --kind poly");
        const fk::json j = fk::json::parse(coeffs_json);
        if (!j.is_array() || j.empty() || !j[0].is_array())
            throw fk::Error("curve sample: --coeffs must be a JSON matrix (rows per dimension)");
        const auto rows = j.size();
        const auto cols = j[0].size();
        spec.coeffs.resize(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
        for (std::size_t r = 0; r < rows; ++r) {
            if (j[r].size() != cols) throw fk::Error("curve sample: ragged coefficient matrix");
            for (std::size_t c = 0; c < cols; ++c)
                spec.coeffs(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                    j[r][c].get<double>();
        }
    } else {
        throw fk::Error("curve sample: unknown kind '" + kind + "'");
    }
    return spec;
}

int run_curve_sample(const GlobalOpts& g, const std::string& kind, const std::string& coeffs,
                     const std::string& phase, const fk::SamplePlan& plan,
                     const std::string& out_path) {
    (void)g;
    std::vector<std::string> warnings;
    fk::PointSequence seq;
    if (!phase.empty()) {
        if (kind != "sin2") throw fk::Error("curve sample: --phase only applies to --kind sin2");
        fk::Sin2Phase ph;
        if (phase == "peaks") ph = fk::Sin2Phase::Peaks;
        else if (phase == "troughs") ph = fk::Sin2Phase::Troughs;
        else if (phase == "mixed") ph = fk::Sin2Phase::Mixed;
        else throw fk::Error("curve sample: unknown phase '" + phase + "'");
        seq = fk::sample_sin2_phase(ph, plan.count);
    } else {
        seq = fk::sample_curve(parse_curve(kind, coeffs), plan, &warnings);
    }
    for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";
    fk::write_json_file(out_path, fk::sequence_to_json(seq));
    std::cout << "wrote " << seq.points.size() << " points to " << out_path << "\n";
    return kExitOk;
}

int run_frame_estimate(const GlobalOpts& g, const std::string& in_path, int k_max,
                       const std::string& out_path, const std::string& csv_stem,
                       const std::string& classical_path) {
    const fk::RunConfig cfg = resolve_config(g);
    const fk::PointSequence seq = fk::sequence_from_json(fk::read_json_file(in_path));
    const int k = k_max > 0 ? k_max : static_cast<int>(seq.base.size());
    const fk::FrameEstimate est = fk::estimate_frame(seq, k, cfg.estimator);

    fk::json report = fk::estimate_to_json(est, cfg.seed);
    if (!classical_path.empty()) {
        const fk::json dj = fk::read_json_file(classical_path);
        std::vector<fk::Vec> derivs;
        for (const fk::json& d : dj.at("derivatives")) derivs.push_back(fk::vec_from_json(d));
        fk::json cj;
        try {
            const fk::Frame cl = fk::classical_frame(derivs, cfg.tol);
            cj["frame"] = fk::frame_to_json(cl);
            fk::json angles = fk::json::array();
            for (int j = 0; j < std::min(cl.size(), est.frame.size()); ++j)
                angles.push_back(fk::angle_between(cl[j], est.frame[j]));
            cj["angles_to_estimate"] = angles;
        } catch (const fk::RankDeficiency& e) {
            cj["error"] = e.what();
            cj["rank_deficiency_at"] = e.index;
        }
        report["classical"] = cj;
    }
    if (!out_path.empty()) fk::write_json_file(out_path, report);
    else std::cout << report.dump(2) << "\n";

    if (!csv_stem.empty()) {
        for (std::size_t j = 0; j < est.levels.size(); ++j)
            fk::write_text_file(csv_stem + ".level" + std::to_string(j + 1) + ".csv",
                                fk::level_angles_csv(est.levels[j]));
    }
    for (const std::string& w : est.warnings) std::cerr << "warning: " << w << "\n";
    return est.any_diverged() ? kExitVerdict : kExitOk;
}

int run_tangents(const GlobalOpts& g, const std::string& in_path,
                 const std::vector<std::string>& base_args, bool witness,
                 const std::string& out_path, const std::string& witness_path,
                 const std::string& table_path) {
    const fk::RunConfig cfg = resolve_config(g);
    fk::SampledSet S = fk::set_from_json(fk::read_json_file(in_path));
    for (const std::string& b : base_args) {
        const fk::json j = fk::json::parse("[" + b + "]");
        S.bases.push_back(fk::vec_from_json(j));
    }

    fk::AnalyzeConfig acfg;
    acfg.detect = cfg.detect;
    acfg.outgoing = cfg.outgoing;
    const fk::TangentReport rep = fk::analyze(S, acfg);
    fk::json report = fk::tangent_report_to_json(rep, cfg.seed);

    if (witness) {
        // prefer an outgoing frame; fall back to the first record so the
        // zero-set guard can explain why no certificate exists
        const fk::TangentRecord* pick = nullptr;
        int pick_depth = 0;
        for (const fk::TangentRecord& r : rep.records) {
            if (r.outgoing.verdict == fk::OutgoingVerdict::Yes) {
                pick = &r;
                pick_depth = r.frame.size();
                break;
            }
            for (std::size_t j = 0; j < r.prefix_reports.size(); ++j) {
                if (r.prefix_reports[j].verdict == fk::OutgoingVerdict::Yes) {
                    pick = &r;
                    pick_depth = static_cast<int>(j) + 1;
                    break;
                }
            }
            if (pick) break;
        }
        if (!pick && !rep.records.empty()) {
            pick = &rep.records.front();
            pick_depth = pick->frame.size();
        }
        if (pick) {
            const fk::OutgoingReport& source =
                pick_depth == pick->frame.size()
                    ? pick->outgoing
                    : pick->prefix_reports[static_cast<std::size_t>(pick_depth - 1)];
            const std::vector<double> scales(source.scales.begin(),
                                             source.scales.begin() + pick_depth);
            const auto [f1, f2] =
                fk::build_witness(pick->base, pick->frame.prefix(pick_depth), scales, cfg.tol);
            const fk::RatioTable table = fk::ratio_table(f1, f2, S, cfg.ratio);
            fk::json wj;
            wj["schema_version"] = fk::kSchemaVersion;
            wj["kind"] = "witness_pair";
            wj["f1"] = fk::formula_to_json(f1);
            wj["f2"] = fk::formula_to_json(f2);
            wj["table"] = fk::ratio_table_to_json(table);
            report["witness"] = wj;
            if (!witness_path.empty()) fk::write_json_file(witness_path, wj);
            if (!table_path.empty()) fk::write_text_file(table_path, fk::ratio_table_csv(table));
        } else {
            report["witness"] = {{"error", "no tangent records to build a witness from"}};
        }
    }

    if (!out_path.empty()) fk::write_json_file(out_path, report);
    else std::cout << report.dump(2) << "\n";
    for (const std::string& w : rep.warnings) std::cerr << "warning: " << w << "\n";
    return rep.no_outgoing_tangent ? kExitOk : kExitVerdict;
}

int run_flags_intersect(const std::vector<double>& lam, const std::vector<double>& mu,
                        bool verify) {
    const std::vector<double> nu = fk::intersect_scales(lam, mu);
    fk::json j;
    j["nu"] = nu;
    if (verify) {
        // independent route: cast rays inside the two vertex simplices
        const int k = static_cast<int>(lam.size());
        const Eigen::Index n = k;
        std::vector<fk::Vec> basis;
        for (int i = 0; i < k; ++i) {
            fk::Vec e = fk::Vec::Zero(n);
            e(i) = 1.0;
            basis.push_back(e);
        }
        const fk::Frame u(n, basis);
        const fk::Vec x = fk::Vec::Zero(n);
        std::vector<double> nu_oracle;
        fk::Vec z = x;
        for (int t = 0; t < k; ++t) {
            const fk::FlagSimplex A(x, u.prefix(t + 1), {lam.begin(), lam.begin() + t + 1});
            const fk::FlagSimplex B(x, u.prefix(t + 1), {mu.begin(), mu.begin() + t + 1});
            const double eta1 = fk::max_step(A.to_simplex(), z, u[t]);
            const double eta2 = fk::max_step(B.to_simplex(), z, u[t]);
            nu_oracle.push_back(std::min(eta1, eta2));
            z += nu_oracle.back() * u[t];
        }
        j["nu_verified"] = nu_oracle;
        double gap = 0.0;
        for (int t = 0; t < k; ++t) gap = std::max(gap, std::abs(nu[t] - nu_oracle[t]));
        j["max_difference"] = gap;
    }
    std::cout << j.dump(2) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Derivative-free frame estimation and tangent analysis of sampled sets"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--config", g.config_path, "JSON run configuration");
    std::uint64_t seed_val = 0;
    auto* seed_opt = app.add_option("--seed", seed_val, "Seed for randomized internals");
    app.add_option("--exec", g.exec, "Execution policy: serial|parallel|auto")
        ->check(CLI::IsMember({"serial", "parallel", "auto"}));
    int window_val = 0;
    auto* window_opt = app.add_option("--window", window_val, "Convergence window size");
    double angle_tol_val = 0, mem_tol_val = 0;
    auto* angle_opt = app.add_option("--angle-tol", angle_tol_val, "Convergence angle (rad)");
    auto* mem_opt = app.add_option("--mem-tol", mem_tol_val, "Membership tolerance");
    int min_tail_val = 0, min_points_val = 0;
    auto* tail_opt = app.add_option("--min-tail", min_tail_val, "Non-vacuity guard");
    auto* minpts_opt = app.add_option("--min-points", min_points_val, "Samples required per base");
    app.add_option("--multipliers", g.multipliers, "Ratio-table multiplier ladder")
        ->delimiter(',');

    // curve sample
    auto* curve = app.add_subcommand("curve", "Builtin curve operations");
    auto* sample = curve->add_subcommand("sample", "Sample a curve into a point sequence");
    std::string kind = "helix", coeffs, phase, seq_out = "sequence.json";
    fk::SamplePlan plan;
    sample->add_option("--kind", kind, "helix|cubic|sin2|poly");
    sample->add_option("--coeffs", coeffs, "JSON coefficient matrix for --kind poly");
    sample->add_option("--phase", phase, "sin2 subsequences: peaks|troughs|mixed");
    sample->add_option("--t0", plan.t0, "Parameter of the base point");
    sample->add_option("--t-start", plan.t_start, "First sample parameter");
    sample->add_option("--ratio", plan.ratio, "Geometric decay ratio in (0,1)");
    sample->add_option("--count", plan.count, "Number of samples");
    sample->add_option("--out", seq_out, "Output sequence JSON");

    // frame estimate
    auto* frame = app.add_subcommand("frame", "Frame estimation");
    auto* fest = frame->add_subcommand("estimate", "Estimate the frame of a point sequence");
    std::string fest_in, fest_out, fest_csv, fest_classical;
    int k_max = 0;
    fest->add_option("--in", fest_in, "Point sequence JSON")->required();
    fest->add_option("--k-max", k_max, "Levels to estimate (default: ambient dimension)");
    fest->add_option("--out", fest_out, "Report JSON (stdout when omitted)");
    fest->add_option("--csv", fest_csv, "Stem for per-level angle-vs-index CSV files");
    fest->add_option("--compare-classical", fest_classical,
                     "JSON file with a `derivatives` table for cross-checking");

    // tangents
    auto* tang = app.add_subcommand("tangents", "Tangent frames and outgoing verdicts");
    std::string tang_in, tang_out, witness_out, table_out;
    std::vector<std::string> base_args;
    bool with_witness = false;
    tang->add_option("--in", tang_in, "Sampled set JSON")->required();
    tang->add_option("--base", base_args, "Extra accumulation base, comma-separated coordinates");
    tang->add_flag("--witness", with_witness, "Build a witness pair and multiplier table");
    tang->add_option("--out", tang_out, "Report JSON (stdout when omitted)");
    tang->add_option("--witness-out", witness_out, "Witness JSON output");
    tang->add_option("--table-out", table_out, "Ratio table CSV output");

    // flags intersect
    auto* flags = app.add_subcommand("flags", "Flag-simplex operations");
    auto* inter = flags->add_subcommand("intersect", "Intersect two flags over a shared frame");
    std::vector<double> lam, mu;
    bool verify = false;
    inter->add_option("--lambda", lam, "Scales of the first flag")->delimiter(',')->required();
    inter->add_option("--mu", mu, "Scales of the second flag")->delimiter(',')->required();
    inter->add_flag("--verify", verify, "Cross-check with the ray-casting recursion");

    CLI11_PARSE(app, argc, argv);
    if (seed_opt->count() > 0) g.seed = seed_val;
    if (window_opt->count() > 0) g.window = window_val;
    if (angle_opt->count() > 0) g.angle_tol = angle_tol_val;
    if (mem_opt->count() > 0) g.mem_tol = mem_tol_val;
    if (tail_opt->count() > 0) g.min_tail = min_tail_val;
    if (minpts_opt->count() > 0) g.min_points = min_points_val;

    try {
        if (*sample)
            return run_curve_sample(g, kind, coeffs, phase, plan, seq_out);
        if (*fest)
            return run_frame_estimate(g, fest_in, k_max, fest_out, fest_csv, fest_classical);
        if (*tang)
            return run_tangents(g, tang_in, base_args, with_witness, tang_out, witness_out,
                                table_out);
        if (*inter)
            return run_flags_intersect(lam, mu, verify);
        std::cerr << "error: no operation selected\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
