#include "frenetkit/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace frenetkit {

namespace {

Exec exec_from_string(const std::string& s) {
    if (s == "serial") return Exec::Serial;
    if (s == "parallel") return Exec::Parallel;
    if (s == "auto") return Exec::Auto;
    throw Error("config: unknown execution policy '" + s + "'");
}

std::string exec_to_string(Exec e) {
    switch (e) {
        case Exec::Serial: return "serial";
        case Exec::Parallel: return "parallel";
        case Exec::Auto: return "auto";
    }
    return "auto";
}

const char* term_kind_name(PLTerm::Kind k) {
    switch (k) {
        case PLTerm::Kind::AbsCoord: return "abs_coord";
        case PLTerm::Kind::ChainFloor: return "chain_floor";
        case PLTerm::Kind::ChainStep: return "chain_step";
        case PLTerm::Kind::ChainCap: return "chain_cap";
    }
    return "unknown";
}

}  // namespace

RunConfig config_from_json(const json& j) {
    RunConfig cfg;
    if (j.contains("tolerances")) {
        const json& t = j.at("tolerances");
        cfg.tol.orth = t.value("orth", cfg.tol.orth);
        cfg.tol.bary = t.value("bary", cfg.tol.bary);
        cfg.tol.aff = t.value("aff", cfg.tol.aff);
        cfg.tol.rank = t.value("rank", cfg.tol.rank);
    }
    cfg.estimator.window = j.value("window", cfg.estimator.window);
    cfg.estimator.angle_tol = j.value("angle_tol", cfg.estimator.angle_tol);
    cfg.estimator.divergence_angle = j.value("divergence_angle", cfg.estimator.divergence_angle);
    cfg.estimator.floor_rel = j.value("floor", cfg.estimator.floor_rel);

    cfg.detect.min_points = j.value("min_points", cfg.detect.min_points);
    cfg.detect.radius = j.value("radius", cfg.detect.radius);
    cfg.detect.cluster_angle = j.value("cluster_angle", cfg.detect.cluster_angle);
    cfg.detect.detect_tol = j.value("detect_tol", cfg.detect.detect_tol);
    cfg.detect.floor_rel = j.value("floor", cfg.detect.floor_rel);
    cfg.detect.decay_ratio = j.value("decay_ratio", cfg.detect.decay_ratio);
    cfg.detect.window = j.value("window", cfg.detect.window);
    cfg.detect.max_depth = j.value("max_depth", cfg.detect.max_depth);

    cfg.outgoing.mem_tol = j.value("mem_tol", cfg.outgoing.mem_tol);
    cfg.outgoing.min_tail = j.value("min_tail", cfg.outgoing.min_tail);
    cfg.outgoing.scale_factor = j.value("scale_factor", cfg.outgoing.scale_factor);

    if (j.contains("multipliers"))
        cfg.ratio.multipliers = j.at("multipliers").get<std::vector<std::int64_t>>();
    cfg.ratio.zero_tol = j.value("zero_tol", cfg.ratio.zero_tol);
    cfg.feas_tol = j.value("feas_tol", cfg.feas_tol);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("exec")) cfg.exec = exec_from_string(j.at("exec").get<std::string>());

    cfg.estimator.tol = cfg.tol;
    cfg.detect.tol = cfg.tol;
    cfg.outgoing.exec = cfg.exec;
    cfg.ratio.exec = cfg.exec;
    return cfg;
}

json config_to_json(const RunConfig& cfg) {
    json j;
    j["tolerances"] = {{"orth", cfg.tol.orth},
                       {"bary", cfg.tol.bary},
                       {"aff", cfg.tol.aff},
                       {"rank", cfg.tol.rank}};
    j["window"] = cfg.estimator.window;
    j["angle_tol"] = cfg.estimator.angle_tol;
    j["divergence_angle"] = cfg.estimator.divergence_angle;
    j["floor"] = cfg.estimator.floor_rel;
    j["min_points"] = cfg.detect.min_points;
    if (std::isfinite(cfg.detect.radius)) j["radius"] = cfg.detect.radius;
    j["cluster_angle"] = cfg.detect.cluster_angle;
    j["detect_tol"] = cfg.detect.detect_tol;
    j["decay_ratio"] = cfg.detect.decay_ratio;
    j["max_depth"] = cfg.detect.max_depth;
    j["mem_tol"] = cfg.outgoing.mem_tol;
    j["min_tail"] = cfg.outgoing.min_tail;
    j["scale_factor"] = cfg.outgoing.scale_factor;
    j["multipliers"] = cfg.ratio.multipliers;
    j["zero_tol"] = cfg.ratio.zero_tol;
    j["feas_tol"] = cfg.feas_tol;
    j["seed"] = cfg.seed;
    j["exec"] = exec_to_string(cfg.exec);
    return j;
}

json vec_to_json(const Vec& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

Vec vec_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw Error("expected a non-empty coordinate array");
    Vec v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
    return v;
}

json sequence_to_json(const PointSequence& seq) {
    json j;
    j["dim"] = seq.base.size();
    j["base"] = vec_to_json(seq.base);
    json pts = json::array();
    for (const Vec& p : seq.points) pts.push_back(vec_to_json(p));
    j["points"] = pts;
    return j;
}

PointSequence sequence_from_json(const json& j) {
    PointSequence seq;
    seq.base = vec_from_json(j.at("base"));
    const auto dim = j.at("dim").get<Eigen::Index>();
    if (dim != seq.base.size()) throw Error("sequence: dim field disagrees with the base");
    for (const json& p : j.at("points")) {
        Vec v = vec_from_json(p);
        if (v.size() != dim) throw Error("sequence: point dimension disagrees with dim");
        seq.points.push_back(std::move(v));
    }
    return seq;
}

json set_to_json(const SampledSet& S) {
    json j;
    j["dim"] = S.dim;
    json pts = json::array();
    for (const Vec& p : S.points) pts.push_back(vec_to_json(p));
    j["points"] = pts;
    if (!S.bases.empty()) {
        json bs = json::array();
        for (const Vec& b : S.bases) bs.push_back(vec_to_json(b));
        j["bases"] = bs;
    }
    return j;
}

SampledSet set_from_json(const json& j) {
    SampledSet S;
    S.dim = j.at("dim").get<int>();
    for (const json& p : j.at("points")) {
        Vec v = vec_from_json(p);
        if (v.size() != S.dim) throw Error("set: point dimension disagrees with dim");
        S.points.push_back(std::move(v));
    }
    if (j.contains("bases"))
        for (const json& b : j.at("bases")) S.bases.push_back(vec_from_json(b));
    return S;
}

json frame_to_json(const Frame& f) {
    json arr = json::array();
    for (const Vec& u : f.vectors()) arr.push_back(vec_to_json(u));
    return arr;
}

json estimate_to_json(const FrameEstimate& est, std::uint64_t seed) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "frame_estimate";
    j["seed"] = seed;
    j["frame"] = frame_to_json(est.frame);
    json levels = json::array();
    for (std::size_t i = 0; i < est.levels.size(); ++i) {
        const LevelDiagnostics& l = est.levels[i];
        json lj;
        lj["level"] = i + 1;
        lj["status"] = to_string(l.status);
        lj["spread"] = l.spread;
        if (l.direction.size() > 0) lj["direction"] = vec_to_json(l.direction);
        lj["window"] = l.window;
        lj["residual_norms"] = l.residual_norms;
        if (!l.witnesses.empty()) {
            json ws = json::array();
            for (const Vec& w : l.witnesses) ws.push_back(vec_to_json(w));
            lj["witnesses"] = ws;
        }
        levels.push_back(lj);
    }
    j["levels"] = levels;
    j["warnings"] = est.warnings;
    return j;
}

json outgoing_to_json(const OutgoingReport& rep) {
    json j;
    j["verdict"] = to_string(rep.verdict);
    j["scales"] = rep.scales;
    j["count_simplex"] = rep.count_simplex;
    j["count_facet"] = rep.count_facet;
    j["tail_in_ball"] = rep.tail_in_ball;
    j["witness_indices"] = rep.witness_indices;
    return j;
}

json record_to_json(const TangentRecord& rec) {
    json j;
    j["base"] = vec_to_json(rec.base);
    j["frame"] = frame_to_json(rec.frame);
    j["determining_indices"] = rec.determining;
    j["spread"] = rec.spread;
    j["outgoing"] = outgoing_to_json(rec.outgoing);
    if (!rec.prefix_reports.empty()) {
        json ps = json::array();
        for (const OutgoingReport& p : rec.prefix_reports) ps.push_back(outgoing_to_json(p));
        j["prefix_reports"] = ps;
    }
    return j;
}

json tangent_report_to_json(const TangentReport& rep, std::uint64_t seed) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "tangent_report";
    j["seed"] = seed;
    json bases = json::array();
    for (const Vec& b : rep.bases_used) bases.push_back(vec_to_json(b));
    j["bases"] = bases;
    json recs = json::array();
    for (const TangentRecord& r : rep.records) recs.push_back(record_to_json(r));
    j["records"] = recs;
    j["extreme_indices"] = rep.extreme_indices;
    j["extreme_trend"] = rep.extreme_trend;
    j["no_outgoing_tangent"] = rep.no_outgoing_tangent;
    // finite-sample surrogate: no outgoing tangent found in the sample
    j["strongly_semisimple_surrogate"] = rep.no_outgoing_tangent;
    j["warnings"] = rep.warnings;
    return j;
}

json formula_to_json(const PLFormula& f) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "pl_formula";
    j["base"] = vec_to_json(f.base());
    j["frame"] = frame_to_json(f.frame());
    j["scales"] = f.scales();
    j["level"] = f.level();
    json terms = json::array();
    for (const PLTerm& t : f.terms())
        terms.push_back({{"kind", term_kind_name(t.kind)}, {"index", t.index}});
    j["terms"] = terms;
    return j;
}

json ratio_table_to_json(const RatioTable& t) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = "ratio_table";
    j["applicable"] = t.applicable;
    j["certified_scale"] = t.certified_scale;
    if (!t.note.empty()) j["note"] = t.note;
    json rows = json::array();
    for (const RatioRow& r : t.rows)
        rows.push_back({{"multiplier", r.multiplier}, {"max_gap", r.max_gap}, {"argmax", r.argmax}});
    j["rows"] = rows;
    return j;
}

std::string ratio_table_csv(const RatioTable& t) {
    std::ostringstream os;
    os.precision(17);
    os << "multiplier,max_gap,argmax_index\n";
    for (const RatioRow& r : t.rows)
        os << r.multiplier << "," << r.max_gap << "," << r.argmax << "\n";
    return os.str();
}

std::string level_angles_csv(const LevelDiagnostics& level) {
    std::ostringstream os;
    os.precision(17);
    os << "index,angle_rad\n";
    for (std::size_t i = 0; i < level.angle_to_estimate.size(); ++i) {
        const double a = level.angle_to_estimate[i];
        if (!std::isnan(a)) os << i << "," << a << "\n";
    }
    return os.str();
}

json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error("malformed JSON in " + path.string() + ": " + e.what());
    }
    return j;
}

void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << j.dump(2) << "\n";
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
}

}  // namespace frenetkit
