#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "cli.hpp"
#include "grassgeo/errors.hpp"
#include "grassgeo/kernel.hpp"
#include "grassgeo/loci.hpp"
#include "grassgeo/random.hpp"
#include "grassgeo/topology.hpp"
#include "json_io.hpp"

namespace grassgeo::cli {

namespace {

struct Config {
    GrassmannSpace space{1, 1};
    double tol = kDefaultLocusTol;
    double angle_tol = kDefaultAngleTol;
    std::uint64_t seed = 0;
    std::string output = "json";
    std::string input;
    int random = 0;
    double t = 1.0;
    int steps = 4000;
    std::vector<double> h;
    double tmax = 3.0;
    int points = 200;
    double fd_step = 1e-5;
    double window = 1e-2;
    bool verify = false;
    std::vector<double> eps;
    std::vector<int> omega;
    std::vector<int> wong;
    std::string flag = "standard";
    bool cells = false;
};

// ---------------------------------------------------------------------------
// Input helpers

OrderedJson pair_of(Complex z) { return OrderedJson::array({z.real(), z.imag()}); }

OrderedJson space_json(const GrassmannSpace& s) {
    OrderedJson j;
    j["n"] = s.n;
    j["m"] = s.m;
    j["curvature"] = s.compact() ? "compact" : "noncompact";
    return j;
}

bool has(const Json& item, const char* key) { return item.is_object() && item.contains(key); }

TangentVector tangent_input(const Config& cfg, const Json& item) {
    return TangentVector(cfg.space, matrix_field(item, "B", true));
}

ChartPoint chart_input(const Config& cfg, const Json& item, const char* key) {
    return ChartPoint(cfg.space, matrix_field(item, key, std::string(key) == "Z"));
}

Frame frame_input(const Config& cfg, const Json& item, const char* key) {
    return Frame(cfg.space, matrix_field(item, key, std::string(key) == "F"));
}

// Z1/Z2 chart points or F1/F2 frames.
bool has_frames(const Json& item) { return has(item, "F1") || has(item, "F2"); }

std::vector<double> eps_input(const Config& cfg, const Json& item) {
    if (has(item, "eps")) {
        if (!item["eps"].is_array()) throw UsageError("\"eps\" must be an array of numbers");
        std::vector<double> out;
        for (const auto& e : item["eps"]) {
            if (!e.is_number()) throw UsageError("\"eps\" must be an array of numbers");
            out.push_back(e.get<double>());
        }
        return out;
    }
    if (!cfg.eps.empty()) return cfg.eps;
    throw UsageError("energy weights missing: pass --eps or an \"eps\" field");
}

std::vector<double> random_eps(const Config& cfg, std::uint64_t index) {
    SplitMix64 rng(stream_seed(cfg.seed ^ 0x657073ULL, index));
    std::vector<double> eps;
    for (int i = 0; i < cfg.space.ambient_dim(); ++i) eps.push_back(rng.normal());
    return eps;
}

CartanVector cartan_input(const Config& cfg) {
    if (cfg.h.empty()) throw UsageError("--h is required: min(n, m) Cartan components");
    if (static_cast<int>(cfg.h.size()) != cfg.space.rank()) {
        throw UsageError("--h needs exactly min(n, m) = " + std::to_string(cfg.space.rank()) + " values");
    }
    return CartanVector::normalized(cfg.h);
}

SchubertSymbol symbol_input(const Config& cfg) {
    if (!cfg.wong.empty()) {
        if (cfg.wong.size() != 2) throw UsageError("--wong takes two integers p l");
        return wong_symbol(cfg.wong[0], cfg.wong[1], cfg.space.n, cfg.space.m);
    }
    return SchubertSymbol(cfg.omega, cfg.space.m);
}

Flag flag_input(const Config& cfg) {
    if (cfg.flag == "standard") return Flag::standard(cfg.space);
    if (cfg.flag == "complement") return Flag::complement_first(cfg.space);
    throw UsageError("--flag must be standard or complement");
}

SplitMix64 item_rng(const Config& cfg, std::uint64_t index) { return SplitMix64(stream_seed(cfg.seed, index)); }

OrderedJson angles_json(const std::vector<double>& a) {
    OrderedJson out = OrderedJson::array();
    for (double x : a) out.push_back(x);
    return out;
}

// ---------------------------------------------------------------------------
// Independent checks behind --verify

// det(F1_raw^H S F2_raw) summed over Plucker minors of the raw frames [I; Z^H],
// with S = I (compact) or J (noncompact) contributing the sign of each subset.
Complex cauchy_binet_kernel(const ChartPoint& a, const ChartPoint& b) {
    const GrassmannSpace& s = a.space();
    auto raw = [&](const ChartPoint& p) {
        ComplexMatrix F(s.ambient_dim(), s.n);
        F.topRows(s.n).setIdentity();
        F.bottomRows(s.m) = p.matrix().adjoint();
        return F;
    };
    const PluckerVector pa = plucker_minors(raw(a), s.n);
    const PluckerVector pb = plucker_minors(raw(b), s.n);
    Complex acc = 0;
    for (std::size_t k = 0; k < pa.components.size(); ++k) {
        int lower = 0;
        for (int i : pa.subsets[k]) lower += i >= s.n;
        const double sign = s.compact() || lower % 2 == 0 ? 1.0 : -1.0;
        acc += sign * std::conj(pa.components[k]) * pb.components[k];
    }
    return s.compact() ? acc : 1.0 / acc;
}

// ---------------------------------------------------------------------------
// Per-item commands

OrderedJson cmd_exp(const Config& cfg, const Json& item) {
    const TangentVector B = tangent_input(cfg, item);
    OrderedJson r;
    r["t"] = cfg.t;
    r["Z"] = matrix_to_json(exp0(B.scaled(cfg.t)).matrix());
    if (cfg.verify) {
        const ComplexMatrix ode = geodesic_ode(B, cfg.t, cfg.steps).matrix();
        const ComplexMatrix Z = exp0(B.scaled(cfg.t)).matrix();
        r["verify"] = {{"oracle", "geodesic_ode"}, {"steps", cfg.steps}, {"max_abs_diff", (Z - ode).cwiseAbs().maxCoeff()}};
    }
    return r;
}

OrderedJson cmd_log(const Config& cfg, const Json& item) {
    const TangentVector B = log0(chart_input(cfg, item, "Z"));
    OrderedJson r;
    r["B"] = matrix_to_json(B.matrix());
    r["norm"] = B.norm();
    return r;
}

OrderedJson cmd_geodesic_check(const Config& cfg, const Json& item) {
    const TangentVector B = tangent_input(cfg, item);
    const ComplexMatrix Z = exp0(B.scaled(cfg.t)).matrix();
    const ComplexMatrix ode = geodesic_ode(B, cfg.t, cfg.steps).matrix();
    OrderedJson r;
    r["t"] = cfg.t;
    r["steps"] = cfg.steps;
    r["Z_exp"] = matrix_to_json(Z);
    r["Z_ode"] = matrix_to_json(ode);
    r["max_abs_diff"] = (Z - ode).cwiseAbs().maxCoeff();
    return r;
}

OrderedJson cmd_overlap(const Config& cfg, const Json& item) {
    const ChartPoint a = chart_input(cfg, item, "Z1"), b = chart_input(cfg, item, "Z2");
    const OverlapValue v = normalized_overlap(a, b);
    OrderedJson r;
    r["raw"] = pair_of(v.raw);
    r["normalized"] = pair_of(v.normalized);
    r["modulus"] = std::abs(v.normalized);
    if (cfg.verify) {
        const Complex oracle = cauchy_binet_kernel(a, b);
        OrderedJson ver;
        ver["oracle"] = "cauchy_binet";
        ver["kernel"] = pair_of(oracle);
        ver["abs_diff"] = std::abs(oracle - v.raw);
        if (cfg.space.compact()) {
            ver["plucker_modulus"] = std::abs(plucker_overlap_oracle(frame_of_chart(a), frame_of_chart(b)));
            ver["modulus_diff"] = std::abs(ver["plucker_modulus"].get<double>() - std::abs(v.normalized));
        }
        r["verify"] = std::move(ver);
    }
    return r;
}

OrderedJson cmd_distance(const Config& cfg, const Json& item) {
    OrderedJson r;
    if (has_frames(item)) {
        r["distance"] = distance(frame_input(cfg, item, "F1"), frame_input(cfg, item, "F2"));
    } else {
        r["distance"] = distance(chart_input(cfg, item, "Z1"), chart_input(cfg, item, "Z2"));
    }
    return r;
}

OrderedJson cmd_diastasis(const Config& cfg, const Json& item) {
    OrderedJson r;
    r["diastasis"] = diastasis(chart_input(cfg, item, "Z1"), chart_input(cfg, item, "Z2"));
    return r;
}

OrderedJson cmd_cayley(const Config& cfg, const Json& item) {
    OrderedJson r;
    if (has_frames(item)) {
        r["cayley_distance"] = cayley_distance(frame_input(cfg, item, "F1"), frame_input(cfg, item, "F2"));
    } else {
        r["cayley_distance"] = cayley_distance(chart_input(cfg, item, "Z1"), chart_input(cfg, item, "Z2"));
    }
    return r;
}

OrderedJson cmd_cut_test(const Config& cfg, const Json& item) {
    const Frame F = frame_input(cfg, item, "F");
    const DecompositionResult d = disjoint_union_check(F, cfg.tol);
    OrderedJson r;
    r["on_cut_locus"] = cut_locus_test(F, cfg.tol);
    switch (d.branch) {
        case DecompositionResult::Branch::Chart: r["branch"] = "chart"; break;
        case DecompositionResult::Branch::PolarDivisor: r["branch"] = "polar_divisor"; break;
        case DecompositionResult::Branch::NearDivisor: r["branch"] = "near_divisor"; break;
    }
    r["det_modulus"] = d.det_modulus;
    r["min_singular"] = d.min_singular;
    if (d.chart) r["Z"] = matrix_to_json(d.chart->matrix());
    return r;
}

OrderedJson cmd_schubert(const Config& cfg, const Json& item) {
    const Frame F = frame_input(cfg, item, "F");
    const Flag flag = flag_input(cfg);
    OrderedJson r;
    r["flag"] = cfg.flag;
    r["dims"] = schubert_dims(F, flag, cfg.tol);
    if (!cfg.omega.empty() || !cfg.wong.empty()) {
        const SchubertSymbol sym = symbol_input(cfg);
        const SchubertMembership mem = schubert_membership(F, sym, flag, cfg.tol);
        r["omega"] = sym.omega();
        r["sigma"] = sym.sigma();
        r["jumps"] = sym.jumps();
        r["in_Z"] = mem.in_Z;
        r["generic"] = mem.generic;
    }
    return r;
}

OrderedJson cmd_strata(const Config& cfg, const Json& item) {
    const Frame F = frame_input(cfg, item, "F");
    OrderedJson r;
    r["angles"] = angles_json(principal_angles(origin_frame(cfg.space), F));
    r["stratum_W"] = conjugate_stratum_W(F, cfg.angle_tol);
    r["stratum_I"] = conjugate_stratum_I(F, cfg.angle_tol);
    return r;
}

OrderedJson cmd_isoclinic(const Config& cfg, const Json& item) {
    const Frame a = frame_input(cfg, item, "F1"), b = frame_input(cfg, item, "F2");
    OrderedJson r;
    r["angles"] = angles_json(principal_angles(a, b));
    r["isoclinic"] = isoclinic_test(a, b, cfg.angle_tol);
    return r;
}

OrderedJson cmd_plucker(const Config& cfg, const Json& item) {
    const PluckerVector p = plucker_embed(frame_input(cfg, item, "F"));
    OrderedJson r;
    r["subsets"] = p.subsets;
    OrderedJson comps = OrderedJson::array();
    for (const Complex& c : p.components) comps.push_back(pair_of(c));
    r["components"] = std::move(comps);
    r["norm"] = p.norm();
    if (cfg.space.n == 2 && cfg.space.m == 2) {
        r["three_term_residual"] =
            std::abs(p.at({0, 1}) * p.at({2, 3}) - p.at({0, 2}) * p.at({1, 3}) + p.at({0, 3}) * p.at({1, 2}));
    }
    return r;
}

OrderedJson cmd_energy(const Config& cfg, const Json& item) {
    const EnergySpec spec(eps_input(cfg, item));
    std::optional<ChartPoint> z;
    std::optional<Frame> F;
    if (has(item, "Z")) {
        z = chart_input(cfg, item, "Z");
        F = frame_of_chart(*z);
    } else {
        F = frame_input(cfg, item, "F");
        if (!cut_locus_test(*F, cfg.tol)) z = chart_of_frame(*F);
    }
    OrderedJson r;
    r["energy"] = energy(spec, *F);
    if (z) {
        const ComplexMatrix G = energy_gradient(spec, *z);
        r["gradient"] = matrix_to_json(G);
        r["gradient_norm"] = G.norm();
    }
    return r;
}

// ---------------------------------------------------------------------------
// Random input generators for --random K

Json gen_tangent(const Config& cfg, std::uint64_t i) {
    SplitMix64 rng = item_rng(cfg, i);
    return {{"B", matrix_to_json(random_tangent(cfg.space, rng, 1.0).matrix())}};
}

Json gen_point(const Config& cfg, std::uint64_t i) {
    SplitMix64 rng = item_rng(cfg, i);
    return {{"Z", matrix_to_json(random_chart_point(cfg.space, rng).matrix())}};
}

Json gen_point_pair(const Config& cfg, std::uint64_t i) {
    SplitMix64 rng = item_rng(cfg, i);
    Json j;
    j["Z1"] = matrix_to_json(random_chart_point(cfg.space, rng).matrix());
    j["Z2"] = matrix_to_json(random_chart_point(cfg.space, rng).matrix());
    return j;
}

Json gen_frame(const Config& cfg, std::uint64_t i) {
    return {{"F", matrix_to_json(random_plane(cfg.space, cfg.seed, i).matrix())}};
}

Json gen_frame_pair(const Config& cfg, std::uint64_t i) {
    Json j;
    j["F1"] = matrix_to_json(random_plane(cfg.space, cfg.seed, 2 * i).matrix());
    j["F2"] = matrix_to_json(random_plane(cfg.space, cfg.seed, 2 * i + 1).matrix());
    return j;
}

Json gen_energy(const Config& cfg, std::uint64_t i) {
    Json j = gen_frame(cfg, i);
    j["eps"] = cfg.eps.empty() ? random_eps(cfg, i) : cfg.eps;
    return j;
}

// ---------------------------------------------------------------------------
// Whole-space commands

OrderedJson cmd_conjugate_times(const Config& cfg) {
    const CartanVector h = cartan_input(cfg);
    OrderedJson r;
    r["h"] = h.values();
    r["t_max"] = cfg.tmax;
    OrderedJson times = OrderedJson::array();
    for (const ConjugateTime& c : tangent_conjugate_times(cfg.space, h, cfg.tmax)) {
        static const char* names[] = {"T1", "T2", "T3"};
        OrderedJson e;
        e["t"] = c.t;
        e["multiplicity"] = c.multiplicity;
        e["family"] = names[static_cast<int>(c.family())];
        OrderedJson sources = OrderedJson::array();
        for (const ConjugateSource& s : c.sources) {
            OrderedJson src;
            src["family"] = names[static_cast<int>(s.family)];
            src["p"] = s.p;
            if (s.family == ConjugateFamily::T1) {
                src["q"] = s.q;
                src["sign"] = s.sign;
            }
            src["lambda"] = s.lambda;
            src["multiplicity"] = s.multiplicity;
            sources.push_back(std::move(src));
        }
        e["sources"] = std::move(sources);
        times.push_back(std::move(e));
    }
    r["times"] = std::move(times);
    return r;
}

OrderedJson cmd_conjugate_scan(const Config& cfg) {
    const CartanVector h = cartan_input(cfg);
    OrderedJson r;
    r["h"] = h.values();
    r["t_max"] = cfg.tmax;
    r["points"] = cfg.points;
    r["fd_step"] = cfg.fd_step;
    OrderedJson scan = OrderedJson::array();
    for (const ScanPoint& p : conjugate_scan(cfg.space, h, cfg.tmax, cfg.points, cfg.fd_step, cfg.window)) {
        OrderedJson e;
        e["t"] = p.t;
        e["min_singular_normalized"] = p.min_singular_normalized;
        e["predicted_flag"] = p.predicted;
        scan.push_back(std::move(e));
    }
    r["scan"] = std::move(scan);
    return r;
}

OrderedJson cmd_critical_points(const Config& cfg) {
    const std::vector<double> eps = cfg.eps.empty() ? random_eps(cfg, 0) : cfg.eps;
    OrderedJson r;
    r["eps"] = eps;
    OrderedJson pts = OrderedJson::array();
    for (const CriticalPoint& c : critical_points(cfg.space, EnergySpec(eps))) {
        OrderedJson e;
        e["subset"] = c.subset;
        e["value"] = c.value;
        e["gradient_norm"] = c.gradient_norm;
        pts.push_back(std::move(e));
    }
    r["count"] = pts.size();
    r["points"] = std::move(pts);
    return r;
}

OrderedJson cmd_char_numbers(const Config& cfg) {
    std::vector<double> eps = cfg.eps;
    if (eps.empty()) {
        for (int i = 0; i < cfg.space.ambient_dim(); ++i) eps.push_back(1.0 + i + 0.125 * i * i);
    }
    const CharacteristicReport rep = characteristic_report(cfg.space.n, cfg.space.m, EnergySpec(eps));
    OrderedJson r;
    r["euler"] = rep.euler;
    r["weyl_ratio"] = rep.weyl_ratio;
    r["cell_count"] = rep.cell_count;
    r["fundamental_rep_dim"] = rep.fundamental_rep_dim;
    r["kodaira_N"] = rep.kodaira_N;
    r["critical_count"] = rep.critical_count;
    r["max_orthogonal_coherent"] = rep.max_orthogonal_coherent;
    r["all_equal"] = rep.all_equal();
    r["poincare"] = poincare_polynomial(cfg.space.n, cfg.space.m);
    return r;
}

OrderedJson cmd_schubert_cells(const Config& cfg) {
    OrderedJson cells = OrderedJson::array();
    for (const SchubertSymbol& s : schubert_cells(cfg.space.n, cfg.space.m)) {
        OrderedJson e;
        e["omega"] = s.omega();
        e["dimension"] = s.dimension();
        e["jumps"] = s.jumps();
        cells.push_back(std::move(e));
    }
    OrderedJson r;
    r["count"] = cells.size();
    r["cells"] = std::move(cells);
    return r;
}

// ---------------------------------------------------------------------------
// CSV

std::string csv_value(const OrderedJson& v) {
    if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
    if (v.is_number_float()) return format_double(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    if (v.is_array()) {
        std::string out;
        for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + csv_value(v[i]);
        return out;
    }
    if (v.is_null()) return "";
    return v.dump();
}

std::string csv_table(const OrderedJson& rows, const std::vector<std::string>& cols, bool with_index) {
    std::ostringstream os;
    if (with_index) os << "index,";
    for (std::size_t c = 0; c < cols.size(); ++c) os << (c ? "," : "") << cols[c];
    os << '\n';
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (with_index) os << i << ',';
        for (std::size_t c = 0; c < cols.size(); ++c) {
            os << (c ? "," : "") << (rows[i].contains(cols[c]) ? csv_value(rows[i][cols[c]]) : "");
        }
        os << '\n';
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// Dispatch

struct ItemCommand {
    std::function<OrderedJson(const Config&, const Json&)> compute;
    std::function<Json(const Config&, std::uint64_t)> generate;
    std::vector<std::string> csv_columns;  // empty: no CSV form
};

struct SpaceCommand {
    std::function<OrderedJson(const Config&)> compute;
    std::string csv_rows;  // array field rendered as CSV rows
    std::vector<std::string> csv_columns;
};

const std::map<std::string, ItemCommand>& item_commands() {
    static const std::map<std::string, ItemCommand> table = {
        {"exp", {cmd_exp, gen_tangent, {}}},
        {"log", {cmd_log, gen_point, {"norm"}}},
        {"geodesic-check", {cmd_geodesic_check, gen_tangent, {"max_abs_diff"}}},
        {"overlap", {cmd_overlap, gen_point_pair, {"modulus"}}},
        {"distance", {cmd_distance, gen_point_pair, {"distance"}}},
        {"diastasis", {cmd_diastasis, gen_point_pair, {"diastasis"}}},
        {"cayley", {cmd_cayley, gen_point_pair, {"cayley_distance"}}},
        {"cut-test", {cmd_cut_test, gen_frame, {"on_cut_locus", "branch", "det_modulus", "min_singular"}}},
        {"schubert", {cmd_schubert, gen_frame, {"dims", "in_Z", "generic"}}},
        {"strata", {cmd_strata, gen_frame, {"angles", "stratum_W", "stratum_I"}}},
        {"isoclinic", {cmd_isoclinic, gen_frame_pair, {"angles", "isoclinic"}}},
        {"plucker", {cmd_plucker, gen_frame, {}}},
        {"energy", {cmd_energy, gen_energy, {"energy", "gradient_norm"}}},
    };
    return table;
}

const std::map<std::string, SpaceCommand>& space_commands() {
    static const std::map<std::string, SpaceCommand> table = {
        {"conjugate-times", {cmd_conjugate_times, "times", {"t", "multiplicity", "family"}}},
        {"conjugate-scan", {cmd_conjugate_scan, "scan", {"t", "min_singular_normalized", "predicted_flag"}}},
        {"critical-points", {cmd_critical_points, "points", {"subset", "value", "gradient_norm"}}},
        {"char-numbers", {cmd_char_numbers, "", {}}},
    };
    return table;
}

OrderedJson error_json(const Error& e) {
    OrderedJson j;
    j["type"] = std::string(to_string(e.kind()));
    j["message"] = e.what();
    if (e.value()) j["value"] = *e.value();
    return {{"error", j}};
}

void usage_failure(std::ostream& err, const UsageError& e) {
    OrderedJson j;
    j["type"] = "usage";
    j["message"] = e.what();
    if (e.line() > 0) {
        j["line"] = e.line();
        j["column"] = e.column();
    }
    err << dump({{"error", j}}) << '\n';
}

GrassmannSpace parse_space(const std::vector<std::string>& args) {
    if (args.size() < 2 || args.size() > 3) throw UsageError("--space takes n m [compact|noncompact]");
    auto to_int = [](const std::string& s) {
        std::size_t used = 0;
        int v = 0;
        try {
            v = std::stoi(s, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != s.size() || v < 1) throw UsageError("--space dimensions must be positive integers, got \"" + s + "\"");
        return v;
    };
    Curvature c = Curvature::Compact;
    if (args.size() == 3) {
        if (args[2] == "noncompact") {
            c = Curvature::Noncompact;
        } else if (args[2] != "compact") {
            throw UsageError("--space kind must be compact or noncompact");
        }
    }
    return GrassmannSpace(to_int(args[0]), to_int(args[1]), c);
}

double env_tolerance(double fallback) {
    const char* v = std::getenv("GRASSGEO_TOL");
    if (!v || !*v) return fallback;
    char* end = nullptr;
    const double x = std::strtod(v, &end);
    if (*end != '\0' || !(x > 0) || !std::isfinite(x)) {
        throw UsageError(std::string("GRASSGEO_TOL must be a positive number, got \"") + v + "\"");
    }
    return x;
}

std::string read_all(std::istream& in) { return std::string(std::istreambuf_iterator<char>(in), {}); }

int run_item_command(const std::string& name, const ItemCommand& cmd, const Config& cfg, std::istream& in,
                     std::ostream& out, std::ostream& err) {
    if (cfg.output == "csv" && cmd.csv_columns.empty()) {
        throw UsageError("command \"" + name + "\" has no CSV form; use --output json");
    }
    std::vector<Json> items;
    bool batch = false;
    const bool random = cfg.random > 0;
    if (random) {
        batch = true;
        for (int i = 0; i < cfg.random; ++i) items.push_back(cmd.generate(cfg, static_cast<std::uint64_t>(i)));
    } else {
        std::string text;
        if (!cfg.input.empty()) {
            std::ifstream f(cfg.input);
            if (!f) throw UsageError("cannot open input file " + cfg.input);
            text = read_all(f);
        } else {
            text = read_all(in);
        }
        if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
            throw UsageError("no input: pipe JSON on stdin, or use --input FILE or --random K");
        }
        Json doc = parse_json(text);
        if (doc.is_array()) {
            batch = true;
            for (auto& e : doc) items.push_back(std::move(e));
        } else {
            items.push_back(std::move(doc));
        }
    }

    // Results are computed in input order; each slot is independent.
    OrderedJson results = OrderedJson::array();
    bool failed = false;
    for (const Json& item : items) {
        OrderedJson r;
        try {
            r = cmd.compute(cfg, item);
        } catch (const Error& e) {
            r = error_json(e);
            failed = true;
        }
        if (random) {
            OrderedJson wrapped;
            wrapped["input"] = OrderedJson::parse(item.dump());
            for (auto it = r.begin(); it != r.end(); ++it) wrapped[it.key()] = it.value();
            r = std::move(wrapped);
        }
        results.push_back(std::move(r));
    }

    if (cfg.output == "csv") {
        OrderedJson ok = OrderedJson::array();
        for (std::size_t i = 0; i < results.size(); ++i) {
            if (results[i].contains("error")) {
                err << dump({{"index", i}, {"error", results[i]["error"]}}, 0) << '\n';
            }
            ok.push_back(results[i]);
        }
        out << csv_table(ok, cmd.csv_columns, true);
        return failed ? 1 : 0;
    }

    OrderedJson doc;
    doc["command"] = name;
    doc["space"] = space_json(cfg.space);
    if (random) doc["seed"] = cfg.seed;
    if (batch) {
        doc["results"] = std::move(results);
    } else if (results[0].contains("error")) {
        doc["error"] = results[0]["error"];
    } else {
        doc["result"] = std::move(results[0]);
    }
    out << dump(doc) << '\n';
    return failed ? 1 : 0;
}

int run_space_command(const std::string& name, const SpaceCommand& cmd, const Config& cfg, std::ostream& out) {
    if (cfg.output == "csv" && cmd.csv_rows.empty()) {
        throw UsageError("command \"" + name + "\" has no CSV form; use --output json");
    }
    OrderedJson doc;
    doc["command"] = name;
    doc["space"] = space_json(cfg.space);
    try {
        OrderedJson r = cmd.compute(cfg);
        if (cfg.output == "csv") {
            out << csv_table(r[cmd.csv_rows], cmd.csv_columns, false);
            return 0;
        }
        doc["result"] = std::move(r);
        out << dump(doc) << '\n';
        return 0;
    } catch (const Error& e) {
        doc["error"] = error_json(e)["error"];
        out << dump(doc) << '\n';
        return 1;
    }
}

}  // namespace

int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
    CLI::App app{"Geometry of complex Grassmann manifolds and their noncompact duals"};
    app.name("grassgeo");
    app.require_subcommand(1);
    app.fallthrough();
    app.set_help_flag("--help", "print this help and exit");

    Config cfg;
    std::vector<std::string> space_args;
    std::optional<double> tol;

    app.add_option("--space", space_args, "n m [compact|noncompact]")->expected(2, 3);
    app.add_option("--tol", tol, "locus / rank tolerance (default 1e-9, env GRASSGEO_TOL)");
    app.add_option("--angle-tol", cfg.angle_tol, "angle equality tolerance in radians (default 1e-6)");
    app.add_option("--seed", cfg.seed, "seed for --random and generated weights");
    app.add_option("--output", cfg.output, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--input", cfg.input, "read JSON input from a file instead of stdin");
    app.add_option("--random", cfg.random, "generate K random inputs from --seed")->check(CLI::NonNegativeNumber);
    app.add_option("--t", cfg.t, "geodesic parameter (default 1)");
    app.add_option("--steps", cfg.steps, "RK4 steps (default 4000)");
    app.add_option("--h", cfg.h, "Cartan vector components");
    app.add_option("--tmax", cfg.tmax, "largest conjugate parameter (default 3)");
    app.add_option("--points", cfg.points, "scan points (default 200)");
    app.add_option("--fd-step", cfg.fd_step, "finite-difference step (default 1e-5)");
    app.add_option("--window", cfg.window, "scan window around predicted times (default 1e-2)");
    app.add_flag("--verify", cfg.verify, "cross-check exp with the ODE and overlap with Cauchy-Binet");
    app.add_option("--eps", cfg.eps, "diagonal Hamiltonian weights");
    app.add_option("--omega", cfg.omega, "Schubert symbol");
    app.add_option("--wong", cfg.wong, "Schubert symbol omega^p_l given as p l");
    app.add_option("--flag", cfg.flag, "standard (C^n = O) or complement (C^m = O^perp)");
    app.add_flag("--cells", cfg.cells, "schubert: list all cells of the space");

    // "--h" is the Cartan vector, so help answers to --help only.
    for (const auto& [name, cmd] : item_commands()) app.add_subcommand(name, "per-input command")->set_help_flag("--help");
    for (const auto& [name, cmd] : space_commands()) app.add_subcommand(name, "whole-space command")->set_help_flag("--help");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        usage_failure(err, UsageError(e.what()));
        return 2;
    }

    try {
        if (space_args.empty()) throw UsageError("--space n m [compact|noncompact] is required");
        cfg.space = parse_space(space_args);
        cfg.tol = tol ? *tol : env_tolerance(kDefaultLocusTol);
        if (!(cfg.tol > 0)) throw UsageError("--tol must be positive");
        if (cfg.steps < 1 || cfg.points < 1) throw UsageError("--steps and --points must be positive");

        const std::string name = app.get_subcommands().front()->get_name();
        if (name == "schubert" && cfg.cells) {
            return run_space_command(name, SpaceCommand{cmd_schubert_cells, "cells", {"omega", "dimension", "jumps"}},
                                     cfg, out);
        }
        if (auto it = item_commands().find(name); it != item_commands().end()) {
            return run_item_command(name, it->second, cfg, in, out, err);
        }
        return run_space_command(name, space_commands().at(name), cfg, out);
    } catch (const UsageError& e) {
        usage_failure(err, e);
        return 2;
    } catch (const Error& e) {
        // Errors raised while validating the configuration itself.
        out << dump(error_json(e)) << '\n';
        return 1;
    }
}

}  // namespace grassgeo::cli
