#include "tmcompose/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "tmcompose/composition.hpp"
#include "tmcompose/detail/parallel.hpp"
#include "tmcompose/errors.hpp"
#include "tmcompose/fitting.hpp"
#include "tmcompose/invisibility.hpp"
#include "tmcompose/potential.hpp"
#include "tmcompose/propagator.hpp"
#include "tmcompose/scattering.hpp"

namespace tmc::cli {

namespace {

using nlohmann::json;

constexpr int kSchemaVersion = 1;
constexpr const char* kToolVersion = "tmcompose 0.1.0";

struct CommonOpts {
    std::string config_path;
    std::string out = "-";
    std::string format = "csv";
    int jobs = 1;
    double rel_tol = -1.0;
    double abs_tol = -1.0;
    bool strict = false;
    bool meta = false;

    PropagatorConfig propagator(const PropagatorConfig& base = {}) const {
        PropagatorConfig cfg = base;
        if (rel_tol > 0.0) cfg.rel_tol = rel_tol;
        if (abs_tol > 0.0) cfg.abs_tol = abs_tol;
        return cfg;
    }
};

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

// ---- config parsing, with unknown keys rejected ----

void check_keys(const json& obj, const std::set<std::string>& allowed,
                const std::string& ctx) {
    if (!obj.is_object()) throw ConfigError(ctx + ": expected an object");
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError(ctx + ": unknown key '" + it.key() + "'");
}

const json& require_key(const json& obj, const std::string& key, const std::string& ctx) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ConfigError(ctx + ": missing key '" + key + "'");
    return *it;
}

double parse_real(const json& j, const std::string& ctx) {
    if (!j.is_number()) throw ConfigError(ctx + ": expected a number");
    return j.get<double>();
}

int parse_int(const json& j, const std::string& ctx) {
    if (!j.is_number_integer()) throw ConfigError(ctx + ": expected an integer");
    return j.get<int>();
}

Complex parse_complex(const json& j, const std::string& ctx) {
    if (j.is_number()) return Complex{j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex{j[0].get<double>(), j[1].get<double>()};
    throw ConfigError(ctx + ": expected a number or [re, im]");
}

Interval parse_interval(const json& j, const std::string& ctx) {
    if (!j.is_array() || j.size() != 2)
        throw ConfigError(ctx + ": expected [lo, hi]");
    return {parse_real(j[0], ctx), parse_real(j[1], ctx)};
}

PotentialPiece parse_piece(const json& j, const std::string& ctx) {
    const std::string kind = require_key(j, "kind", ctx).get<std::string>();
    const Interval iv = parse_interval(require_key(j, "interval", ctx), ctx + ".interval");
    if (kind == "constant") {
        check_keys(j, {"kind", "interval", "value"}, ctx);
        return PotentialPiece::constant(iv, parse_complex(require_key(j, "value", ctx), ctx));
    }
    if (kind == "polynomial") {
        check_keys(j, {"kind", "interval", "coefficients"}, ctx);
        const json& cs = require_key(j, "coefficients", ctx);
        if (!cs.is_array()) throw ConfigError(ctx + ".coefficients: expected an array");
        std::vector<Complex> coeffs;
        for (const auto& c : cs) coeffs.push_back(parse_complex(c, ctx + ".coefficients"));
        return PotentialPiece::polynomial(iv, std::move(coeffs));
    }
    if (kind == "complex_exponential") {
        check_keys(j, {"kind", "interval", "amplitude", "wavevector"}, ctx);
        return PotentialPiece::complex_exponential(
            iv, parse_complex(require_key(j, "amplitude", ctx), ctx),
            parse_real(require_key(j, "wavevector", ctx), ctx + ".wavevector"));
    }
    if (kind == "gaussian_bump") {
        check_keys(j, {"kind", "interval", "amplitude", "center", "width"}, ctx);
        return PotentialPiece::gaussian_bump(
            iv, parse_complex(require_key(j, "amplitude", ctx), ctx),
            parse_real(require_key(j, "center", ctx), ctx + ".center"),
            parse_real(require_key(j, "width", ctx), ctx + ".width"));
    }
    throw ConfigError(ctx + ": unknown piece kind '" + kind + "'");
}

Potential parse_potential(const json& j, const std::string& ctx) {
    check_keys(j, {"pieces"}, ctx);
    const json& ps = require_key(j, "pieces", ctx);
    if (!ps.is_array()) throw ConfigError(ctx + ".pieces: expected an array");
    std::vector<PotentialPiece> pieces;
    for (size_t i = 0; i < ps.size(); ++i)
        pieces.push_back(parse_piece(ps[i], ctx + ".pieces[" + std::to_string(i) + "]"));
    try {
        return Potential(std::move(pieces));
    } catch (const DomainError& e) {
        throw ConfigError(ctx + ": " + e.what());
    }
}

std::vector<double> parse_k_values(const json& config) {
    const bool has_k = config.contains("k");
    const bool has_values = config.contains("k_values");
    const bool has_sweep = config.contains("k_sweep");
    if (has_k + has_values + has_sweep != 1)
        throw ConfigError("config: provide exactly one of k, k_values, k_sweep");
    std::vector<double> ks;
    if (has_k) {
        ks.push_back(parse_real(config["k"], "k"));
    } else if (has_values) {
        for (const auto& v : config["k_values"]) ks.push_back(parse_real(v, "k_values"));
    } else {
        const json& sw = config["k_sweep"];
        check_keys(sw, {"from", "to", "points", "spacing"}, "k_sweep");
        const double from = parse_real(require_key(sw, "from", "k_sweep"), "k_sweep.from");
        const double to = parse_real(require_key(sw, "to", "k_sweep"), "k_sweep.to");
        const int points = parse_int(require_key(sw, "points", "k_sweep"), "k_sweep.points");
        std::string spacing = "linear";
        if (sw.contains("spacing")) spacing = sw["spacing"].get<std::string>();
        if (points < 2) throw ConfigError("k_sweep.points: need at least 2");
        if (spacing != "linear" && spacing != "log")
            throw ConfigError("k_sweep.spacing: expected 'linear' or 'log'");
        for (int i = 0; i < points; ++i) {
            const double t = static_cast<double>(i) / (points - 1);
            ks.push_back(spacing == "linear"
                             ? from + t * (to - from)
                             : std::exp(std::log(from) + t * (std::log(to) - std::log(from))));
        }
    }
    for (double k : ks)
        if (!(k > 0.0)) throw ConfigError("wavenumbers must be positive");
    return ks;
}

std::vector<double> parse_grid(const json& g, const std::string& ctx) {
    check_keys(g, {"from", "to", "points", "spacing"}, ctx);
    const double from = parse_real(require_key(g, "from", ctx), ctx + ".from");
    const double to = parse_real(require_key(g, "to", ctx), ctx + ".to");
    const int points = parse_int(require_key(g, "points", ctx), ctx + ".points");
    std::string spacing = "log";
    if (g.contains("spacing")) spacing = g["spacing"].get<std::string>();
    if (points < 2) throw ConfigError(ctx + ".points: need at least 2");
    if (!(from > 0.0) || !(to > from)) throw ConfigError(ctx + ": need 0 < from < to");
    if (spacing != "linear" && spacing != "log")
        throw ConfigError(ctx + ".spacing: expected 'linear' or 'log'");
    std::vector<double> xs;
    for (int i = 0; i < points; ++i) {
        const double t = static_cast<double>(i) / (points - 1);
        xs.push_back(spacing == "linear"
                         ? from + t * (to - from)
                         : std::exp(std::log(from) + t * (std::log(to) - std::log(from))));
    }
    return xs;
}

json load_config(const CommonOpts& opts) {
    std::ifstream in(opts.config_path);
    if (!in) throw ConfigError("cannot open config file: " + opts.config_path);
    json config;
    try {
        in >> config;
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    const json& sv = require_key(config, "schema_version", "config");
    if (!sv.is_number_integer() || sv.get<int>() != kSchemaVersion)
        throw ConfigError("config: unsupported schema_version");
    return config;
}

// ---- output ----

struct Table {
    std::vector<std::string> comments;  // column definitions and metadata
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
    json summary;  // optional; emitted in JSON mode or as a side file
};

void write_output(const Table& t, const CommonOpts& opts, const std::string& command) {
    std::ostringstream body;
    if (opts.format == "csv") {
        for (const auto& c : t.comments) body << "# " << c << "\n";
        if (opts.meta) {
            body << "# tool: " << kToolVersion << "\n";
            body << "# command: " << command << "\n";
            body << "# config: " << opts.config_path << "\n";
        }
        for (size_t i = 0; i < t.columns.size(); ++i)
            body << t.columns[i] << (i + 1 < t.columns.size() ? "," : "");
        body << "\n";
        for (const auto& row : t.rows) {
            for (size_t i = 0; i < row.size(); ++i)
                body << row[i] << (i + 1 < row.size() ? "," : "");
            body << "\n";
        }
    } else {
        json out;
        out["schema_version"] = kSchemaVersion;
        if (opts.meta) {
            out["meta"] = {{"tool", kToolVersion},
                           {"command", command},
                           {"config", opts.config_path}};
        }
        out["columns"] = t.columns;
        json results = json::array();
        for (const auto& row : t.rows) {
            json r = json::object();
            for (size_t i = 0; i < row.size(); ++i) {
                // numeric strings round-trip; keep labels as strings
                try {
                    size_t pos = 0;
                    const double v = std::stod(row[i], &pos);
                    if (pos == row[i].size()) {
                        r[t.columns[i]] = v;
                        continue;
                    }
                } catch (...) {
                }
                r[t.columns[i]] = row[i];
            }
            results.push_back(std::move(r));
        }
        out["results"] = std::move(results);
        if (!t.summary.is_null()) out["summary"] = t.summary;
        body << out.dump(2) << "\n";
    }

    if (opts.out == "-") {
        std::cout << body.str();
    } else {
        std::ofstream f(opts.out, std::ios::binary);
        if (!f) throw ConfigError("cannot open output file: " + opts.out);
        f << body.str();
    }

    // CSV mode still gets the machine-readable summary, as a side file.
    if (opts.format == "csv" && !t.summary.is_null() && opts.out != "-") {
        std::ofstream f(opts.out + ".summary.json", std::ios::binary);
        if (!f) throw ConfigError("cannot open output file: " + opts.out + ".summary.json");
        f << t.summary.dump(2) << "\n";
    }
}

void append_mat(std::vector<std::string>& row, const Mat2C& m) {
    for (const Complex v : {m.a11, m.a12, m.a21, m.a22}) {
        row.push_back(fmt17(v.real()));
        row.push_back(fmt17(v.imag()));
    }
}

// ---- subcommands ----

int cmd_transfer(const CommonOpts& opts, bool amplitudes_mode) {
    const json config = load_config(opts);
    check_keys(config, {"schema_version", "potential", "k", "k_values", "k_sweep", "interval"},
               "config");
    const Potential v = parse_potential(require_key(config, "potential", "config"), "potential");
    const std::vector<double> ks = parse_k_values(config);

    double x1 = 0.0, x2 = 0.0;
    if (config.contains("interval")) {
        const Interval iv = parse_interval(config["interval"], "interval");
        if (!(iv.lo <= iv.hi)) throw ConfigError("interval: needs lo <= hi");
        x1 = iv.lo;
        x2 = iv.hi;
    } else if (const auto s = v.support()) {
        x1 = s->lo;
        x2 = s->hi;
    }

    const PropagatorConfig cfg = opts.propagator();
    Table t;
    if (amplitudes_mode) {
        t.comments = {"reflection/transmission amplitudes vs wavenumber",
                      "k: wavenumber (1/length); rl, rr: left/right reflection amplitudes",
                      "t: transmission amplitude; all amplitudes dimensionless"};
        t.columns = {"k", "re_rl", "im_rl", "re_rr", "im_rr", "re_t", "im_t"};
    } else {
        t.comments = {"transfer matrix entries vs wavenumber",
                      "k: wavenumber (1/length); m11..m22: dimensionless matrix entries",
                      "det_drift: |det M - 1|; steps: accepted integrator steps"};
        t.columns = {"k",      "re_m11", "im_m11", "re_m12", "im_m12", "re_m21",
                     "im_m21", "re_m22", "im_m22", "det_drift", "steps"};
    }
    t.rows.resize(ks.size());
    detail::parallel_for(static_cast<int>(ks.size()), opts.jobs, [&](int i) {
        const double k = ks[static_cast<size_t>(i)];
        const TransferResult res = transfer_matrix(v, k, x1, x2, cfg);
        std::vector<std::string> row{fmt17(k)};
        if (amplitudes_mode) {
            const ScatteringAmplitudes a = amplitudes_from_transfer(res.matrix, k);
            for (const Complex c : {a.r_left, a.r_right, a.t}) {
                row.push_back(fmt17(c.real()));
                row.push_back(fmt17(c.imag()));
            }
        } else {
            append_mat(row, res.matrix);
            row.push_back(fmt17(res.det_drift));
            row.push_back(std::to_string(res.steps_taken));
        }
        t.rows[static_cast<size_t>(i)] = std::move(row);
    });
    write_output(t, opts, amplitudes_mode ? "amplitudes" : "transfer");
    return kExitOk;
}

int cmd_compose(const CommonOpts& opts) {
    const json config = load_config(opts);
    check_keys(config, {"schema_version", "potential1", "potential2", "k", "method"}, "config");
    const Potential v1 =
        parse_potential(require_key(config, "potential1", "config"), "potential1");
    const Potential v2 =
        parse_potential(require_key(config, "potential2", "config"), "potential2");
    const double k = parse_real(require_key(config, "k", "config"), "k");
    if (!(k > 0.0)) throw ConfigError("k must be positive");
    const std::string method = require_key(config, "method", "config").get<std::string>();
    const PropagatorConfig cfg = opts.propagator();

    const auto rel = support_relation(v1, v2);
    const auto s1 = v1.support();
    const auto s2 = v2.support();
    const double hull_lo = std::min(s1->lo, s2->lo);
    const double hull_hi = std::max(s1->hi, s2->hi);
    const Mat2C direct = transfer_matrix_sum({&v1, &v2}, k, hull_lo, hull_hi, cfg).matrix;

    Mat2C composed;
    if (method == "disjoint") {
        if (rel.kind != SupportRelation::Kind::StrictlyPrecedes)
            throw ConfigError("method 'disjoint' requires strictly preceding supports");
        composed = compose_disjoint(transfer_matrix(v1, k, cfg).matrix,
                                    transfer_matrix(v2, k, cfg).matrix);
    } else if (method == "exact") {
        composed = generalized_compose(v1, v2, k, ComposeMethod::exact(), cfg);
    } else if (method.rfind("series:", 0) == 0) {
        int order = 0;
        try {
            order = std::stoi(method.substr(7));
        } catch (...) {
            throw ConfigError("method: expected series:N with N in 2..6");
        }
        if (order < 2 || order > 6)
            throw ConfigError("method: expected series:N with N in 2..6");
        if (rel.kind == SupportRelation::Kind::WeaklyPrecedes &&
            k * rel.overlap_length > 1.0)
            std::cerr << "warning: k*ell = " << k * rel.overlap_length
                      << " > 1; the overlap series is a small-epsilon expansion\n";
        composed = generalized_compose(v1, v2, k, ComposeMethod::series(order), cfg);
    } else if (method == "split") {
        if (rel.kind == SupportRelation::Kind::Other)
            throw ConfigError("method 'split' requires (strictly or weakly) preceding supports");
        const double d0 = -rel.overlap_start;
        const Potential w1 = v1.translated(d0);
        const Potential w2 = v2.translated(d0);
        const double ell = rel.overlap_length;
        const double lo = w1.support()->lo;
        const double hi = w2.support()->hi;
        Mat2C m_minus = mat2_identity(), m_window = mat2_identity(), m_plus = mat2_identity();
        if (lo < 0.0) m_minus = transfer_matrix_sum({&w1, &w2}, k, lo, 0.0, cfg).matrix;
        if (ell > 0.0) m_window = transfer_matrix_sum({&w1, &w2}, k, 0.0, ell, cfg).matrix;
        if (hi > ell) m_plus = transfer_matrix_sum({&w1, &w2}, k, ell, hi, cfg).matrix;
        composed = translate_transfer(m_plus * (m_window * m_minus), k, -d0);
    } else {
        throw ConfigError("method: expected disjoint, exact, series:N or split");
    }

    Table t;
    t.comments = {"composed transfer matrix vs direct integration of the sum",
                  "matrix: which product the row describes; entries dimensionless",
                  "deviation row: max_abs entry of (composed - direct)"};
    t.columns = {"matrix", "re_m11", "im_m11", "re_m12", "im_m12",
                 "re_m21", "im_m21", "re_m22", "im_m22"};
    std::vector<std::string> row{"composed"};
    append_mat(row, composed);
    t.rows.push_back(row);
    row = {"direct"};
    append_mat(row, direct);
    t.rows.push_back(row);
    const double dev = max_abs_diff(composed, direct);
    row = {"deviation", fmt17(dev)};
    row.resize(t.columns.size(), "0");
    t.rows.push_back(row);
    t.summary = {{"method", method}, {"deviation", dev}, {"k", k}};
    write_output(t, opts, "compose");
    return kExitOk;
}

int cmd_overlap_study(const CommonOpts& opts) {
    const json config = load_config(opts);
    check_keys(config,
               {"schema_version", "potential1", "potential2", "k", "ell_grid", "order",
                "slope_band"},
               "config");
    const Potential v1 =
        parse_potential(require_key(config, "potential1", "config"), "potential1");
    const Potential v2 =
        parse_potential(require_key(config, "potential2", "config"), "potential2");
    const double k = parse_real(require_key(config, "k", "config"), "k");
    const std::vector<double> ells =
        parse_grid(require_key(config, "ell_grid", "config"), "ell_grid");
    const int order = parse_int(require_key(config, "order", "config"), "order");
    double band = 0.3;
    if (config.contains("slope_band")) band = parse_real(config["slope_band"], "slope_band");
    if (ells.size() < 4) throw ConfigError("ell_grid: need at least 4 points");

    PropagatorConfig cfg = opts.propagator(PropagatorConfig{1e-12, 1e-14});
    OverlapReport report;
    try {
        report = convergence_sweep(v1, v2, k, ells, order, cfg, opts.jobs);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }

    const char* regime_name = nullptr;
    double expected = 0.0;
    switch (report.regime) {
        case OverlapRegime::DiscontinuousBoth:
            regime_name = "discontinuous_both";
            expected = 3.0;
            break;
        case OverlapRegime::V1Continuous:
            regime_name = "v1_continuous";
            expected = 4.0;
            break;
        case OverlapRegime::V2Continuous:
            regime_name = "v2_continuous";
            expected = 4.0;
            break;
        case OverlapRegime::ContinuousBoth:
            regime_name = "continuous_both";
            expected = 5.0;
            break;
    }
    if (order >= 3) expected = order + 1.0;

    Table t;
    t.comments = {
        "overlap-correction convergence sweep",
        "ell: overlap length (length units); eps = k*ell dimensionless",
        "dev_identity: ||S_exact - 1||; err_N: ||S_exact - S_series(N)|| (max_abs norm)",
        "regime: endpoint classification of the pair"};
    t.columns = {"ell", "eps", "dev_identity", "err_3", "err_4", "err_5", "err_6", "regime"};
    for (const auto& pt : report.points) {
        std::vector<std::string> row{fmt17(pt.ell), fmt17(k * pt.ell),
                                     fmt17(pt.deviation_from_identity)};
        for (int n = 3; n <= 6; ++n)
            row.push_back(pt.errors.count(n) ? fmt17(pt.errors.at(n)) : "");
        row.push_back(regime_name);
        t.rows.push_back(std::move(row));
    }

    const bool pass = std::abs(report.fitted_slope - expected) <= band;
    json slopes = json::object();
    for (const auto& [n, s] : report.slopes_by_order) slopes[std::to_string(n)] = s;
    t.summary = {{"regime", regime_name},
                 {"requested_order", order},
                 {"fitted_slope", report.fitted_slope},
                 {"expected_slope", expected},
                 {"slope_band", band},
                 {"identity_slope", report.identity_slope},
                 {"series_slopes", slopes},
                 {"pass", pass}};
    write_output(t, opts, "overlap-study");
    if (!pass) {
        std::cerr << "overlap-study: fitted slope " << report.fitted_slope
                  << " outside " << expected << " +/- " << band << "\n";
        return kExitCheckFailure;
    }
    return kExitOk;
}

int cmd_invisibility(const CommonOpts& opts) {
    const json config = load_config(opts);
    check_keys(config,
               {"schema_version", "coupling", "z_over_K2", "wavevector", "mode", "ells",
                "checks"},
               "config");
    UnidirectionalSpec spec;
    spec.wavevector = parse_real(require_key(config, "wavevector", "config"), "wavevector");
    if (!(spec.wavevector > 0.0)) throw ConfigError("wavevector must be positive");
    spec.mode = config.contains("mode") ? parse_int(config["mode"], "mode") : 1;
    if (config.contains("coupling") == config.contains("z_over_K2"))
        throw ConfigError("config: provide exactly one of coupling, z_over_K2");
    if (config.contains("coupling")) {
        spec.coupling = parse_complex(config["coupling"], "coupling");
    } else {
        spec.coupling = parse_real(config["z_over_K2"], "z_over_K2") * spec.wavevector *
                        spec.wavevector;
    }

    std::vector<double> ells;
    for (const auto& e : require_key(config, "ells", "config"))
        ells.push_back(parse_real(e, "ells"));
    if (ells.empty()) throw ConfigError("ells: need at least one value");

    double rl_rel_tol = 0.05, t_rel_tol = 0.05, rr_rel_tol = 0.05;
    double epsilon_max = 0.25;
    double rl_floor_factor = 1e5;
    if (config.contains("checks")) {
        const json& c = config["checks"];
        check_keys(c,
                   {"rl_rel_tol", "t_rel_tol", "rr_rel_tol", "epsilon_max",
                    "rl_floor_factor"},
                   "checks");
        if (c.contains("rl_rel_tol")) rl_rel_tol = parse_real(c["rl_rel_tol"], "checks");
        if (c.contains("t_rel_tol")) t_rel_tol = parse_real(c["t_rel_tol"], "checks");
        if (c.contains("rr_rel_tol")) rr_rel_tol = parse_real(c["rr_rel_tol"], "checks");
        if (c.contains("epsilon_max")) epsilon_max = parse_real(c["epsilon_max"], "checks");
        if (c.contains("rl_floor_factor"))
            rl_floor_factor = parse_real(c["rl_floor_factor"], "checks");
    }

    const double z_over_k2 = std::abs(spec.coupling) / (spec.wavevector * spec.wavevector);
    if (z_over_k2 > 0.1) {
        if (opts.strict)
            throw ConfigError("coupling is not perturbative (|z|/K^2 > 0.1) under --strict");
        std::cerr << "warning: |z|/K^2 = " << z_over_k2
                  << " > 0.1; perturbative predictions degrade\n";
    }

    if (spec.mode != 1) throw ConfigError("the overlap experiment requires mode 1");
    const PropagatorConfig cfg = opts.propagator(PropagatorConfig{1e-12, 1e-14});
    const InvisibilityReport report = experiment_report(spec, ells, cfg, opts.jobs);

    Table t;
    t.comments = {
        "overlapping unidirectional pair: integrated vs predicted amplitudes at k = K/2",
        "ell: overlap length; eps = (K/2)*ell; amplitudes dimensionless",
        "*_c2: coefficient of z^2 isolated from couplings z, z/2, z/4",
        "rel deviations are relative to the predicted values"};
    t.columns = {"ell",        "eps",        "re_rl",      "im_rl",     "re_rr",
                 "im_rr",      "re_t",       "im_t",       "re_rl_pred", "im_rl_pred",
                 "re_rr_pred", "im_rr_pred", "re_t_pred",  "im_t_pred",
                 "re_rl_c2",   "im_rl_c2",   "re_rl_c2_pred", "im_rl_c2_pred",
                 "rl_c2_rel_dev", "t_c2_rel_dev", "rr_rel_dev"};
    for (const auto& r : report.rows) {
        std::vector<std::string> row{fmt17(r.ell), fmt17(r.epsilon)};
        for (const Complex c : {r.numeric.r_left, r.numeric.r_right, r.numeric.t,
                                r.predicted.r_left, r.predicted.r_right, r.predicted.t,
                                r.rl_c2_numeric, r.rl_c2_predicted}) {
            row.push_back(fmt17(c.real()));
            row.push_back(fmt17(c.imag()));
        }
        row.push_back(fmt17(r.rl_c2_rel_dev));
        row.push_back(fmt17(r.t_c2_rel_dev));
        row.push_back(fmt17(r.rr_rel_dev));
        t.rows.push_back(std::move(row));
    }

    // prediction checks
    bool pass = true;
    json checks = json::array();
    const double z3 = std::pow(std::abs(spec.coupling), 3.0);
    for (const auto& r : report.rows) {
        if (r.ell == 0.0) {
            const bool ok = std::abs(r.numeric.r_left) <= rl_floor_factor * z3;
            checks.push_back({{"check", "rl_floor_at_ell0"},
                              {"value", std::abs(r.numeric.r_left)},
                              {"bound", rl_floor_factor * z3},
                              {"pass", ok}});
            pass = pass && ok;
            continue;
        }
        if (r.epsilon > epsilon_max) continue;
        const bool ok_rl = r.rl_c2_rel_dev <= rl_rel_tol;
        const bool ok_t = r.t_c2_rel_dev <= t_rel_tol;
        const bool ok_rr = r.rr_rel_dev <= rr_rel_tol;
        checks.push_back({{"check", "rl_c2"}, {"ell", r.ell}, {"dev", r.rl_c2_rel_dev},
                          {"tol", rl_rel_tol}, {"pass", ok_rl}});
        checks.push_back({{"check", "t_c2"}, {"ell", r.ell}, {"dev", r.t_c2_rel_dev},
                          {"tol", t_rel_tol}, {"pass", ok_t}});
        checks.push_back({{"check", "rr"}, {"ell", r.ell}, {"dev", r.rr_rel_dev},
                          {"tol", rr_rel_tol}, {"pass", ok_rr}});
        pass = pass && ok_rl && ok_t && ok_rr;
    }
    size_t positive_ells = 0;
    for (const auto& r : report.rows) positive_ells += r.ell > 0.0;
    if (positive_ells >= 2) {
        const bool ok = std::abs(report.rl_ell_slope - 3.0) <= 0.3;
        checks.push_back({{"check", "rl_ell_slope"}, {"value", report.rl_ell_slope},
                          {"expected", 3.0}, {"band", 0.3}, {"pass", ok}});
        pass = pass && ok;
    }
    if (!report.rows.empty() && report.rows.back().ell > 0.0) {
        const bool ok = std::abs(report.rl_z_slope - 2.0) <= 0.1;
        checks.push_back({{"check", "rl_z_slope"}, {"value", report.rl_z_slope},
                          {"expected", 2.0}, {"band", 0.1}, {"pass", ok}});
        pass = pass && ok;
    }
    t.summary = {{"rl_ell_slope", report.rl_ell_slope},
                 {"rl_z_slope", report.rl_z_slope},
                 {"perturbative_warning", report.perturbative_warning},
                 {"checks", checks},
                 {"pass", pass}};
    write_output(t, opts, "invisibility");
    return pass ? kExitOk : kExitCheckFailure;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"transfer matrices of 1D complex potentials and their composition"};
    app.require_subcommand(1);

    CommonOpts opts;
    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", opts.config_path, "JSON run configuration")->required();
        cmd->add_option("--out", opts.out, "output path ('-' for stdout)");
        cmd->add_option("--format", opts.format, "csv or json")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--jobs", opts.jobs, "worker threads for sweeps")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--rel-tol", opts.rel_tol, "integrator relative tolerance");
        cmd->add_option("--abs-tol", opts.abs_tol, "integrator absolute tolerance");
        cmd->add_flag("--strict", opts.strict, "escalate validity warnings to errors");
        cmd->add_flag("--meta", opts.meta, "include run metadata in the output");
    };

    CLI::App* transfer = app.add_subcommand("transfer", "transfer matrix over a k set");
    CLI::App* amplitudes =
        app.add_subcommand("amplitudes", "reflection/transmission amplitudes over a k set");
    CLI::App* compose = app.add_subcommand("compose", "compose a pair of potentials");
    CLI::App* study =
        app.add_subcommand("overlap-study", "overlap-correction convergence sweep");
    CLI::App* invisibility =
        app.add_subcommand("invisibility", "overlapping unidirectional-pair experiment");
    for (CLI::App* c : {transfer, amplitudes, compose, study, invisibility}) add_common(c);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << e.what() << "\n";
        return kExitConfigError;
    }

    try {
        if (transfer->parsed()) return cmd_transfer(opts, false);
        if (amplitudes->parsed()) return cmd_transfer(opts, true);
        if (compose->parsed()) return cmd_compose(opts);
        if (study->parsed()) return cmd_overlap_study(opts);
        if (invisibility->parsed()) return cmd_invisibility(opts);
        return kExitConfigError;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const JetOrderError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const DomainError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const Error& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return kExitNumericError;
    }
}

}  // namespace tmc::cli
