#include "irssense/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cctype>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>
#include <tuple>

#include <Eigen/Eigenvalues>

#include "CLI11.hpp"
#include "irssense/metrics.hpp"
#include "irssense/rng.hpp"
#include "json.hpp"

namespace irs {
namespace {

using nlohmann::json;

double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }

double to_db(double linear) { return 10.0 * std::log10(linear); }

// ---- enum <-> string -------------------------------------------------------

const char* arch_name(Arch a) {
    return a == Arch::FullyPassive ? "fully_passive" : "semi_passive";
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::JointBf: return "joint_bf";
        case Scheme::ReflectiveOnly: return "reflective_only";
        case Scheme::TransmitOnly: return "transmit_only";
        case Scheme::NoOptimization: return "no_optimization";
    }
    return "joint_bf";
}

const char* objective_name(SweepObjective o) {
    switch (o) {
        case SweepObjective::Snr: return "snr";
        case SweepObjective::Crb: return "crb";
        case SweepObjective::Detection: return "detection";
    }
    return "snr";
}

const char* backend_name(BackendChoice b) {
    switch (b) {
        case BackendChoice::Auto: return "auto";
        case BackendChoice::SdrSca: return "sdr_sca";
        case BackendChoice::CoordinateAscent: return "coordinate_ascent";
    }
    return "auto";
}

const char* channel_name(ChannelKind k) {
    switch (k) {
        case ChannelKind::Los: return "los";
        case ChannelKind::Rician: return "rician";
        case ChannelKind::Rayleigh: return "rayleigh";
    }
    return "rayleigh";
}

Scheme scheme_from(const std::string& s) {
    if (s == "joint_bf") return Scheme::JointBf;
    if (s == "reflective_only") return Scheme::ReflectiveOnly;
    if (s == "transmit_only") return Scheme::TransmitOnly;
    if (s == "no_optimization") return Scheme::NoOptimization;
    throw ValidationError("unknown scheme: " + s);
}

SweepObjective objective_from(const std::string& s) {
    if (s == "snr") return SweepObjective::Snr;
    if (s == "crb") return SweepObjective::Crb;
    if (s == "detection") return SweepObjective::Detection;
    throw ValidationError("unknown objective: " + s);
}

BackendChoice backend_from(const std::string& s) {
    if (s == "auto") return BackendChoice::Auto;
    if (s == "sdr_sca") return BackendChoice::SdrSca;
    if (s == "coordinate_ascent") return BackendChoice::CoordinateAscent;
    throw ValidationError("unknown backend: " + s);
}

ChannelKind channel_from(const std::string& s) {
    if (s == "los") return ChannelKind::Los;
    if (s == "rician") return ChannelKind::Rician;
    if (s == "rayleigh") return ChannelKind::Rayleigh;
    throw ValidationError("unknown channel kind: " + s);
}

// ---- JSON config ------------------------------------------------------------

void reject_unknown(const json& obj, const char* where,
                    std::initializer_list<const char*> allowed) {
    for (const auto& item : obj.items()) {
        bool ok = false;
        for (const char* k : allowed)
            if (item.key() == k) ok = true;
        if (!ok)
            throw ValidationError(std::string("unknown config key: ") + where + "." +
                                  item.key());
    }
}

Vec2 parse_vec2(const json& j, const char* where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ValidationError(std::string("config key ") + where +
                              " must be a [x, y] number pair");
    return Vec2{j[0].get<double>(), j[1].get<double>()};
}

}  // namespace

void ScenarioConfig::validate() const {
    if (m_t < 1 || m_r < 1) throw ValidationError("antenna counts must be >= 1");
    if (n_list.empty()) throw ValidationError("n_list must not be empty");
    for (std::size_t i = 0; i < n_list.size(); ++i) {
        if (n_list[i] < 1) throw ValidationError("n_list entries must be >= 1");
        if (i > 0 && n_list[i] <= n_list[i - 1])
            throw ValidationError("n_list must be strictly increasing");
    }
    if (trials < 1) throw ValidationError("trials must be >= 1");
    if (!std::isfinite(power_budget_dbm) || !std::isfinite(sigma2_dbm))
        throw ValidationError("dBm fields must be finite");
    if (t_symbols < 1) throw ValidationError("t_symbols must be >= 1");
    if (!(p_fa > 0.0 && p_fa < 1.0)) throw ValidationError("p_fa must be in (0, 1)");
    if (rician_k < 0) throw ValidationError("rician_k must be >= 0");
    if (rcs <= 0) throw ValidationError("rcs must be > 0");
    path_loss.validate();
}

ScenarioConfig parse_config_json(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ValidationError(std::string("config parse error: ") + e.what());
    }
    if (!root.is_object()) throw ValidationError("config root must be a JSON object");
    reject_unknown(root, "$",
                   {"positions", "array", "channel", "path_loss", "rcs",
                    "power_budget_dbm", "sigma2_dbm", "t_symbols", "p_fa", "trials",
                    "master_seed", "scheme", "objective", "backend", "record_timing",
                    "out_csv", "out_svg"});

    ScenarioConfig cfg;
    if (root.contains("positions")) {
        const json& p = root["positions"];
        reject_unknown(p, "positions", {"bs", "irs", "target"});
        if (p.contains("bs")) cfg.bs_pos = parse_vec2(p["bs"], "positions.bs");
        if (p.contains("irs")) cfg.irs_pos = parse_vec2(p["irs"], "positions.irs");
        if (p.contains("target"))
            cfg.target_pos = parse_vec2(p["target"], "positions.target");
    }
    if (root.contains("array")) {
        const json& a = root["array"];
        reject_unknown(a, "array", {"m_t", "m_r", "n_list"});
        if (a.contains("m_t")) cfg.m_t = a["m_t"].get<int>();
        if (a.contains("m_r")) cfg.m_r = a["m_r"].get<int>();
        if (a.contains("n_list")) {
            if (!a["n_list"].is_array())
                throw ValidationError("array.n_list must be an array of integers");
            cfg.n_list.clear();
            for (const auto& v : a["n_list"]) cfg.n_list.push_back(v.get<int>());
        }
    }
    if (root.contains("channel")) {
        const json& c = root["channel"];
        reject_unknown(c, "channel", {"kind", "rician_k"});
        if (c.contains("kind")) cfg.channel = channel_from(c["kind"].get<std::string>());
        if (c.contains("rician_k")) cfg.rician_k = c["rician_k"].get<double>();
    }
    if (root.contains("path_loss")) {
        const json& p = root["path_loss"];
        reject_unknown(p, "path_loss",
                       {"k0_db", "d0", "exponent_bs_irs", "exponent_irs_target"});
        if (p.contains("k0_db")) cfg.path_loss.k0_db = p["k0_db"].get<double>();
        if (p.contains("d0")) cfg.path_loss.d0 = p["d0"].get<double>();
        if (p.contains("exponent_bs_irs"))
            cfg.path_loss.exponent_bs_irs = p["exponent_bs_irs"].get<double>();
        if (p.contains("exponent_irs_target"))
            cfg.path_loss.exponent_irs_target = p["exponent_irs_target"].get<double>();
    }
    if (root.contains("rcs")) cfg.rcs = root["rcs"].get<double>();
    if (root.contains("power_budget_dbm"))
        cfg.power_budget_dbm = root["power_budget_dbm"].get<double>();
    if (root.contains("sigma2_dbm")) cfg.sigma2_dbm = root["sigma2_dbm"].get<double>();
    if (root.contains("t_symbols")) cfg.t_symbols = root["t_symbols"].get<int>();
    if (root.contains("p_fa")) cfg.p_fa = root["p_fa"].get<double>();
    if (root.contains("trials")) cfg.trials = root["trials"].get<int>();
    if (root.contains("master_seed"))
        cfg.master_seed = root["master_seed"].get<std::uint64_t>();
    if (root.contains("scheme")) cfg.scheme = scheme_from(root["scheme"].get<std::string>());
    if (root.contains("objective"))
        cfg.objective = objective_from(root["objective"].get<std::string>());
    if (root.contains("backend"))
        cfg.backend = backend_from(root["backend"].get<std::string>());
    if (root.contains("record_timing")) cfg.record_timing = root["record_timing"].get<bool>();
    if (root.contains("out_csv")) cfg.out_csv = root["out_csv"].get<std::string>();
    if (root.contains("out_svg")) cfg.out_svg = root["out_svg"].get<std::string>();
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ValidationError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return parse_config_json(ss.str());
}

std::string config_to_json(const ScenarioConfig& cfg) {
    json root;
    root["positions"] = {{"bs", {cfg.bs_pos.x, cfg.bs_pos.y}},
                         {"irs", {cfg.irs_pos.x, cfg.irs_pos.y}},
                         {"target", {cfg.target_pos.x, cfg.target_pos.y}}};
    root["array"] = {{"m_t", cfg.m_t}, {"m_r", cfg.m_r}, {"n_list", cfg.n_list}};
    root["channel"] = {{"kind", channel_name(cfg.channel)}, {"rician_k", cfg.rician_k}};
    root["path_loss"] = {{"k0_db", cfg.path_loss.k0_db},
                         {"d0", cfg.path_loss.d0},
                         {"exponent_bs_irs", cfg.path_loss.exponent_bs_irs},
                         {"exponent_irs_target", cfg.path_loss.exponent_irs_target}};
    root["rcs"] = cfg.rcs;
    root["power_budget_dbm"] = cfg.power_budget_dbm;
    root["sigma2_dbm"] = cfg.sigma2_dbm;
    root["t_symbols"] = cfg.t_symbols;
    root["p_fa"] = cfg.p_fa;
    root["trials"] = cfg.trials;
    root["master_seed"] = cfg.master_seed;
    root["scheme"] = scheme_name(cfg.scheme);
    root["objective"] = objective_name(cfg.objective);
    root["backend"] = backend_name(cfg.backend);
    root["record_timing"] = cfg.record_timing;
    root["out_csv"] = cfg.out_csv;
    root["out_svg"] = cfg.out_svg;
    return root.dump(2);
}

// ---- sweep engine -----------------------------------------------------------

int resolve_threads(int flag_value) {
    if (flag_value > 0) return flag_value;
    if (const char* env = std::getenv("IRS_SENSE_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (!end || *end != '\0' || v < 1)
            throw ValidationError("IRS_SENSE_THREADS must be a positive integer");
        return static_cast<int>(v);
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
}

Backend resolve_backend(BackendChoice choice, int n) {
    switch (choice) {
        case BackendChoice::SdrSca: return Backend::SdrSca;
        case BackendChoice::CoordinateAscent: return Backend::CoordinateAscent;
        case BackendChoice::Auto: break;
    }
    return n > 64 ? Backend::CoordinateAscent : Backend::SdrSca;
}

namespace {

std::vector<std::string> metric_names(SweepObjective o) {
    switch (o) {
        case SweepObjective::Snr: return {"snr"};
        case SweepObjective::Crb: return {"crb", "crb_approx"};
        case SweepObjective::Detection: return {"pd"};
    }
    return {"snr"};
}

/// All rows of one (n, trial) cell, both architectures. Pure given the
/// config: every random draw is keyed off (master_seed, n, trial, stream).
std::vector<SweepRow> run_cell(const ScenarioConfig& cfg, const ScenarioGeometry& scen,
                               const SensingSpec& spec, double p0, int n, int trial) {
    std::vector<SweepRow> rows;
    const std::uint64_t seed_ch = derive_seed(cfg.master_seed, n, trial, 0);
    const auto names = metric_names(cfg.objective);

    auto failed = [&](Arch arch, const std::string& why) {
        for (const auto& name : names) {
            SweepRow row;
            row.n = n;
            row.trial = trial;
            row.seed = seed_ch;
            row.arch = arch;
            row.scheme = cfg.scheme;
            row.metric = name;
            row.value_db = std::numeric_limits<double>::quiet_NaN();
            row.ok = false;
            row.note = why;
            rows.push_back(row);
        }
    };

    ArrayGeometry geom;
    geom.m_t = cfg.m_t;
    geom.m_r = cfg.m_r;
    geom.n = n;

    for (const Arch arch : {Arch::FullyPassive, Arch::SemiPassive}) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const ChannelRealization ch = gen_channel(cfg.channel, geom, scen,
                                                      cfg.path_loss, cfg.rcs, seed_ch,
                                                      cfg.rician_k);
            OptimizerOptions opts;
            opts.backend = resolve_backend(cfg.backend, n);
            opts.seed = derive_seed(cfg.master_seed, n, trial, 1);

            const MatC iso_r =
                (p0 / cfg.m_t) * MatC::Identity(cfg.m_t, cfg.m_t);
            const TransmitCovariance iso{iso_r, p0};

            ReflectPattern v;
            TransmitCovariance r;
            int trace_len = 0;
            switch (cfg.scheme) {
                case Scheme::JointBf: {
                    if (cfg.objective == SweepObjective::Crb) {
                        const auto res = minimize_crb(arch, ch, geom, spec, p0, opts);
                        v = res.v;
                        r = *res.r;
                        trace_len = static_cast<int>(res.objective_trace.size());
                    } else {
                        const auto res = maximize_snr(arch, ch, ch.theta, geom, opts);
                        v = res.v;
                        r = mrt_covariance(v, ch, p0);
                        trace_len = static_cast<int>(res.objective_trace.size());
                    }
                    break;
                }
                case Scheme::ReflectiveOnly: {
                    // The pattern argmax does not depend on whether the
                    // covariance is isotropic or maximum-ratio, so the SNR
                    // optimizer serves both; only the bound needs its own
                    // fixed-covariance descent.
                    if (cfg.objective == SweepObjective::Crb) {
                        const auto res =
                            minimize_crb_reflective(arch, ch, geom, spec, iso, opts);
                        v = res.v;
                        trace_len = static_cast<int>(res.objective_trace.size());
                    } else {
                        const auto res = maximize_snr(arch, ch, ch.theta, geom, opts);
                        v = res.v;
                        trace_len = static_cast<int>(res.objective_trace.size());
                    }
                    r = iso;
                    break;
                }
                case Scheme::TransmitOnly: {
                    v = benchmark_pattern(BenchmarkKind::RandomPhases, n,
                                          derive_seed(cfg.master_seed, n, trial, 2));
                    r = cfg.objective == SweepObjective::Crb
                            ? transmit_only_design(arch, ch, v, DesignObjective::Crb,
                                                   p0, spec, opts)
                            : mrt_covariance(v, ch, p0);
                    break;
                }
                case Scheme::NoOptimization: {
                    v = benchmark_pattern(BenchmarkKind::RandomPhases, n,
                                          derive_seed(cfg.master_seed, n, trial, 2));
                    r = iso;
                    break;
                }
            }

            std::vector<double> values;
            switch (cfg.objective) {
                case SweepObjective::Snr:
                    values = {to_db(snr(arch, r, v, ch, spec))};
                    break;
                case SweepObjective::Crb:
                    values = {to_db(crb(arch, r, v, ch, spec)),
                              to_db(crb_approx(arch, r, v, ch, spec))};
                    break;
                case SweepObjective::Detection:
                    values = {detection_probability(arch, r, v, ch, spec)};
                    break;
            }
            double wall = 0.0;
            if (cfg.record_timing) {
                const auto t1 = std::chrono::steady_clock::now();
                wall = std::chrono::duration<double, std::milli>(t1 - t0).count();
            }
            for (std::size_t k = 0; k < names.size(); ++k) {
                SweepRow row;
                row.n = n;
                row.trial = trial;
                row.seed = seed_ch;
                row.arch = arch;
                row.scheme = cfg.scheme;
                row.metric = names[k];
                row.value_db = values[k];
                row.trace_len = trace_len;
                row.wall_time_ms = wall;
                rows.push_back(row);
            }
        } catch (const ValidationError& e) {
            failed(arch, e.what());
        } catch (const NumericalError& e) {
            failed(arch, e.what());
        }
    }
    return rows;
}

bool row_before(const SweepRow& a, const SweepRow& b) {
    return std::tie(a.n, a.trial, a.scheme, a.arch, a.metric) <
           std::tie(b.n, b.trial, b.scheme, b.arch, b.metric);
}

void aggregate_rows(SweepResult& result) {
    result.aggregates.clear();
    using Key = std::tuple<int, Scheme, Arch, std::string>;
    std::map<Key, std::vector<double>> groups;
    for (const SweepRow& row : result.rows) {
        if (!row.ok || !std::isfinite(row.value_db)) continue;
        groups[{row.n, row.scheme, row.arch, row.metric}].push_back(row.value_db);
    }
    // Emit one aggregate per group even when every trial failed, so curves
    // keep their n grid.
    std::map<Key, bool> seen;
    for (const SweepRow& row : result.rows)
        seen[{row.n, row.scheme, row.arch, row.metric}] = true;
    for (const auto& [key, any] : seen) {
        (void)any;
        AggregateRow agg;
        agg.n = std::get<0>(key);
        agg.scheme = std::get<1>(key);
        agg.arch = std::get<2>(key);
        agg.metric = std::get<3>(key);
        const auto it = groups.find(key);
        if (it == groups.end() || it->second.empty()) {
            agg.mean_db = std::numeric_limits<double>::quiet_NaN();
            agg.std_db = 0.0;
            agg.trials = 0;
        } else {
            const std::vector<double>& vals = it->second;
            const int count = static_cast<int>(vals.size());
            double mean_plain = 0.0;  // dB values for snr/crb, probabilities for pd
            for (double v : vals) mean_plain += v;
            mean_plain /= count;
            if (agg.metric == "pd") {
                agg.mean_db = mean_plain;
            } else {
                double mean_lin = 0.0;
                for (double v : vals) mean_lin += std::pow(10.0, v / 10.0);
                agg.mean_db = to_db(mean_lin / count);
            }
            double ss = 0.0;
            for (double v : vals) ss += (v - mean_plain) * (v - mean_plain);
            agg.std_db = count > 1 ? std::sqrt(ss / (count - 1)) : 0.0;
            agg.trials = count;
        }
        result.aggregates.push_back(agg);
    }
}

}  // namespace

SweepResult run_sweep(const ScenarioConfig& cfg, int threads) {
    cfg.validate();
    const int nthreads = resolve_threads(threads);
    const ScenarioGeometry scen =
        geometry_from_positions(cfg.bs_pos, cfg.irs_pos, cfg.target_pos);
    SensingSpec spec;
    spec.sigma2 = dbm_to_watt(cfg.sigma2_dbm);
    spec.t_symbols = cfg.t_symbols;
    spec.p_fa = cfg.p_fa;
    spec.validate();
    const double p0 = dbm_to_watt(cfg.power_budget_dbm);

    const std::size_t cells = cfg.n_list.size() * static_cast<std::size_t>(cfg.trials);
    std::vector<std::vector<SweepRow>> cell_rows(cells);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t c = next.fetch_add(1);
            if (c >= cells) return;
            const int n = cfg.n_list[c / cfg.trials];
            const int trial = static_cast<int>(c % cfg.trials);
            cell_rows[c] = run_cell(cfg, scen, spec, p0, n, trial);
        }
    };
    if (nthreads <= 1 || cells <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        const int spawn =
            static_cast<int>(std::min<std::size_t>(nthreads, cells));
        pool.reserve(spawn);
        for (int t = 0; t < spawn; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    SweepResult result;
    result.config = cfg;
    for (auto& rows : cell_rows)
        for (auto& row : rows) result.rows.push_back(std::move(row));
    std::sort(result.rows.begin(), result.rows.end(), row_before);
    aggregate_rows(result);
    return result;
}

// ---- CSV / SVG --------------------------------------------------------------

namespace {

std::string num_field(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string svg_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

}  // namespace

void write_csv(const std::string& path, const SweepResult& result) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open output file: " + path);
    f << "# schema=1\n";
    f << "n,trial,seed,arch,scheme,metric,value_db,wall_time_ms\n";
    for (const SweepRow& row : result.rows) {
        f << row.n << ',' << row.trial << ',' << row.seed << ','
          << arch_name(row.arch) << ',' << scheme_name(row.scheme) << ','
          << row.metric << ',' << num_field(row.value_db) << ','
          << num_field(row.wall_time_ms) << '\n';
    }
    if (!f) throw ValidationError("failed writing output file: " + path);
}

void write_svg_chart(const std::string& path, const SweepResult& result) {
    // Series keyed (metric, scheme, arch) so colors stay stable across runs.
    std::map<std::tuple<std::string, Scheme, Arch>, std::vector<std::pair<double, double>>>
        series;
    for (const AggregateRow& agg : result.aggregates)
        if (std::isfinite(agg.mean_db))
            series[{agg.metric, agg.scheme, agg.arch}].emplace_back(agg.n, agg.mean_db);

    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    bool all_pd = !series.empty();
    for (const auto& [key, pts] : series) {
        if (std::get<0>(key).rfind("pd", 0) != 0) all_pd = false;
        for (const auto& [x, y] : pts) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    }
    if (xmin > xmax) {  // nothing to plot; keep a valid empty chart
        xmin = 0;
        xmax = 1;
        ymin = 0;
        ymax = 1;
    }
    if (xmax - xmin < 1e-12) {
        xmin -= 1;
        xmax += 1;
    }
    if (ymax - ymin < 1e-12) {
        ymin -= 1;
        ymax += 1;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double W = 860, H = 540;
    const double L = 70, R = 620, T = 30, B = 490;
    auto x_at = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (R - L); };
    auto y_at = [&](double y) { return B - (y - ymin) / (ymax - ymin) * (B - T); };

    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                     "#9467bd", "#8c564b", "#17becf", "#e377c2",
                                     "#bcbd22", "#7f7f7f"};
    constexpr int kPaletteSize = 10;

    std::ofstream f(path, std::ios::binary);
    if (!f) throw ValidationError("cannot open output file: " + path);
    f << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\""
      << H << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    f << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"#ffffff\"/>\n";

    // gridlines + tick labels
    f << "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double gx = L + i * (R - L) / 5.0;
        const double gy = T + i * (B - T) / 5.0;
        f << "<line x1=\"" << svg_num(gx) << "\" y1=\"" << svg_num(T) << "\" x2=\""
          << svg_num(gx) << "\" y2=\"" << svg_num(B) << "\"/>\n";
        f << "<line x1=\"" << svg_num(L) << "\" y1=\"" << svg_num(gy) << "\" x2=\""
          << svg_num(R) << "\" y2=\"" << svg_num(gy) << "\"/>\n";
    }
    f << "</g>\n";
    f << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333333\">\n";
    for (int i = 0; i <= 5; ++i) {
        const double xv = xmin + i * (xmax - xmin) / 5.0;
        const double yv = ymax - i * (ymax - ymin) / 5.0;
        f << "<text x=\"" << svg_num(L + i * (R - L) / 5.0) << "\" y=\""
          << svg_num(B + 18) << "\" text-anchor=\"middle\">" << svg_num(xv)
          << "</text>\n";
        f << "<text x=\"" << svg_num(L - 8) << "\" y=\""
          << svg_num(T + i * (B - T) / 5.0 + 4) << "\" text-anchor=\"end\">"
          << svg_num(yv) << "</text>\n";
    }
    f << "<text x=\"" << svg_num((L + R) / 2) << "\" y=\"" << svg_num(H - 10)
      << "\" text-anchor=\"middle\">N (reflecting elements)</text>\n";
    f << "<text x=\"18\" y=\"" << svg_num((T + B) / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << svg_num((T + B) / 2) << ")\">" << (all_pd ? "detection probability" : "dB")
      << "</text>\n";
    f << "</g>\n";

    // axes frame
    f << "<rect x=\"" << svg_num(L) << "\" y=\"" << svg_num(T) << "\" width=\""
      << svg_num(R - L) << "\" height=\"" << svg_num(B - T)
      << "\" fill=\"none\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

    int idx = 0;
    double legend_y = T + 12;
    for (const auto& [key, pts] : series) {
        const char* color = kPalette[idx % kPaletteSize];
        const bool dashed = std::get<2>(key) == Arch::SemiPassive;
        std::ostringstream poly;
        for (const auto& [x, y] : pts)
            poly << svg_num(x_at(x)) << "," << svg_num(y_at(y)) << " ";
        f << "<polyline fill=\"none\" stroke=\"" << color
          << "\" stroke-width=\"1.8\"";
        if (dashed) f << " stroke-dasharray=\"6 3\"";
        f << " points=\"" << poly.str() << "\"/>\n";
        for (const auto& [x, y] : pts)
            f << "<circle cx=\"" << svg_num(x_at(x)) << "\" cy=\"" << svg_num(y_at(y))
              << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        // legend entry
        f << "<line x1=\"" << svg_num(R + 16) << "\" y1=\"" << svg_num(legend_y - 4)
          << "\" x2=\"" << svg_num(R + 44) << "\" y2=\"" << svg_num(legend_y - 4)
          << "\" stroke=\"" << color << "\" stroke-width=\"1.8\"";
        if (dashed) f << " stroke-dasharray=\"6 3\"";
        f << "/>\n";
        f << "<text x=\"" << svg_num(R + 50) << "\" y=\"" << svg_num(legend_y)
          << "\" font-family=\"sans-serif\" font-size=\"11\" fill=\"#333333\">"
          << arch_name(std::get<2>(key)) << " " << scheme_name(std::get<1>(key)) << " "
          << std::get<0>(key) << "</text>\n";
        legend_y += 16;
        ++idx;
    }
    f << "</svg>\n";
    if (!f) throw ValidationError("failed writing output file: " + path);
}

// ---- figure recipes ---------------------------------------------------------

namespace {

ScenarioConfig figure_base() {
    ScenarioConfig cfg;
    // Sweeps at these sizes stay tractable with per-coordinate ascent; the
    // lifted reference backend is meant for spot checks, not 100-trial runs.
    cfg.backend = BackendChoice::CoordinateAscent;
    return cfg;
}

void rename_metric(SweepResult& res, const std::string& from, const std::string& to) {
    for (auto& row : res.rows)
        if (row.metric == from) row.metric = to;
    for (auto& agg : res.aggregates)
        if (agg.metric == from) agg.metric = to;
}

void drop_metric(SweepResult& res, const std::string& name) {
    std::erase_if(res.rows, [&](const SweepRow& r) { return r.metric == name; });
    std::erase_if(res.aggregates,
                  [&](const AggregateRow& a) { return a.metric == name; });
}

void append_result(SweepResult& into, SweepResult&& from) {
    for (auto& row : from.rows) into.rows.push_back(std::move(row));
    for (auto& agg : from.aggregates) into.aggregates.push_back(std::move(agg));
}

const char* figure_name(FigureTag tag) {
    switch (tag) {
        case FigureTag::Fig2: return "fig2";
        case FigureTag::Fig3: return "fig3";
        case FigureTag::Fig4: return "fig4";
        case FigureTag::Fig5: return "fig5";
        case FigureTag::Fig6: return "fig6";
        case FigureTag::Fig7: return "fig7";
    }
    return "fig";
}

}  // namespace

std::vector<std::string> reproduce_figure(FigureTag tag, const std::string& out_dir,
                                          int threads) {
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);

    std::vector<ScenarioConfig> configs;
    SweepResult merged;
    switch (tag) {
        case FigureTag::Fig2: {
            // Exact vs dominant-term estimation bound, joint design.
            ScenarioConfig cfg = figure_base();
            cfg.objective = SweepObjective::Crb;
            cfg.channel = ChannelKind::Rayleigh;
            cfg.trials = 20;
            cfg.n_list = {16, 24, 32, 48, 64, 96, 128};
            configs = {cfg};
            merged = run_sweep(cfg, threads);
            break;
        }
        case FigureTag::Fig3: {
            // Average SNR of the joint design under the three channel models.
            ScenarioConfig base = figure_base();
            base.objective = SweepObjective::Snr;
            base.n_list = {10, 16, 25, 40, 63, 100};
            const struct {
                ChannelKind kind;
                int trials;
                const char* metric;
            } runs[] = {{ChannelKind::Los, 1, "snr_los"},
                        {ChannelKind::Rician, 100, "snr_rician"},
                        {ChannelKind::Rayleigh, 100, "snr_rayleigh"}};
            for (const auto& spec : runs) {
                ScenarioConfig cfg = base;
                cfg.channel = spec.kind;
                cfg.trials = spec.trials;
                configs.push_back(cfg);
                SweepResult res = run_sweep(cfg, threads);
                rename_metric(res, "snr", spec.metric);
                if (merged.rows.empty())
                    merged = std::move(res);
                else
                    append_result(merged, std::move(res));
            }
            merged.config = configs.front();
            break;
        }
        case FigureTag::Fig4:
        case FigureTag::Fig5: {
            // SNR of the four schemes; deterministic geometry for Fig4,
            // fading for Fig5 (crossover region sampled densely).
            ScenarioConfig base = figure_base();
            base.objective = SweepObjective::Snr;
            if (tag == FigureTag::Fig4) {
                base.channel = ChannelKind::Los;
                base.trials = 1;
                base.n_list = {10, 20, 30, 40, 42, 44, 45, 46, 47, 48,
                               49, 50, 52, 55, 60, 70, 80, 90, 100};
            } else {
                base.channel = ChannelKind::Rayleigh;
                base.trials = 100;
                base.n_list = {10, 20, 40, 60, 70, 75, 80, 85,
                               90, 95, 100, 110, 130, 160, 200};
            }
            for (const Scheme s : {Scheme::JointBf, Scheme::ReflectiveOnly,
                                   Scheme::TransmitOnly, Scheme::NoOptimization}) {
                ScenarioConfig cfg = base;
                cfg.scheme = s;
                configs.push_back(cfg);
                SweepResult res = run_sweep(cfg, threads);
                if (merged.rows.empty())
                    merged = std::move(res);
                else
                    append_result(merged, std::move(res));
            }
            merged.config = configs.front();
            break;
        }
        case FigureTag::Fig6: {
            // Estimation bound of the joint design, Rician vs Rayleigh.
            ScenarioConfig base = figure_base();
            base.objective = SweepObjective::Crb;
            base.trials = 20;
            base.n_list = {20, 30, 45, 65, 90, 140, 200};
            const struct {
                ChannelKind kind;
                const char* metric;
            } runs[] = {{ChannelKind::Rician, "crb_rician"},
                        {ChannelKind::Rayleigh, "crb_rayleigh"}};
            for (const auto& spec : runs) {
                ScenarioConfig cfg = base;
                cfg.channel = spec.kind;
                configs.push_back(cfg);
                SweepResult res = run_sweep(cfg, threads);
                drop_metric(res, "crb_approx");
                rename_metric(res, "crb", spec.metric);
                if (merged.rows.empty())
                    merged = std::move(res);
                else
                    append_result(merged, std::move(res));
            }
            merged.config = configs.front();
            break;
        }
        case FigureTag::Fig7: {
            // Estimation bound of the four schemes around the crossover.
            ScenarioConfig base = figure_base();
            base.objective = SweepObjective::Crb;
            base.channel = ChannelKind::Rayleigh;
            base.trials = 20;
            base.n_list = {20, 40, 80, 120, 150, 160, 170, 180,
                           190, 200, 210, 220, 230, 240};
            for (const Scheme s : {Scheme::JointBf, Scheme::ReflectiveOnly,
                                   Scheme::TransmitOnly, Scheme::NoOptimization}) {
                ScenarioConfig cfg = base;
                cfg.scheme = s;
                configs.push_back(cfg);
                SweepResult res = run_sweep(cfg, threads);
                if (merged.rows.empty())
                    merged = std::move(res);
                else
                    append_result(merged, std::move(res));
            }
            merged.config = configs.front();
            break;
        }
    }
    std::sort(merged.rows.begin(), merged.rows.end(), row_before);

    const std::string stem =
        (std::filesystem::path(out_dir) / figure_name(tag)).string();
    const std::string csv_path = stem + ".csv";
    const std::string svg_path = stem + ".svg";
    const std::string meta_path = stem + "_meta.json";
    write_csv(csv_path, merged);
    write_svg_chart(svg_path, merged);

    json meta;
    meta["figure"] = figure_name(tag);
    meta["master_seed"] = configs.front().master_seed;
    meta["configs"] = json::array();
    for (const auto& cfg : configs) meta["configs"].push_back(json::parse(config_to_json(cfg)));
    std::ofstream mf(meta_path, std::ios::binary);
    if (!mf) throw ValidationError("cannot open output file: " + meta_path);
    mf << meta.dump(2) << '\n';

    return {csv_path, svg_path, meta_path};
}

// ---- bound sandwich draws ---------------------------------------------------

namespace {

MatC draw_cscg_mat(Crng& rng, int rows, int cols) {
    MatC m(rows, cols);
    for (int c = 0; c < cols; ++c)
        for (int r = 0; r < rows; ++r) m(r, c) = rng.cgaussian();
    return m;
}

MatC lift_by(const MatC& inner, const VecC& s) {
    return s.conjugate().asDiagonal() * inner * s.asDiagonal();
}

double quad_form(const MatC& m, const VecC& v) { return std::real(v.dot(m * v)); }

double lmax_of(const MatC& m) {
    Eigen::SelfAdjointEigenSolver<MatC> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
}

/// The four lifted quadratic forms entering the pattern-gain functionals,
/// normalized to unit-variance links and broadside steering. The derivative
/// weighting uses the raw centered element indices: constant prefactors of
/// the true steering derivative scale every sandwich member equally.
struct GainForms {
    MatC r2, r1, qdt, qdr;
    int mr = 0;

    double value(BoundQuantity q, const VecC& v) const {
        const double c4 = mr * (static_cast<double>(mr) * mr - 1.0) / 3.0;
        switch (q) {
            case BoundQuantity::Gamma1: return quad_form(r1, v) * quad_form(r2, v);
            case BoundQuantity::Gamma2: return quad_form(r2, v);
            case BoundQuantity::Gamma3:
                return quad_form(r2, v) * quad_form(qdr, v) +
                       quad_form(r1, v) * quad_form(qdt, v);
            case BoundQuantity::Gamma4:
                return quad_form(r2, v) * c4 + mr * quad_form(qdt, v);
        }
        return 0.0;
    }

    double relaxation(BoundQuantity q, int n) const {
        const double c4 = mr * (static_cast<double>(mr) * mr - 1.0) / 3.0;
        const double nn = n;
        switch (q) {
            case BoundQuantity::Gamma1: return nn * nn * lmax_of(r1) * lmax_of(r2);
            case BoundQuantity::Gamma2: return nn * lmax_of(r2);
            case BoundQuantity::Gamma3:
                return nn * nn *
                       (lmax_of(r2) * lmax_of(qdr) + lmax_of(r1) * lmax_of(qdt));
            case BoundQuantity::Gamma4:
                return nn * (lmax_of(r2) * c4 + mr * lmax_of(qdt));
        }
        return 0.0;
    }
};

/// Per-coordinate ascent of a gain functional over unit-modulus patterns on
/// a 64-point phase grid, started from (and never worse than) v.
VecC ascend_functional(const GainForms& forms, BoundQuantity q, VecC v) {
    const int n = static_cast<int>(v.size());
    const MatC* mats[] = {&forms.r2, &forms.r1, &forms.qdt, &forms.qdr};
    constexpr int kMats = 4;
    VecC w[kMats];
    double qv[kMats];
    for (int m = 0; m < kMats; ++m) {
        w[m] = *mats[m] * v;
        qv[m] = std::real(v.dot(w[m]));
    }
    const double c4 = forms.mr * (static_cast<double>(forms.mr) * forms.mr - 1.0) / 3.0;
    auto combined = [&](const double* qs) {
        switch (q) {
            case BoundQuantity::Gamma1: return qs[1] * qs[0];
            case BoundQuantity::Gamma2: return qs[0];
            case BoundQuantity::Gamma3: return qs[0] * qs[3] + qs[1] * qs[2];
            case BoundQuantity::Gamma4: return qs[0] * c4 + forms.mr * qs[2];
        }
        return 0.0;
    };

    constexpr int kGrid = 64;
    cd grid[kGrid];
    for (int g = 0; g < kGrid; ++g)
        grid[g] = std::polar(1.0, 2.0 * M_PI * g / kGrid);

    double current = combined(qv);
    for (int sweep = 0; sweep < 100; ++sweep) {
        const double sweep_start = current;
        for (int k = 0; k < n; ++k) {
            // hole decompositions: q_m(z) = base_m + 2 Re(conj(z) c_m)
            double base[kMats];
            cd coef[kMats];
            for (int m = 0; m < kMats; ++m) {
                const double dkk = std::real((*mats[m])(k, k));
                base[m] = qv[m] - 2.0 * std::real(std::conj(v(k)) * w[m](k)) +
                          2.0 * dkk;
                coef[m] = w[m](k) - dkk * v(k);
            }
            cd best_z = v(k);
            double best_val = current;
            for (int g = 0; g < kGrid; ++g) {
                double qs[kMats];
                for (int m = 0; m < kMats; ++m)
                    qs[m] = base[m] + 2.0 * std::real(std::conj(grid[g]) * coef[m]);
                const double val = combined(qs);
                if (val > best_val) {
                    best_val = val;
                    best_z = grid[g];
                }
            }
            if (best_z != v(k)) {
                const cd dz = best_z - v(k);
                for (int m = 0; m < kMats; ++m) {
                    w[m] += mats[m]->col(k) * dz;
                    qv[m] = base[m] + 2.0 * std::real(std::conj(best_z) * coef[m]);
                }
                v(k) = best_z;
                current = best_val;
            }
        }
        if (current - sweep_start <= 1e-9 * std::max(1.0, std::abs(sweep_start)))
            break;
        // refresh cached products so rounding drift cannot accumulate
        for (int m = 0; m < kMats; ++m) {
            w[m] = *mats[m] * v;
            qv[m] = std::real(v.dot(w[m]));
        }
        current = combined(qv);
    }
    return v;
}

}  // namespace

SandwichDraw sandwich_draw(BoundQuantity quantity, int n, int m_t, int m_r,
                           std::uint64_t seed) {
    if (n < 1 || m_t < 1 || m_r < 1)
        throw ValidationError("sandwich_draw arguments must be >= 1");
    ArrayGeometry geom;
    geom.m_t = m_t;
    geom.m_r = m_r;
    geom.n = n;
    geom.validate();

    // Unit-variance links with the return link sharing the forward link's
    // scattering part, mirroring the fading construction of gen_channel.
    Crng rng(derive_seed(seed, n, 0, 29));
    const int kmin = std::min(m_t, m_r);
    const MatC common = draw_cscg_mat(rng, n, kmin);
    MatC gt(n, m_t), gr(m_r, n);
    gt.leftCols(kmin) = common;
    if (m_t > kmin) gt.rightCols(m_t - kmin) = draw_cscg_mat(rng, n, m_t - kmin);
    gr.topRows(kmin) = common.transpose();
    if (m_r > kmin) gr.bottomRows(m_r - kmin) = draw_cscg_mat(rng, m_r - kmin, n);

    const VecC a = steering_irs(0.0, n, geom);
    const VecC ramp = centered_indices(n).cast<cd>().cwiseProduct(a);
    const MatC inner_t = gt.conjugate() * gt.transpose();
    const MatC inner_r = gr.adjoint() * gr;

    GainForms forms;
    forms.r2 = lift_by(inner_t, a);
    forms.r1 = lift_by(inner_r, a);
    forms.qdt = lift_by(inner_t, ramp);
    forms.qdr = lift_by(inner_r, ramp);
    forms.mr = m_r;

    AlignKind align = AlignKind::AlignColumn;
    if (quantity == BoundQuantity::Gamma3) align = AlignKind::SplitAlign;
    if (quantity == BoundQuantity::Gamma4) align = AlignKind::DerivativeAlign;
    const VecC v0 = appendix_aligned_pattern(align, gt, 0, 0.0, geom).v;

    SandwichDraw out;
    out.aligned = forms.value(quantity, v0);
    out.optimized = forms.value(quantity, ascend_functional(forms, quantity, v0));
    out.relaxed = forms.relaxation(quantity, n);
    return out;
}

// ---- CLI --------------------------------------------------------------------

namespace {

void print_aggregates(const SweepResult& result) {
    std::printf("%6s  %-14s %-16s %-14s %12s %10s %7s\n", "n", "arch", "scheme",
                "metric", "mean", "std", "trials");
    for (const AggregateRow& agg : result.aggregates) {
        std::printf("%6d  %-14s %-16s %-14s %12.4f %10.4f %7d\n", agg.n,
                    arch_name(agg.arch), scheme_name(agg.scheme), agg.metric.c_str(),
                    agg.mean_db, agg.std_db, agg.trials);
    }
}

int run_sweep_command(const std::string& config_path, const std::string& out_dir,
                      SweepObjective objective, const std::string& default_stem,
                      int trials, long long seed, const std::string& backend_str,
                      bool timing, int threads) {
    ScenarioConfig cfg = config_path.empty() ? ScenarioConfig{} : load_config(config_path);
    cfg.objective = objective;
    if (trials > 0) cfg.trials = trials;
    if (seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(seed);
    if (!backend_str.empty()) cfg.backend = backend_from(backend_str);
    if (timing) cfg.record_timing = true;

    const SweepResult result = run_sweep(cfg, threads);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    const std::string stem = (std::filesystem::path(out_dir) / default_stem).string();
    const std::string csv_path = cfg.out_csv.empty() ? stem + ".csv" : cfg.out_csv;
    const std::string svg_path = cfg.out_svg.empty() ? stem + ".svg" : cfg.out_svg;
    write_csv(csv_path, result);
    write_svg_chart(svg_path, result);

    print_aggregates(result);
    std::printf("wrote %s\nwrote %s\n", csv_path.c_str(), svg_path.c_str());
    return 0;
}

int run_bounds_check(const std::string& config_path, int draws, long long seed) {
    int n = 32, m_t = 4, m_r = 4;
    if (!config_path.empty()) {
        const ScenarioConfig cfg = load_config(config_path);
        m_t = cfg.m_t;
        m_r = cfg.m_r;
        if (!cfg.n_list.empty()) n = cfg.n_list.front();
    }
    const std::uint64_t master = seed >= 0 ? static_cast<std::uint64_t>(seed) : 1;
    if (draws < 2) throw ValidationError("bounds-check needs at least 2 draws");

    std::printf("bound sandwich, %d draws, n=%d, m_t=%d, m_r=%d\n", draws, n, m_t,
                m_r);
    std::printf("%-8s %10s %14s %14s %14s %10s\n", "quantity", "violations",
                "mean aligned", "closed form", "ratio", "|z|");
    int total_violations = 0;
    const char* names[] = {"gamma1", "gamma2", "gamma3", "gamma4"};
    const BoundQuantity quantities[] = {BoundQuantity::Gamma1, BoundQuantity::Gamma2,
                                        BoundQuantity::Gamma3, BoundQuantity::Gamma4};
    for (int qi = 0; qi < 4; ++qi) {
        int violations = 0;
        double sum = 0.0, sumsq = 0.0;
        for (int d = 0; d < draws; ++d) {
            const SandwichDraw s = sandwich_draw(quantities[qi], n, m_t, m_r,
                                                 master + static_cast<std::uint64_t>(d));
            const double scale = std::max(1.0, std::abs(s.relaxed));
            if (s.aligned > s.optimized + 1e-9 * scale ||
                s.optimized > s.relaxed + 1e-9 * scale)
                ++violations;
            sum += s.aligned;
            sumsq += s.aligned * s.aligned;
        }
        const double mean = sum / draws;
        const double var = std::max(0.0, sumsq / draws - mean * mean);
        const double se = std::sqrt(var / draws);
        const double closed = gamma_bounds(quantities[qi], n, m_t, m_r).lower;
        const double z = se > 0 ? (mean - closed) / se : 0.0;
        std::printf("%-8s %10d %14.6g %14.6g %14.6f %10.2f\n", names[qi], violations,
                    mean, closed, mean / closed, std::abs(z));
        total_violations += violations;
    }
    if (total_violations > 0) {
        std::fprintf(stderr, "bound ordering violated on %d draw(s)\n",
                     total_violations);
        return 1;
    }
    std::printf("ordering holds on every draw\n");
    return 0;
}

int run_thresholds(const std::string& config_path) {
    const ScenarioConfig cfg =
        config_path.empty() ? ScenarioConfig{} : load_config(config_path);
    const ScenarioGeometry scen =
        geometry_from_positions(cfg.bs_pos, cfg.irs_pos, cfg.target_pos);
    const double l = path_loss(scen.d_bi, cfg.path_loss, Link::BsIrs);
    const double t_los = crossover_threshold(ThresholdKind::LosSnr, l, cfg.m_t, cfg.m_r);
    const double t_ray =
        crossover_threshold(ThresholdKind::RayleighSnr, l, cfg.m_t, cfg.m_r);
    std::printf("forward path gain                      : %.6g\n", l);
    std::printf("LoS SNR crossover                      : N > %.1f (first integer %d)\n",
                t_los, static_cast<int>(std::floor(t_los)) + 1);
    std::printf("fading SNR crossover (sufficient bound): N > %.1f (first integer %d)\n",
                t_ray, static_cast<int>(std::floor(t_ray)) + 1);
    return 0;
}

int run_selftest() {
    int failures = 0;
    auto check = [&](bool ok, const char* what) {
        std::printf("[%s] %s\n", ok ? "ok" : "FAIL", what);
        if (!ok) ++failures;
    };

    ArrayGeometry geom;
    geom.n = 8;
    const VecC a = steering_irs(0.3, 8, geom);
    check(std::abs(a.squaredNorm() - 8.0) < 1e-12, "steering vector norm");

    PathLossModel model;
    check(std::abs(path_loss(1.0, model, Link::BsIrs) - 1e-3) < 1e-15,
          "reference-distance path loss");

    bool ordered = true;
    for (int n = 1; n <= 64; n *= 2)
        for (int m = 1; m <= 4; m *= 2)
            for (const BoundQuantity q : {BoundQuantity::Gamma1, BoundQuantity::Gamma2,
                                          BoundQuantity::Gamma3, BoundQuantity::Gamma4}) {
                const BoundPair b = gamma_bounds(q, n, m, m);
                if (!(b.lower >= 0 && b.lower <= b.upper)) ordered = false;
            }
    check(ordered, "closed-form bounds ordered");

    const ScenarioConfig defaults;
    const ScenarioGeometry scen =
        geometry_from_positions(defaults.bs_pos, defaults.irs_pos, defaults.target_pos);
    const double l = path_loss(scen.d_bi, defaults.path_loss, Link::BsIrs);
    const double t_los = crossover_threshold(ThresholdKind::LosSnr, l, 4, 4);
    check(t_los > 46.0 && t_los < 47.0, "LoS crossover threshold in (46, 47)");

    check(derive_seed(1, 2, 3, 4) == derive_seed(1, 2, 3, 4) &&
              derive_seed(1, 2, 3, 4) != derive_seed(1, 2, 3, 5),
          "seed derivation deterministic and stream-separated");

    check(std::abs(marcum_q1(0.0, 1.0) - std::exp(-0.5)) < 1e-10,
          "Marcum Q at zero noncentrality");

    // One LoS cell must land exactly on the closed-form optimum.
    {
        ScenarioConfig cfg;
        cfg.channel = ChannelKind::Los;
        cfg.trials = 1;
        cfg.n_list = {8};
        cfg.backend = BackendChoice::CoordinateAscent;
        const SweepResult res = run_sweep(cfg, 1);
        const double p0 = dbm_to_watt(cfg.power_budget_dbm);
        const double sigma2 = dbm_to_watt(cfg.sigma2_dbm);
        const double l_it = path_loss(scen.d_it, cfg.path_loss, Link::IrsTarget);
        const double alpha2 = cfg.rcs * l_it * l_it;
        bool hit = false;
        for (const SweepRow& row : res.rows) {
            if (row.arch != Arch::FullyPassive || !row.ok) continue;
            const double want =
                to_db(p0 * alpha2 * l * l * cfg.m_t * cfg.m_r * 4096.0 / sigma2);
            hit = std::abs(row.value_db - want) < 1e-6;
        }
        check(hit, "deterministic-geometry cell matches the closed form");
    }

    // Byte-identical reruns.
    {
        ScenarioConfig cfg;
        cfg.trials = 2;
        cfg.n_list = {4, 6};
        cfg.backend = BackendChoice::CoordinateAscent;
        const SweepResult r1 = run_sweep(cfg, 1);
        const SweepResult r2 = run_sweep(cfg, 2);
        bool same = r1.rows.size() == r2.rows.size();
        for (std::size_t i = 0; same && i < r1.rows.size(); ++i)
            same = r1.rows[i].value_db == r2.rows[i].value_db &&
                   r1.rows[i].seed == r2.rows[i].seed;
        check(same, "sweep independent of thread count");
    }

    if (failures == 0) std::printf("selftest: ok\n");
    return failures == 0 ? 0 : 1;
}

FigureTag figure_from(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    if (s == "fig2" || s == "2") return FigureTag::Fig2;
    if (s == "fig3" || s == "3") return FigureTag::Fig3;
    if (s == "fig4" || s == "4") return FigureTag::Fig4;
    if (s == "fig5" || s == "5") return FigureTag::Fig5;
    if (s == "fig6" || s == "6") return FigureTag::Fig6;
    if (s == "fig7" || s == "7") return FigureTag::Fig7;
    throw ValidationError("unknown figure tag: " + s + " (expected fig2..fig7)");
}

}  // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"IRS-enabled NLoS sensing sweeps: fully-passive vs semi-passive"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".", backend_str, fig_str;
    int trials = -1, threads = 0;
    long long seed = -1;
    bool timing = false;

    auto add_common = [&](CLI::App* sc, bool sweep_flags) {
        sc->add_option("--config", config_path, "JSON config path");
        sc->add_option("--out", out_dir, "output directory");
        sc->add_option("--threads", threads, "worker threads (0 = auto)");
        if (sweep_flags) {
            sc->add_option("--trials", trials, "Monte Carlo trials per sweep point");
            sc->add_option("--seed", seed, "master seed");
            sc->add_option("--backend", backend_str, "auto | sdr_sca | coordinate_ascent")
                ->check(CLI::IsMember({"auto", "sdr_sca", "coordinate_ascent"}));
            sc->add_flag("--timing", timing,
                         "record wall_time_ms (makes CSV non-reproducible)");
        }
    };

    CLI::App* snr_cmd = app.add_subcommand("snr-sweep", "echo-SNR sweep over N");
    add_common(snr_cmd, true);
    CLI::App* crb_cmd =
        app.add_subcommand("crb-sweep", "angle-estimation-bound sweep over N");
    add_common(crb_cmd, true);
    CLI::App* det_cmd =
        app.add_subcommand("detect-curve", "detection-probability sweep over N");
    add_common(det_cmd, true);
    CLI::App* bounds_cmd = app.add_subcommand(
        "bounds-check", "Monte Carlo sandwich check of the closed-form bounds");
    bounds_cmd->add_option("--config", config_path, "JSON config path");
    bounds_cmd->add_option("--trials", trials, "number of draws (default 200)");
    bounds_cmd->add_option("--seed", seed, "master seed");
    CLI::App* thr_cmd =
        app.add_subcommand("thresholds", "print the architecture crossover thresholds");
    thr_cmd->add_option("--config", config_path, "JSON config path");
    CLI::App* rep_cmd =
        app.add_subcommand("reproduce", "rebuild one preset figure (CSV + SVG)");
    rep_cmd->add_option("--fig", fig_str, "fig2 | fig3 | fig4 | fig5 | fig6 | fig7")
        ->required();
    rep_cmd->add_option("--out", out_dir, "output directory");
    rep_cmd->add_option("--threads", threads, "worker threads (0 = auto)");
    CLI::App* self_cmd = app.add_subcommand("selftest", "quick internal consistency run");
    (void)self_cmd;

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (snr_cmd->parsed())
            return run_sweep_command(config_path, out_dir, SweepObjective::Snr,
                                     "snr_sweep", trials, seed, backend_str, timing,
                                     threads);
        if (crb_cmd->parsed())
            return run_sweep_command(config_path, out_dir, SweepObjective::Crb,
                                     "crb_sweep", trials, seed, backend_str, timing,
                                     threads);
        if (det_cmd->parsed())
            return run_sweep_command(config_path, out_dir, SweepObjective::Detection,
                                     "detect_curve", trials, seed, backend_str, timing,
                                     threads);
        if (bounds_cmd->parsed())
            return run_bounds_check(config_path, trials > 0 ? trials : 200, seed);
        if (thr_cmd->parsed()) return run_thresholds(config_path);
        if (rep_cmd->parsed()) {
            const auto paths = reproduce_figure(figure_from(fig_str), out_dir, threads);
            for (const auto& p : paths) std::printf("wrote %s\n", p.c_str());
            return 0;
        }
        return run_selftest();
    } catch (const ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const NumericalError& e) {
        std::fprintf(stderr, "numerical error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace irs
