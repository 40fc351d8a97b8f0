#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "irssense/experiments.hpp"

using namespace irs;

namespace {

ScenarioConfig small_config() {
    ScenarioConfig cfg;
    cfg.n_list = {4, 6};
    cfg.trials = 2;
    cfg.master_seed = 7;
    cfg.backend = BackendChoice::CoordinateAscent;
    cfg.objective = SweepObjective::Snr;
    return cfg;
}

std::filesystem::path test_dir() {
    const auto dir = std::filesystem::temp_directory_path() / "irssense_exp_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int run_cli(const std::vector<std::string>& args) {
    std::vector<std::string> full{"irs-sense"};
    full.insert(full.end(), args.begin(), args.end());
    std::vector<char*> argv;
    argv.reserve(full.size());
    for (auto& s : full) argv.push_back(s.data());
    return cli_main(static_cast<int>(argv.size()), argv.data());
}

const SweepRow* find_row(const SweepResult& res, int n, int trial, Arch arch,
                         const std::string& metric) {
    for (const auto& r : res.rows)
        if (r.n == n && r.trial == trial && r.arch == arch && r.metric == metric)
            return &r;
    return nullptr;
}

const AggregateRow* find_agg(const SweepResult& res, int n, Arch arch,
                             const std::string& metric) {
    for (const auto& a : res.aggregates)
        if (a.n == n && a.arch == arch && a.metric == metric) return &a;
    return nullptr;
}

}  // namespace

TEST_CASE("config parsing: defaults, overrides, unknown keys") {
    const ScenarioConfig def = parse_config_json("{}");
    CHECK(def.m_t == 4);
    CHECK(def.m_r == 4);
    CHECK(def.n_list == std::vector<int>{10, 16, 25, 40, 63, 100});
    CHECK(def.channel == ChannelKind::Rayleigh);
    CHECK(def.trials == 100);
    CHECK(def.power_budget_dbm == 30.0);
    CHECK(def.sigma2_dbm == -90.0);
    CHECK(def.t_symbols == 256);
    CHECK(def.p_fa == 1e-2);
    CHECK(def.master_seed == 1);
    CHECK(def.scheme == Scheme::JointBf);
    CHECK(def.backend == BackendChoice::Auto);
    CHECK(!def.record_timing);

    const ScenarioConfig cfg = parse_config_json(R"({
        "positions": {"bs": [0, 0], "irs": [2, 1], "target": [2, -4]},
        "array": {"m_t": 2, "m_r": 8, "n_list": [8, 16]},
        "channel": {"kind": "rician", "rician_k": 2.5},
        "scheme": "reflective_only",
        "objective": "crb",
        "backend": "coordinate_ascent",
        "trials": 5,
        "master_seed": 99
    })");
    CHECK(cfg.irs_pos.x == 2.0);
    CHECK(cfg.target_pos.y == -4.0);
    CHECK(cfg.m_t == 2);
    CHECK(cfg.m_r == 8);
    CHECK(cfg.n_list == std::vector<int>{8, 16});
    CHECK(cfg.channel == ChannelKind::Rician);
    CHECK(cfg.rician_k == 2.5);
    CHECK(cfg.scheme == Scheme::ReflectiveOnly);
    CHECK(cfg.objective == SweepObjective::Crb);
    CHECK(cfg.backend == BackendChoice::CoordinateAscent);
    CHECK(cfg.trials == 5);
    CHECK(cfg.master_seed == 99);

    CHECK_THROWS_AS(parse_config_json(R"({"bogus": 1})"), ValidationError);
    CHECK_THROWS_AS(parse_config_json(R"({"positions": {"bs": [0,0], "bogus": [1,1]}})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config_json(R"({"channel": {"kind": "maxwell"}})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config_json("not json"), ValidationError);
    CHECK_THROWS_AS(parse_config_json(R"({"trials": 0})"), ValidationError);
    CHECK_THROWS_AS(parse_config_json(R"({"array": {"n_list": [8, 8]}})"),
                    ValidationError);
    CHECK_THROWS_AS(parse_config_json(R"({"p_fa": 1.5})"), ValidationError);
}

TEST_CASE("config survives a json round trip") {
    ScenarioConfig cfg = small_config();
    cfg.channel = ChannelKind::Rician;
    cfg.rician_k = 3.0;
    cfg.scheme = Scheme::TransmitOnly;
    cfg.objective = SweepObjective::Detection;
    cfg.irs_pos = Vec2{1.5, 2.0};
    cfg.record_timing = true;
    const ScenarioConfig back = parse_config_json(config_to_json(cfg));
    CHECK(back.n_list == cfg.n_list);
    CHECK(back.trials == cfg.trials);
    CHECK(back.master_seed == cfg.master_seed);
    CHECK(back.channel == cfg.channel);
    CHECK(back.rician_k == cfg.rician_k);
    CHECK(back.scheme == cfg.scheme);
    CHECK(back.objective == cfg.objective);
    CHECK(back.backend == cfg.backend);
    CHECK(back.irs_pos.x == cfg.irs_pos.x);
    CHECK(back.irs_pos.y == cfg.irs_pos.y);
    CHECK(back.record_timing == cfg.record_timing);
}

TEST_CASE("sweeps are reproducible and thread-count invariant") {
    const ScenarioConfig cfg = small_config();
    const SweepResult a = run_sweep(cfg, 1);
    const SweepResult b = run_sweep(cfg, 2);
    const SweepResult c = run_sweep(cfg, 1);

    REQUIRE(a.rows.size() == 2 * 2 * 2);  // two sizes, two trials, two archs
    REQUIRE(a.rows.size() == b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].n == b.rows[i].n);
        CHECK(a.rows[i].trial == b.rows[i].trial);
        CHECK(a.rows[i].seed == b.rows[i].seed);
        CHECK(a.rows[i].arch == b.rows[i].arch);
        CHECK(a.rows[i].metric == b.rows[i].metric);
        CHECK(a.rows[i].value_db == b.rows[i].value_db);
        CHECK(a.rows[i].value_db == c.rows[i].value_db);
        CHECK(a.rows[i].ok);
        CHECK(a.rows[i].wall_time_ms == 0.0);  // timing off by default
    }
    // sorted by (n, trial, arch) within the single scheme/metric
    for (std::size_t i = 1; i < a.rows.size(); ++i) {
        const auto key = [](const SweepRow& r) {
            return std::tuple<int, int, int>{r.n, r.trial, static_cast<int>(r.arch)};
        };
        CHECK(key(a.rows[i - 1]) < key(a.rows[i]));
    }
}

TEST_CASE("aggregates average linear values and deviate in db") {
    const ScenarioConfig cfg = small_config();
    const SweepResult res = run_sweep(cfg, 1);
    for (const int n : cfg.n_list) {
        for (const Arch arch : {Arch::FullyPassive, Arch::SemiPassive}) {
            const AggregateRow* agg = find_agg(res, n, arch, "snr");
            REQUIRE(agg != nullptr);
            CHECK(agg->trials == 2);
            double lin = 0.0, mean_db = 0.0;
            for (int t = 0; t < 2; ++t) {
                const SweepRow* r = find_row(res, n, t, arch, "snr");
                REQUIRE(r != nullptr);
                lin += std::pow(10.0, r->value_db / 10.0) / 2.0;
                mean_db += r->value_db / 2.0;
            }
            CHECK(std::abs(agg->mean_db - 10.0 * std::log10(lin)) <= 1e-12);
            double var = 0.0;
            for (int t = 0; t < 2; ++t)
                var += std::pow(find_row(res, n, t, arch, "snr")->value_db - mean_db, 2);
            CHECK(std::abs(agg->std_db - std::sqrt(var / 1.0)) <= 1e-12);
        }
    }
}

TEST_CASE("detection sweeps store plain probabilities") {
    ScenarioConfig cfg = small_config();
    cfg.objective = SweepObjective::Detection;
    const SweepResult res = run_sweep(cfg, 1);
    REQUIRE(!res.rows.empty());
    for (const auto& r : res.rows) {
        CHECK(r.metric == "pd");
        CHECK(r.value_db >= 0.0);
        CHECK(r.value_db <= 1.0);
    }
    for (const auto& a : res.aggregates) {
        CHECK(a.mean_db >= 0.0);
        CHECK(a.mean_db <= 1.0);
    }
}

TEST_CASE("per-row failures are recorded without aborting the sweep") {
    ScenarioConfig cfg = small_config();
    cfg.channel = ChannelKind::Los;
    cfg.objective = SweepObjective::Crb;
    cfg.n_list = {8};
    cfg.trials = 1;
    const SweepResult res = run_sweep(cfg, 1);
    REQUIRE(res.rows.size() == 4);  // two archs x (crb, crb_approx)
    for (const auto& r : res.rows) {
        if (r.arch == Arch::FullyPassive) {
            CHECK(!r.ok);
            CHECK(std::isnan(r.value_db));
            CHECK(!r.note.empty());
        } else {
            CHECK(r.ok);
            CHECK(std::isfinite(r.value_db));
        }
    }
    const AggregateRow* fully = find_agg(res, 8, Arch::FullyPassive, "crb");
    REQUIRE(fully != nullptr);
    CHECK(fully->trials == 0);
    CHECK(std::isnan(fully->mean_db));
    const AggregateRow* semi = find_agg(res, 8, Arch::SemiPassive, "crb");
    REQUIRE(semi != nullptr);
    CHECK(semi->trials == 1);
    CHECK(std::isfinite(semi->mean_db));
}

TEST_CASE("csv output carries the schema line and exact header") {
    const auto path = test_dir() / "unit_sweep.csv";
    const SweepResult res = run_sweep(small_config(), 1);
    write_csv(path.string(), res);
    const std::string text = slurp(path);
    std::istringstream lines(text);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line == "# schema=1");
    REQUIRE(std::getline(lines, line));
    CHECK(line == "n,trial,seed,arch,scheme,metric,value_db,wall_time_ms");
    std::size_t data_lines = 0;
    while (std::getline(lines, line))
        if (!line.empty()) ++data_lines;
    CHECK(data_lines == res.rows.size());
    CHECK(text.find("fully_passive") != std::string::npos);
    CHECK(text.find("semi_passive") != std::string::npos);
    CHECK(text.find("joint_bf") != std::string::npos);

    // byte-identical on a rerun
    const auto path2 = test_dir() / "unit_sweep_rerun.csv";
    write_csv(path2.string(), run_sweep(small_config(), 2));
    CHECK(slurp(path2) == text);
}

TEST_CASE("svg chart is emitted with polyline series") {
    const auto path = test_dir() / "unit_sweep.svg";
    write_svg_chart(path.string(), run_sweep(small_config(), 1));
    const std::string text = slurp(path);
    CHECK(text.find("<svg") != std::string::npos);
    CHECK(text.find("</svg>") != std::string::npos);
    CHECK(text.find("<polyline") != std::string::npos);
    CHECK(text.find("N (reflecting elements)") != std::string::npos);
}

TEST_CASE("backend resolution follows the size rule") {
    CHECK(resolve_backend(BackendChoice::Auto, 64) == Backend::SdrSca);
    CHECK(resolve_backend(BackendChoice::Auto, 65) == Backend::CoordinateAscent);
    CHECK(resolve_backend(BackendChoice::Auto, 8) == Backend::SdrSca);
    CHECK(resolve_backend(BackendChoice::SdrSca, 200) == Backend::SdrSca);
    CHECK(resolve_backend(BackendChoice::CoordinateAscent, 8) ==
          Backend::CoordinateAscent);
}

TEST_CASE("thread resolution: flag, environment, fallback") {
    const char* saved = std::getenv("IRS_SENSE_THREADS");
    const std::string saved_copy = saved ? saved : "";

    CHECK(resolve_threads(3) == 3);
    setenv("IRS_SENSE_THREADS", "5", 1);
    CHECK(resolve_threads(0) == 5);
    CHECK(resolve_threads(2) == 2);  // flag wins over the environment
    setenv("IRS_SENSE_THREADS", "zero", 1);
    CHECK_THROWS_AS(resolve_threads(0), ValidationError);
    setenv("IRS_SENSE_THREADS", "-4", 1);
    CHECK_THROWS_AS(resolve_threads(0), ValidationError);
    unsetenv("IRS_SENSE_THREADS");
    CHECK(resolve_threads(0) >= 1);
    CHECK(resolve_threads(-7) >= 1);

    if (saved) setenv("IRS_SENSE_THREADS", saved_copy.c_str(), 1);
}

TEST_CASE("sandwich draws stay ordered and reproducible") {
    for (const BoundQuantity q : {BoundQuantity::Gamma1, BoundQuantity::Gamma2,
                                  BoundQuantity::Gamma3, BoundQuantity::Gamma4}) {
        for (const std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
            const SandwichDraw d = sandwich_draw(q, 16, 4, 4, seed);
            CHECK(d.aligned > 0.0);
            CHECK(d.aligned <= d.optimized * (1.0 + 1e-9));
            CHECK(d.optimized <= d.relaxed * (1.0 + 1e-9));
            const SandwichDraw again = sandwich_draw(q, 16, 4, 4, seed);
            CHECK(d.aligned == again.aligned);
            CHECK(d.optimized == again.optimized);
            CHECK(d.relaxed == again.relaxed);
        }
        const SandwichDraw other = sandwich_draw(q, 16, 4, 4, 99);
        CHECK(other.aligned != sandwich_draw(q, 16, 4, 4, 1).aligned);
    }
}

TEST_CASE("cli subcommands: sweeps, thresholds, bounds, errors") {
    const auto dir = test_dir() / "cli";
    std::filesystem::remove_all(dir);
    const auto cfg_path = test_dir() / "cli_config.json";
    {
        std::ofstream f(cfg_path);
        f << R"({"array": {"n_list": [4, 6]}, "trials": 2,
                 "backend": "coordinate_ascent"})";
    }

    CHECK(run_cli({"snr-sweep", "--config", cfg_path.string(), "--out", dir.string(),
                   "--trials", "1", "--seed", "3"}) == 0);
    CHECK(std::filesystem::exists(dir / "snr_sweep.csv"));
    CHECK(std::filesystem::exists(dir / "snr_sweep.svg"));
    const std::string csv = slurp(dir / "snr_sweep.csv");
    CHECK(csv.rfind("# schema=1", 0) == 0);

    CHECK(run_cli({"detect-curve", "--config", cfg_path.string(), "--out",
                   dir.string(), "--trials", "1"}) == 0);
    CHECK(std::filesystem::exists(dir / "detect_curve.csv"));

    CHECK(run_cli({"thresholds"}) == 0);
    CHECK(run_cli({"bounds-check", "--trials", "25", "--seed", "2"}) == 0);

    CHECK(run_cli({"--help"}) == 0);
    CHECK(run_cli({"nope"}) != 0);
    CHECK(run_cli({}) != 0);
    CHECK(run_cli({"reproduce", "--fig", "fig9"}) == 1);
    CHECK(run_cli({"snr-sweep", "--config", "/definitely/not/a/file.json"}) == 1);
    CHECK(run_cli({"snr-sweep", "--backend", "bogus"}) != 0);
}

TEST_CASE("cli selftest passes") { CHECK(run_cli({"selftest"}) == 0); }
