#pragma once
/// Scenario configuration, seeded parallel Monte Carlo sweeps, figure
/// recipes, CSV/SVG emission, and the command-line front end.
#include <cstdint>
#include <string>
#include <vector>

#include "irssense/analysis.hpp"
#include "irssense/beamforming.hpp"
#include "irssense/channel.hpp"
#include "irssense/types.hpp"

namespace irs {

/// JointBf optimizes both the transmit covariance and the reflection
/// pattern. The benchmarks fix one side: ReflectiveOnly keeps an isotropic
/// covariance, TransmitOnly keeps random reflection phases, NoOptimization
/// fixes both.
enum class Scheme { JointBf, ReflectiveOnly, TransmitOnly, NoOptimization };

enum class SweepObjective { Snr, Crb, Detection };

/// Auto resolves per sweep point: CoordinateAscent for n > 64, SdrSca as
/// the reference backend at or below 64.
enum class BackendChoice { Auto, SdrSca, CoordinateAscent };

struct ScenarioConfig {
    Vec2 bs_pos{0.0, 0.0};
    Vec2 irs_pos{1.0, 1.0};
    Vec2 target_pos{1.0, -5.0};
    int m_t = 4;
    int m_r = 4;
    std::vector<int> n_list{10, 16, 25, 40, 63, 100};
    ChannelKind channel = ChannelKind::Rayleigh;
    double rician_k = 1.0;
    PathLossModel path_loss{};
    double rcs = 1.0;
    double power_budget_dbm = 30.0;
    double sigma2_dbm = -90.0;
    int t_symbols = 256;
    double p_fa = 1e-2;
    int trials = 100;
    std::uint64_t master_seed = 1;
    Scheme scheme = Scheme::JointBf;
    SweepObjective objective = SweepObjective::Snr;
    BackendChoice backend = BackendChoice::Auto;
    /// Off by default so repeated runs produce byte-identical CSV files.
    bool record_timing = false;
    std::string out_csv;
    std::string out_svg;

    void validate() const;
};

/// Parse a JSON config. Every key is optional and falls back to the
/// built-in scenario above; unknown keys are rejected rather than ignored.
ScenarioConfig parse_config_json(const std::string& text);
ScenarioConfig load_config(const std::string& path);
std::string config_to_json(const ScenarioConfig& cfg);

/// One (surface size, trial, architecture, metric) measurement. value_db is
/// in dB for snr/crb metrics; the "pd" metric stores the plain detection
/// probability in the same column. Failed rows keep ok = false, a NaN
/// value, and the error text in note.
struct SweepRow {
    int n = 0;
    int trial = 0;
    std::uint64_t seed = 0;
    Arch arch = Arch::FullyPassive;
    Scheme scheme = Scheme::JointBf;
    std::string metric;
    double value_db = 0.0;
    int trace_len = 0;
    double wall_time_ms = 0.0;
    bool ok = true;
    std::string note;
};

/// Per (n, arch, scheme, metric) summary. mean_db averages linear values
/// first and converts the mean to dB; std_db is the sample deviation of the
/// per-trial dB values. The "pd" metric is averaged as a plain probability.
struct AggregateRow {
    int n = 0;
    Arch arch = Arch::FullyPassive;
    Scheme scheme = Scheme::JointBf;
    std::string metric;
    double mean_db = 0.0;
    double std_db = 0.0;
    int trials = 0;
};

struct SweepResult {
    ScenarioConfig config;
    std::vector<SweepRow> rows;
    std::vector<AggregateRow> aggregates;
};

/// Thread-count resolution: a positive flag wins, then the
/// IRS_SENSE_THREADS environment variable, then hardware concurrency.
int resolve_threads(int flag_value);

Backend resolve_backend(BackendChoice choice, int n);

/// Run the configured sweep over every (n, trial) cell for both
/// architectures. Cells are independent given their derived seeds, so the
/// thread count changes neither row values nor aggregates. Per-row errors
/// are recorded, not propagated. threads <= 0 means resolve_threads(0).
SweepResult run_sweep(const ScenarioConfig& cfg, int threads = 0);

/// Versioned CSV: a "# schema=1" line, one header row, then the sweep rows
/// sorted by (n, trial, scheme, arch, metric).
void write_csv(const std::string& path, const SweepResult& result);

/// Self-contained polyline chart of the aggregate curves, one series per
/// (arch, scheme, metric).
void write_svg_chart(const std::string& path, const SweepResult& result);

enum class FigureTag { Fig2, Fig3, Fig4, Fig5, Fig6, Fig7 };

/// Run the preset sweep(s) behind one figure and emit CSV + SVG plus a
/// sidecar metadata JSON embedding the exact configs and master seed.
/// Returns the written paths. Figures that merge several sweeps rename the
/// metric per series (e.g. snr_los / snr_rician / snr_rayleigh).
std::vector<std::string> reproduce_figure(FigureTag tag, const std::string& out_dir,
                                          int threads = 0);

/// One Monte Carlo draw of the bound sandwich for a pattern-gain
/// functional: the closed-form-aligned pattern's value, the value after a
/// per-coordinate ascent started from it, and a per-draw eigenvalue
/// relaxation that upper-bounds every unit-modulus pattern. By
/// construction aligned <= optimized <= relaxed on every draw.
struct SandwichDraw {
    double aligned = 0.0;
    double optimized = 0.0;
    double relaxed = 0.0;
};

/// Draw unit-variance fading links (return link sharing the forward link's
/// scattering part, as in gen_channel) at broadside and evaluate the three
/// sandwich values for the given functional.
SandwichDraw sandwich_draw(BoundQuantity quantity, int n, int m_t, int m_r,
                           std::uint64_t seed);

/// Batch CLI. Subcommands: snr-sweep, crb-sweep, detect-curve,
/// bounds-check, thresholds, reproduce --fig <tag>, selftest. Exit 0 on
/// success, 1 on validation/usage errors, 2 on numerical failure.
int cli_main(int argc, char** argv);

}  // namespace irs
