// Python bindings for the sensing library: channel generation, SNR/CRB
// evaluators, detection, beamforming designs, closed-form bounds, and the
// Monte Carlo sweep engine.
#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "irssense/analysis.hpp"
#include "irssense/beamforming.hpp"
#include "irssense/channel.hpp"
#include "irssense/experiments.hpp"
#include "irssense/metrics.hpp"
#include "irssense/rng.hpp"

namespace py = pybind11;
using namespace irs;

PYBIND11_MODULE(irssense, m) {
    m.doc() = "Fully-passive vs semi-passive reflecting-surface sensing: "
              "evaluators, beamforming optimizers, bounds, and sweeps";
    m.attr("__version__") = "0.1.0";

    py::register_exception<ValidationError>(m, "ValidationError",
                                            PyExc_ValueError);
    py::register_exception<NumericalError>(m, "NumericalError",
                                           PyExc_RuntimeError);

    py::enum_<Arch>(m, "Arch")
        .value("FullyPassive", Arch::FullyPassive)
        .value("SemiPassive", Arch::SemiPassive);
    py::enum_<ChannelKind>(m, "ChannelKind")
        .value("Los", ChannelKind::Los)
        .value("Rician", ChannelKind::Rician)
        .value("Rayleigh", ChannelKind::Rayleigh);
    py::enum_<Link>(m, "Link")
        .value("BsIrs", Link::BsIrs)
        .value("IrsTarget", Link::IrsTarget);
    py::enum_<Backend>(m, "Backend")
        .value("SdrSca", Backend::SdrSca)
        .value("CoordinateAscent", Backend::CoordinateAscent);
    py::enum_<BenchmarkKind>(m, "BenchmarkKind")
        .value("RandomPhases", BenchmarkKind::RandomPhases)
        .value("Identity", BenchmarkKind::Identity);
    py::enum_<AlignKind>(m, "AlignKind")
        .value("AlignColumn", AlignKind::AlignColumn)
        .value("SplitAlign", AlignKind::SplitAlign)
        .value("DerivativeAlign", AlignKind::DerivativeAlign);
    py::enum_<DesignObjective>(m, "DesignObjective")
        .value("Snr", DesignObjective::Snr)
        .value("Crb", DesignObjective::Crb);
    py::enum_<SolveStatus>(m, "SolveStatus")
        .value("Converged", SolveStatus::Converged)
        .value("IterationLimit", SolveStatus::IterationLimit)
        .value("Failed", SolveStatus::Failed);
    py::enum_<BoundQuantity>(m, "BoundQuantity")
        .value("Gamma1", BoundQuantity::Gamma1)
        .value("Gamma2", BoundQuantity::Gamma2)
        .value("Gamma3", BoundQuantity::Gamma3)
        .value("Gamma4", BoundQuantity::Gamma4);
    py::enum_<ThresholdKind>(m, "ThresholdKind")
        .value("LosSnr", ThresholdKind::LosSnr)
        .value("RayleighSnr", ThresholdKind::RayleighSnr);
    py::enum_<Scheme>(m, "Scheme")
        .value("JointBf", Scheme::JointBf)
        .value("ReflectiveOnly", Scheme::ReflectiveOnly)
        .value("TransmitOnly", Scheme::TransmitOnly)
        .value("NoOptimization", Scheme::NoOptimization);
    py::enum_<SweepObjective>(m, "SweepObjective")
        .value("Snr", SweepObjective::Snr)
        .value("Crb", SweepObjective::Crb)
        .value("Detection", SweepObjective::Detection);
    py::enum_<BackendChoice>(m, "BackendChoice")
        .value("Auto", BackendChoice::Auto)
        .value("SdrSca", BackendChoice::SdrSca)
        .value("CoordinateAscent", BackendChoice::CoordinateAscent);
    py::enum_<FigureTag>(m, "FigureTag")
        .value("Fig2", FigureTag::Fig2)
        .value("Fig3", FigureTag::Fig3)
        .value("Fig4", FigureTag::Fig4)
        .value("Fig5", FigureTag::Fig5)
        .value("Fig6", FigureTag::Fig6)
        .value("Fig7", FigureTag::Fig7);

    py::class_<Vec2>(m, "Vec2")
        .def(py::init<>())
        .def(py::init([](double x, double y) { return Vec2{x, y}; }),
             py::arg("x"), py::arg("y"))
        .def_readwrite("x", &Vec2::x)
        .def_readwrite("y", &Vec2::y);

    py::class_<ArrayGeometry>(m, "ArrayGeometry")
        .def(py::init<>())
        .def_readwrite("m_t", &ArrayGeometry::m_t)
        .def_readwrite("m_r", &ArrayGeometry::m_r)
        .def_readwrite("n", &ArrayGeometry::n)
        .def_readwrite("spacing", &ArrayGeometry::spacing)
        .def_readwrite("wavelength", &ArrayGeometry::wavelength)
        .def("validate", &ArrayGeometry::validate);

    py::class_<ScenarioGeometry>(m, "ScenarioGeometry")
        .def(py::init<>())
        .def_readwrite("bs_pos", &ScenarioGeometry::bs_pos)
        .def_readwrite("irs_pos", &ScenarioGeometry::irs_pos)
        .def_readwrite("target_pos", &ScenarioGeometry::target_pos)
        .def_readwrite("theta", &ScenarioGeometry::theta)
        .def_readwrite("theta1", &ScenarioGeometry::theta1)
        .def_readwrite("theta2", &ScenarioGeometry::theta2)
        .def_readwrite("d_bi", &ScenarioGeometry::d_bi)
        .def_readwrite("d_it", &ScenarioGeometry::d_it);

    py::class_<PathLossModel>(m, "PathLossModel")
        .def(py::init<>())
        .def_readwrite("k0_db", &PathLossModel::k0_db)
        .def_readwrite("d0", &PathLossModel::d0)
        .def_readwrite("exponent_bs_irs", &PathLossModel::exponent_bs_irs)
        .def_readwrite("exponent_irs_target", &PathLossModel::exponent_irs_target);

    py::class_<ChannelRealization>(m, "ChannelRealization")
        .def(py::init<>())
        .def_readwrite("g_t", &ChannelRealization::g_t)
        .def_readwrite("g_r", &ChannelRealization::g_r)
        .def_readwrite("alpha", &ChannelRealization::alpha)
        .def_readwrite("kind", &ChannelRealization::kind)
        .def_readwrite("k_factor", &ChannelRealization::k_factor)
        .def_readwrite("seed_used", &ChannelRealization::seed_used)
        .def_readwrite("array", &ChannelRealization::array)
        .def_readwrite("theta", &ChannelRealization::theta);

    py::class_<ReflectPattern>(m, "ReflectPattern")
        .def(py::init<>())
        .def(py::init([](const VecC& v) { return ReflectPattern{v}; }),
             py::arg("v"))
        .def_readwrite("v", &ReflectPattern::v)
        .def("size", &ReflectPattern::size);

    py::class_<TransmitCovariance>(m, "TransmitCovariance")
        .def(py::init<>())
        .def(py::init([](const MatC& r, double p0) {
                 return TransmitCovariance{r, p0};
             }),
             py::arg("r"), py::arg("power_budget"))
        .def_readwrite("r", &TransmitCovariance::r)
        .def_readwrite("power_budget", &TransmitCovariance::power_budget);

    py::class_<SensingSpec>(m, "SensingSpec")
        .def(py::init<>())
        .def_readwrite("sigma2", &SensingSpec::sigma2)
        .def_readwrite("t_symbols", &SensingSpec::t_symbols)
        .def_readwrite("p_fa", &SensingSpec::p_fa)
        .def("validate", &SensingSpec::validate);

    py::class_<EffectiveResponse>(m, "EffectiveResponse")
        .def_readonly("p_t", &EffectiveResponse::p_t)
        .def_readonly("dp_t", &EffectiveResponse::dp_t)
        .def_readonly("p_r", &EffectiveResponse::p_r)
        .def_readonly("dp_r", &EffectiveResponse::dp_r);

    py::class_<OptimizerOptions>(m, "OptimizerOptions")
        .def(py::init<>())
        .def_readwrite("sca_max_iter", &OptimizerOptions::sca_max_iter)
        .def_readwrite("sca_rel_tol", &OptimizerOptions::sca_rel_tol)
        .def_readwrite("randomization_samples",
                       &OptimizerOptions::randomization_samples)
        .def_readwrite("backend", &OptimizerOptions::backend)
        .def_readwrite("inner_sdp_tol", &OptimizerOptions::inner_sdp_tol)
        .def_readwrite("alt_opt_max_rounds", &OptimizerOptions::alt_opt_max_rounds)
        .def_readwrite("seed", &OptimizerOptions::seed);

    py::class_<BeamformingResult>(m, "BeamformingResult")
        .def_readonly("v", &BeamformingResult::v)
        .def_readonly("r", &BeamformingResult::r)
        .def_readonly("objective_trace", &BeamformingResult::objective_trace)
        .def_readonly("relaxation_bound", &BeamformingResult::relaxation_bound)
        .def_readonly("status", &BeamformingResult::status);

    py::class_<BoundPair>(m, "BoundPair")
        .def_readonly("lower", &BoundPair::lower)
        .def_readonly("upper", &BoundPair::upper)
        .def_readonly("quantity", &BoundPair::quantity);

    py::class_<ScalingFit>(m, "ScalingFit")
        .def_readonly("slope", &ScalingFit::slope)
        .def_readonly("intercept", &ScalingFit::intercept)
        .def_readonly("r_squared", &ScalingFit::r_squared)
        .def_readonly("n_range", &ScalingFit::n_range);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("bs_pos", &ScenarioConfig::bs_pos)
        .def_readwrite("irs_pos", &ScenarioConfig::irs_pos)
        .def_readwrite("target_pos", &ScenarioConfig::target_pos)
        .def_readwrite("m_t", &ScenarioConfig::m_t)
        .def_readwrite("m_r", &ScenarioConfig::m_r)
        .def_readwrite("n_list", &ScenarioConfig::n_list)
        .def_readwrite("channel", &ScenarioConfig::channel)
        .def_readwrite("rician_k", &ScenarioConfig::rician_k)
        .def_readwrite("path_loss", &ScenarioConfig::path_loss)
        .def_readwrite("rcs", &ScenarioConfig::rcs)
        .def_readwrite("power_budget_dbm", &ScenarioConfig::power_budget_dbm)
        .def_readwrite("sigma2_dbm", &ScenarioConfig::sigma2_dbm)
        .def_readwrite("t_symbols", &ScenarioConfig::t_symbols)
        .def_readwrite("p_fa", &ScenarioConfig::p_fa)
        .def_readwrite("trials", &ScenarioConfig::trials)
        .def_readwrite("master_seed", &ScenarioConfig::master_seed)
        .def_readwrite("scheme", &ScenarioConfig::scheme)
        .def_readwrite("objective", &ScenarioConfig::objective)
        .def_readwrite("backend", &ScenarioConfig::backend)
        .def_readwrite("record_timing", &ScenarioConfig::record_timing)
        .def_readwrite("out_csv", &ScenarioConfig::out_csv)
        .def_readwrite("out_svg", &ScenarioConfig::out_svg)
        .def("validate", &ScenarioConfig::validate);

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("n", &SweepRow::n)
        .def_readonly("trial", &SweepRow::trial)
        .def_readonly("seed", &SweepRow::seed)
        .def_readonly("arch", &SweepRow::arch)
        .def_readonly("scheme", &SweepRow::scheme)
        .def_readonly("metric", &SweepRow::metric)
        .def_readonly("value_db", &SweepRow::value_db)
        .def_readonly("trace_len", &SweepRow::trace_len)
        .def_readonly("wall_time_ms", &SweepRow::wall_time_ms)
        .def_readonly("ok", &SweepRow::ok)
        .def_readonly("note", &SweepRow::note);

    py::class_<AggregateRow>(m, "AggregateRow")
        .def_readonly("n", &AggregateRow::n)
        .def_readonly("arch", &AggregateRow::arch)
        .def_readonly("scheme", &AggregateRow::scheme)
        .def_readonly("metric", &AggregateRow::metric)
        .def_readonly("mean_db", &AggregateRow::mean_db)
        .def_readonly("std_db", &AggregateRow::std_db)
        .def_readonly("trials", &AggregateRow::trials);

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("config", &SweepResult::config)
        .def_readonly("rows", &SweepResult::rows)
        .def_readonly("aggregates", &SweepResult::aggregates);

    py::class_<SandwichDraw>(m, "SandwichDraw")
        .def_readonly("aligned", &SandwichDraw::aligned)
        .def_readonly("optimized", &SandwichDraw::optimized)
        .def_readonly("relaxed", &SandwichDraw::relaxed);

    // channel
    m.def("steering_irs", &steering_irs, py::arg("theta"), py::arg("n"),
          py::arg("geom"));
    m.def("steering_derivative", &steering_derivative, py::arg("theta"),
          py::arg("n"), py::arg("geom"));
    m.def("centered_indices", &centered_indices, py::arg("n"));
    m.def("path_loss", &path_loss, py::arg("d"), py::arg("model"), py::arg("link"));
    m.def("geometry_from_positions", &geometry_from_positions, py::arg("bs"),
          py::arg("irs"), py::arg("target"));
    m.def("target_coefficient", &target_coefficient, py::arg("scen"),
          py::arg("model"), py::arg("rcs"), py::arg("seed"));
    m.def("gen_channel", &gen_channel, py::arg("kind"), py::arg("geom"),
          py::arg("scen"), py::arg("model"), py::arg("rcs"), py::arg("seed"),
          py::arg("k_factor") = 1.0);

    // metrics
    m.def("effective_response", &effective_response, py::arg("arch"), py::arg("v"),
          py::arg("ch"));
    m.def("snr", &snr, py::arg("arch"), py::arg("r"), py::arg("v"), py::arg("ch"),
          py::arg("spec"));
    m.def("mrt_covariance", &mrt_covariance, py::arg("v"), py::arg("ch"),
          py::arg("p0"));
    m.def("crb", &crb, py::arg("arch"), py::arg("r"), py::arg("v"), py::arg("ch"),
          py::arg("spec"));
    m.def("crb_approx", &crb_approx, py::arg("arch"), py::arg("r"), py::arg("v"),
          py::arg("ch"), py::arg("spec"));
    m.def("marcum_q1", &marcum_q1, py::arg("a"), py::arg("b"));
    m.def("detection_probability", &detection_probability, py::arg("arch"),
          py::arg("r"), py::arg("v"), py::arg("ch"), py::arg("spec"));
    m.def("fisher_numeric", &fisher_numeric, py::arg("arch"), py::arg("r"),
          py::arg("v"), py::arg("ch"), py::arg("spec"), py::arg("fd_step") = 1e-6);

    // beamforming
    m.def("los_optimal_phases", &los_optimal_phases, py::arg("theta"),
          py::arg("theta2"), py::arg("geom"));
    m.def("benchmark_pattern", &benchmark_pattern, py::arg("kind"), py::arg("n"),
          py::arg("seed"));
    m.def("appendix_aligned_pattern", &appendix_aligned_pattern, py::arg("kind"),
          py::arg("g_hat"), py::arg("col"), py::arg("theta"), py::arg("geom"));
    m.def("maximize_snr", &maximize_snr, py::arg("arch"), py::arg("ch"),
          py::arg("theta"), py::arg("geom"), py::arg("opts") = OptimizerOptions{});
    m.def("minimize_crb", &minimize_crb, py::arg("arch"), py::arg("ch"),
          py::arg("geom"), py::arg("spec"), py::arg("p0"),
          py::arg("opts") = OptimizerOptions{});
    m.def("minimize_crb_reflective", &minimize_crb_reflective, py::arg("arch"),
          py::arg("ch"), py::arg("geom"), py::arg("spec"), py::arg("r_fixed"),
          py::arg("opts") = OptimizerOptions{});
    m.def("transmit_only_design", &transmit_only_design, py::arg("arch"),
          py::arg("ch"), py::arg("v_fixed"), py::arg("objective"), py::arg("p0"),
          py::arg("spec"), py::arg("opts") = OptimizerOptions{});

    // analysis
    m.def("gamma_bounds", &gamma_bounds, py::arg("quantity"), py::arg("n"),
          py::arg("m_t"), py::arg("m_r"));
    m.def("crossover_threshold", &crossover_threshold, py::arg("kind"),
          py::arg("l_d"), py::arg("m_t"), py::arg("m_r"));
    m.def("fit_scaling_exponent", &fit_scaling_exponent, py::arg("points"));
    m.def("filter_asymptotic_points", &filter_asymptotic_points, py::arg("points"),
          py::arg("m_t"), py::arg("m_r"));
    m.def("find_crossover", &find_crossover, py::arg("sweep_fully"),
          py::arg("sweep_semi"));

    // experiments
    m.def("parse_config_json", &parse_config_json, py::arg("text"));
    m.def("load_config", &load_config, py::arg("path"));
    m.def("config_to_json", &config_to_json, py::arg("cfg"));
    m.def("resolve_threads", &resolve_threads, py::arg("flag_value") = 0);
    m.def("resolve_backend", &resolve_backend, py::arg("choice"), py::arg("n"));
    m.def("run_sweep", &run_sweep, py::arg("cfg"), py::arg("threads") = 0,
          py::call_guard<py::gil_scoped_release>());
    m.def("write_csv", &write_csv, py::arg("path"), py::arg("result"));
    m.def("write_svg_chart", &write_svg_chart, py::arg("path"), py::arg("result"));
    m.def("reproduce_figure", &reproduce_figure, py::arg("tag"), py::arg("out_dir"),
          py::arg("threads") = 0, py::call_guard<py::gil_scoped_release>());
    m.def("sandwich_draw", &sandwich_draw, py::arg("quantity"), py::arg("n"),
          py::arg("m_t"), py::arg("m_r"), py::arg("seed"));
}
