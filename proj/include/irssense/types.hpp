#pragma once
/// Core value types shared across the library: array/scene geometry,
/// path-loss parameters, channel draws, beamformers, and sensing parameters.
#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace irs {

using cd = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using VecC = Eigen::VectorXcd;
using MatR = Eigen::MatrixXd;
using VecR = Eigen::VectorXd;

/// Raised on invalid user input / configuration (CLI exit code 1).
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Raised on numerical failure (singular information matrix, solver
/// breakdown, unbounded CRB); CLI exit code 2.
struct NumericalError : std::runtime_error {
    explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Receiver architecture: fully-passive senses the echo back at the BS
/// through the surface; semi-passive has dedicated sensors at the surface.
enum class Arch { FullyPassive, SemiPassive };

struct ArrayGeometry {
    int m_t = 4;               ///< BS transmit antennas
    int m_r = 4;               ///< receive antennas (BS) / sensors (surface)
    int n = 1;                 ///< reflecting elements
    double spacing = 0.5;      ///< inter-element spacing d (same units as wavelength)
    double wavelength = 1.0;   ///< carrier wavelength

    void validate() const {
        if (m_t < 1 || m_r < 1 || n < 1) throw ValidationError("array counts must be >= 1");
        if (spacing <= 0 || wavelength <= 0) throw ValidationError("spacing/wavelength must be > 0");
    }
};

struct Vec2 {
    double x = 0, y = 0;
};

struct ScenarioGeometry {
    Vec2 bs_pos, irs_pos, target_pos;
    double theta = 0;    ///< target angle at the surface, from broadside
    double theta1 = 0;   ///< surface angle seen from the BS array
    double theta2 = 0;   ///< BS angle seen from the surface
    double d_bi = 0;     ///< BS-surface distance
    double d_it = 0;     ///< surface-target distance
};

struct PathLossModel {
    double k0_db = -30.0;             ///< reference loss at d0, in dB
    double d0 = 1.0;                  ///< reference distance
    double exponent_bs_irs = 2.2;
    double exponent_irs_target = 2.0;

    void validate() const {
        if (d0 <= 0) throw ValidationError("path loss d0 must be > 0");
        if (exponent_bs_irs <= 0 || exponent_irs_target <= 0)
            throw ValidationError("path loss exponents must be > 0");
    }
};

enum class ChannelKind { Los, Rician, Rayleigh };

/// One draw of the BS-surface links plus the target reflection coefficient.
/// Carries the geometry context it was generated under so downstream
/// evaluators can rebuild steering vectors without extra arguments.
struct ChannelRealization {
    MatC g_t;   ///< N x M_t forward link
    MatC g_r;   ///< M_r x N return link
    cd alpha{0, 0};
    ChannelKind kind = ChannelKind::Rayleigh;
    double k_factor = 0;          ///< Rician factor (ignored otherwise)
    std::uint64_t seed_used = 0;
    ArrayGeometry array;
    double theta = 0;             ///< target angle the draw was built for
};

/// Diagonal of the reflection matrix; entries must stay unit modulus.
struct ReflectPattern {
    VecC v;
    int size() const { return static_cast<int>(v.size()); }
};

struct TransmitCovariance {
    MatC r;
    double power_budget = 1.0;   ///< trace bound P0 in watts
};

struct SensingSpec {
    double sigma2 = 1e-12;   ///< noise power (watts)
    int t_symbols = 256;     ///< coherent symbols T
    double p_fa = 1e-2;      ///< false-alarm probability

    void validate() const {
        if (sigma2 <= 0) throw ValidationError("sigma2 must be > 0");
        if (t_symbols < 1) throw ValidationError("t_symbols must be >= 1");
        if (p_fa <= 0 || p_fa >= 1) throw ValidationError("p_fa must be in (0,1)");
    }
};

}  // namespace irs
