#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/SVD>
#include <cmath>

#include "doctest.h"
#include "irssense/channel.hpp"
#include "irssense/rng.hpp"

using namespace irs;

namespace {

ScenarioGeometry default_scene() {
    return geometry_from_positions(Vec2{0, 0}, Vec2{1, 1}, Vec2{1, -5});
}

}  // namespace

TEST_CASE("steering vectors have unit-modulus entries and norm sqrt(n)") {
    ArrayGeometry geom;
    for (const int n : {1, 2, 7, 16, 64}) {
        geom.n = n;
        for (const double theta : {-1.2, -0.4, 0.0, 0.3, 1.4}) {
            const VecC a = steering_irs(theta, n, geom);
            REQUIRE(a.size() == n);
            CHECK(std::abs(a.squaredNorm() - n) <= 1e-12 * n);
            for (int k = 0; k < n; ++k) CHECK(std::abs(std::abs(a(k)) - 1.0) <= 1e-12);
        }
    }
    CHECK_THROWS_AS(steering_irs(0.0, 0, geom), ValidationError);
}

TEST_CASE("broadside steering is the all-ones vector") {
    ArrayGeometry geom;
    geom.n = 9;
    const VecC a = steering_irs(0.0, 9, geom);
    CHECK((a - VecC::Ones(9)).norm() <= 1e-13);
}

TEST_CASE("half-wavelength steering vectors at dft angles are orthogonal") {
    ArrayGeometry geom;
    geom.n = 8;
    const VecC a = steering_irs(0.0, 8, geom);
    // sin separation 2/n nulls the correlation sum for a centered array
    const VecC b = steering_irs(std::asin(0.25), 8, geom);
    CHECK(std::abs(a.dot(b)) <= 1e-10 * 8);
}

TEST_CASE("steering derivative matches the finite difference and index weighting") {
    ArrayGeometry geom;
    geom.n = 16;
    const double theta = 0.37;
    const VecC da = steering_derivative(theta, 16, geom);
    const double h = 1e-6;
    const VecC fd = (steering_irs(theta + h, 16, geom) -
                     steering_irs(theta - h, 16, geom)) /
                    (2 * h);
    CHECK((da - fd).norm() <= 1e-7 * fd.norm());

    // squared norm = (pi * spacing * cos(theta) / lambda)^2 * n(n^2-1)/3
    const double c = M_PI * geom.spacing * std::cos(theta) / geom.wavelength;
    const double want = c * c * 16.0 * (16.0 * 16.0 - 1.0) / 3.0;
    CHECK(std::abs(da.squaredNorm() - want) <= 1e-9 * want);

    const VecR idx = centered_indices(16);
    for (int k = 0; k < 16; ++k) CHECK(std::abs(idx(k)) == std::abs(2.0 * k + 1 - 16));
}

TEST_CASE("reference path loss values for the default scenario") {
    PathLossModel model;
    CHECK(std::abs(path_loss(1.0, model, Link::BsIrs) - 1e-3) <= 1e-16);
    CHECK(std::abs(path_loss(1.0, model, Link::IrsTarget) - 1e-3) <= 1e-16);

    const ScenarioGeometry scen = default_scene();
    CHECK(std::abs(scen.d_bi - std::sqrt(2.0)) <= 1e-12);
    CHECK(std::abs(scen.d_it - 6.0) <= 1e-12);

    const double l_bi = path_loss(scen.d_bi, model, Link::BsIrs);
    CHECK(std::abs(l_bi - 1e-3 * std::pow(2.0, -1.1)) <= 1e-12);
    CHECK(std::abs(l_bi - 4.66516e-4) <= 1e-8);

    const double l_it = path_loss(scen.d_it, model, Link::IrsTarget);
    CHECK(std::abs(l_it - 1e-3 / 36.0) <= 1e-15);

    CHECK_THROWS_AS(path_loss(0.0, model, Link::BsIrs), ValidationError);
}

TEST_CASE("scenario angles for the default positions") {
    const ScenarioGeometry scen = default_scene();
    CHECK(std::abs(scen.theta1 - M_PI / 4) <= 1e-12);   // surface seen from the bs
    CHECK(std::abs(scen.theta - 0.0) <= 1e-12);         // target seen from the surface
    CHECK(std::abs(scen.theta2 + M_PI / 4) <= 1e-12);   // bs seen from the surface

    CHECK_THROWS_AS(geometry_from_positions(Vec2{0, 0}, Vec2{0, 0}, Vec2{1, 1}),
                    ValidationError);
    // peer in the array plane: broadside undefined
    CHECK_THROWS_AS(geometry_from_positions(Vec2{0, 0}, Vec2{1, 1}, Vec2{5, 1}),
                    ValidationError);
    // peer behind the array
    CHECK_THROWS_AS(geometry_from_positions(Vec2{0, 0}, Vec2{1, 1}, Vec2{1, 5}),
                    ValidationError);
}

TEST_CASE("target coefficient magnitude encodes the two-hop return loss") {
    const ScenarioGeometry scen = default_scene();
    PathLossModel model;
    const double l_it = path_loss(scen.d_it, model, Link::IrsTarget);
    for (const double rcs : {0.5, 1.0, 4.0}) {
        const cd alpha = target_coefficient(scen, model, rcs, 77);
        CHECK(std::abs(std::norm(alpha) - rcs * l_it * l_it) <=
              1e-12 * rcs * l_it * l_it);
    }
    CHECK(target_coefficient(scen, model, 1.0, 5) == target_coefficient(scen, model, 1.0, 5));
    CHECK(target_coefficient(scen, model, 1.0, 5) != target_coefficient(scen, model, 1.0, 6));
    CHECK_THROWS_AS(target_coefficient(scen, model, 0.0, 5), ValidationError);
}

TEST_CASE("los links are rank one with the geometric magnitude") {
    ArrayGeometry geom;
    geom.n = 32;
    const ScenarioGeometry scen = default_scene();
    PathLossModel model;
    const ChannelRealization ch =
        gen_channel(ChannelKind::Los, geom, scen, model, 1.0, 9);
    const double l_bi = path_loss(scen.d_bi, model, Link::BsIrs);

    REQUIRE(ch.g_t.rows() == 32);
    REQUIRE(ch.g_t.cols() == 4);
    REQUIRE(ch.g_r.rows() == 4);
    REQUIRE(ch.g_r.cols() == 32);
    CHECK(std::abs(ch.g_t.squaredNorm() - l_bi * 32 * 4) <= 1e-9 * l_bi * 32 * 4);
    CHECK(std::abs(ch.g_r.squaredNorm() - l_bi * 32 * 4) <= 1e-9 * l_bi * 32 * 4);

    Eigen::JacobiSVD<MatC> svd_t(ch.g_t);
    CHECK(svd_t.singularValues()(1) <= 1e-10 * svd_t.singularValues()(0));
    Eigen::JacobiSVD<MatC> svd_r(ch.g_r);
    CHECK(svd_r.singularValues()(1) <= 1e-10 * svd_r.singularValues()(0));
    CHECK(ch.theta == scen.theta);
    CHECK(ch.seed_used == 9);
}

TEST_CASE("fading links have the prescribed average entry power") {
    ArrayGeometry geom;
    geom.n = 50;
    const ScenarioGeometry scen = default_scene();
    PathLossModel model;
    const double l_bi = path_loss(scen.d_bi, model, Link::BsIrs);

    for (const ChannelKind kind : {ChannelKind::Rayleigh, ChannelKind::Rician}) {
        double sum = 0.0;
        int count = 0;
        for (std::uint64_t seed = 0; seed < 50; ++seed) {
            const ChannelRealization ch =
                gen_channel(kind, geom, scen, model, 1.0, seed, 1.0);
            sum += ch.g_t.squaredNorm();
            count += static_cast<int>(ch.g_t.size());
        }
        const double mean_power = sum / count;
        CHECK(std::abs(mean_power / l_bi - 1.0) <= 0.05);
    }
}

TEST_CASE("return link reuses the forward scattering for reciprocity") {
    ArrayGeometry geom;
    geom.n = 24;
    const ScenarioGeometry scen = default_scene();
    PathLossModel model;

    const ChannelRealization sq =
        gen_channel(ChannelKind::Rayleigh, geom, scen, model, 1.0, 3);
    CHECK((sq.g_r - sq.g_t.transpose()).norm() <= 1e-15);

    geom.m_r = 2;  // non-square arrays share the leading block only
    const ChannelRealization rect =
        gen_channel(ChannelKind::Rayleigh, geom, scen, model, 1.0, 3);
    CHECK((rect.g_r.topRows(2) - rect.g_t.leftCols(2).transpose()).norm() <= 1e-15);
}

TEST_CASE("channel draws are seed-deterministic") {
    ArrayGeometry geom;
    geom.n = 12;
    const ScenarioGeometry scen = default_scene();
    PathLossModel model;
    const ChannelRealization a =
        gen_channel(ChannelKind::Rician, geom, scen, model, 1.0, 42, 1.0);
    const ChannelRealization b =
        gen_channel(ChannelKind::Rician, geom, scen, model, 1.0, 42, 1.0);
    const ChannelRealization c =
        gen_channel(ChannelKind::Rician, geom, scen, model, 1.0, 43, 1.0);
    CHECK((a.g_t - b.g_t).norm() == 0.0);
    CHECK((a.g_r - b.g_r).norm() == 0.0);
    CHECK(a.alpha == b.alpha);
    CHECK((a.g_t - c.g_t).norm() > 0.0);

    CHECK_THROWS_AS(gen_channel(ChannelKind::Rician, geom, scen, model, 1.0, 1, -0.5),
                    ValidationError);
}
