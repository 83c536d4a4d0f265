#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "uvplan/irradiance.hpp"
#include "uvplan/rng.hpp"

using namespace uvplan;

namespace {

Quaterniond random_quaternion(std::mt19937_64& rng) {
  Quaterniond q(gaussian(rng), gaussian(rng), gaussian(rng), gaussian(rng));
  q.normalize();
  return q;
}

TubeLampBankSource single_vertical_lamp() {
  TubeLampBankSource bank;
  bank.lamp_count = 1;
  bank.poses = {Pose3D{}};  // axis +z
  return bank;
}

}  // namespace

TEST_CASE("point kernel: zero power gives zero") {
  const SurfaceSample target{{0, 0, 1}, {0, 0, -1}};
  CHECK(irradiance_lambertian_point({0, 0, 0}, {0, 0, 1}, 0.0, target) == 0.0);
}

TEST_CASE("point kernel: target behind the emitter gets nothing") {
  const SurfaceSample target{{0, 0, -1}, {0, 0, 1}};
  CHECK(irradiance_lambertian_point({0, 0, 0}, {0, 0, 1}, 1.0, target) == 0.0);
}

TEST_CASE("point kernel: closed form at 2 cm normal incidence") {
  const SurfaceSample target{{0, 0, 0.02}, {0, 0, -1}};
  const double e = irradiance_lambertian_point({0, 0, 0}, {0, 0, 1}, 0.028, target);
  CHECK(e == doctest::Approx(0.028 / (kPi * 0.0004)).epsilon(1e-12));
  CHECK(e == doctest::Approx(22.2817).epsilon(1e-4));
}

TEST_CASE("point kernel rejects coincident emitter and target") {
  const SurfaceSample target{{0, 0, 0}, {0, 0, -1}};
  CHECK_THROWS_AS(irradiance_lambertian_point({0, 0, 0}, {0, 0, 1}, 1.0, target),
                  std::invalid_argument);
}

TEST_CASE("panel far field approaches a single point source") {
  LedPanelSource panel;  // 25 LEDs, 0.7 W total
  const SurfaceSample target{{0, 0, 1.0}, {0, 0, -1}};
  const double panel_e = irradiance_panel(panel, target);
  const double point_e = irradiance_lambertian_point({0, 0, 0}, {0, 0, 1}, 0.7, target);
  CHECK(panel_e == doctest::Approx(point_e).epsilon(0.002));
}

TEST_CASE("panel equals the sum of its LEDs exactly") {
  std::mt19937_64 rng(31);
  LedPanelSource panel;
  panel.pose.position = {0.2, -0.1, 0.4};
  panel.pose.orientation = random_quaternion(rng);
  const SurfaceSample target{{0.3, 0.5, 1.2},
                             Vector3d(-0.2, -0.4, -1.0).normalized()};

  const Matrix3Xd leds = panel.led_positions();
  double sum = 0.0;
  for (Eigen::Index i = 0; i < leds.cols(); ++i) {
    LedPanelSource single = panel;
    single.grid_n = 1;
    single.pose.position = leds.col(i);
    sum += irradiance_panel(single, target);
  }
  CHECK(irradiance_panel(panel, target) == sum);
}

TEST_CASE("panel emits nothing into its own plane") {
  LedPanelSource panel;
  const SurfaceSample target{{1.0, 0.0, 0.0}, {-1, 0, 0}};  // in the z=0 panel plane
  CHECK(irradiance_panel(panel, target) == 0.0);
}

TEST_CASE("single lamp far field approaches an isotropic point source") {
  const TubeLampBankSource bank = single_vertical_lamp();
  const SurfaceSample target{{50.0, 0.0, 0.0}, {-1, 0, 0}};  // perpendicular bisector
  const double e = irradiance_lamp_bank(bank, target);
  CHECK(e == doctest::Approx(27.0 / (4.0 * kPi * 2500.0)).epsilon(0.005));
}

TEST_CASE("lamp segment discretization is converged at 64 segments") {
  TubeLampBankSource bank = single_vertical_lamp();
  const SurfaceSample target{{1.0, 0.0, 0.0}, {-1, 0, 0}};

  bank.segment_count = 64;
  const double e64 = irradiance_lamp_bank(bank, target);
  bank.segment_count = 128;
  const double e128 = irradiance_lamp_bank(bank, target);
  bank.segment_count = 4096;
  const double reference = irradiance_lamp_bank(bank, target);

  CHECK(std::abs(e128 - e64) / e64 < 0.005);
  CHECK(e64 == doctest::Approx(reference).epsilon(0.005));
  CHECK(e128 == doctest::Approx(reference).epsilon(0.002));
}

TEST_CASE("zero lamp power gives zero") {
  TubeLampBankSource bank = single_vertical_lamp();
  bank.per_lamp_radiant_power = 1e-300;  // powers must stay positive; effectively zero
  const SurfaceSample target{{1.0, 0.0, 0.0}, {-1, 0, 0}};
  CHECK(irradiance_lamp_bank(bank, target) == doctest::Approx(0.0));
}

TEST_CASE("electrical power: defaults match the two rigs") {
  CHECK(electrical_power(LightSource{LedPanelSource{}}) == 30.0);
  CHECK(electrical_power(LightSource{TubeLampBankSource{}}) == 575.0);
  TubeLampBankSource one = single_vertical_lamp();
  CHECK(electrical_power(LightSource{one}) == 115.0);
}

TEST_CASE("radiant power totals") {
  CHECK(radiant_power(LightSource{LedPanelSource{}}) == doctest::Approx(0.7));
  CHECK(radiant_power(LightSource{TubeLampBankSource{}}) == doctest::Approx(135.0));
}

TEST_CASE("inverse-square law holds to 1e-12 for random distances") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 2000; ++trial) {
    const double d = uniform_range(rng, 0.01, 10.0);
    const SurfaceSample near{{0, 0, d}, {0, 0, -1}};
    const SurfaceSample far{{0, 0, 2.0 * d}, {0, 0, -1}};
    const double e_near = irradiance_lambertian_point({0, 0, 0}, {0, 0, 1}, 0.028, near);
    const double e_far = irradiance_lambertian_point({0, 0, 0}, {0, 0, 1}, 0.028, far);
    CHECK(std::abs(e_far - e_near / 4.0) <= 1e-12 * e_near);
  }
}

TEST_CASE("irradiance is never negative") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 2000; ++trial) {
    LedPanelSource panel;
    panel.pose.position = {gaussian(rng), gaussian(rng), gaussian(rng)};
    panel.pose.orientation = random_quaternion(rng);
    TubeLampBankSource bank = single_vertical_lamp();
    bank.poses[0].position = {gaussian(rng), gaussian(rng), gaussian(rng)};
    bank.poses[0].orientation = random_quaternion(rng);

    const SurfaceSample target{{gaussian(rng) * 2, gaussian(rng) * 2, gaussian(rng) * 2},
                               random_quaternion(rng) * Vector3d::UnitZ()};
    if ((target.position - panel.pose.position).norm() < 1e-6) continue;
    if ((target.position - bank.poses[0].position).norm() < 1e-6) continue;
    CHECK(irradiance_panel(panel, target) >= 0.0);
    CHECK(irradiance_lamp_bank(bank, target) >= 0.0);
  }
}

TEST_CASE("rigid rotation of source and target leaves irradiance unchanged") {
  std::mt19937_64 rng(61);
  for (int trial = 0; trial < 500; ++trial) {
    LedPanelSource panel;
    panel.pose.position = {0.1, 0.2, 0.05};
    panel.pose.orientation = random_quaternion(rng);
    const SurfaceSample target{{0.4, -0.3, 0.8}, random_quaternion(rng) * Vector3d::UnitZ()};
    const double base = irradiance_panel(panel, target);

    const Quaterniond rot = random_quaternion(rng);
    LedPanelSource rotated = panel;
    rotated.pose.position = rot * panel.pose.position;
    rotated.pose.orientation = (rot * panel.pose.orientation).normalized();
    const SurfaceSample rotated_target{rot * target.position, rot * target.unit_normal};
    const double turned = irradiance_panel(rotated, rotated_target);
    CHECK(turned == doctest::Approx(base).epsilon(1e-9));
  }
}

TEST_CASE("panel power collected over an enclosing hemisphere stays bounded") {
  LedPanelSource panel;
  const double collected = oracles::panel_hemisphere_power(panel, 10.0, 1000, 1000);
  CHECK(collected <= 0.7 * 1.01);
  CHECK(collected >= 0.7 * 0.99);  // near-total capture at 10 m
}
