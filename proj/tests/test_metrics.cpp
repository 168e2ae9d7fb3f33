#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ifp/error.hpp"
#include "ifp/metrics.hpp"
#include "ifp/phantom.hpp"
#include "oracles.hpp"

using namespace ifp;
using namespace ifp::testing;

TEST_CASE("position_errors") {
  const auto truth = generate_scan_grid(9, 10);

  SUBCASE("exact estimates") {
    const PositionErrorReport r = position_errors(truth, truth);
    CHECK(r.mean_abs_x == 0.0);
    CHECK(r.mean_abs_y == 0.0);
    CHECK(r.max_abs == 0.0);
    CHECK(r.per_frame_error.size() == 81);
  }
  SUBCASE("a uniform offset is removed") {
    std::vector<ShiftVector> est;
    for (const auto& s : truth) est.push_back(s + ShiftVector{7, 7});
    CHECK(position_errors(est, truth).max_abs == 0.0);
  }
  SUBCASE("estimates relative to a reference frame are aligned first") {
    std::vector<ShiftVector> relative;
    for (const auto& s : truth) relative.push_back(s - truth[40]);
    CHECK(position_errors(relative, truth, 40).max_abs == 0.0);
    CHECK(position_errors(relative, truth, 3).max_abs == 0.0);
  }
  SUBCASE("nine one-pixel misses out of 81") {
    std::vector<ShiftVector> est = truth;
    for (std::size_t n = 1; n <= 9; ++n) est[n].dx += 1;
    const PositionErrorReport r = position_errors(est, truth);
    CHECK(r.mean_abs_x == doctest::Approx(9.0 / 81.0));
    CHECK(r.mean_abs_y == 0.0);
    CHECK(r.max_abs == 1.0);
    CHECK(r.per_frame_error[5].dx == 1.0);
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(position_errors({{0, 0}}, truth), InvalidArgument);
    CHECK_THROWS_AS(position_errors({}, {}), InvalidArgument);
    CHECK_THROWS_AS(position_errors(truth, truth, 81), InvalidArgument);
  }
}

TEST_CASE("image_quality") {
  const OpticalModel m = build_otf(OpticalConfig{}, 32, 32);
  std::mt19937_64 rng(1);
  const ImageGrid truth = random_grid(rng, 32, 32, 0.0, 1.0);

  SUBCASE("identical images") {
    const QualityReport q = image_quality(truth, truth, m);
    CHECK(q.rmse == 0.0);
    CHECK(q.psnr == std::numeric_limits<double>::infinity());
  }
  SUBCASE("a global scale is ignored") {
    ImageGrid scaled = truth;
    for (auto& v : scaled.samples()) v *= 4.0;
    CHECK(image_quality(scaled, truth, m).rmse < 1e-14);
  }
  SUBCASE("known RMSE and PSNR") {
    // Truth of mean 1 with peak 1.5; recon offset by +-0.1 keeps the mean.
    ImageGrid t(2, 2, 1.0, std::vector<double>{0.5, 1.5, 0.5, 1.5});
    ImageGrid r(2, 2, 1.0, std::vector<double>{0.6, 1.4, 0.4, 1.6});
    const OpticalModel tiny{ImageGrid(2, 2, 1.0, 1.0), 1.0};
    const QualityReport q = image_quality(r, t, tiny);
    CHECK(q.rmse == doctest::Approx(0.1));
    CHECK(q.psnr == doctest::Approx(20.0 * std::log10(15.0)));
    CHECK(q.beyond_cutoff_energy_ratio == 0.0);
  }
  SUBCASE("RMSE is symmetric for unit-mean inputs") {
    const ImageGrid a = normalize_mean(random_grid(rng, 32, 32, 0.0, 1.0));
    const ImageGrid b = normalize_mean(random_grid(rng, 32, 32, 0.0, 1.0));
    CHECK(image_quality(a, b, m).rmse == doctest::Approx(image_quality(b, a, m).rmse).epsilon(1e-12));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(image_quality(truth, ImageGrid(32, 32, 1.0, 0.5), m), DegenerateInput);
    CHECK_THROWS_AS(image_quality(ImageGrid(32, 32), truth, m), DegenerateInput);
    CHECK_THROWS_AS(image_quality(ImageGrid(16, 16, 1.0, 1.0), truth, m), InvalidArgument);
  }
}

TEST_CASE("beyond_cutoff_energy_ratio") {
  const OpticalModel m = build_otf(OpticalConfig{}, 64, 64);
  const ImageGrid chart = resolution_chart(64, 64, 3.45);
  CHECK(beyond_cutoff_energy_ratio(incoherent_image(chart, m), m) < 1e-20);
  CHECK(beyond_cutoff_energy_ratio(ImageGrid(64, 64, 1.0, 1.0), m) == 0.0);
  CHECK(beyond_cutoff_energy_ratio(ImageGrid(64, 64), m) == 0.0);

  // A checkerboard lives entirely at the Nyquist corner, beyond the cutoff.
  ImageGrid checker(64, 64);
  for (std::size_t y = 0; y < 64; ++y) {
    for (std::size_t x = 0; x < 64; ++x) checker(x, y) = ((x + y) % 2 == 0) ? 1.0 : -1.0;
  }
  CHECK(beyond_cutoff_energy_ratio(checker, m) == doctest::Approx(1.0));
  CHECK_THROWS_AS(beyond_cutoff_energy_ratio(ImageGrid(32, 32), m), InvalidArgument);
}

TEST_CASE("normalize_mean") {
  const ImageGrid n = normalize_mean(ImageGrid(3, 3, 1.0, std::vector<double>{1, 2, 3, 4, 5, 6, 7, 8, 9}));
  CHECK(n.mean() == doctest::Approx(1.0));
  CHECK(n(0, 0) == doctest::Approx(0.2));
  CHECK_THROWS_AS(normalize_mean(ImageGrid(3, 3)), DegenerateInput);
}

TEST_CASE("canvas_alignment and pattern_correlation") {
  std::mt19937_64 rng(2);
  const ImageGrid truth = random_grid(rng, 40, 30, 0.0, 1.0);
  const auto truth_geom = CanvasGeometry::centered(20, 10, 40, 30);
  const std::vector<ShiftVector> shifts{{-3, 0}, {4, 2}, {0, -5}};
  const auto recon_geom = CanvasGeometry::fit(20, 10, shifts);

  SUBCASE("alignment maps windows onto the same truth pixels") {
    const ShiftVector a = canvas_alignment(recon_geom, shifts[0], truth_geom, shifts[0]);
    for (const auto& s : shifts) CHECK(recon_geom.window_offset(s) + a == truth_geom.window_offset(s));
  }
  SUBCASE("a pattern copied from the truth correlates perfectly") {
    const ShiftVector a = canvas_alignment(recon_geom, shifts[1], truth_geom, shifts[1]);
    ImageGrid recovered(recon_geom.canvas_width, recon_geom.canvas_height, 1.0, 1.0);
    ImageGrid visited(recon_geom.canvas_width, recon_geom.canvas_height);
    for (const auto& s : shifts) {
      const ShiftVector ro = recon_geom.window_offset(s);
      const ShiftVector to = truth_geom.window_offset(s);
      for (std::size_t y = 0; y < 10; ++y) {
        for (std::size_t x = 0; x < 20; ++x) {
          recovered(ro.dx + x, ro.dy + y) = 3.0 * truth(to.dx + x, to.dy + y) + 1.0;
          visited(ro.dx + x, ro.dy + y) = 1.0;
        }
      }
    }
    CHECK(pattern_correlation(recovered, visited, truth, a) == doctest::Approx(1.0));
    // Misalignment by one pixel destroys the correlation of i.i.d. samples.
    CHECK(std::abs(pattern_correlation(recovered, visited, truth, a + ShiftVector{1, 0})) < 0.3);
  }
  SUBCASE("errors") {
    const ImageGrid flat(recon_geom.canvas_width, recon_geom.canvas_height, 1.0, 1.0);
    const ImageGrid none(recon_geom.canvas_width, recon_geom.canvas_height);
    CHECK_THROWS_AS(pattern_correlation(flat, none, truth, {0, 0}), DegenerateInput);
    CHECK_THROWS_AS(pattern_correlation(flat, flat, truth, {0, 0}), DegenerateInput);
    CHECK_THROWS_AS(pattern_correlation(flat, ImageGrid(3, 3), truth, {0, 0}), InvalidArgument);
  }
}

TEST_CASE("noise_sweep") {
  const SimulationScenario reference{resolution_chart(256, 256, 3.45), OpticalConfig{}, 5, 10, 1.0, 1, {}};

  SUBCASE("no noise, no error") {
    const auto rows = noise_sweep(reference, {0.0}, 2);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].level == 0.0);
    CHECK(rows[0].mean_abs_x == 0.0);
    CHECK(rows[0].mean_abs_y == 0.0);
  }

  const SimulationScenario small{resolution_chart(96, 96, 3.45), OpticalConfig{}, 5, 4, 1.0, 3, {}};
  SUBCASE("deterministic") {
    const auto a = noise_sweep(small, {0.05, 0.2}, 2);
    const auto b = noise_sweep(small, {0.05, 0.2}, 2);
    REQUIRE(a.size() == 2);
    for (std::size_t i = 0; i < 2; ++i) {
      CHECK(a[i].mean_abs_x == b[i].mean_abs_x);
      CHECK(a[i].mean_abs_y == b[i].mean_abs_y);
    }
  }
  SUBCASE("rows do not depend on level order") {
    const auto a = noise_sweep(small, {0.01, 0.1, 0.3}, 2);
    const auto b = noise_sweep(small, {0.3, 0.01, 0.1}, 2);
    CHECK(a[0].mean_abs_x == b[1].mean_abs_x);
    CHECK(a[1].mean_abs_y == b[2].mean_abs_y);
    CHECK(a[2].mean_abs_x == b[0].mean_abs_x);
    CHECK(b[0].level == 0.3);
  }
  SUBCASE("seeds") {
    CHECK(scenario_speckle_seed(1, 0) != scenario_speckle_seed(1, 1));
    CHECK(scenario_speckle_seed(1, 0) != scenario_speckle_seed(2, 0));
    CHECK(scenario_noise_seed(1, 0.01, 0) != scenario_noise_seed(1, 0.02, 0));
    CHECK(scenario_noise_seed(1, 0.01, 0) == scenario_noise_seed(1, 0.01, 0));
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(noise_sweep(small, {}, 1), InvalidArgument);
    CHECK_THROWS_AS(noise_sweep(small, {0.1}, 0), InvalidArgument);
    CHECK_THROWS_AS(noise_sweep(small, {-0.1}, 1), InvalidArgument);
  }
}
