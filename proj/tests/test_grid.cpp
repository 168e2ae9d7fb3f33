#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ifp/error.hpp"
#include "ifp/grid.hpp"
#include "oracles.hpp"

using namespace ifp;
using namespace ifp::testing;

TEST_CASE("fft_forward of a constant puts everything in DC") {
  const ImageGrid img(6, 5, 1.0, 2.5);
  const Spectrum s = fft_forward(img);
  CHECK(std::abs(s(0, 0) - std::complex<double>(2.5 * 30, 0)) < 1e-12);
  for (std::size_t i = 1; i < s.size(); ++i) CHECK(std::abs(s[i]) < 1e-12);
}

TEST_CASE("fft_forward of an impulse is all ones") {
  ImageGrid img(7, 4);
  img(0, 0) = 1.0;
  const Spectrum s = fft_forward(img);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(std::abs(s[i] - std::complex<double>(1, 0)) < 1e-14);
}

TEST_CASE("fft_forward matches the brute-force DFT") {
  std::mt19937_64 rng(7);
  for (auto [w, h] : {std::pair<std::size_t, std::size_t>{8, 8}, {5, 7}, {12, 9}}) {
    const ImageGrid img = random_grid(rng, w, h);
    const Spectrum fast = fft_forward(img);
    const Spectrum slow = brute_force_dft(img);
    for (std::size_t i = 0; i < fast.size(); ++i) CHECK(std::abs(fast[i] - slow[i]) < 1e-10);
  }
}

TEST_CASE("fft_inverse of all ones is an impulse") {
  const Spectrum s(5, 6, std::complex<double>(1.0, 0.0));
  const ImageGrid img = fft_inverse(s);
  CHECK(img(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  for (std::size_t i = 1; i < img.size(); ++i) CHECK(std::abs(img[i]) < 1e-14);
}

TEST_CASE("fft_inverse of a Hermitian spectrum is real") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> d;
  const std::size_t n = 8;
  Spectrum s(n, n);
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t u = 0; u < n; ++u) {
      const std::size_t cu = (n - u) % n;
      const std::size_t cv = (n - v) % n;
      if (v * n + u > cv * n + cu) continue;
      if (u == cu && v == cv) {
        s(u, v) = {d(rng), 0.0};
      } else {
        s(u, v) = {d(rng), d(rng)};
        s(cu, cv) = std::conj(s(u, v));
      }
    }
  }
  const Spectrum field = fft_inverse_complex(s);
  double peak = 0.0;
  double imag = 0.0;
  for (std::size_t i = 0; i < field.size(); ++i) {
    peak = std::max(peak, std::abs(field[i]));
    imag = std::max(imag, std::abs(field[i].imag()));
  }
  CHECK(imag < 1e-9 * peak);
  const ImageGrid img = fft_inverse(s);
  for (std::size_t i = 0; i < img.size(); ++i) CHECK(img[i] == field[i].real());
}

TEST_CASE("FFT properties over random sizes") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<std::size_t> size(1, 40);
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t w = size(rng);
    const std::size_t h = size(rng);
    const ImageGrid x = random_grid(rng, w, h, -5.0, 5.0);
    const ImageGrid y = random_grid(rng, w, h, -5.0, 5.0);
    const Spectrum fx = fft_forward(x);

    // Round trip.
    CHECK(max_abs_diff(fft_inverse(fx), x) <= 1e-10 * max_abs(x));

    // Parseval.
    double space = 0.0;
    double freq = 0.0;
    for (double v : x.samples()) space += v * v;
    for (auto v : fx.samples()) freq += std::norm(v);
    CHECK(std::abs(space - freq / static_cast<double>(w * h)) <= 1e-8 * space);

    // Linearity.
    const double a = coef(rng);
    const double b = coef(rng);
    ImageGrid combo(w, h);
    for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = a * x[i] + b * y[i];
    const Spectrum lhs = fft_forward(combo);
    const Spectrum fy = fft_forward(y);
    for (std::size_t i = 0; i < lhs.size(); ++i) CHECK(std::abs(lhs[i] - (a * fx[i] + b * fy[i])) <= 1e-10 * (1 + std::abs(lhs[i])));
  }
}

TEST_CASE("fft rejects non-finite input") {
  ImageGrid img(4, 4);
  img(1, 2) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(fft_forward(img), InvalidArgument);
  Spectrum s(4, 4);
  s(0, 1) = {std::numeric_limits<double>::infinity(), 0.0};
  CHECK_THROWS_AS(fft_inverse(s), InvalidArgument);
}

TEST_CASE("ImageGrid construction invariants") {
  CHECK_THROWS_AS(ImageGrid(0, 3), InvalidArgument);
  CHECK_THROWS_AS(ImageGrid(3, 3, 0.0), InvalidArgument);
  CHECK_THROWS_AS(ImageGrid(2, 2, 1.0, std::vector<double>{1, 2, 3}), InvalidArgument);
}

TEST_CASE("window_crop") {
  ImageGrid master(4, 4);
  for (std::size_t i = 0; i < master.size(); ++i) master[i] = static_cast<double>(i);

  SUBCASE("full-size crop at the origin is a copy") {
    CHECK(window_crop(master, {0, 0}, 4, 4) == master);
  }
  SUBCASE("central 2x2 block") {
    const ImageGrid w = window_crop(master, {1, 1}, 2, 2);
    CHECK(w(0, 0) == 5.0);
    CHECK(w(1, 0) == 6.0);
    CHECK(w(0, 1) == 9.0);
    CHECK(w(1, 1) == 10.0);
  }
  SUBCASE("out-of-range windows are rejected") {
    CHECK_THROWS_AS(window_crop(master, {3, 0}, 2, 2), OutOfRange);
    CHECK_THROWS_AS(window_crop(master, {-1, 0}, 2, 2), OutOfRange);
    CHECK_THROWS_AS(window_crop(master, {0, 0}, 5, 1), OutOfRange);
  }
}

TEST_CASE("windows 10 columns apart overlap outside a 10-pixel band") {
  std::mt19937_64 rng(5);
  const ImageGrid master = random_grid(rng, 60, 30);
  const ImageGrid a = window_crop(master, {5, 3}, 40, 20);
  const ImageGrid b = window_crop(master, {15, 3}, 40, 20);
  for (std::size_t y = 0; y < 20; ++y) {
    for (std::size_t x = 0; x + 10 < 40; ++x) CHECK(a(x + 10, y) == b(x, y));
  }
}

TEST_CASE("window_accumulate") {
  std::mt19937_64 rng(9);
  const ImageGrid master = random_grid(rng, 10, 8);

  SUBCASE("zero delta leaves the master unchanged") {
    CHECK(window_accumulate(master, {2, 3}, ImageGrid(4, 4)) == master);
  }
  SUBCASE("negated window zeroes it and nothing else") {
    ImageGrid neg = window_crop(master, {2, 3}, 4, 4);
    for (auto& v : neg.samples()) v = -v;
    const ImageGrid out = window_accumulate(master, {2, 3}, neg);
    for (std::size_t y = 0; y < 8; ++y) {
      for (std::size_t x = 0; x < 10; ++x) {
        const bool inside = x >= 2 && x < 6 && y >= 3 && y < 7;
        CHECK(out(x, y) == (inside ? 0.0 : master(x, y)));
      }
    }
  }
  SUBCASE("read after write returns window + delta") {
    for (int trial = 0; trial < 20; ++trial) {
      std::uniform_int_distribution<int> ox(0, 6), oy(0, 4);
      const ShiftVector offset{ox(rng), oy(rng)};
      const ImageGrid delta = random_grid(rng, 4, 4);
      const ImageGrid before = window_crop(master, offset, 4, 4);
      const ImageGrid after = window_crop(window_accumulate(master, offset, delta), offset, 4, 4);
      for (std::size_t i = 0; i < after.size(); ++i) CHECK(after[i] == before[i] + delta[i]);
    }
  }
  SUBCASE("errors") {
    CHECK_THROWS_AS(window_accumulate(master, {8, 0}, ImageGrid(4, 4)), OutOfRange);
  }
}

TEST_CASE("CanvasGeometry places shifted content") {
  const std::vector<ShiftVector> shifts{{-3, 2}, {4, -1}, {0, 0}};
  const auto g = CanvasGeometry::fit(10, 6, shifts);
  CHECK(g.canvas_width == 17);
  CHECK(g.canvas_height == 9);
  for (const auto& s : shifts) CHECK(g.contains(s));
  CHECK_FALSE(g.contains({5, 0}));

  // A feature on the canvas moves by +dx inside the window when the shift
  // grows by dx.
  ImageGrid canvas(g.canvas_width, g.canvas_height);
  canvas(8, 4) = 1.0;
  const ImageGrid w0 = window_crop(canvas, g.window_offset({0, 0}), 10, 6);
  const ImageGrid w1 = window_crop(canvas, g.window_offset({2, 1}), 10, 6);
  std::size_t x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  for (std::size_t y = 0; y < 6; ++y) {
    for (std::size_t x = 0; x < 10; ++x) {
      if (w0(x, y) == 1.0) { x0 = x; y0 = y; }
      if (w1(x, y) == 1.0) { x1 = x; y1 = y; }
    }
  }
  CHECK(x1 == x0 + 2);
  CHECK(y1 == y0 + 1);

  const auto c = CanvasGeometry::centered(10, 6, 30, 16);
  CHECK(c.window_offset({0, 0}) == ShiftVector{10, 5});
}
