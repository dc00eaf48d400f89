#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>

#include "zeroscope/gaf.hpp"

using namespace zeroscope;

TEST_CASE("truncation degree table") {
  CHECK(gaf_truncation_degree(3.0) == 73);
  CHECK(gaf_truncation_degree(5.0) == 148);
  CHECK(gaf_truncation_degree(6.0) == 196);
  CHECK(gaf_truncation_degree(6.5) == 221);
  CHECK(gaf_truncation_degree(8.0) == 309);
  CHECK(gaf_truncation_degree(10.5) == 485);
  CHECK_THROWS_AS(gaf_truncation_degree(0.4), ValidationError);
  CHECK_THROWS_AS(gaf_truncation_degree(17.0), ValidationError);
}

TEST_CASE("sampling is reproducible and kind-aware") {
  const auto p1 = sample_gaf(GafKind::Planar, 3.0, 7);
  const auto p2 = sample_gaf(GafKind::Planar, 3.0, 7);
  const auto p3 = sample_gaf(GafKind::Planar, 3.0, 8);
  REQUIRE(p1.coeffs.size() == gaf_truncation_degree(3.0) + 1);
  CHECK(p1.coeffs == p2.coeffs);
  CHECK(p1.coeffs != p3.coeffs);
  CHECK(p1.R == 3.0);

  bool any_imag = false;
  for (const auto& c : p1.coeffs) any_imag = any_imag || c.imag() != 0.0;
  CHECK(any_imag);

  const auto s = sample_gaf(GafKind::Symmetric, 3.0, 7);
  for (const auto& c : s.coeffs) CHECK(c.imag() == 0.0);
}

TEST_CASE("coefficient variances carry the entire-function weights") {
  // var c_k = pi^k / k!; average over seeds at k = 2 within a loose band
  const int trials = 4000;
  double acc = 0.0;
  for (int seed = 1; seed <= trials; ++seed) {
    const auto g = sample_gaf(GafKind::Planar, 1.0, seed);
    acc += std::norm(g.coeffs[2]);
  }
  acc /= trials;
  const double want = kPi * kPi / 2.0;
  CHECK(acc == doctest::Approx(want).epsilon(0.1));
}

TEST_CASE("scaled evaluation") {
  const auto g = sample_gaf(GafKind::Planar, 3.0, 5);
  const std::complex<double> z{1.0, -0.5};
  const auto [p, dp] = eval_series(g, z);
  const auto scaled = eval_scaled(g, z);
  const double w = std::exp(-0.5 * kPi * std::norm(z));
  CHECK(std::abs(scaled - w * p) <= 1e-12 * std::abs(p));
  CHECK_THROWS_AS(eval_scaled(g, {3.1, 0.0}), OutOfSafeRegion);

  // derivative against a central difference
  const std::complex<double> h{1e-6, 0.0};
  const auto fd = (eval_series(g, z + h).first - eval_series(g, z - h).first) / (2.0 * h);
  CHECK(std::abs(fd - dp) <= 1e-4 * std::abs(dp));
}

TEST_CASE("regions") {
  const auto d = Region::disk(1.0, 0.0, 0.5);
  CHECK(d.contains(1.0, 0.2));
  CHECK_FALSE(d.contains(1.0, 0.5));
  CHECK_FALSE(d.contains(1.6, 0.0));
  const auto db = d.bounds();
  CHECK(db.u0 == doctest::Approx(0.5));
  CHECK(db.u1 == doctest::Approx(1.5));

  const auto r = Region::rectangle({-1.0, 1.0, -0.5, 0.5});
  CHECK(r.contains(0.0, 0.0));
  CHECK_FALSE(r.contains(1.0, 0.0));
  CHECK(r.bounds().v1 == 0.5);
}

TEST_CASE("zero finding agrees with the argument principle") {
  const auto g = sample_gaf(GafKind::Planar, 3.0, 11);
  const auto region = Region::disk(0.0, 0.0, 2.0);
  const auto zeros = find_zeros(g, region);
  const auto n = winding_count(g, region);
  CHECK(static_cast<long long>(zeros.size()) == n);
  // intensity 1 per unit area: expect around pi * 4 zeros
  CHECK(n > 3);
  CHECK(n < 30);
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    CHECK(region.contains(zeros.u[i], zeros.v[i]));
    // the Gaussian-weighted value has flat unit scale, so the residual is
    // meaningful everywhere in the disk
    CHECK(std::abs(eval_scaled(g, {zeros.u[i], zeros.v[i]})) < 1e-8);
  }
  // no duplicates
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    for (std::size_t j = i + 1; j < zeros.size(); ++j) {
      const double du = zeros.u[i] - zeros.u[j];
      const double dv = zeros.v[i] - zeros.v[j];
      CHECK(std::hypot(du, dv) > 1e-6);
    }
  }

  const auto rect = Region::rectangle({-1.5, 1.5, -1.0, 1.0});
  const auto rz = find_zeros(g, rect);
  CHECK(static_cast<long long>(rz.size()) == winding_count(g, rect));
}

TEST_CASE("zero sets of symmetric fields are conjugate-symmetric") {
  const auto g = sample_gaf(GafKind::Symmetric, 3.0, 19);
  const auto zeros = find_zeros(g, Region::disk(0.0, 0.0, 2.0));
  for (std::size_t i = 0; i < zeros.size(); ++i) {
    if (std::fabs(zeros.v[i]) < 1e-9) continue;
    bool mirrored = false;
    for (std::size_t j = 0; j < zeros.size(); ++j) {
      if (std::fabs(zeros.u[j] - zeros.u[i]) < 1e-6 &&
          std::fabs(zeros.v[j] + zeros.v[i]) < 1e-6) {
        mirrored = true;
      }
    }
    CHECK(mirrored);
  }
}

TEST_CASE("margin enforcement") {
  const auto g = sample_gaf(GafKind::Planar, 3.0, 11);
  CHECK_THROWS_AS(find_zeros(g, Region::disk(0.0, 0.0, 2.6)), OutOfSafeRegion);
  CHECK_THROWS_AS(find_zeros(g, Region::rectangle({0.0, 2.6, 0.0, 1.0})), OutOfSafeRegion);
  CHECK_THROWS_AS(winding_count(g, Region::disk(2.0, 0.0, 1.0)), OutOfSafeRegion);
  CHECK_THROWS_AS(find_zeros(g, Region::disk(0.0, 0.0, 1.0), 0.3), ValidationError);
  CHECK_THROWS_AS(find_zeros(g, Region::disk(0.0, 0.0, 1.0), 0.0), ValidationError);
}

TEST_CASE("real zeros of a symmetric field") {
  const auto g = sample_gaf(GafKind::Symmetric, 5.0, 23);
  const auto xs = real_zeros(g, -4.0, 4.0);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    CHECK(std::abs(eval_scaled(g, {xs[i], 0.0})) < 1e-8);
    if (i > 0) CHECK(xs[i] > xs[i - 1]);
  }
  // around 1/sqrt(pi) zeros per unit length, so a few on this segment
  CHECK(xs.size() >= 1);
  CHECK(xs.size() <= 12);

  // the real zeros also appear in a planar zero search around the axis
  const auto band = find_zeros(g, Region::rectangle({-2.0, 2.0, -0.3, 0.3}), 0.05);
  for (double x : real_zeros(g, -2.0, 2.0)) {
    bool found = false;
    for (std::size_t j = 0; j < band.size(); ++j) {
      if (std::fabs(band.u[j] - x) < 1e-6 && std::fabs(band.v[j]) < 1e-6) found = true;
    }
    CHECK(found);
  }

  CHECK(real_zeros(g, 1.0, 1.0).empty());
  CHECK_THROWS_AS(real_zeros(g, 2.0, 1.0), ValidationError);
  CHECK_THROWS_AS(real_zeros(g, -5.0, 0.0), OutOfSafeRegion);
  const auto p = sample_gaf(GafKind::Planar, 5.0, 23);
  CHECK_THROWS_AS(real_zeros(p, -1.0, 1.0), ValidationError);
}
