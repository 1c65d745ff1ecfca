#include <catch2/catch_amalgamated.hpp>

#include <dkp/scattering.hpp>

#include <cmath>
#include <complex>
#include <cstdlib>
#include <random>
#include <vector>

#include "reference_values.hpp"
#include "test_util.hpp"

using dkp::Complex;
using dkp::CuspPotential;
using dkp::errc;
using dkp::Error;
using dkp::PotentialKind;
using testutil::rel;
using testutil::sym_rel;
namespace ref = dkp::testref;

namespace {

constexpr Complex kI{0.0, 1.0};
const CuspPotential kBarrier{0.6, 4.0, PotentialKind::barrier};
const CuspPotential kWell{0.6, 4.0, PotentialKind::well};

Complex whit(Complex kappa, Complex mu, Complex z) {
  return dkp::whittaker_m(dkp::WhittakerParams(kappa, mu, z)).value;
}

// Closed-form matching coefficients, written out directly from the eliminated
// 2x2 system. An independent route to c2, c3: any transcription slip in either
// path shows up as a mismatch against the solver.
std::pair<Complex, Complex> closed_form_coefficients(double a, double v0, double e) {
  const auto sp = dkp::scatter_params({e}, CuspPotential{a, v0, PotentialKind::barrier});
  const Complex kappa = sp.kappa, mu = sp.mu;
  const Complex u = 2.0 * kI * a * v0;
  const Complex mp = whit(kappa, mu, u);
  const Complex mm = whit(kappa, -mu, u);
  const Complex mp1 = whit(kappa, mu + 1.0, u);
  const Complex m1m = whit(kappa, 1.0 - mu, u);

  const Complex n1 =
      8.0 * (1.0 - 2.0 * mu) * (1.0 - 2.0 * mu) * (mu - 1.0) *
      (a * v0 * (4.0 * kappa * kappa - (2.0 * mu + 1.0) * (2.0 * mu + 1.0)) * mp1 +
       4.0 * (mu + 1.0) * (2.0 * mu + 1.0) * (2.0 * a * kappa * v0 + kI * mu * (2.0 * mu + 1.0)) *
           mp);
  const Complex d1 =
      (mu + 1.0) * (2.0 * mu + 1.0) * (2.0 * mu + 1.0) *
      (a * v0 * (4.0 * kappa * kappa - (1.0 - 2.0 * mu) * (1.0 - 2.0 * mu)) * m1m +
       4.0 * (mu - 1.0) * (2.0 * mu - 1.0) * (2.0 * a * kappa * v0 + kI * mu * (2.0 * mu - 1.0)) *
           mm);
  const Complex c2 = (n1 / d1 - 8.0 * mp / mm) / 16.0;

  const Complex n2 =
      (mu - 1.0) * (1.0 - 2.0 * mu) * (1.0 - 2.0 * mu) *
      (4.0 * (mu + 1.0) * (2.0 * mu + 1.0) * (-2.0 * kI * a * kappa * v0 + 2.0 * mu * mu + mu) *
           mp -
       kI * a * v0 * (4.0 * kappa * kappa - (2.0 * mu + 1.0) * (2.0 * mu + 1.0)) * mp1);
  const Complex d2 =
      (mu + 1.0) * (2.0 * mu + 1.0) * (2.0 * mu + 1.0) *
      (4.0 * (mu - 1.0) * (2.0 * mu - 1.0) * (mu * (2.0 * mu - 1.0) - 2.0 * kI * a * kappa * v0) *
           mm -
       kI * a * v0 * (4.0 * kappa * kappa - 4.0 * mu * mu + 4.0 * mu - 1.0) * m1m);
  const Complex c3 = (n2 / d2 + mp / mm) / 2.0;
  return {c2, c3};
}

}  // namespace

TEST_CASE("matching solution matches the frozen references", "[scattering]") {
  auto ms = dkp::solve_matching({2.0}, kBarrier);
  CHECK(rel(ms.c2_over_c1, ref::kMatchC2) < 5e-13);
  CHECK(rel(ms.c3_over_c1, ref::kMatchC3) < 5e-13);
  CHECK(ms.residual <= 1e-9);

  auto rt = dkp::reflection_transmission({2.0}, kBarrier);
  CHECK(rel(rt.r, ref::kMatchR) < 1e-13);
  CHECK(rel(rt.t, ref::kMatchT) < 1e-13);
  CHECK(std::abs(rt.r + rt.t - 1.0) < 1e-14);
}

TEST_CASE("matching coefficients agree with the closed forms", "[scattering]") {
  struct Point {
    double a, v0, e;
  };
  for (auto [a, v0, e] : {Point{0.6, 4.0, 2.0}, {0.4, 3.0, 1.7}, {0.8, 2.0, -2.3}}) {
    auto ms = dkp::solve_matching({e}, CuspPotential{a, v0, PotentialKind::barrier});
    auto [c2, c3] = closed_form_coefficients(a, v0, e);
    INFO("a=" << a << " v0=" << v0 << " e=" << e);
    CHECK(rel(ms.c2_over_c1, c2) < 1e-8);
    CHECK(rel(ms.c3_over_c1, c3) < 1e-8);
  }
}

TEST_CASE("well and negative-energy references, charge conjugation", "[scattering]") {
  auto wrt = dkp::reflection_transmission({2.0}, kWell);
  CHECK(rel(wrt.r, ref::kMatchWellR) < 1e-13);
  CHECK(rel(wrt.t, ref::kMatchWellT) < 1e-13);

  auto nrt = dkp::reflection_transmission({-2.0}, kBarrier);
  CHECK(rel(nrt.r, ref::kMatchNegER) < 1e-13);
  CHECK(rel(nrt.t, ref::kMatchNegET) < 1e-13);

  // charge conjugation pairs the well at E with the barrier at -E
  CHECK(ref::kMatchWellR == ref::kMatchNegER);
  for (double e : {1.3, 2.6, -4.1}) {
    auto lhs = dkp::reflection_transmission({e}, kWell);
    auto rhs = dkp::reflection_transmission({-e}, kBarrier);
    INFO("e=" << e);
    CHECK(rel(lhs.r, rhs.r) < 1e-12);
    CHECK(rel(lhs.t, rhs.t) < 1e-12);
  }

  auto hrt = dkp::reflection_transmission({5.0}, kBarrier);
  CHECK(rel(hrt.r, ref::kMatchHighER) < 1e-13);
  CHECK(rel(hrt.t, ref::kMatchHighET) < 1e-13);
  CHECK(dkp::reflection_transmission({10.0}, kBarrier).t > 0.99);
}

TEST_CASE("weak barrier is transparent", "[scattering]") {
  auto rt = dkp::reflection_transmission({2.0}, CuspPotential{0.6, 1e-6, PotentialKind::barrier});
  CHECK(rt.t >= 1.0 - 1e-9);
  CHECK(rt.r <= 1e-9);
}

TEST_CASE("unitarity holds across random parameter draws", "[scattering]") {
  std::mt19937 rng(424242u);
  std::uniform_real_distribution<double> ua(0.2, 1.0);
  std::uniform_real_distribution<double> uu(0.0, 1.0);
  std::uniform_real_distribution<double> ue(1.05, 8.0);
  for (int i = 0; i < 500; ++i) {
    const double a = ua(rng);
    const double v0 = 0.5 + (std::min(10.0, 29.5 / (2.0 * a)) - 0.5) * uu(rng);
    const double e = (uu(rng) < 0.5 ? -1.0 : 1.0) * ue(rng);
    const auto kind = uu(rng) < 0.5 ? PotentialKind::barrier : PotentialKind::well;
    const CuspPotential pot{a, v0, kind};
    auto rt = dkp::reflection_transmission({e}, pot);
    INFO("a=" << a << " v0=" << v0 << " e=" << e
              << " kind=" << (kind == PotentialKind::barrier ? "barrier" : "well"));
    CHECK(std::abs(rt.r + rt.t - 1.0) <= 1e-8);
    CHECK(rt.matching.residual <= 1e-9);
    CHECK(rt.r >= 0.0);
    CHECK(rt.t >= 0.0);
  }
}

TEST_CASE("moduli are branch-consistent under an alternative power route", "[scattering]") {
  for (double e : {1.6, 2.0, -3.2}) {
    auto ms = dkp::solve_matching({e}, kBarrier);
    auto sp = dkp::scatter_params({e}, kBarrier);
    const Complex u0 = 2.0 * kI * kBarrier.a * kBarrier.signed_strength();
    const Complex scale = std::pow(u0, -sp.mu) / std::pow(u0, sp.mu);
    auto rt = dkp::reflection_transmission({e}, kBarrier);
    CHECK(rel(std::norm(ms.c2_over_c1 * scale), rt.r) < 1e-12);
    CHECK(rel(std::norm(ms.c3_over_c1 * scale), rt.t) < 1e-12);
  }
}

TEST_CASE("energy sweep grid, isolation, and determinism", "[scattering]") {
  auto sweep = dkp::sweep_energy(kBarrier, 1.5, 3.0, 5);
  REQUIRE(sweep.size() == 5);
  for (int i = 0; i < 5; ++i) {
    CHECK(sweep[i].param == 1.5 + 1.5 * i / 4.0);
    CHECK(sweep[i].status == "ok");
    CHECK(sweep[i].unitarity_defect <= 1e-8);
  }

  // a Klein-border point fails alone; its neighbours still compute
  auto mixed = dkp::sweep_energy(kBarrier, 0.999999999, 2.0, 3);
  REQUIRE(mixed.size() == 3);
  CHECK(mixed[0].status == "klein_border");
  CHECK(std::isnan(mixed[0].r));
  CHECK(mixed[1].status == "ok");
  CHECK(mixed[2].status == "ok");
  CHECK(rel(mixed[2].r, ref::kMatchR) < 1e-13);

  // identical output bit for bit, also when forced onto several threads
  auto again = dkp::sweep_energy(kBarrier, 1.5, 3.0, 5);
  setenv("DKP_THREADS", "3", 1);
  auto threaded = dkp::sweep_energy(kBarrier, 1.5, 3.0, 5);
  unsetenv("DKP_THREADS");
  for (int i = 0; i < 5; ++i) {
    CHECK(sweep[i].r == again[i].r);
    CHECK(sweep[i].t == again[i].t);
    CHECK(sweep[i].r == threaded[i].r);
    CHECK(sweep[i].t == threaded[i].t);
  }

  CHECK_THROWS_MATCHES(dkp::sweep_energy(kBarrier, 1.5, 3.0, 1), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == errc::empty_grid; }));
  CHECK_THROWS_MATCHES(dkp::sweep_energy(kBarrier, 3.0, 1.5, 4), Error,
                       Catch::Matchers::Predicate<Error>(
                           [](const Error& e) { return e.code() == errc::invalid_argument; }));
}

TEST_CASE("resonance scan finds and refines the transmission peaks", "[scattering]") {
  const double a = 2.0 / 3.0;
  auto scan = dkp::scan_resonances_vs_strength(a, {2.0}, 10.0, 18.0, 400);
  REQUIRE(scan.samples.size() == 400);
  REQUIRE(scan.peaks.size() == 3);
  // interior subset of the frozen peak ladder for this shape parameter
  CHECK(std::abs(scan.peaks[0] - ref::kPeaksShapeTwoThirds[2]) < 5e-4);
  CHECK(std::abs(scan.peaks[1] - ref::kPeaksShapeTwoThirds[3]) < 5e-4);
  CHECK(std::abs(scan.peaks[2] - ref::kPeaksShapeTwoThirds[4]) < 5e-4);
  for (double t : scan.peak_t) CHECK(t >= 1.0 - 1e-3);
  REQUIRE(scan.spacings.size() == 2);
  CHECK(std::abs(scan.spacings[0] -
                 (ref::kPeaksShapeTwoThirds[3] - ref::kPeaksShapeTwoThirds[2])) < 1e-3);
  CHECK(std::abs(scan.spacings[1] -
                 (ref::kPeaksShapeTwoThirds[4] - ref::kPeaksShapeTwoThirds[3])) < 1e-3);
}

TEST_CASE("resonance scan edge cases", "[scattering]") {
  // window below the first peak: nothing to report
  auto empty = dkp::scan_resonances_vs_strength(2.0 / 3.0, {2.0}, 1.0, 3.0, 50);
  CHECK(empty.peaks.empty());
  CHECK(empty.spacings.empty());

  // strengths beyond the validated argument range fail point by point
  auto mixed = dkp::scan_resonances_vs_strength(2.0 / 3.0, {2.0}, 20.0, 24.0, 9);
  int ok = 0, too_large = 0;
  for (const auto& s : mixed.samples) {
    if (s.status == "ok") ++ok;
    if (s.status == "domain_too_large") ++too_large;
  }
  CHECK(ok == 6);
  CHECK(too_large == 3);

  CHECK_THROWS_AS(dkp::scan_resonances_vs_strength(2.0 / 3.0, {2.0}, 10.0, 18.0, 1), Error);
  CHECK_THROWS_AS(dkp::scan_resonances_vs_strength(2.0 / 3.0, {2.0}, -1.0, 18.0, 50), Error);
}
