#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "gfc/errors.hpp"
#include "gfc/reference.hpp"
#include "gfc/transfer_function.hpp"
#include "test_util.hpp"

using gfc::DomainError;
using gfc::Polynomial;
using gfc::TransferFunction;

namespace {

constexpr double kTs = 0.0568;

TransferFunction random_tf(std::mt19937_64& rng, int num_deg, int den_deg) {
  return TransferFunction(Polynomial(gfc::testing::random_coeffs(rng, num_deg)),
                          Polynomial(gfc::testing::random_coeffs(rng, den_deg)), kTs);
}

}  // namespace

TEST_CASE("denominator is stored monic") {
  const TransferFunction g(Polynomial({4.0, 2.0}), Polynomial({2.0, 1.0}), kTs);
  CHECK(g.den().coeffs() == std::vector<double>{1.0, 0.5});
  CHECK(g.num().coeffs() == std::vector<double>{2.0, 1.0});
  CHECK(g.sample_time() == kTs);
}

TEST_CASE("constructor rejects bad input") {
  CHECK_THROWS_AS(TransferFunction(Polynomial::one(), Polynomial::zero(), kTs), DomainError);
  CHECK_THROWS_AS(TransferFunction(Polynomial::one(), Polynomial::one(), -1.0), DomainError);
}

TEST_CASE("dc gain, poles and zeros of the grasp plant") {
  const auto p = gfc::reference::plant();
  // Independent closed forms from the printed coefficients.
  CHECK(p.dc_gain() ==
        doctest::Approx((0.7902 + 0.6208) / (1.0 - 0.9748 + 0.3442)).epsilon(1e-14));

  auto poles = p.poles();
  REQUIRE(poles.size() == 2);
  const double re = 0.9748 / 2.0;
  const double im = std::sqrt(4.0 * 0.3442 - 0.9748 * 0.9748) / 2.0;
  std::sort(poles.begin(), poles.end(), [](auto a, auto b) { return a.imag() < b.imag(); });
  CHECK(std::abs(poles[1] - std::complex<double>(re, im)) < 1e-12);
  CHECK(std::abs(poles[0]) == doctest::Approx(std::sqrt(0.3442)).epsilon(1e-12));

  const auto zeros = p.zeros();
  REQUIRE(zeros.size() == 1);
  CHECK(zeros[0].real() == doctest::Approx(-0.6208 / 0.7902).epsilon(1e-12));
}

TEST_CASE("relative degree and properness") {
  CHECK(gfc::reference::plant().relative_degree() == 1);
  CHECK(gfc::reference::plant().is_proper());
  const TransferFunction improper(Polynomial({1.0, 0.0, 0.0}), Polynomial({1.0, 0.5}), kTs);
  CHECK(improper.relative_degree() == -1);
  CHECK_FALSE(improper.is_proper());
  CHECK(TransferFunction::constant(3.0, kTs).relative_degree() == 0);
}

TEST_CASE("minreal cancels a constructed common factor") {
  const Polynomial common({1.0, -0.5});
  const TransferFunction raw(common * Polynomial({1.0, -0.3}), common * Polynomial({1.0, -0.2}),
                             kTs);
  const TransferFunction reduced = raw.minreal();
  CHECK(reduced.num().degree() == 1);
  CHECK(reduced.den().degree() == 1);
  const TransferFunction expected(Polynomial({1.0, -0.3}), Polynomial({1.0, -0.2}), kTs);
  const auto omegas = gfc::probe_frequencies(kTs);
  CHECK(gfc::max_relative_response_error(reduced, expected, omegas) < 1e-9);
}

TEST_CASE("minreal leaves coprime factors alone") {
  const auto p = gfc::reference::plant();
  const auto reduced = p.minreal();
  CHECK(reduced.num().coeffs() == p.num().coeffs());
  CHECK(reduced.den().coeffs() == p.den().coeffs());
}

TEST_CASE("arithmetic operators agree with pointwise complex arithmetic") {
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 40; ++trial) {
    const auto a = random_tf(rng, 1 + trial % 2, 2);
    const auto b = random_tf(rng, 1, 2 - trial % 2);
    // Probe on the unit circle away from likely poles.
    const std::complex<double> z = std::polar(1.0, 0.3 + 0.05 * trial);
    const auto za = a.eval(z);
    const auto zb = b.eval(z);
    CHECK(std::abs((a + b).eval(z) - (za + zb)) < 1e-9 * (1.0 + std::abs(za + zb)));
    CHECK(std::abs((a - b).eval(z) - (za - zb)) < 1e-9 * (1.0 + std::abs(za - zb)));
    CHECK(std::abs((a * b).eval(z) - za * zb) < 1e-9 * (1.0 + std::abs(za * zb)));
    if (std::abs(zb) > 1e-6)
      CHECK(std::abs((a / b).eval(z) - za / zb) < 1e-8 * (1.0 + std::abs(za / zb)));
    CHECK(std::abs((-a).eval(z) + za) < 1e-12);
    CHECK(std::abs((3.0 * a).eval(z) - 3.0 * za) < 1e-12 * (1.0 + std::abs(za)));
  }
}

TEST_CASE("mixed sample times are rejected") {
  const auto a = TransferFunction::constant(1.0, 0.1);
  const auto b = TransferFunction::constant(1.0, 0.2);
  CHECK_THROWS_AS(a + b, DomainError);
  CHECK_THROWS_AS(a * b, DomainError);
}

TEST_CASE("inverse multiplies back to unity") {
  const auto p = gfc::reference::plant();
  const auto unity = (p * p.inverse()).minreal();
  const auto omegas = gfc::probe_frequencies(kTs);
  for (const auto& v : gfc::freq_response(unity, omegas))
    CHECK(std::abs(v - 1.0) < 1e-9);
}

TEST_CASE("feedback matches the pointwise formula g/(1+gh)") {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 25; ++trial) {
    const auto g = random_tf(rng, 1, 2);
    const auto h = random_tf(rng, 0, 1);
    const auto closed = gfc::feedback(g, h);
    for (double theta : {0.2, 0.9, 2.4}) {
      const std::complex<double> z = std::polar(1.0, theta);
      const auto zg = g.eval(z);
      const auto zh = h.eval(z);
      if (std::abs(1.0 + zg * zh) < 1e-3) continue;  // near a closed-loop pole
      const auto expected = zg / (1.0 + zg * zh);
      CHECK(std::abs(closed.eval(z) - expected) < 1e-8 * (1.0 + std::abs(expected)));
    }
  }
}

TEST_CASE("stability classifies poles against the unit circle") {
  CHECK(gfc::is_stable(gfc::reference::plant()));
  const TransferFunction unstable(Polynomial::one(), Polynomial({1.0, -1.05}), kTs);
  CHECK_FALSE(gfc::is_stable(unstable));
  // A pole exactly on the circle fails the strict margin.
  const TransferFunction marginal(Polynomial::one(), Polynomial({1.0, -1.0}), kTs);
  CHECK_FALSE(gfc::is_stable(marginal));

  const auto report = gfc::stability(gfc::reference::plant());
  CHECK(report.stable);
  REQUIRE(report.poles.size() == 2);
  for (const auto& p : report.poles)
    CHECK(p.magnitude == doctest::Approx(std::sqrt(0.3442)).epsilon(1e-9));
}

TEST_CASE("frequency response is the unit-circle evaluation") {
  const auto p = gfc::reference::plant();
  const double w = 3.0;
  const auto resp = gfc::freq_response(p, std::vector<double>{w});
  const auto expected = p.eval(std::polar(1.0, w * kTs));
  CHECK(std::abs(resp[0] - expected) < 1e-15);

  const double nyquist = std::numbers::pi / kTs;
  CHECK_THROWS_AS(gfc::freq_response(p, std::vector<double>{nyquist * 1.01}), DomainError);
}

TEST_CASE("probe frequencies span (0, Nyquist] plus dc") {
  const auto w = gfc::probe_frequencies(kTs);
  REQUIRE(w.size() == 51);
  CHECK(w.front() == 0.0);
  CHECK(w.back() == doctest::Approx(std::numbers::pi / kTs).epsilon(1e-12));
  CHECK(std::is_sorted(w.begin(), w.end()));
}

TEST_CASE("serialization round-trips bit-exactly") {
  std::mt19937_64 rng(707);
  for (int trial = 0; trial < 40; ++trial) {
    const auto g = random_tf(rng, trial % 4, 1 + trial % 4);
    const auto back = TransferFunction::parse(g.to_string());
    CHECK(back.num().coeffs() == g.num().coeffs());
    CHECK(back.den().coeffs() == g.den().coeffs());
    CHECK(back.sample_time() == g.sample_time());
    CHECK(back.to_string() == g.to_string());
  }
  CHECK_THROWS(TransferFunction::parse("not a transfer function"));
}
