#include "gfc/transfer_function.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>

#include "gfc/errors.hpp"

namespace gfc {

namespace {

void check_same_time(const TransferFunction& a, const TransferFunction& b) {
  const double ta = a.sample_time();
  const double tb = b.sample_time();
  if (ta == tb) return;
  if (std::abs(ta - tb) <= 1e-12 * std::max(std::abs(ta), std::abs(tb))) return;
  throw DomainError("sample-time mismatch: " + std::to_string(ta) + " vs " + std::to_string(tb));
}

}  // namespace

TransferFunction::TransferFunction(Polynomial num, Polynomial den, double sample_time)
    : num_(std::move(num)), den_(std::move(den)), ts_(sample_time) {
  if (den_.is_zero()) throw DomainError("transfer function denominator is zero");
  if (ts_ < 0.0 || !std::isfinite(ts_)) throw DomainError("invalid sample time");
  // Canonical form: monic denominator. Divide rather than multiply by the
  // reciprocal so the leading coefficient lands on 1.0 exactly.
  const double lead = den_.leading();
  if (lead != 1.0) {
    auto scale = [lead](const Polynomial& p) {
      std::vector<double> c = p.coeffs();
      for (double& v : c) v /= lead;
      return Polynomial(std::move(c));
    };
    num_ = scale(num_);
    den_ = scale(den_);
  }
}

TransferFunction TransferFunction::constant(double value, double sample_time) {
  return TransferFunction(Polynomial({value}), Polynomial::one(), sample_time);
}

double TransferFunction::dc_gain() const {
  const double d = den_.eval(1.0);
  if (d == 0.0) throw DomainError("dc gain undefined: den(1) = 0");
  return num_.eval(1.0) / d;
}

std::complex<double> TransferFunction::eval(std::complex<double> z) const {
  return num_.eval(z) / den_.eval(z);
}

std::vector<std::complex<double>> TransferFunction::poles() const {
  if (den_.degree() < 1) return {};
  return den_.roots();
}

std::vector<std::complex<double>> TransferFunction::zeros() const {
  if (num_.is_zero() || num_.degree() < 1) return {};
  return num_.roots();
}

TransferFunction TransferFunction::minreal(double tol) const {
  if (tol <= 0.0) throw DomainError("minreal tolerance must be positive");
  if (num_.is_zero()) return TransferFunction(Polynomial::zero(), Polynomial::one(), ts_);
  if (num_.degree() < 1 || den_.degree() < 1) return *this;

  std::vector<std::complex<double>> zs = num_.roots();
  std::vector<std::complex<double>> ps = den_.roots();

  // Greedy nearest-pair cancellation.
  bool cancelled_any = false;
  while (!zs.empty() && !ps.empty()) {
    double best = tol;
    std::size_t bi = 0, bj = 0;
    bool found = false;
    for (std::size_t i = 0; i < zs.size(); ++i) {
      for (std::size_t j = 0; j < ps.size(); ++j) {
        const double d = std::abs(zs[i] - ps[j]);
        if (d <= best) {
          best = d;
          bi = i;
          bj = j;
          found = true;
        }
      }
    }
    if (!found) break;
    zs.erase(zs.begin() + static_cast<long>(bi));
    ps.erase(ps.begin() + static_cast<long>(bj));
    cancelled_any = true;
  }
  if (!cancelled_any) return *this;

  Polynomial n = Polynomial::from_roots(zs, num_.leading());
  Polynomial d = Polynomial::from_roots(ps, den_.leading());
  return TransferFunction(std::move(n), std::move(d), ts_);
}

TransferFunction TransferFunction::inverse() const {
  if (num_.is_zero()) throw DomainError("cannot invert a zero transfer function");
  return TransferFunction(den_, num_, ts_);
}

TransferFunction operator+(const TransferFunction& a, const TransferFunction& b) {
  check_same_time(a, b);
  Polynomial n = a.num_ * b.den_ + b.num_ * a.den_;
  Polynomial d = a.den_ * b.den_;
  return TransferFunction(std::move(n), std::move(d), a.ts_).minreal();
}

TransferFunction operator-(const TransferFunction& a, const TransferFunction& b) {
  return a + (-b);
}

TransferFunction operator*(const TransferFunction& a, const TransferFunction& b) {
  check_same_time(a, b);
  if (a.num_.is_zero() || b.num_.is_zero())
    return TransferFunction(Polynomial::zero(), Polynomial::one(), a.ts_);
  return TransferFunction(a.num_ * b.num_, a.den_ * b.den_, a.ts_).minreal();
}

TransferFunction operator/(const TransferFunction& a, const TransferFunction& b) {
  check_same_time(a, b);
  return a * b.inverse();
}

TransferFunction operator*(double s, const TransferFunction& g) {
  return TransferFunction(s * g.num_, g.den_, g.ts_);
}

TransferFunction TransferFunction::operator-() const {
  return TransferFunction(-num_, den_, ts_);
}

TransferFunction feedback(const TransferFunction& g, const TransferFunction& h) {
  check_same_time(g, h);
  Polynomial n = g.num() * h.den();
  Polynomial d = g.den() * h.den() + g.num() * h.num();
  if (d.is_zero()) throw DomainError("algebraic loop: 1 + g*h is identically zero");
  return TransferFunction(std::move(n), std::move(d), g.sample_time()).minreal();
}

StabilityReport stability(const TransferFunction& g, double margin) {
  if (g.is_continuous()) throw DomainError("stability check requires a discrete-time system");
  StabilityReport report;
  report.stable = true;
  for (const auto& p : g.minreal().poles()) {
    const double mag = std::abs(p);
    report.poles.push_back({p, mag});
    if (mag >= 1.0 - margin) report.stable = false;
  }
  return report;
}

bool is_stable(const TransferFunction& g, double margin) {
  return stability(g, margin).stable;
}

std::vector<std::complex<double>> freq_response(const TransferFunction& g,
                                                std::span<const double> omegas) {
  if (g.is_continuous()) throw DomainError("frequency response requires a discrete-time system");
  const double nyquist = std::numbers::pi / g.sample_time();
  std::vector<std::complex<double>> out;
  out.reserve(omegas.size());
  for (double w : omegas) {
    if (w < 0.0 || w > nyquist * (1.0 + 1e-12))
      throw DomainError("frequency " + std::to_string(w) + " rad/s beyond Nyquist " +
                        std::to_string(nyquist));
    out.push_back(g.eval(std::polar(1.0, w * g.sample_time())));
  }
  return out;
}

std::vector<double> probe_frequencies(double sample_time, int count) {
  const double nyquist = std::numbers::pi / sample_time;
  std::vector<double> w{0.0};
  const double lo = std::log(nyquist * 1e-3);
  const double hi = std::log(nyquist);
  for (int i = 0; i < count; ++i)
    w.push_back(std::exp(lo + (hi - lo) * i / static_cast<double>(count - 1)));
  return w;
}

double max_relative_response_error(const TransferFunction& a, const TransferFunction& b,
                                   std::span<const double> omegas) {
  const auto ra = freq_response(a, omegas);
  const auto rb = freq_response(b, omegas);
  double maxb = 0.0;
  for (const auto& v : rb) maxb = std::max(maxb, std::abs(v));
  if (maxb == 0.0) maxb = 1.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < ra.size(); ++i) {
    const double denom = std::max(std::abs(rb[i]), 1e-12 * maxb);
    worst = std::max(worst, std::abs(ra[i] - rb[i]) / denom);
  }
  return worst;
}

std::string TransferFunction::to_string() const {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", ts_);
  return "num: " + num_.to_string() + " / den: " + den_.to_string() + " / Ts: " + buf;
}

TransferFunction TransferFunction::parse(const std::string& text) {
  const auto num_pos = text.find("num:");
  const auto den_pos = text.find("/ den:");
  const auto ts_pos = text.find("/ Ts:");
  if (num_pos == std::string::npos || den_pos == std::string::npos || ts_pos == std::string::npos)
    throw DataError("malformed transfer-function text: " + text);

  auto parse_coeffs = [](const std::string& s) {
    std::istringstream in(s);
    std::vector<double> c;
    double v;
    while (in >> v) c.push_back(v);
    if (c.empty()) throw DataError("empty coefficient list in transfer-function text");
    return c;
  };
  Polynomial num(parse_coeffs(text.substr(num_pos + 4, den_pos - num_pos - 4)));
  Polynomial den(parse_coeffs(text.substr(den_pos + 6, ts_pos - den_pos - 6)));
  const double ts = std::stod(text.substr(ts_pos + 5));
  return TransferFunction(std::move(num), std::move(den), ts);
}

}  // namespace gfc
