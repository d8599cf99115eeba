#include "gfc/polynomial.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gfc/errors.hpp"

namespace gfc {

namespace {

// Relative threshold for trimming leading coefficients that are numerically
// zero after arithmetic.
constexpr double kTrimRel = 1e-12;

std::vector<double> trimmed(std::vector<double> c) {
  if (c.empty()) return {0.0};
  double maxabs = 0.0;
  for (double v : c) maxabs = std::max(maxabs, std::abs(v));
  if (maxabs == 0.0) return {0.0};
  std::size_t lead = 0;
  while (lead + 1 < c.size() && std::abs(c[lead]) <= kTrimRel * maxabs) ++lead;
  c.erase(c.begin(), c.begin() + static_cast<long>(lead));
  return c;
}

}  // namespace

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(trimmed(std::move(coeffs))) {
  for (double v : coeffs_) {
    if (!std::isfinite(v)) throw DomainError("polynomial coefficient is not finite");
  }
}

bool Polynomial::is_zero() const { return coeffs_.size() == 1 && coeffs_[0] == 0.0; }

double Polynomial::coeff(int power) const {
  if (power < 0 || power > degree()) return 0.0;
  return coeffs_[static_cast<std::size_t>(degree() - power)];
}

std::complex<double> Polynomial::eval(std::complex<double> z) const {
  std::complex<double> acc = 0.0;
  for (double c : coeffs_) acc = acc * z + c;
  return acc;
}

double Polynomial::eval(double x) const {
  double acc = 0.0;
  for (double c : coeffs_) acc = acc * x + c;
  return acc;
}

Polynomial Polynomial::derivative() const {
  const int n = degree();
  if (n <= 0) return Polynomial::zero();
  std::vector<double> d(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = coeffs_[static_cast<std::size_t>(i)] * (n - i);
  return Polynomial(std::move(d));
}

Polynomial Polynomial::times_z(int m) const {
  if (is_zero() || m == 0) return *this;
  std::vector<double> c = coeffs_;
  c.insert(c.end(), static_cast<std::size_t>(m), 0.0);
  return Polynomial(std::move(c));
}

Polynomial Polynomial::from_roots(std::span<const std::complex<double>> roots, double gain) {
  std::vector<std::complex<double>> acc{gain};
  for (const auto& r : roots) {
    std::vector<std::complex<double>> next(acc.size() + 1, 0.0);
    for (std::size_t i = 0; i < acc.size(); ++i) {
      next[i] += acc[i];
      next[i + 1] -= acc[i] * r;
    }
    acc = std::move(next);
  }
  std::vector<double> real(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) real[i] = acc[i].real();
  return Polynomial(std::move(real));
}

std::vector<std::complex<double>> Polynomial::roots() const {
  if (is_zero()) throw DomainError("roots of the zero polynomial are undefined");
  if (degree() < 1) throw DomainError("roots require degree >= 1");

  // Exact zero trailing coefficients give exact roots at the origin.
  std::vector<double> c = coeffs_;
  std::vector<std::complex<double>> out;
  while (c.size() > 1 && c.back() == 0.0) {
    out.emplace_back(0.0, 0.0);
    c.pop_back();
  }
  const int n = static_cast<int>(c.size()) - 1;
  if (n >= 1) {
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) companion(0, i) = -c[static_cast<std::size_t>(i + 1)] / c[0];
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, /*computeEigenvectors=*/false);
    for (int i = 0; i < n; ++i) out.push_back(solver.eigenvalues()(i));
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return out;
}

Polynomial Polynomial::operator-() const {
  std::vector<double> c = coeffs_;
  for (double& v : c) v = -v;
  return Polynomial(std::move(c));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  const std::size_t n = std::max(a.coeffs_.size(), b.coeffs_.size());
  std::vector<double> c(n, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    c[n - a.coeffs_.size() + i] += a.coeffs_[i];
  for (std::size_t i = 0; i < b.coeffs_.size(); ++i)
    c[n - b.coeffs_.size() + i] += b.coeffs_[i];
  return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return Polynomial::zero();
  std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(c));
}

Polynomial operator*(double s, const Polynomial& p) {
  std::vector<double> c = p.coeffs_;
  for (double& v : c) v *= s;
  return Polynomial(std::move(c));
}

std::string Polynomial::to_string() const {
  std::string out;
  char buf[32];
  for (std::size_t i = 0; i < coeffs_.size(); ++i) {
    if (i) out += ' ';
    std::snprintf(buf, sizeof(buf), "%.17g", coeffs_[i]);
    out += buf;
  }
  return out;
}

}  // namespace gfc
