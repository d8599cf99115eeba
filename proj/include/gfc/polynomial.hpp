#ifndef GFC_POLYNOMIAL_HPP
#define GFC_POLYNOMIAL_HPP

#include <complex>
#include <span>
#include <string>
#include <vector>

namespace gfc {

/// Real polynomial in z, coefficients stored highest power first.
/// Leading zeros are trimmed on construction; the zero polynomial is
/// the single-element list {0}.
class Polynomial {
public:
  Polynomial() : coeffs_{0.0} {}
  explicit Polynomial(std::vector<double> coeffs);

  static Polynomial zero() { return Polynomial(); }
  static Polynomial one() { return Polynomial({1.0}); }

  /// Builds the real polynomial gain * prod (z - r_i). Roots must come in
  /// conjugate pairs up to rounding; imaginary residue is discarded.
  static Polynomial from_roots(std::span<const std::complex<double>> roots,
                               double gain = 1.0);

  const std::vector<double>& coeffs() const { return coeffs_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const;
  double leading() const { return coeffs_.front(); }

  /// Coefficient of z^power (0 when power exceeds the degree).
  double coeff(int power) const;

  std::complex<double> eval(std::complex<double> z) const;
  double eval(double x) const;

  Polynomial derivative() const;

  /// Multiply by z^m (append m zero coefficients).
  Polynomial times_z(int m) const;

  /// All complex roots. Exact trailing-zero coefficients yield exact roots
  /// at the origin; the rest come from a companion-matrix eigensolve.
  /// Throws DomainError for the zero polynomial or degree 0.
  std::vector<std::complex<double>> roots() const;

  Polynomial operator-() const;
  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(double s, const Polynomial& p);
  friend Polynomial operator*(const Polynomial& p, double s) { return s * p; }

  std::string to_string() const;

private:
  std::vector<double> coeffs_;
};

}  // namespace gfc

#endif  // GFC_POLYNOMIAL_HPP
