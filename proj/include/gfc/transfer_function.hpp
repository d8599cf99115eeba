#ifndef GFC_TRANSFER_FUNCTION_HPP
#define GFC_TRANSFER_FUNCTION_HPP

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "gfc/polynomial.hpp"

namespace gfc {

/// Sample-time marker for continuous-time prototypes. Continuous TFs exist
/// only as discretization inputs; all loop algebra is discrete.
inline constexpr double kContinuousTime = 0.0;

struct PoleReport {
  std::complex<double> pole;
  double magnitude;
};

struct StabilityReport {
  bool stable = false;
  std::vector<PoleReport> poles;  // poles of the minimal realization
};

/// SISO rational transfer function num(z)/den(z) with a sample time.
/// The denominator is stored monic so coefficient equality is canonical.
class TransferFunction {
public:
  TransferFunction(Polynomial num, Polynomial den, double sample_time);

  static TransferFunction constant(double value, double sample_time);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  double sample_time() const { return ts_; }
  bool is_continuous() const { return ts_ == kContinuousTime; }

  /// deg(den) - deg(num); negative means improper.
  int relative_degree() const { return den_.degree() - num_.degree(); }
  bool is_proper() const { return relative_degree() >= 0; }

  /// num(1)/den(1); throws when den(1) == 0.
  double dc_gain() const;

  std::complex<double> eval(std::complex<double> z) const;

  std::vector<std::complex<double>> poles() const;
  std::vector<std::complex<double>> zeros() const;

  /// Cancels pole-zero pairs closer than tol, greedily by nearest distance.
  TransferFunction minreal(double tol = 1e-8) const;

  TransferFunction inverse() const;

  friend TransferFunction operator+(const TransferFunction& a, const TransferFunction& b);
  friend TransferFunction operator-(const TransferFunction& a, const TransferFunction& b);
  friend TransferFunction operator*(const TransferFunction& a, const TransferFunction& b);
  friend TransferFunction operator/(const TransferFunction& a, const TransferFunction& b);
  friend TransferFunction operator*(double s, const TransferFunction& g);
  TransferFunction operator-() const;

  /// Serialized as `num: c_n ... c_0 / den: d_m ... d_0 / Ts: <seconds>`.
  std::string to_string() const;
  static TransferFunction parse(const std::string& text);

private:
  Polynomial num_;
  Polynomial den_;
  double ts_;
};

/// g/(1 + g*h), reduced. Throws when 1 + g*h is identically zero.
TransferFunction feedback(const TransferFunction& g, const TransferFunction& h);

/// Pole magnitudes of the minimal realization, all strictly inside the unit
/// circle by `margin`. Discrete-time only.
StabilityReport stability(const TransferFunction& g, double margin = 1e-9);
bool is_stable(const TransferFunction& g, double margin = 1e-9);

/// g(e^{i w Ts}) per frequency; rejects frequencies beyond Nyquist.
std::vector<std::complex<double>> freq_response(const TransferFunction& g,
                                                std::span<const double> omegas);

/// 50 log-spaced probe frequencies in (0, Nyquist], plus omega = 0.
std::vector<double> probe_frequencies(double sample_time, int count = 50);

/// max_i |a(e^{iw}) - b(e^{iw})| / max(|b|, floor) over the probe set.
double max_relative_response_error(const TransferFunction& a, const TransferFunction& b,
                                   std::span<const double> omegas);

}  // namespace gfc

#endif  // GFC_TRANSFER_FUNCTION_HPP
