#ifndef GFC_SIGNAL_HPP
#define GFC_SIGNAL_HPP

#include <string>
#include <vector>

namespace gfc {

/// Uniformly sampled real signal. Construction rejects non-finite samples.
class Signal {
public:
  Signal(std::vector<double> samples, double sample_time);

  static Signal zeros(std::size_t n, double sample_time);
  /// Step of the given amplitude starting at sample index `onset`. The onset
  /// leaves room for the acausal learning preview and the backward pass of
  /// zero-phase smoothing to act inside the trial window; around ten samples
  /// is comfortable for the designs in this package.
  static Signal step(double amplitude, std::size_t n, double sample_time,
                     std::size_t onset = 0);
  static Signal impulse(double amplitude, std::size_t n, double sample_time);

  const std::vector<double>& samples() const { return samples_; }
  double sample_time() const { return ts_; }
  std::size_t size() const { return samples_.size(); }
  double operator[](std::size_t i) const { return samples_[i]; }

  double norm() const;  // Euclidean
  Signal reversed() const;

  /// CSV with header `k,t,value`.
  void write_csv(const std::string& path) const;
  static Signal read_csv(const std::string& path);

private:
  std::vector<double> samples_;
  double ts_;
};

Signal operator+(const Signal& a, const Signal& b);
Signal operator-(const Signal& a, const Signal& b);
Signal operator*(double s, const Signal& x);

}  // namespace gfc

#endif  // GFC_SIGNAL_HPP
