#ifndef GFC_SIMULATE_HPP
#define GFC_SIMULATE_HPP

#include <vector>

#include "gfc/signal.hpp"
#include "gfc/transfer_function.hpp"

namespace gfc {

/// Per-sample difference-equation evaluator for a proper discrete TF with
/// zero initial conditions. Used by both offline simulation and the
/// closed-loop trial stepper.
class DifferenceEquation {
public:
  explicit DifferenceEquation(const TransferFunction& g);

  double step(double input);
  void reset();

  /// True when the output has no direct feedthrough (relative degree >= 1).
  bool strictly_proper() const { return b_.empty() || b_[0] == 0.0; }

  /// Rewrites the most recent input sample. Lets a feedback loop advance a
  /// strictly proper block with a placeholder input and patch in the real
  /// one once the loop closes.
  void set_latest_input(double input);

private:
  std::vector<double> b_;  // input taps, aligned to z^{-i}
  std::vector<double> a_;  // output taps a_1..a_n (monic a_0 = 1 implied)
  std::vector<double> u_hist_;
  std::vector<double> y_hist_;
};

/// Output of the canonical difference equation of minreal(g), zero initial
/// conditions, same length as u. Rejects improper g.
Signal simulate(const TransferFunction& g, const Signal& u);

/// Applies g, allowing improper g: factors g = z^m * g_causal, simulates the
/// causal part and advances by m samples, zero-padding the tail.
Signal apply_acausal(const TransferFunction& g, const Signal& x);

/// Forward pass then time-reversed pass of d. Effective magnitude |d|^2,
/// zero phase. d must be stable and proper.
Signal zero_phase_filter(const TransferFunction& d, const Signal& x);

}  // namespace gfc

#endif  // GFC_SIMULATE_HPP
