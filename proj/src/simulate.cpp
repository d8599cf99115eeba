#include "gfc/simulate.hpp"

#include <cmath>

#include "gfc/errors.hpp"

namespace gfc {

DifferenceEquation::DifferenceEquation(const TransferFunction& g) {
  if (g.is_continuous()) throw DomainError("cannot simulate a continuous-time system");
  if (!g.is_proper())
    throw DomainError(
        "cannot causally simulate an improper system (relative degree " +
        std::to_string(g.relative_degree()) + "); use apply_acausal for offline application");

  const int n = g.den().degree();
  const int m = g.num().degree();
  const int rd = n - m;

  // y(k) = sum_j b_j u(k - rd - j) - sum_i a_i y(k - i), with den monic.
  b_.assign(static_cast<std::size_t>(n) + 1, 0.0);
  for (int j = 0; j <= m; ++j)
    b_[static_cast<std::size_t>(rd + j)] = g.num().coeff(m - j);
  a_.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 1; i <= n; ++i) a_[static_cast<std::size_t>(i - 1)] = g.den().coeff(n - i);

  u_hist_.assign(b_.size(), 0.0);
  y_hist_.assign(a_.size(), 0.0);
}

void DifferenceEquation::set_latest_input(double input) {
  if (!u_hist_.empty()) u_hist_[0] = input;
}

void DifferenceEquation::reset() {
  std::fill(u_hist_.begin(), u_hist_.end(), 0.0);
  std::fill(y_hist_.begin(), y_hist_.end(), 0.0);
}

double DifferenceEquation::step(double input) {
  // Shift input history, newest at index 0.
  for (std::size_t i = u_hist_.size(); i-- > 1;) u_hist_[i] = u_hist_[i - 1];
  u_hist_[0] = input;

  double y = 0.0;
  for (std::size_t j = 0; j < b_.size(); ++j) y += b_[j] * u_hist_[j];
  for (std::size_t i = 0; i < a_.size(); ++i) y -= a_[i] * y_hist_[i];

  for (std::size_t i = y_hist_.size(); i-- > 1;) y_hist_[i] = y_hist_[i - 1];
  if (!y_hist_.empty()) y_hist_[0] = y;
  return y;
}

Signal simulate(const TransferFunction& g, const Signal& u) {
  DifferenceEquation de(g.minreal());
  std::vector<double> y(u.size());
  for (std::size_t k = 0; k < u.size(); ++k) {
    y[k] = de.step(u[k]);
    if (!std::isfinite(y[k]))
      throw DivergenceError("simulation produced non-finite output at sample " + std::to_string(k),
                            static_cast<long>(k));
  }
  return Signal(std::move(y), u.sample_time());
}

Signal apply_acausal(const TransferFunction& g, const Signal& x) {
  const TransferFunction gr = g.minreal();
  const int rd = gr.relative_degree();
  if (rd >= 0) return simulate(gr, x);

  const int advance = -rd;
  // g = z^advance * g_causal with g_causal biproper.
  TransferFunction g_causal(gr.num(), gr.den().times_z(advance), gr.sample_time());
  const Signal yc = simulate(g_causal, x);

  std::vector<double> out(x.size(), 0.0);
  for (std::size_t k = 0; k + static_cast<std::size_t>(advance) < x.size(); ++k)
    out[k] = yc[k + static_cast<std::size_t>(advance)];
  return Signal(std::move(out), x.sample_time());
}

Signal zero_phase_filter(const TransferFunction& d, const Signal& x) {
  if (!d.is_proper()) throw DomainError("zero-phase filter requires a proper system");
  if (!is_stable(d)) throw DomainError("zero-phase filter requires a stable system");
  const Signal forward = simulate(d, x);
  return simulate(d, forward.reversed()).reversed();
}

}  // namespace gfc
