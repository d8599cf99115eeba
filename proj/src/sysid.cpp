#include "gfc/sysid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gfc/errors.hpp"
#include "gfc/simulate.hpp"

namespace gfc {

IoDataset::IoDataset(Signal u_in, Signal y_in, std::string label_in)
    : u(std::move(u_in)), y(std::move(y_in)), label(std::move(label_in)) {
  if (u.size() != y.size()) throw DataError("dataset u/y length mismatch");
  if (u.size() < 2) throw DataError("dataset needs at least 2 samples");
  if (std::abs(u.sample_time() - y.sample_time()) > 1e-12 * u.sample_time())
    throw DataError("dataset u/y sample-time mismatch");
}

void ArxSpec::validate() const {
  if (na < 1 || nb < 1 || delay < 0)
    throw DomainError("ARX spec requires na >= 1, nb >= 1, delay >= 0");
}

RlsState RlsState::initial(int dim, double p0, double forgetting) {
  RlsState s;
  s.theta = Eigen::VectorXd::Zero(dim);
  s.covariance = p0 * Eigen::MatrixXd::Identity(dim, dim);
  s.forgetting = forgetting;
  s.samples_seen = 0;
  return s;
}

RlsState rls_step(const RlsState& state, const Eigen::VectorXd& regressor, double y_k) {
  if (!regressor.allFinite() || !std::isfinite(y_k))
    throw DomainError("rls_step: non-finite regressor or measurement");
  if (regressor.size() != state.theta.size())
    throw DomainError("rls_step: regressor dimension mismatch");

  const double lambda = state.forgetting;
  const Eigen::VectorXd pphi = state.covariance * regressor;
  const double denom = lambda + regressor.dot(pphi);
  const Eigen::VectorXd gain = pphi / denom;

  RlsState next = state;
  next.theta = state.theta + gain * (y_k - regressor.dot(state.theta));
  next.covariance = (state.covariance - gain * pphi.transpose()) / lambda;
  next.covariance = 0.5 * (next.covariance + next.covariance.transpose().eval());
  next.samples_seen = state.samples_seen + 1;
  return next;
}

namespace {

TransferFunction arx_to_tf(const Eigen::VectorXd& theta, const ArxSpec& spec, double ts) {
  const int na = spec.na;
  const int nb = spec.nb;
  // den = z^na + a_1 z^{na-1} + ... + a_na; b_i at power na - delay - (i-1).
  // When the delay pushes numerator powers negative, scale both sides by z^s.
  const int shift = std::max(0, spec.delay + nb - 1 - na);
  std::vector<double> den(static_cast<std::size_t>(na) + 1, 0.0);
  den[0] = 1.0;
  for (int i = 1; i <= na; ++i) den[static_cast<std::size_t>(i)] = theta(i - 1);
  Polynomial den_p = Polynomial(std::move(den)).times_z(shift);

  const int num_deg = na + shift - spec.delay;
  std::vector<double> num(static_cast<std::size_t>(num_deg) + 1, 0.0);
  for (int i = 0; i < nb; ++i) num[static_cast<std::size_t>(i)] = theta(na + i);
  return TransferFunction(Polynomial(std::move(num)), std::move(den_p), ts);
}

}  // namespace

IdentifyResult identify(const IoDataset& data, const ArxSpec& spec, double forgetting) {
  spec.validate();
  const int dim = spec.regressor_length();
  const long n = static_cast<long>(data.size());
  if (n <= 10L * dim)
    throw DataError("identification needs more than " + std::to_string(10 * dim) +
                    " samples, got " + std::to_string(n));

  const long k0 = std::max<long>(spec.na, spec.delay + spec.nb - 1);
  const auto& u = data.u.samples();
  const auto& y = data.y.samples();

  auto regressor_at = [&](long k) {
    Eigen::VectorXd phi(dim);
    for (int i = 1; i <= spec.na; ++i) phi(i - 1) = -y[static_cast<std::size_t>(k - i)];
    for (int i = 0; i < spec.nb; ++i)
      phi(spec.na + i) = u[static_cast<std::size_t>(k - spec.delay - i)];
    return phi;
  };

  // Excitation check on the information matrix.
  Eigen::MatrixXd info = Eigen::MatrixXd::Zero(dim, dim);
  for (long k = k0; k < n; ++k) {
    const Eigen::VectorXd phi = regressor_at(k);
    info += phi * phi.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(info);
  const double ev_min = eig.eigenvalues()(0);
  const double ev_max = eig.eigenvalues()(dim - 1);
  if (ev_max <= 0.0 || ev_min <= 1e-10 * ev_max)
    throw SingularError("singular information matrix: input is not persistently exciting");

  RlsState state = RlsState::initial(dim, 1e6, forgetting);
  for (long k = k0; k < n; ++k) state = rls_step(state, regressor_at(k), y[static_cast<std::size_t>(k)]);

  IdentifyResult result{arx_to_tf(state.theta, spec, data.sample_time()), state, {}};

  // Fit metrics use the free-run simulated output, not one-step prediction.
  const Signal yhat = simulate(result.model, data.u);
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(n);
  double sse = 0.0, ssy = 0.0;
  for (long k = 0; k < n; ++k) {
    const double r = y[static_cast<std::size_t>(k)] - yhat[static_cast<std::size_t>(k)];
    sse += r * r;
    const double d = y[static_cast<std::size_t>(k)] - mean;
    ssy += d * d;
  }
  result.fit.residual_rms = std::sqrt(sse / static_cast<double>(n));
  result.fit.fit_percent = ssy > 0.0 ? 100.0 * (1.0 - std::sqrt(sse / ssy)) : 0.0;
  return result;
}

std::string FitReport::to_text() const {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "residual_rms: %.17g\nfit_percent: %.17g\n", residual_rms,
                fit_percent);
  return buf;
}

std::string FitReport::to_csv_row() const {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "%.17g,%.17g", residual_rms, fit_percent);
  return buf;
}

IngestResult ingest_csv(const std::string& path, const IngestOptions& options) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");

  std::vector<double> t, u, y;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    double cols[4];
    for (int c = 0; c < 4; ++c) {
      if (!std::getline(ls, field, ','))
        throw DataError(path + ": row " + std::to_string(row) + " has too few columns");
      try {
        cols[c] = std::stod(field);
      } catch (const std::exception&) {
        throw DataError(path + ": row " + std::to_string(row) + " has non-numeric field '" +
                        field + "'");
      }
      if (!std::isfinite(cols[c]))
        throw DataError(path + ": row " + std::to_string(row) + " has non-finite value");
    }
    t.push_back(cols[1]);
    u.push_back(cols[2]);
    y.push_back(cols[3]);
  }
  if (t.size() < 2) throw DataError(path + ": needs at least 2 data rows");

  std::vector<double> spacing;
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double d = t[i] - t[i - 1];
    if (d <= 0.0) throw DataError(path + ": non-monotonic t at row " + std::to_string(i + 2));
    spacing.push_back(d);
  }
  std::vector<double> sorted = spacing;
  std::sort(sorted.begin(), sorted.end());
  const double ts = sorted[sorted.size() / 2];

  IngestResult result{IoDataset(Signal(u, ts), Signal(y, ts), options.label), {}};
  for (double d : spacing) {
    if (std::abs(d - ts) > 0.01 * ts) {
      result.warnings.push_back("sample spacing jitter exceeds 1% of the median spacing");
      break;
    }
  }

  if (options.trim_contact_threshold) {
    const double thr = *options.trim_contact_threshold;
    std::size_t start = 0;
    while (start < y.size() && y[start] <= thr) ++start;
    if (start + 2 <= y.size() && start > 0) {
      std::vector<double> ut(u.begin() + static_cast<long>(start), u.end());
      std::vector<double> yt(y.begin() + static_cast<long>(start), y.end());
      result.dataset = IoDataset(Signal(ut, ts), Signal(yt, ts), options.label);
    } else if (start > 0) {
      result.warnings.push_back("contact trim skipped: too few samples after contact");
    }
  }
  return result;
}

}  // namespace gfc
