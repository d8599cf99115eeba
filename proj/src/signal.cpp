#include "gfc/signal.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gfc/errors.hpp"

namespace gfc {

Signal::Signal(std::vector<double> samples, double sample_time)
    : samples_(std::move(samples)), ts_(sample_time) {
  if (ts_ <= 0.0 || !std::isfinite(ts_)) throw DomainError("signal sample time must be positive");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i]))
      throw DomainError("non-finite sample at index " + std::to_string(i));
  }
}

Signal Signal::zeros(std::size_t n, double sample_time) {
  return Signal(std::vector<double>(n, 0.0), sample_time);
}

Signal Signal::step(double amplitude, std::size_t n, double sample_time, std::size_t onset) {
  std::vector<double> s(n, amplitude);
  for (std::size_t k = 0; k < std::min(onset, n); ++k) s[k] = 0.0;
  return Signal(std::move(s), sample_time);
}

Signal Signal::impulse(double amplitude, std::size_t n, double sample_time) {
  std::vector<double> s(n, 0.0);
  if (n > 0) s[0] = amplitude;
  return Signal(std::move(s), sample_time);
}

double Signal::norm() const {
  double acc = 0.0;
  for (double v : samples_) acc += v * v;
  return std::sqrt(acc);
}

Signal Signal::reversed() const {
  std::vector<double> s(samples_.rbegin(), samples_.rend());
  return Signal(std::move(s), ts_);
}

Signal operator+(const Signal& a, const Signal& b) {
  if (a.size() != b.size()) throw DomainError("signal length mismatch");
  std::vector<double> s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] + b[i];
  return Signal(std::move(s), a.sample_time());
}

Signal operator-(const Signal& a, const Signal& b) {
  if (a.size() != b.size()) throw DomainError("signal length mismatch");
  std::vector<double> s(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) s[i] = a[i] - b[i];
  return Signal(std::move(s), a.sample_time());
}

Signal operator*(double s, const Signal& x) {
  std::vector<double> out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = s * x[i];
  return Signal(std::move(out), x.sample_time());
}

void Signal::write_csv(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  out << "k,t,value\n";
  char buf[96];
  for (std::size_t k = 0; k < samples_.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g\n", k, static_cast<double>(k) * ts_,
                  samples_[k]);
    out << buf;
  }
}

Signal Signal::read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path + ": empty file");
  std::vector<double> values;
  std::vector<double> times;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string field;
    double cols[3];
    for (int c = 0; c < 3; ++c) {
      if (!std::getline(ls, field, ','))
        throw DataError(path + ": row " + std::to_string(row) + " has too few columns");
      try {
        cols[c] = std::stod(field);
      } catch (const std::exception&) {
        throw DataError(path + ": row " + std::to_string(row) + " has non-numeric field");
      }
    }
    times.push_back(cols[1]);
    values.push_back(cols[2]);
  }
  if (values.size() < 2) throw DataError(path + ": need at least two samples");
  const double ts = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
  return Signal(std::move(values), ts);
}

}  // namespace gfc
