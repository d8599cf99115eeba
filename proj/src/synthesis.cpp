#include "gfc/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "gfc/errors.hpp"

namespace gfc {

namespace {

using Complex = std::complex<double>;
using CPoly = std::vector<Complex>;  // highest power first

CPoly cmul(const CPoly& a, const CPoly& b) {
  CPoly c(a.size() + b.size() - 1, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
  return c;
}

CPoly cadd(const CPoly& a, const CPoly& b) {
  const std::size_t n = std::max(a.size(), b.size());
  CPoly c(n, 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) c[n - a.size() + i] += a[i];
  for (std::size_t i = 0; i < b.size(); ++i) c[n - b.size() + i] += b[i];
  return c;
}

Polynomial realify(const CPoly& c) {
  double maxabs = 0.0;
  for (const auto& v : c) maxabs = std::max(maxabs, std::abs(v));
  std::vector<double> out(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (maxabs > 0.0 && std::abs(c[i].imag()) > 1e-8 * maxabs)
      throw DomainError("discretization produced non-real coefficients");
    out[i] = c[i].real();
  }
  return Polynomial(std::move(out));
}

TransferFunction discretize_zoh(const TransferFunction& g, double ts) {
  const int n = g.den().degree();
  if (n < 1) return TransferFunction(g.num(), g.den(), ts);

  // Split off the direct term so partial fractions act on a strictly
  // proper remainder.
  double direct = 0.0;
  Polynomial num_sp = g.num();
  if (g.relative_degree() == 0) {
    direct = g.num().leading();  // den is monic
    num_sp = g.num() - direct * g.den();
  }

  const auto poles = g.den().roots();
  double scale = 1.0;
  for (const auto& p : poles) scale = std::max(scale, std::abs(p));
  for (std::size_t i = 0; i < poles.size(); ++i) {
    if (std::abs(poles[i]) < 1e-9 * scale)
      throw DomainError("zoh discretization: continuous pole at the origin is unsupported");
    for (std::size_t j = i + 1; j < poles.size(); ++j)
      if (std::abs(poles[i] - poles[j]) < 1e-8 * scale)
        throw DomainError("zoh discretization requires distinct poles");
  }

  const Polynomial dden = g.den().derivative();
  const Complex g0 = num_sp.eval(Complex(0.0)) / g.den().eval(Complex(0.0));

  std::vector<Complex> zpoles(poles.size());
  std::vector<Complex> coeffs(poles.size());
  for (std::size_t i = 0; i < poles.size(); ++i) {
    const Complex residue = num_sp.eval(poles[i]) / dden.eval(poles[i]);
    coeffs[i] = residue / poles[i];
    zpoles[i] = std::exp(poles[i] * ts);
  }

  // Gd(z) = direct + G(0) + sum_i (r_i/p_i) (z-1)/(z - e^{p_i Ts})
  CPoly den{1.0};
  for (const auto& q : zpoles) den = cmul(den, CPoly{1.0, -q});
  CPoly num = den;
  for (auto& v : num) v *= direct + g0;
  const CPoly zm1{1.0, -1.0};
  for (std::size_t i = 0; i < zpoles.size(); ++i) {
    CPoly term = zm1;
    for (auto& v : term) v *= coeffs[i];
    for (std::size_t j = 0; j < zpoles.size(); ++j)
      if (j != i) term = cmul(term, CPoly{1.0, -zpoles[j]});
    num = cadd(num, term);
  }
  return TransferFunction(realify(num), realify(den), ts);
}

Polynomial poly_pow(const Polynomial& p, int e) {
  Polynomial acc = Polynomial::one();
  for (int i = 0; i < e; ++i) acc = acc * p;
  return acc;
}

TransferFunction discretize_tustin(const TransferFunction& g, double ts) {
  const int n = g.den().degree();
  const double c = 2.0 / ts;
  const Polynomial zm1({1.0, -1.0});
  const Polynomial zp1({1.0, 1.0});

  auto map_poly = [&](const Polynomial& p) {
    Polynomial acc = Polynomial::zero();
    for (int i = 0; i <= p.degree(); ++i) {
      const double ci = p.coeff(i) * std::pow(c, i);
      acc = acc + ci * (poly_pow(zm1, i) * poly_pow(zp1, n - i));
    }
    return acc;
  };
  return TransferFunction(map_poly(g.num()), map_poly(g.den()), ts);
}

std::string poles_to_string(const std::vector<std::complex<double>>& poles) {
  std::string out;
  char buf[80];
  for (const auto& p : poles) {
    std::snprintf(buf, sizeof(buf), "%s%.6g%+.6gi (|.|=%.6g)", out.empty() ? "" : ", ", p.real(),
                  p.imag(), std::abs(p));
    out += buf;
  }
  return out;
}

}  // namespace

TransferFunction discretize(const TransferFunction& g_continuous, double ts,
                            DiscretizeMethod method) {
  if (!g_continuous.is_continuous())
    throw DomainError("discretize expects a continuous-time prototype");
  if (!g_continuous.is_proper())
    throw DomainError("discretize requires a proper continuous system");
  if (ts <= 0.0) throw DomainError("discretize requires a positive sample time");
  switch (method) {
    case DiscretizeMethod::kZoh:
      return discretize_zoh(g_continuous, ts);
    case DiscretizeMethod::kTustin:
      return discretize_tustin(g_continuous, ts);
  }
  throw DomainError("unknown discretization method");
}

TransferFunction design_q(const TransferFunction& plant, const TransferFunction& c0,
                          const TransferFunction& gc, bool strict) {
  const TransferFunction one = TransferFunction::constant(1.0, plant.sample_time());
  TransferFunction q = (gc * (one + plant * c0)) / plant - c0;
  q = q.minreal();
  if (strict) {
    if (!q.is_proper())
      throw DomainError("synthesized Q is improper (relative degree " +
                        std::to_string(q.relative_degree()) +
                        "); target closed loop rolls off slower than the plant");
    const StabilityReport rep = stability(q);
    if (!rep.stable)
      throw DomainError("synthesized Q is unstable; poles: " + poles_to_string(q.poles()));
  }
  return q;
}

TransferFunction design_controller(const TransferFunction& plant, const TransferFunction& c0,
                                   const TransferFunction& q) {
  const TransferFunction one = TransferFunction::constant(1.0, plant.sample_time());
  const TransferFunction denom = one - plant * q;
  if (denom.num().is_zero()) throw DomainError("1 - P*Q is identically zero");
  return ((c0 + q) / denom).minreal();
}

TransferFunction design_learning_filter(const TransferFunction& plant,
                                        const TransferFunction& c0, const TransferFunction& q) {
  const TransferFunction one = TransferFunction::constant(1.0, plant.sample_time());
  const TransferFunction authority = plant * (c0 + q);
  if (authority.num().is_zero())
    throw DomainError("C0 + Q is identically zero: no learning authority");
  return ((one + plant * c0) / authority).minreal();
}

LoopTfs compute_loop_tfs(const TransferFunction& plant, const TransferFunction& controller) {
  const TransferFunction pc = plant * controller;
  Polynomial den_cl = pc.den() + pc.num();
  if (den_cl.is_zero()) throw DomainError("singular loop: 1 + P*C is identically zero");
  TransferFunction tu(-pc.num(), den_cl, pc.sample_time());
  TransferFunction tr(pc.den(), den_cl, pc.sample_time());
  return {tu.minreal(), tr.minreal()};
}

TransferFunction design_lowpass_d(double ts, double cutoff_hz) {
  if (ts <= 0.0) throw DomainError("low-pass design requires positive sample time");
  const double nyquist_hz = 0.5 / ts;
  if (cutoff_hz <= 0.0 || cutoff_hz >= nyquist_hz)
    throw DomainError("low-pass cutoff " + std::to_string(cutoff_hz) +
                      " Hz must lie strictly below Nyquist " + std::to_string(nyquist_hz) + " Hz");
  const double alpha = std::exp(-2.0 * std::numbers::pi * cutoff_hz * ts);
  return TransferFunction(Polynomial({1.0 - alpha}), Polynomial({1.0, -alpha}), ts);
}

bool DesignBundle::all_checks_pass() const {
  for (const auto& c : validation)
    if (!c.pass) return false;
  return true;
}

DesignBundle synthesize_bundle(const TransferFunction& plant, const TransferFunction& c0,
                               const TransferFunction& gc, const TransferFunction& d) {
  const double ts = plant.sample_time();
  const TransferFunction one = TransferFunction::constant(1.0, ts);

  TransferFunction q = design_q(plant, c0, gc, /*strict=*/false);
  TransferFunction c = design_controller(plant, c0, q);

  // Tu from the parameterized identity -P(C0+Q)/(1+PC0); L is its negative
  // inverse, so the learning product reduces exactly.
  const TransferFunction sens = one + plant * c0;
  const TransferFunction authority = plant * (c0 + q);
  if (authority.num().is_zero())
    throw DomainError("C0 + Q is identically zero: no learning authority");
  TransferFunction tu = -(authority / sens);
  TransferFunction l = (sens / authority).minreal();
  TransferFunction tr = one + tu;

  DesignBundle bundle{plant, c0, gc, std::move(q), std::move(c), std::move(l),
                      d,     std::move(tu), std::move(tr), {}};
  bundle.validation = validate_design(bundle);
  return bundle;
}

std::vector<CheckResult> validate_design(const DesignBundle& bundle) {
  std::vector<CheckResult> checks;
  char buf[160];

  {
    const StabilityReport rep = stability(bundle.q);
    checks.push_back({"q_stable", rep.stable,
                      rep.stable ? "all poles inside unit circle"
                                 : "unstable poles: " + poles_to_string(bundle.q.poles())});
  }
  {
    const bool proper = bundle.q.is_proper();
    std::snprintf(buf, sizeof(buf), "relative degree %d", bundle.q.relative_degree());
    checks.push_back({"q_proper", proper, buf});
  }
  {
    // Internal stability from the unreduced characteristic polynomial, so
    // hidden cancellations between P and C are caught.
    Polynomial charpoly = bundle.plant.den() * bundle.controller.den() +
                          bundle.plant.num() * bundle.controller.num();
    bool ok = !charpoly.is_zero();
    std::string detail = "1 + P*C identically zero";
    if (ok) {
      double worst = 0.0;
      if (charpoly.degree() >= 1) {
        for (const auto& p : charpoly.roots()) worst = std::max(worst, std::abs(p));
      }
      ok = worst < 1.0 - 1e-9;
      std::snprintf(buf, sizeof(buf), "largest closed-loop pole magnitude %.12g", worst);
      detail = buf;
    }
    checks.push_back({"c_stabilizing", ok, detail});
  }
  {
    const StabilityReport rep = stability(bundle.learning);
    checks.push_back({"l_stable", rep.stable,
                      rep.stable ? "all poles inside unit circle"
                                 : "unstable poles: " + poles_to_string(bundle.learning.poles())});
  }
  {
    const int rd = bundle.learning.relative_degree();
    std::snprintf(buf, sizeof(buf), "relative degree %d (%s)", rd,
                  rd < 0 ? "improper, applied acausally" : "proper");
    checks.push_back({"l_relative_degree", true, buf});
  }
  {
    bool ok = is_stable(bundle.robustness) && bundle.robustness.is_proper();
    double dc = std::numeric_limits<double>::quiet_NaN();
    if (ok) {
      dc = bundle.robustness.dc_gain();
      ok = std::abs(dc - 1.0) < 1e-6;
    }
    std::snprintf(buf, sizeof(buf), "D(1) = %.12g", dc);
    checks.push_back({"d_stable_unity_dc", ok, buf});
  }
  {
    const TransferFunction one = TransferFunction::constant(1.0, bundle.plant.sample_time());
    const TransferFunction closed = feedback(bundle.plant * bundle.controller, one);
    const auto omegas = probe_frequencies(bundle.plant.sample_time());
    const double err = max_relative_response_error(closed, bundle.gc, omegas);
    std::snprintf(buf, sizeof(buf), "max relative frequency-response error %.3e", err);
    checks.push_back({"closed_loop_matches_gc", err < 1e-6, buf});
  }
  return checks;
}

std::string validation_to_text(const std::vector<CheckResult>& checks) {
  std::string out;
  for (const auto& c : checks)
    out += c.name + ": " + (c.pass ? "PASS" : "FAIL") + " (" + c.detail + ")\n";
  return out;
}

std::string validation_to_csv(const std::vector<CheckResult>& checks) {
  std::string out = "check,pass,detail\n";
  for (const auto& c : checks) {
    std::string detail = c.detail;
    std::replace(detail.begin(), detail.end(), ',', ';');
    out += c.name + "," + (c.pass ? "1" : "0") + "," + detail + "\n";
  }
  return out;
}

TransferFunction normalize_dc(const TransferFunction& g) {
  const double dc = g.dc_gain();
  if (dc == 0.0) throw DomainError("cannot normalize: DC gain is zero");
  return (1.0 / dc) * g;
}

void write_bundle(const DesignBundle& bundle, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open " + path + " for writing");
  const std::pair<const char*, const TransferFunction*> sections[] = {
      {"P", &bundle.plant},   {"C0", &bundle.c0},       {"Gc", &bundle.gc}, {"Q", &bundle.q},
      {"C", &bundle.controller}, {"L", &bundle.learning}, {"D", &bundle.robustness}};
  for (const auto& [name, tf] : sections) out << "[" << name << "]\n" << tf->to_string() << "\n";
}

DesignBundle read_bundle(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path);
  std::map<std::string, std::string> sections;
  std::string line, current;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      current = line.substr(1, line.size() - 2);
    } else if (!current.empty()) {
      sections[current] = line;
    }
  }
  for (const char* name : {"P", "C0", "Gc", "Q", "C", "L", "D"})
    if (!sections.count(name)) throw DataError(path + ": missing section [" + name + "]");

  const TransferFunction plant = TransferFunction::parse(sections["P"]);
  const TransferFunction c0 = TransferFunction::parse(sections["C0"]);
  const TransferFunction one = TransferFunction::constant(1.0, plant.sample_time());
  const TransferFunction q = TransferFunction::parse(sections["Q"]);
  const TransferFunction sens = one + plant * c0;
  const TransferFunction authority = plant * (c0 + q);
  TransferFunction tu = -(authority / sens);
  TransferFunction tr = one + tu;

  DesignBundle bundle{plant,
                      c0,
                      TransferFunction::parse(sections["Gc"]),
                      q,
                      TransferFunction::parse(sections["C"]),
                      TransferFunction::parse(sections["L"]),
                      TransferFunction::parse(sections["D"]),
                      std::move(tu),
                      std::move(tr),
                      {}};
  bundle.validation = validate_design(bundle);
  return bundle;
}

}  // namespace gfc
