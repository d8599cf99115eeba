// End-to-end checks of the gfc binary: exit codes, output artifacts and
// run-to-run determinism. The binary path and a scratch directory come in
// through compile definitions.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "gfc/reference.hpp"
#include "gfc/signal.hpp"
#include "gfc/simulate.hpp"
#include "gfc/transfer_function.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kBin = GFC_BIN;
const fs::path kWork = GFC_WORK_DIR;

int run(const std::string& args) {
  const std::string cmd = kBin + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  REQUIRE(status != -1);
  return WEXITSTATUS(status);
}

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  REQUIRE(out.good());
  out << content;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::size_t line_count(const fs::path& path) {
  const std::string text = slurp(path);
  return static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n'));
}

// Logged grasp: the nominal plant driven by a seeded binary probe.
void write_dataset(const fs::path& path, unsigned seed, std::size_t n) {
  std::mt19937_64 rng(seed);
  const auto p = gfc::reference::plant();
  const double ts = p.sample_time();
  const gfc::Signal u = gfc::testing::prbs(rng, n, ts);
  const gfc::Signal y = gfc::simulate(p, u);
  std::ostringstream out;
  out << "k,t,u,y\n";
  char buf[128];
  for (std::size_t k = 0; k < n; ++k) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g\n", k,
                  static_cast<double>(k) * ts, u[k], y[k]);
    out << buf;
  }
  write_file(path, out.str());
}

const std::string kDesignConf =
    "gc_mode = direct\n"
    "gc_num = 0.013 0.0116\n"
    "gc_den = 1 -1.687 0.711 0\n"
    "c0_gain = 0\n"
    "d_cutoff_hz = 2\n";

}  // namespace

TEST_CASE("pipeline: identify, design, campaign, bode, report") {
  const fs::path dir = kWork / "pipeline";
  fs::remove_all(dir);
  write_dataset(dir / "grasp.csv", 4242, 400);
  write_file(dir / "identify.conf",
             "dataset = " + (dir / "grasp.csv").string() + "\n" +
                 "na = 2\nnb = 2\ndelay = 1\ntrim_contact = -1\n");
  write_file(dir / "design.conf", "plant = " + (dir / "plant.tf").string() + "\n" + kDesignConf);
  write_file(dir / "campaign.conf",
             "bundle = " + (dir / "bundle.txt").string() + "\n" +
                 "ref_samples = 100\nref_onset = 10\nperturb_b1 = 0.1\n"
                 "noise_std = 0.05\nquantization = 0.0192\n"
                 "seed = 100\ncampaign_seeds = 2\nmax_iters = 3\nplateau_tol = 0\n");

  CHECK(run("identify --config " + (dir / "identify.conf").string() + " --out " + dir.string()) == 0);
  REQUIRE(fs::exists(dir / "plant.tf"));
  const auto model = gfc::TransferFunction::parse(slurp(dir / "plant.tf"));
  CHECK(std::abs(model.num().coeff(1) - 0.7902) < 1e-6);
  CHECK(std::abs(model.den().coeff(0) - 0.3442) < 1e-6);
  CHECK(fs::exists(dir / "fit_report.csv"));

  CHECK(run("design --config " + (dir / "design.conf").string() + " --out " + dir.string()) == 0);
  REQUIRE(fs::exists(dir / "bundle.txt"));
  const std::string validation = slurp(dir / "validation.txt");
  CHECK(validation.find("FAIL") == std::string::npos);

  CHECK(run("campaign --config " + (dir / "campaign.conf").string() + " --out " + dir.string()) == 0);
  REQUIRE(fs::exists(dir / "norms.csv"));
  CHECK(line_count(dir / "norms.csv") == 4);  // header + one row per iteration
  // Per-iteration trace: header plus one row per reference sample.
  REQUIRE(fs::exists(dir / "iter_s100_j0.csv"));
  CHECK(line_count(dir / "iter_s100_j0.csv") == 101);
  CHECK(fs::exists(dir / "iter_s101_j2.csv"));
  CHECK(fs::exists(dir / "summary.txt"));

  CHECK(run("bode --out " + dir.string()) == 0);
  CHECK(line_count(dir / "bode_P.csv") == 201);
  CHECK(line_count(dir / "bode_C.csv") == 201);

  CHECK(run("report --out " + dir.string()) == 0);
  const std::string report = slurp(dir / "report.txt");
  CHECK(report.find("identified plant comparison") != std::string::npos);
  CHECK(report.find("Q comparison") != std::string::npos);
  CHECK(report.find("recomputed:") != std::string::npos);
  CHECK(report.find("validation:") != std::string::npos);
  CHECK(report.find("campaign error norms:") != std::string::npos);
  CHECK(report.find("absent stages") == std::string::npos);
}

TEST_CASE("report lists absent stages") {
  const fs::path dir = kWork / "report_empty";
  fs::remove_all(dir);
  fs::create_directories(dir);
  CHECK(run("report --out " + dir.string()) == 0);
  const std::string report = slurp(dir / "report.txt");
  CHECK(report.find("absent stages:") != std::string::npos);
  CHECK(report.find("identification") != std::string::npos);
  CHECK(report.find("design") != std::string::npos);
  CHECK(report.find("campaign") != std::string::npos);
}

TEST_CASE("exit codes distinguish the failure classes") {
  const fs::path dir = kWork / "failures";
  fs::remove_all(dir);
  fs::create_directories(dir);

  SUBCASE("missing dataset is a data error") {
    write_file(dir / "missing.conf", "dataset = " + (dir / "nope.csv").string() + "\n");
    CHECK(run("identify --config " + (dir / "missing.conf").string() + " --out " + dir.string()) == 2);
  }

  SUBCASE("non-exciting input is an identification error") {
    const double ts = gfc::reference::kSampleTime;
    std::ostringstream out;
    out << "k,t,u,y\n";
    char buf[128];
    for (std::size_t k = 0; k < 200; ++k) {
      std::snprintf(buf, sizeof(buf), "%zu,%.17g,0,0\n", k, static_cast<double>(k) * ts);
      out << buf;
    }
    write_file(dir / "flat.csv", out.str());
    write_file(dir / "flat.conf",
               "dataset = " + (dir / "flat.csv").string() + "\ntrim_contact = -1\n");
    CHECK(run("identify --config " + (dir / "flat.conf").string() + " --out " + dir.string()) == 3);
  }

  SUBCASE("design without a plant model is a data error") {
    write_file(dir / "design.conf", "plant = " + (dir / "nope.tf").string() + "\n" + kDesignConf);
    CHECK(run("design --config " + (dir / "design.conf").string() + " --out " + dir.string()) == 2);
  }

  SUBCASE("a failing design validates as such, --force keeps it") {
    // Non-minimum-phase plant: the synthesized parameter is unstable.
    write_file(dir / "nmp.tf", "num: 1 -2 / den: 1 -0.9 0.2 / Ts: 0.0568\n");
    write_file(dir / "nmp.conf", "plant = " + (dir / "nmp.tf").string() + "\n" + kDesignConf);
    CHECK(run("design --config " + (dir / "nmp.conf").string() + " --out " + dir.string()) == 4);
    CHECK(run("design --force --config " + (dir / "nmp.conf").string() + " --out " + dir.string()) == 0);
    CHECK(fs::exists(dir / "bundle.txt"));
    CHECK(slurp(dir / "validation.txt").find("FAIL") != std::string::npos);
  }

  SUBCASE("campaign without a bundle is a data error") {
    write_file(dir / "camp.conf", "bundle = " + (dir / "nope.txt").string() + "\n");
    CHECK(run("campaign --config " + (dir / "camp.conf").string() + " --out " + dir.string()) == 2);
  }

  SUBCASE("campaign divergence is reported as such") {
    write_file(dir / "plant.tf", gfc::reference::plant().to_string() + "\n");
    std::string design_no_filter = kDesignConf;
    design_no_filter.replace(design_no_filter.find("d_cutoff_hz = 2"),
                             std::string("d_cutoff_hz = 2").size(), "d_cutoff_hz = 0");
    write_file(dir / "design_nofilter.conf",
               "plant = " + (dir / "plant.tf").string() + "\n" + design_no_filter);
    CHECK(run("design --config " + (dir / "design_nofilter.conf").string() + " --out " +
              dir.string()) == 0);
    write_file(dir / "diverge.conf",
               "bundle = " + (dir / "bundle.txt").string() + "\n" +
                   "ref_onset = 10\nperturb_hf_pole = 0.7\nperturb_hf_gain = 0.8\n"
                   "noise_std = 0\nquantization = 0\nmax_iters = 8\nplateau_tol = 0\n");
    CHECK(run("campaign --config " + (dir / "diverge.conf").string() + " --out " + dir.string()) == 5);
  }
}

TEST_CASE("identical configuration and seed reproduce outputs byte for byte") {
  const fs::path a = kWork / "det_a";
  const fs::path b = kWork / "det_b";
  for (const auto& dir : {a, b}) {
    fs::remove_all(dir);
    write_dataset(dir / "grasp.csv", 7, 400);
    write_file(dir / "identify.conf",
               "dataset = " + (dir / "grasp.csv").string() + "\ntrim_contact = -1\n");
    write_file(dir / "design.conf", "plant = " + (dir / "plant.tf").string() + "\n" + kDesignConf);
    write_file(dir / "campaign.conf",
               "bundle = " + (dir / "bundle.txt").string() + "\n" +
                   "ref_onset = 10\nperturb_b1 = 0.1\nnoise_std = 0.05\n"
                   "quantization = 0.0192\nseed = 11\ncampaign_seeds = 2\n"
                   "max_iters = 3\nplateau_tol = 0\n");
    CHECK(run("identify --config " + (dir / "identify.conf").string() + " --out " + dir.string()) == 0);
    CHECK(run("design --config " + (dir / "design.conf").string() + " --out " + dir.string()) == 0);
    CHECK(run("campaign --config " + (dir / "campaign.conf").string() + " --out " + dir.string()) == 0);
    CHECK(run("bode --out " + dir.string()) == 0);
    CHECK(run("report --out " + dir.string()) == 0);
  }

  for (const char* name : {"plant.tf", "fit_report.csv", "bundle.txt", "validation.csv",
                           "norms.csv", "summary.txt", "iter_s11_j0.csv", "iter_s12_j2.csv",
                           "bode_P.csv", "bode_C.csv", "report.txt"}) {
    INFO("file: ", name);
    CHECK(slurp(a / name) == slurp(b / name));
  }
}
