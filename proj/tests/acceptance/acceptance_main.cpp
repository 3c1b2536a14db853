// Acceptance suite: one line per criterion, exit nonzero on any failure.
// Criteria that exercise the command-line tool run the real binary (path
// injected at build time) and inspect its outputs byte for byte.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <vector>

#include <fuzzydyn/calculus.hpp>
#include <fuzzydyn/comparison.hpp>
#include <fuzzydyn/experiments.hpp>
#include <fuzzydyn/io_csv.hpp>
#include <fuzzydyn/io_json.hpp>
#include <fuzzydyn/ivp.hpp>
#include <fuzzydyn/lyapunov.hpp>

#include "../support/generators.hpp"
#include "../support/oracles.hpp"

using namespace fuzzydyn;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int id;
  std::string title;
  std::function<void(std::string& detail)> run;  // throws on failure
  double budget_seconds = 0.0;                   // 0 = no budget stated
};

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool cond, const std::string& what) {
  if (!cond) throw Failure(what);
}

std::string fmt(double v) { return format_double(v); }

// ---------------------------------------------------------------------------
// CLI harness
// ---------------------------------------------------------------------------

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() /
                 ("fuzzydyn_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run_cli(const std::string& args, const fs::path& stdout_path) {
  const std::string cmd = std::string(FUZZYDYN_CLI_PATH) + " " + args + " > " +
                          stdout_path.string() + " 2> " + stdout_path.string() + ".err";
  const int status = std::system(cmd.c_str());
  expect(status != -1 && WIFEXITED(status), "failed to launch the CLI");
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  expect(static_cast<bool>(in), "missing output file " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  out << contents;
}

Json example31_doc() {
  Json x0;
  {
    std::vector<Box> cuts;
    const LevelGrid grid = LevelGrid::uniform();
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double a = grid.alpha(j);
      cuts.emplace_back(std::vector<double>{1.0 - 0.5 * (1.0 - a)},
                        std::vector<double>{1.0 + 0.5 * (1.0 - a)});
    }
    x0 = to_json(FuzzyBox(grid, std::move(cuts)));
  }
  Json doc;
  doc["ivp"] = Json{{"t0", 0.0},      {"horizon", 50.0}, {"dt", 0.05}, {"rho", 10.0},
                    {"x0", x0},       {"rhs", Json{{"kind", "linear"}, {"a", "1/(1+t^2)"}}}};
  doc["lyapunov"] = Json{{"V", Json{{"family", "metric_power"}, {"c", 1.0}, {"r", 1.0}}},
                         {"L", "1"},
                         {"a_env", "w"},
                         {"b_env", "w"},
                         {"g", "w/(1+t^2)"}};
  return doc;
}

Json crisp35_doc(double delta) {
  Json doc;
  doc["ivp"] = Json{{"t0", 0.0},
                    {"horizon", 10.0},
                    {"dt", 0.01},
                    {"rho", 10.0},
                    {"x0", to_json(FuzzyBox::crisp(LevelGrid::uniform(), {2.0}))},
                    {"rhs", Json{{"kind", "linear"}, {"a", "-1"}}}};
  doc["lyapunov"] =
      Json{{"V", Json{{"family", "metric_power"}, {"c", 1.0}, {"r", 1.0}}},
           {"L", "1"},
           {"constants", Json{{"lambda", 1.0},
                              {"Lambda", 1.0},
                              {"gamma", 1.0},
                              {"K", 1e-6},
                              {"p", 1.0},
                              {"q", 1.0},
                              {"delta", delta}}}};
  return doc;
}

Json unstable32_doc() {
  Json doc;
  doc["ivp"] = Json{{"t0", 0.0},
                    {"horizon", 50.0},
                    {"dt", 0.05},
                    {"rho", 10.0},
                    {"x0", to_json(FuzzyBox::crisp(LevelGrid::uniform(), {1.0}))},
                    {"rhs", Json{{"kind", "linear"}, {"a", "1"}}}};
  doc["lyapunov"] = Json{{"V", Json{{"family", "metric_power"}, {"c", 1.0}, {"r", 1.0}}},
                         {"L", "1"},
                         {"a_env", "w"},
                         {"b_env", "w"},
                         {"g", "w"}};
  return doc;
}

struct MatrixResult {
  std::map<std::string, int> exit_codes;
  fs::path dir;
};

// The scripted CLI matrix used by the falsification and determinism rows.
MatrixResult run_cli_matrix(const std::string& tag) {
  const fs::path dir = work_dir() / tag;
  fs::create_directories(dir);
  write_file(work_dir() / "ex31.json", example31_doc().dump(2));
  write_file(work_dir() / "crisp35.json", crisp35_doc(2.0).dump(2));
  write_file(work_dir() / "bad35.json", crisp35_doc(0.5).dump(2));
  write_file(work_dir() / "unstable32.json", unstable32_doc().dump(2));

  MatrixResult result{.exit_codes = {}, .dir = dir};
  const auto scenario = [&](const char* name) { return (work_dir() / name).string(); };
  const auto out = [&](const char* name) { return (dir / name).string(); };

  result.exit_codes["simulate_ex31"] = run_cli(
      "simulate " + scenario("ex31.json") + " --out " + out("traj.csv"), dir / "sim.out");
  result.exit_codes["certify_ex31"] =
      run_cli("certify " + scenario("ex31.json") + " --theorem 3.2 --out " + out("cert32.json"),
              dir / "cert32.out");
  result.exit_codes["certify_crisp35"] =
      run_cli("certify " + scenario("crisp35.json") + " --theorem 3.5 --out " + out("cert35.json"),
              dir / "cert35.out");
  result.exit_codes["certify_bad35"] =
      run_cli("certify " + scenario("bad35.json") + " --theorem 3.5 --out " + out("bad35.json"),
              dir / "bad35.out");
  result.exit_codes["certify_unstable32"] =
      run_cli("certify " + scenario("unstable32.json") + " --theorem 3.2 --out " +
                  out("unstable32.json"),
              dir / "unstable32.out");
  result.exit_codes["report_ex31"] =
      run_cli("report example-3-1 --out " + out("rep31.json") + " --table " + out("rep31.txt"),
              dir / "rep31.out");
  result.exit_codes["report_crisp"] = run_cli(
      "report crisp-exponential --out " + out("repce.json") + " --table " + out("repce.txt"),
      dir / "repce.out");
  return result;
}

// ---------------------------------------------------------------------------
// Shared trajectory registry for the structural-invariant criterion
// ---------------------------------------------------------------------------

std::vector<std::pair<std::string, Trajectory>>& trajectory_registry() {
  static std::vector<std::pair<std::string, Trajectory>> registry;
  return registry;
}

void remember(const std::string& name, const Trajectory& traj) {
  trajectory_registry().emplace_back(name, traj);
}

// ---------------------------------------------------------------------------
// Criteria
// ---------------------------------------------------------------------------

void criterion_metric_axioms(std::string& detail) {
  std::mt19937_64 rng(9001);
  const LevelGrid grid = LevelGrid::uniform();
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t dim = 1 + i % 3;
    const FuzzyBox u = testsupport::random_fuzzy_box(rng, grid, dim, 50.0, 20.0);
    const FuzzyBox v = testsupport::random_fuzzy_box(rng, grid, dim, 50.0, 20.0);
    const FuzzyBox w = testsupport::random_fuzzy_box(rng, grid, dim, 50.0, 20.0);

    const double triangle = sup_metric(u, w) - sup_metric(u, v) - sup_metric(v, w);
    expect(triangle <= 1e-12, "triangle inequality violated by " + fmt(triangle));
    worst = std::max(worst, triangle);

    const double lambda = testsupport::uniform(rng, -10.0, 10.0);
    const double homogeneity = std::abs(sup_metric(scale(lambda, u), scale(lambda, v)) -
                                        std::abs(lambda) * sup_metric(u, v));
    expect(homogeneity <= 1e-12, "homogeneity violated by " + fmt(homogeneity));
    worst = std::max(worst, homogeneity);

    const double translation =
        std::abs(sup_metric(add(u, w), add(v, w)) - sup_metric(u, v));
    expect(translation <= 1e-12, "translation invariance violated by " + fmt(translation));
    worst = std::max(worst, translation);
  }
  detail = "1000 triples x 3 properties, worst deviation " + fmt(worst);
}

void criterion_h_difference(std::string& detail) {
  std::mt19937_64 rng(9002);
  const LevelGrid grid = LevelGrid::uniform();
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const std::size_t dim = 1 + i % 2;
    const FuzzyBox y = testsupport::random_fuzzy_box(rng, grid, dim, 400.0, 30.0);
    const FuzzyBox z = testsupport::random_fuzzy_box(rng, grid, dim, 400.0, 30.0);
    const auto recovered = h_difference(add(y, z), y);
    expect(recovered.has_value(), "existing H-difference was rejected");
    const double err = sup_metric(*recovered, z);
    expect(err <= 1e-12, "round trip error " + fmt(err));
    worst = std::max(worst, err);
  }

  // Constructed rejections: narrower minuend, then non-nested difference.
  for (int i = 0; i < 100; ++i) {
    const FuzzyBox x = testsupport::random_fuzzy_box(rng, grid, 1, 10.0, 5.0);
    std::vector<Box> widen(grid.size(), Box({-0.5}, {0.5}));
    const FuzzyBox y = add(x, FuzzyBox(grid, std::move(widen)));
    expect(!h_difference(x, y).has_value(), "narrow minuend was not rejected");
  }
  std::uniform_int_distribution<std::size_t> pick_level(1, grid.size() - 1);
  for (int i = 0; i < 100; ++i) {
    const std::size_t k = pick_level(rng);
    std::vector<Box> z_cuts, y_cuts;
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double dip = (j == k) ? -0.15 : 0.0;  // breaks lo-monotonicity at level k
      z_cuts.emplace_back(std::vector<double>{dip}, std::vector<double>{1.0});
      y_cuts.emplace_back(std::vector<double>{-2.0 + 0.16 * static_cast<double>(j)},
                          std::vector<double>{2.0 - 0.16 * static_cast<double>(j)});
    }
    const FuzzyBox y(grid, y_cuts);
    std::vector<Box> x_cuts;
    for (std::size_t j = 0; j < grid.size(); ++j)
      x_cuts.emplace_back(std::vector<double>{y_cuts[j].lo(0) + z_cuts[j].lo(0)},
                          std::vector<double>{y_cuts[j].hi(0) + z_cuts[j].hi(0)});
    const FuzzyBox x(grid, std::move(x_cuts));  // valid state by construction
    expect(!h_difference(x, y).has_value(), "non-nested difference was not rejected");
  }
  detail = "1000 round trips (worst " + fmt(worst) + "), 200 impossible cases rejected";
}

void criterion_integral_laws(std::string& detail) {
  std::mt19937_64 rng(9003);
  const LevelGrid grid({0.0, 0.5, 1.0});
  const TimeInterval domain{0.0, 2.0};
  double worst_law = 0.0;
  double worst_lipschitz = -1.0;
  for (int i = 0; i < 200; ++i) {
    const auto cf = testsupport::random_smooth_coeffs(rng, grid);
    const auto cg = testsupport::random_smooth_coeffs(rng, grid);
    const FuzzyPath f = testsupport::make_smooth_path(cf, grid, domain);
    const FuzzyPath g = testsupport::make_smooth_path(cg, grid, domain);

    const FuzzyBox int_f = integrate(f, 0.0, 2.0);
    const FuzzyBox int_g = integrate(g, 0.0, 2.0);
    const FuzzyPath sum(domain, grid, 1, [&](double t) { return add(f(t), g(t)); });
    const double linearity = sup_metric(integrate(sum, 0.0, 2.0), add(int_f, int_g));
    expect(linearity <= 1e-10, "linearity violated by " + fmt(linearity));

    const double c = testsupport::uniform(rng, 0.3, 1.7);
    const double additivity =
        sup_metric(add(integrate(f, 0.0, c), integrate(f, c, 2.0)), int_f);
    expect(additivity <= 1e-10, "additivity violated by " + fmt(additivity));

    // Metric-integral inequality with the right side on the same nodes.
    const int n = 512;
    double rhs = 0.0;
    for (int k = 0; k <= n; ++k) {
      const double t = 2.0 * k / n;
      const double wgt = (k == 0 || k == n) ? 1.0 : (k % 2 == 1 ? 4.0 : 2.0);
      rhs += wgt * sup_metric(f(t), g(t));
    }
    rhs *= (2.0 / n) / 3.0;
    const double gap = sup_metric(int_f, int_g) - rhs;
    expect(gap <= 1e-10, "metric-integral inequality violated by " + fmt(gap));
    worst_law = std::max({worst_law, linearity, additivity, gap});

    // Lipschitz bound of the primitive with the sup on a 1000-point grid.
    const double t1 = testsupport::uniform(rng, 0.0, 1.0);
    const double t2 = testsupport::uniform(rng, t1 + 0.05, 2.0);
    double sup = 0.0;
    for (int k = 0; k <= 1000; ++k)
      sup = std::max(sup, sup_metric_to_zero(f(t1 + (t2 - t1) * k / 1000.0)));
    const double violation =
        sup_metric(integrate(f, 0.0, t1), integrate(f, 0.0, t2)) - (t2 - t1) * sup;
    expect(violation <= 1e-8, "primitive Lipschitz bound violated by " + fmt(violation));
    worst_lipschitz = std::max(worst_lipschitz, violation);
  }
  detail = "200 paths; worst law residual " + fmt(worst_law) + ", worst Lipschitz excess " +
           fmt(worst_lipschitz);
}

void criterion_fundamental_theorem(std::string& detail) {
  std::mt19937_64 rng(9004);
  const LevelGrid grid({0.0, 0.5, 1.0});
  const TimeInterval domain{0.0, 3.0};
  double worst_final = 0.0;
  double worst_slope = 1.0;
  for (int path_idx = 0; path_idx < 50; ++path_idx) {
    const auto cf = testsupport::random_smooth_coeffs(rng, grid);
    const FuzzyPath f = testsupport::make_smooth_path(cf, grid, domain);
    auto cache = std::make_shared<std::map<double, FuzzyBox>>();
    const FuzzyPath primitive(domain, grid, 1, [cf, grid, f, cache](double t) {
      if (const auto it = cache->find(t); it != cache->end()) return it->second;
      const auto n = std::max<std::size_t>(128, static_cast<std::size_t>(2048.0 * t));
      const FuzzyBox value = integrate(f, 0.0, t, n);
      cache->emplace(t, value);
      return value;
    });
    const double t0 = testsupport::uniform(rng, 0.5, 2.5);
    const FuzzyBox target = f(t0);

    std::vector<double> log_h, log_err;
    double final_err = 0.0;
    for (std::size_t m : {8, 9, 10, 11}) {
      const HSchedule sched = HSchedule::geometric(1e-2, 0.5, m);
      const auto d = h_derivative(primitive, t0, sched);
      expect(d.ok(), "derivative of the primitive was rejected");
      const double err = sup_metric(d.value(), target);
      if (m == 8) final_err = err;
      log_h.push_back(std::log(sched.finest()));
      log_err.push_back(std::log(std::max(err, 1e-300)));
    }
    expect(final_err < 1e-3, "final error " + fmt(final_err));
    worst_final = std::max(worst_final, final_err);

    // Least-squares slope of log err vs log h: first-order decay.
    const auto n = static_cast<double>(log_h.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t k = 0; k < log_h.size(); ++k) {
      sx += log_h[k];
      sy += log_err[k];
      sxx += log_h[k] * log_h[k];
      sxy += log_h[k] * log_err[k];
    }
    const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    expect(slope >= 0.5 && slope <= 1.5,
           "decay order " + fmt(slope) + " outside the first-order band");
    worst_slope = std::min(worst_slope, slope);
  }
  detail = "50 paths; worst final error " + fmt(worst_final) + ", weakest decay order " +
           fmt(worst_slope);
}

void criterion_comparison(std::string& detail) {
  // Closed-form anchors. The epsilon shift biases the estimate upward by
  // ~eps_finest * e^span, so the tight exponential check uses a deep ladder.
  const auto exp_run =
      maximal_solution({ScalarFn::parse_or_throw("w"), 0.0, 1.0, 2.0, 0.01}, 12);
  expect(exp_run.ok(), "exponential run failed");
  double worst_exp = 0.0;
  for (std::size_t k = 0; k < exp_run.value().times().size(); ++k)
    worst_exp = std::max(worst_exp, std::abs(exp_run.value().values()[k] -
                                             std::exp(exp_run.value().times()[k])));
  expect(worst_exp <= 1e-7, "exponential error " + fmt(worst_exp));

  const auto sqrt_run =
      maximal_solution({ScalarFn::parse_or_throw("2*sqrt(abs(w))"), 0.0, 0.0, 3.0, 0.01});
  expect(sqrt_run.ok(), "square-root run failed");
  const double sqrt_err = std::abs(sqrt_run.value().value_at(3.0) - 9.0);
  expect(sqrt_err <= 5e-3, "maximal solution error " + fmt(sqrt_err) + " at t=3");

  // Randomized comparison soundness with an analytically forced hypothesis.
  std::mt19937_64 rng(9005);
  double worst_margin = 1e9;
  for (int i = 0; i < 200; ++i) {
    const double c1 = testsupport::uniform(rng, -0.5, 0.5);
    const double c2 = testsupport::uniform(rng, 0.0, 1.0);
    const double phi = testsupport::uniform(rng, 0.0, 1.0);
    const std::string base =
        "(" + std::to_string(c1) + ")*w + " + std::to_string(c2) + "*sin(t)^2";
    const ScalarFn g = ScalarFn::parse_or_throw(base);
    const ScalarFn damped = ScalarFn::parse_or_throw(
        base + " - " + std::to_string(phi) + "*(1+cos(t)^2)/2");
    const double w0 = testsupport::uniform(rng, 0.0, 2.0);

    // m solves w' = g - phi_fn <= g(t, m), integrated independently.
    std::vector<double> times{0.0}, values{w0};
    double t = 0.0, w = w0;
    const auto fd = [&](double tt, double ww) { return damped.eval_or_throw(tt, ww); };
    while (t < 3.0 - 1e-12) {
      const double h = 0.01;
      const double k1 = fd(t, w);
      const double k2 = fd(t + h / 2, w + h / 2 * k1);
      const double k3 = fd(t + h / 2, w + h / 2 * k2);
      const double k4 = fd(t + h, w + h * k3);
      w += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
      t += h;
      times.push_back(t);
      values.push_back(w);
    }
    const ScalarTrajectory m(std::move(times), std::move(values));
    const auto r = maximal_solution({g, 0.0, w0, 3.0, 0.01});
    expect(r.ok(), "comparison run failed");
    const LemmaVerdict verdict = lemma_check(m, g, r.value());
    expect(verdict.precondition_ok, "precondition unexpectedly violated");
    expect(verdict.worst_conclusion_margin >= -1e-6,
           "conclusion margin " + fmt(verdict.worst_conclusion_margin));
    worst_margin = std::min(worst_margin, verdict.worst_conclusion_margin);
  }
  detail = "closed forms ok (exp " + fmt(worst_exp) + ", sqrt " + fmt(sqrt_err) +
           "); 200 forced instances, worst conclusion margin " + fmt(worst_margin);
}

void criterion_example_3_1(std::string& detail) {
  write_file(work_dir() / "ex31.json", example31_doc().dump(2));
  const fs::path cert_path = work_dir() / "c6_cert.json";
  const int cert_exit =
      run_cli("certify " + (work_dir() / "ex31.json").string() + " --theorem 3.2 --out " +
                  cert_path.string(),
              work_dir() / "c6_cert.out");
  expect(cert_exit == 0, "certify exited with " + std::to_string(cert_exit));
  const Json cert = Json::parse(slurp(cert_path));
  expect(cert["claim"] == "UniformlyStable", "claim was " + cert["claim"].dump());

  // Simulated level endpoints against the closed form, via the emitted CSV.
  const fs::path csv_path = work_dir() / "c6_traj.csv";
  const int sim_exit = run_cli(
      "simulate " + (work_dir() / "ex31.json").string() + " --out " + csv_path.string(),
      work_dir() / "c6_sim.out");
  expect(sim_exit == 0, "simulate exited with " + std::to_string(sim_exit));
  std::istringstream csv(slurp(csv_path));
  std::string line;
  std::getline(csv, line);  // header
  const LevelGrid grid = LevelGrid::uniform();
  double worst_endpoint = 0.0;
  while (std::getline(csv, line)) {
    std::istringstream row(line);
    std::string field;
    std::vector<double> cols;
    while (std::getline(row, field, ',')) cols.push_back(std::stod(field));
    expect(cols.size() == 2 + 2 * grid.size(), "unexpected CSV width");
    const double factor = std::exp(std::atan(cols[0]));
    for (std::size_t j = 0; j < grid.size(); ++j) {
      const double a = grid.alpha(j);
      const double lo0 = 1.0 - 0.5 * (1.0 - a);
      const double hi0 = 1.0 + 0.5 * (1.0 - a);
      worst_endpoint = std::max(worst_endpoint, std::abs(cols[2 + 2 * j] - lo0 * factor));
      worst_endpoint = std::max(worst_endpoint, std::abs(cols[3 + 2 * j] - hi0 * factor));
    }
  }
  expect(worst_endpoint <= 1e-6, "endpoint error " + fmt(worst_endpoint));

  // Amplification and the empirical stability modulus.
  const Scenario scn = example_3_1_scenario();
  const double amp_bound = std::exp(std::numbers::pi / 2.0) + 1e-3;
  double worst_amp = 0.0;
  for (double t0 : {0.0, 1.0, 5.0}) {
    FuzzyIvp ivp = scn.ivp;
    ivp.t0 = t0;
    ivp.horizon = t0 + 50.0;
    const auto traj = solve(ivp);
    expect(traj.ok(), "probe solve failed");
    remember("example-3-1 t0=" + fmt(t0), traj.value());
    double peak = 0.0;
    for (const auto& state : traj.value().states())
      peak = std::max(peak, sup_metric_to_zero(state));
    const double amp = peak / sup_metric_to_zero(ivp.x0);
    expect(amp <= amp_bound, "amplification " + fmt(amp) + " exceeds " + fmt(amp_bound));
    worst_amp = std::max(worst_amp, amp);
  }

  const double delta = delta_search(scn, 1.0, 0.0);
  const double expected = std::exp(-std::numbers::pi / 2.0);
  expect(std::abs(delta - expected) <= 2e-3,
         "delta(1, 0) = " + fmt(delta) + ", expected " + fmt(expected));
  detail = "claim ok; endpoints within " + fmt(worst_endpoint) + "; peak amplification " +
           fmt(worst_amp) + "; delta(1,0) = " + fmt(delta);
}

void criterion_exponential(std::string& detail) {
  const Scenario scn = crisp_exponential_scenario();
  const auto plan = SamplingPlan::make_default(scn.ivp.x0.grid(), 1, scn.spec.rho,
                                               SamplingPlan::Shapes::CrispOnly);
  const StabilityCertificate cert =
      check_theorem(scn.spec, scn.ivp.rhs, TheoremId::T3_5, plan);
  expect(cert.claim == StabilityClaim::UniformlyExponentiallyStable,
         "claim was " + to_string(cert.claim));
  expect(cert.bounds && cert.bounds->alpha && cert.bounds->beta, "bounds missing");
  expect(*cert.bounds->alpha == 1.0, "alpha = " + fmt(*cert.bounds->alpha));
  const BetaParams& beta = *cert.bounds->beta;
  expect(beta.delta1 == 1.0, "delta1 = " + fmt(beta.delta1));
  for (double h : {0.25, 0.5, 1.0, 2.0})
    expect(beta(h) == h + 1e-6, "beta(" + fmt(h) + ") = " + fmt(beta(h)));

  const auto traj = solve(scn.ivp);
  expect(traj.ok(), "solve failed");
  remember("crisp-exponential", traj.value());
  const double d0 = sup_metric_to_zero(scn.ivp.x0);
  for (std::size_t k = 0; k < traj.value().times().size(); ++k) {
    const double t = traj.value().times()[k];
    const double d = sup_metric_to_zero(traj.value().states()[k]);
    const double bound = beta(d0) * std::exp(-(t - scn.ivp.t0)) * (1.0 + 1e-6);
    expect(d <= bound, "envelope violated at t=" + fmt(t));
  }
  const auto fit = decay_fit(traj.value());
  expect(fit.ok(), "decay fit failed");
  expect(std::abs(fit.value().rate - 1.0) <= 5e-3, "rate = " + fmt(fit.value().rate));
  detail = "alpha=1, delta1=1, beta(h)=h+1e-6 exact; envelope holds; rate " +
           fmt(fit.value().rate);
}

void criterion_structural(std::string& detail) {
  // Extend the matrix with randomized linear systems, including coefficients
  // that change sign.
  std::mt19937_64 rng(9008);
  const LevelGrid grid = LevelGrid::uniform();
  for (int i = 0; i < 20; ++i) {
    const double c0 = testsupport::uniform(rng, -0.6, 0.6);
    const double c1 = testsupport::uniform(rng, 0.0, 0.8);
    const ScalarFn a = ScalarFn::parse_or_throw(std::to_string(c0) + " + " +
                                                std::to_string(c1) + "*sin(t)");
    const FuzzyBox x0 = testsupport::random_fuzzy_box(rng, grid, 1, 0.4, 0.2);
    const FuzzyIvp ivp{0.0, x0, LinearScalarRhs{a}, 5.0, 0.05, 1e9};
    const auto traj = solve(ivp);
    expect(traj.ok(), "random linear solve failed");
    remember("random linear " + std::to_string(i), traj.value());
  }

  const auto zero_traj =
      solve(FuzzyIvp{0.0, FuzzyBox::zero(grid, 1),
                     LinearScalarRhs{ScalarFn::parse_or_throw("sin(t)")}, 5.0, 0.05, 1.0});
  expect(zero_traj.ok(), "trivial solve failed");
  for (const auto& state : zero_traj.value().states())
    expect(sup_metric_to_zero(state) == 0.0, "trivial solution is not exactly zero");

  std::size_t states_checked = 0;
  for (const auto& [name, traj] : trajectory_registry()) {
    const auto& states = traj.states();
    for (const FuzzyBox& s : states) {
      ++states_checked;
      for (std::size_t j = 1; j < s.levels(); ++j) {
        for (std::size_t i = 0; i < s.dim(); ++i) {
          expect(s.cut(j).lo(i) >= s.cut(j - 1).lo(i) - 1e-10 &&
                     s.cut(j).hi(i) <= s.cut(j - 1).hi(i) + 1e-10,
                 name + ": nesting violated");
        }
      }
    }
    for (std::size_t k = 1; k < states.size(); ++k) {
      for (std::size_t j = 0; j < states[k].levels(); ++j) {
        const auto before = diameter(states[k - 1], j);
        const auto after = diameter(states[k], j);
        for (std::size_t i = 0; i < before.size(); ++i)
          expect(after[i] >= before[i] - 1e-10, name + ": diameter shrank");
      }
    }
  }
  detail = std::to_string(trajectory_registry().size() + 1) + " trajectories, " +
           std::to_string(states_checked) + " states checked";
}

MatrixResult& matrix_a() {
  static MatrixResult m = run_cli_matrix("runA");
  return m;
}

void criterion_falsification(std::string& detail) {
  MatrixResult& m = matrix_a();
  expect(m.exit_codes.at("certify_bad35") == 3,
         "side-condition violation exited with " +
             std::to_string(m.exit_codes.at("certify_bad35")));
  const Json bad = Json::parse(slurp(m.dir / "bad35.json"));
  expect(bad["claim"] == "None", "claim was " + bad["claim"].dump());
  expect(bad.contains("counterexample"), "no counterexample recorded");
  expect(bad["counterexample"]["hypothesis"] == "delta > gamma/Lambda > 0",
         "unexpected counterexample " + bad["counterexample"].dump());

  expect(m.exit_codes.at("certify_unstable32") == 3,
         "unstable comparison exited with " +
             std::to_string(m.exit_codes.at("certify_unstable32")));
  const Json unstable = Json::parse(slurp(m.dir / "unstable32.json"));
  expect(unstable["claim"] == "None", "claim was " + unstable["claim"].dump());
  expect(unstable["scalar_probe"]["classification"] == "Falsified", "probe not falsified");
  expect(unstable.contains("counterexample"), "no escape datum recorded");
  const std::string datum = unstable["counterexample"]["detail"].get<std::string>();
  expect(datum.find("w0=") != std::string::npos, "datum lacks the escaping trajectory");
  detail = "both falsified certificates carry their violating datum";
}

void criterion_determinism(std::string& detail) {
  MatrixResult& a = matrix_a();
  const MatrixResult b = run_cli_matrix("runB");
  for (const auto& [name, code] : a.exit_codes)
    expect(b.exit_codes.at(name) == code, name + ": exit codes differ");
  std::size_t compared = 0;
  for (const auto& entry : fs::directory_iterator(a.dir)) {
    const fs::path other = b.dir / entry.path().filename();
    expect(fs::exists(other), "missing " + other.string());
    expect(slurp(entry.path()) == slurp(other),
           entry.path().filename().string() + " differs between runs");
    ++compared;
  }
  expect(compared >= 10, "matrix produced too few artifacts");
  detail = std::to_string(compared) + " artifacts byte-identical across two runs";
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "metric axioms (triangle, homogeneity, translation)", criterion_metric_axioms, 5.0},
      {2, "H-difference round trip and rejection", criterion_h_difference, 2.0},
      {3, "integral laws and the primitive's Lipschitz bound", criterion_integral_laws, 30.0},
      {4, "fundamental theorem with first-order decay", criterion_fundamental_theorem, 30.0},
      {5, "comparison closed forms and forced-hypothesis soundness", criterion_comparison, 60.0},
      {6, "bounded-growth reproduction (certificate, closed form, delta)", criterion_example_3_1, 60.0},
      {7, "exponential certificate with exact constructed bounds", criterion_exponential, 10.0},
      {8, "structural invariants across the trajectory matrix", criterion_structural, 0.0},
      {9, "falsified certificates carry their violating datum", criterion_falsification, 0.0},
      {10, "byte-identical CLI outputs across consecutive runs", criterion_determinism, 0.0},
  };

  int failures = 0;
  for (const auto& criterion : criteria) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool pass = true;
    try {
      criterion.run(detail);
    } catch (const std::exception& e) {
      pass = false;
      detail = e.what();
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (pass && criterion.budget_seconds > 0.0 && seconds > criterion.budget_seconds) {
      pass = false;
      detail = "runtime " + fmt(seconds) + "s exceeds budget " +
               fmt(criterion.budget_seconds) + "s";
    }
    failures += pass ? 0 : 1;
    std::printf("[%s] criterion %2d (%6.2fs): %s — %s\n", pass ? "PASS" : "FAIL",
                criterion.id, seconds, criterion.title.c_str(), detail.c_str());
    std::fflush(stdout);
  }
  if (failures > 0) {
    std::printf("%d criterion(s) failed\n", failures);
    return 1;
  }
  std::printf("all 10 criteria passed\n");
  return 0;
}
