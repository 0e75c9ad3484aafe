// Command-line front end. Talks to the library only through the C API.

#include <epinet/epinet.h>

#include <CLI11.hpp>
#include <json.hpp>

#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <unistd.h>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void raise(epinet_status st, const std::string& context) {
  const int code = st == EPINET_ERR_INVALID_ARGUMENT || st == EPINET_ERR_PARSE || st == EPINET_ERR_IO ? kExitUsage
                                                                                                         : kExitCheckFailed;
  throw CliError{code, context + ": " + epinet_last_error()};
}

void check(epinet_status st, const std::string& context) {
  if (st != EPINET_OK)
    raise(st, context);
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using NetworkPtr = std::unique_ptr<epinet_network, Deleter<epinet_network, epinet_network_free>>;
using ReportPtr = std::unique_ptr<epinet_report, Deleter<epinet_report, epinet_report_free>>;
using SimulationPtr = std::unique_ptr<epinet_simulation, Deleter<epinet_simulation, epinet_simulation_free>>;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_atomic(const fs::path& target, const std::string& content) {
  const fs::path tmp = target.parent_path() / ("." + target.filename().string() + ".tmp." + std::to_string(::getpid()));
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
      throw CliError{kExitUsage, "cannot write '" + tmp.string() + "'"};
    out << content;
    out.flush();
    if (!out)
      throw CliError{kExitUsage, "write failed for '" + tmp.string() + "'"};
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw CliError{kExitUsage, "cannot rename into '" + target.string() + "'"};
  }
}

// Collects the files of one run and writes them, manifest last.
class Output {
public:
  Output(std::string dir, std::string command) : dir_(std::move(dir)) {
    manifest_ = {{"command", std::move(command)},
                 {"tool", "epinet"},
                 {"version", epinet_version()},
                 {"timestamp", utc_timestamp()},
                 {"inputs", json::array()},
                 {"parameters", json::object()},
                 {"outputs", json::array()}};
    if (const char* threads = std::getenv("EPINET_THREADS"))
      manifest_["environment"]["EPINET_THREADS"] = threads;
  }

  bool to_directory() const { return !dir_.empty(); }
  json& parameters() { return manifest_["parameters"]; }
  void input(const std::string& path) {
    std::error_code ec;
    const fs::path abs = fs::absolute(path, ec);
    manifest_["inputs"].push_back(ec ? path : abs.string());
  }

  // Without --out, the primary document goes to stdout.
  void primary(const std::string& name, const std::string& content) {
    if (!to_directory()) {
      std::cout << content;
      if (!content.empty() && content.back() != '\n')
        std::cout << '\n';
      return;
    }
    file(name, content);
  }

  void file(const std::string& name, const std::string& content) {
    if (!to_directory())
      return;
    ensure_dir();
    write_atomic(fs::path(dir_) / name, content);
    manifest_["outputs"].push_back(name);
  }

  void finish() {
    if (!to_directory())
      return;
    ensure_dir();
    write_atomic(fs::path(dir_) / "manifest.json", manifest_.dump(2) + "\n");
  }

private:
  void ensure_dir() {
    std::error_code ec;
    fs::create_directories(dir_, ec);
    if (ec)
      throw CliError{kExitUsage, "cannot create output directory '" + dir_ + "': " + ec.message()};
  }

  std::string dir_;
  json manifest_;
};

// Summary text goes to stdout when files carry the data, otherwise to stderr
// so stdout stays machine-readable.
void summary(const Output& out, const std::string& text) {
  (out.to_directory() ? std::cout : std::cerr) << text;
}

NetworkPtr load(const std::string& path) {
  epinet_network* raw = nullptr;
  check(epinet_network_load(path.c_str(), &raw), "cannot load spec");
  return NetworkPtr(raw);
}

struct Options {
  std::string spec;
  double beta = 1.0;
  std::optional<double> delta;
  std::uint64_t seed = 1;
  std::size_t trials = 1;
  double horizon = 10.0;
  double step = 0.01;
  double sample_interval = 0.0;
  bool linearized = false;
  bool coupled = false;
  std::size_t exact_cap = 4096;
  std::size_t exact_dimension_cap = 10000;
  bool dump_matrix = false;
  std::string out;
  std::string example;
  std::size_t count = 100;
  std::size_t n = 0;
  double delta_u = 0.0;
};

int cmd_analyze(const Options& o) {
  Output out(o.out, "analyze");
  out.input(o.spec);
  out.parameters() = {{"beta", o.beta},
                      {"delta", *o.delta},
                      {"exact_cap", o.exact_cap},
                      {"exact_dimension_cap", o.exact_dimension_cap},
                      {"dump_matrix", o.dump_matrix}};
  const auto net = load(o.spec);
  epinet_analyze_options ao;
  epinet_analyze_options_default(&ao);
  ao.exact_cap = o.exact_cap;
  ao.exact_dimension_cap = o.exact_dimension_cap;
  ao.dump_matrix = o.dump_matrix ? 1 : 0;
  epinet_report* raw = nullptr;
  check(epinet_analyze(net.get(), o.beta, *o.delta, &ao, &raw), "analysis failed");
  const ReportPtr rep(raw);
  out.primary("report.json", epinet_report_json(rep.get()));
  if (const char* mm = epinet_report_matrix_market(rep.get()))
    out.file("mean_dynamics.mtx", mm);
  out.finish();
  summary(out, epinet_report_summary(rep.get()));
  return kExitOk;
}

int cmd_simulate(const Options& o) {
  Output out(o.out, "simulate");
  out.input(o.spec);
  out.parameters() = {{"beta", o.beta},       {"delta", *o.delta},          {"seed", o.seed},
                      {"trials", o.trials},   {"horizon", o.horizon},       {"step", o.step},
                      {"sample_interval", o.sample_interval}, {"linearized", o.linearized}, {"coupled", o.coupled},
                      {"p0", "ones"}};
  const auto net = load(o.spec);
  epinet_sim_options so;
  epinet_sim_options_default(&so);
  so.horizon = o.horizon;
  so.step = o.step;
  so.sample_interval = o.sample_interval;
  so.trials = o.trials;
  so.seed = o.seed;
  so.linearized = o.linearized ? 1 : 0;
  so.coupled = o.coupled ? 1 : 0;
  epinet_simulation* raw = nullptr;
  check(epinet_simulate(net.get(), o.beta, *o.delta, nullptr, 0, &so, &raw), "simulation failed");
  const SimulationPtr sim(raw);
  out.file("trajectory.csv", epinet_simulation_trajectory_csv(sim.get()));
  if (const char* lin = epinet_simulation_linear_csv(sim.get()))
    out.file("trajectory_linear.csv", lin);
  out.file("events.csv", epinet_simulation_events_csv(sim.get()));
  out.primary("simulation.json", epinet_simulation_json(sim.get()));
  out.finish();

  const json meta = json::parse(epinet_simulation_json(sim.get()));
  std::string text = "decay rate: " + meta["decay"]["rate"].dump() + " over " + std::to_string(o.trials) + " trial(s)\n";
  if (o.coupled)
    text += "min margin (linearized - nonlinear, L1): " + meta["min_margin"].dump() + "\n";
  summary(out, text);
  return kExitOk;
}

int cmd_example(const Options& o) {
  Output out(o.out, "example");
  out.parameters() = {{"name", o.example}};
  epinet_report* raw = nullptr;
  check(epinet_example(o.example.c_str(), &raw), "example failed");
  const ReportPtr rep(raw);
  out.primary("example.json", epinet_report_json(rep.get()));
  out.finish();
  summary(out, epinet_report_summary(rep.get()));
  return epinet_report_ok(rep.get()) ? kExitOk : kExitCheckFailed;
}

int cmd_oracle(const Options& o) {
  Output out(o.out, "oracle");
  out.parameters() = {{"count", o.count}, {"seed", o.seed}, {"grid_points", 20}, {"relative_tolerance", 1e-8}};
  epinet_report* raw = nullptr;
  check(epinet_oracle_suite(o.count, o.seed, &raw), "oracle suite failed");
  const ReportPtr rep(raw);
  out.primary("oracle.json", epinet_report_json(rep.get()));
  out.finish();
  const bool ok = epinet_report_ok(rep.get()) != 0;
  std::cout << (ok ? "PASS " : "FAIL ") << epinet_report_summary(rep.get());
  return ok ? kExitOk : kExitCheckFailed;
}

int cmd_minimize_f(const Options& o) {
  Output out(o.out, "minimize-f");
  out.parameters() = {{"n", o.n}, {"delta_uncertainty", o.delta_u}};
  epinet_uncertainty_bound ub{};
  check(epinet_minimize_f(o.n, o.delta_u, &ub), "minimization failed");
  const json doc = {{"n", o.n},       {"delta_uncertainty", o.delta_u}, {"f_min", ub.f_min},
                    {"s_star", ub.s_star}, {"s0", ub.s0},                {"s_upper", ub.s_upper},
                    {"min_at_zero", ub.min_at_zero != 0}};
  out.primary("minimize_f.json", doc.dump(2) + "\n");
  out.finish();
  summary(out, "min f = " + json(ub.f_min).dump() + " at s = " + json(ub.s_star).dump() + "\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Extinction analysis for SIS epidemics on randomly switched networks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(epinet_version()));
  Options o;

  auto add_out = [&](CLI::App* sub) { sub->add_option("--out", o.out, "Output directory (manifest + files)"); };
  auto add_epidemic = [&](CLI::App* sub) {
    sub->add_option("--spec", o.spec, "Spec document (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--beta", o.beta, "Infection rate")->capture_default_str();
    sub->add_option("--delta", o.delta, "Curing rate")->required();
  };

  auto* analyze = app.add_subcommand("analyze", "Sufficient condition plus exact mean-stability test when small");
  add_epidemic(analyze);
  analyze->add_option("--exact-cap", o.exact_cap, "Max joint configurations for the exact test")->capture_default_str();
  analyze->add_option("--exact-dimension-cap", o.exact_dimension_cap, "Max n * configurations")->capture_default_str();
  analyze->add_flag("--dump-matrix", o.dump_matrix, "Write the mean-dynamics matrix (MatrixMarket)");
  add_out(analyze);

  auto* simulate = app.add_subcommand("simulate", "Simulate trajectories and estimate the decay rate");
  add_epidemic(simulate);
  simulate->add_option("--seed", o.seed)->capture_default_str();
  simulate->add_option("--trials", o.trials)->capture_default_str()->check(CLI::PositiveNumber);
  simulate->add_option("--horizon", o.horizon)->capture_default_str();
  simulate->add_option("--step", o.step)->capture_default_str();
  simulate->add_option("--sample-interval", o.sample_interval, "0: horizon / 100")->capture_default_str();
  simulate->add_flag("--linearized", o.linearized, "Integrate the linearized model");
  simulate->add_flag("--coupled", o.coupled, "Both models on one switching path");
  add_out(simulate);

  auto* example = app.add_subcommand("example", "Reproduce a reference example");
  example->add_option("name", o.example, "community | powerlaw")
      ->required()
      ->check(CLI::IsMember({"community", "powerlaw"}));
  add_out(example);

  auto* oracle = app.add_subcommand("oracle", "Brute-force sandwich and tail-bound suite");
  oracle->add_option("--count", o.count)->capture_default_str()->check(CLI::PositiveNumber);
  oracle->add_option("--seed", o.seed)->capture_default_str();
  add_out(oracle);

  auto* minf = app.add_subcommand("minimize-f", "Minimize the uncertainty bound f");
  minf->add_option("--n", o.n, "Vertex count")->required()->check(CLI::PositiveNumber);
  minf->add_option("--uncertainty", o.delta_u, "Variance row-sum bound")->required();
  add_out(minf);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*analyze)
      return cmd_analyze(o);
    if (*simulate)
      return cmd_simulate(o);
    if (*example)
      return cmd_example(o);
    if (*oracle)
      return cmd_oracle(o);
    return cmd_minimize_f(o);
  } catch (const CliError& e) {
    std::cerr << "epinet: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "epinet: " << e.what() << "\n";
    return kExitCheckFailed;
  }
}
