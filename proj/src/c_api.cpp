#include "epinet/epinet.h"

#include "epinet/analysis.hpp"
#include "epinet/error.hpp"
#include "epinet/io.hpp"
#include "epinet/simulator.hpp"
#include "epinet/spectral.hpp"
#include "epinet/stability.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <new>
#include <optional>
#include <sstream>
#include <string>

struct epinet_network {
  epinet::SpecDocument doc;
};

struct epinet_report {
  std::string json;
  std::string summary;
  std::optional<std::string> matrix_market;
  bool ok = true;
  int sufficient = 0;
  int exact = 0;
};

struct epinet_simulation {
  std::string trajectory;
  std::optional<std::string> linear;
  std::string events;
  std::string json;
  double min_margin = std::numeric_limits<double>::quiet_NaN();
};

namespace {

thread_local std::string g_last_error;

// Largest ensemble realized edge by edge for simulation.
constexpr std::size_t kSimulationRealizeLimit = 400;

epinet_status status_of(epinet::ErrorKind kind) {
  switch (kind) {
  case epinet::ErrorKind::InvalidArgument: return EPINET_ERR_INVALID_ARGUMENT;
  case epinet::ErrorKind::Parse: return EPINET_ERR_PARSE;
  case epinet::ErrorKind::Capacity: return EPINET_ERR_CAPACITY;
  case epinet::ErrorKind::Numerical: return EPINET_ERR_NUMERICAL;
  }
  return EPINET_ERR_INTERNAL;
}

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class F>
epinet_status guarded(F&& body) {
  try {
    body();
    return EPINET_OK;
  } catch (const epinet::Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const IoError& e) {
    g_last_error = e.what();
    return EPINET_ERR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return EPINET_ERR_CAPACITY;
  } catch (const std::exception& e) {
    g_last_error = std::string("internal error: ") + e.what();
    return EPINET_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "internal error";
    return EPINET_ERR_INTERNAL;
  }
}

void need(const void* ptr, const char* name) {
  if (ptr == nullptr)
    epinet::fail(epinet::ErrorKind::InvalidArgument, std::string(name) + " must not be null");
}

std::string summary_text(const epinet::StabilityReport& r) {
  std::string out;
  for (const auto& line : epinet::verdict_lines(r))
    out += line + "\n";
  return out;
}

void fill_verdicts(epinet_report& rep, const epinet::StabilityReport& r) {
  rep.sufficient = r.verdict_sufficient == epinet::SufficientVerdict::StableAlmostSurely ? 1 : 0;
  switch (r.verdict_exact) {
  case epinet::ExactVerdict::NotRun: rep.exact = 0; break;
  case epinet::ExactVerdict::MeanStable: rep.exact = 1; break;
  case epinet::ExactVerdict::NotMeanStable: rep.exact = 2; break;
  case epinet::ExactVerdict::SkippedTooLarge: rep.exact = 3; break;
  }
}

epinet::SwitchedNetworkSpec simulation_network(const epinet::SpecDocument& doc) {
  using namespace epinet;
  if (const auto* spec = std::get_if<SwitchedNetworkSpec>(&doc))
    return *spec;
  if (const auto* c = std::get_if<CommunitySpec>(&doc)) {
    if (c->n1 + c->n2 > kSimulationRealizeLimit)
      fail(ErrorKind::Capacity, "community ensemble too large to simulate edge by edge (n > " +
                                    std::to_string(kSimulationRealizeLimit) + ")");
    return realize_community(*c);
  }
  if (const auto* ed = std::get_if<ExpectedDegreeDocument>(&doc)) {
    if (ed->spec.d.size() > kSimulationRealizeLimit)
      fail(ErrorKind::Capacity, "expected-degree ensemble too large to simulate edge by edge (n > " +
                                    std::to_string(kSimulationRealizeLimit) + ")");
    return realize_expected_degrees(ed->spec);
  }
  fail(ErrorKind::Capacity, "power-law ensembles are analyzed in closed form only and cannot be simulated");
}

Eigen::MatrixXd row_major(const double* data, std::size_t n) {
  need(data, "matrix");
  epinet::require(n >= 1, "matrix dimension must be >= 1");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = data[r * n + c];
  return m;
}

}  // namespace

extern "C" {

const char* epinet_version(void) { return "0.1.0"; }

const char* epinet_last_error(void) { return g_last_error.c_str(); }

epinet_status epinet_network_parse(const char* json_text, epinet_network** out) {
  return guarded([&] {
    need(json_text, "json_text");
    need(out, "out");
    *out = nullptr;
    *out = new epinet_network{epinet::parse_spec_document(json_text)};
  });
}

epinet_status epinet_network_load(const char* path, epinet_network** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = nullptr;
    std::ifstream in(path, std::ios::binary);
    if (!in)
      throw IoError(std::string("cannot open '") + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
      *out = new epinet_network{epinet::parse_spec_document(ss.str())};
    } catch (const epinet::Error& e) {
      throw epinet::Error(e.kind(), std::string(path) + ": " + e.what());
    }
  });
}

void epinet_network_free(epinet_network* net) { delete net; }

epinet_status epinet_network_info(const epinet_network* net, epinet_document_kind* kind, size_t* vertices,
                                  size_t* edges) {
  return guarded([&] {
    need(net, "net");
    using namespace epinet;
    epinet_document_kind k = EPINET_DOC_BINARY_NETWORK;
    std::size_t n = 0, m = 0;
    if (const auto* spec = std::get_if<SwitchedNetworkSpec>(&net->doc)) {
      k = spec->is_weighted() ? EPINET_DOC_WEIGHTED_NETWORK : EPINET_DOC_BINARY_NETWORK;
      n = spec->vertex_count();
      m = spec->edge_count();
    } else if (const auto* c = std::get_if<CommunitySpec>(&net->doc)) {
      k = EPINET_DOC_COMMUNITY;
      n = c->n1 + c->n2;
      m = n * (n - 1) / 2;
    } else if (const auto* pl = std::get_if<PowerLawDocument>(&net->doc)) {
      k = EPINET_DOC_POWER_LAW;
      n = pl->spec.n;
      m = n * (n - 1) / 2;
    } else if (const auto* ed = std::get_if<ExpectedDegreeDocument>(&net->doc)) {
      k = EPINET_DOC_EXPECTED_DEGREES;
      n = ed->spec.d.size();
      m = n * (n - 1) / 2;
    }
    if (kind)
      *kind = k;
    if (vertices)
      *vertices = n;
    if (edges)
      *edges = m;
  });
}

void epinet_analyze_options_default(epinet_analyze_options* opts) {
  if (!opts)
    return;
  const epinet::AnalyzeOptions d;
  opts->exact_cap = d.exact_cap;
  opts->exact_dimension_cap = d.exact_dimension_cap;
  opts->dump_matrix = d.dump_matrix ? 1 : 0;
}

epinet_status epinet_analyze(const epinet_network* net, double beta, double delta, const epinet_analyze_options* opts,
                             epinet_report** out) {
  return guarded([&] {
    need(net, "net");
    need(out, "out");
    *out = nullptr;
    epinet::AnalyzeOptions ao;
    if (opts) {
      ao.exact_cap = opts->exact_cap;
      ao.exact_dimension_cap = opts->exact_dimension_cap;
      ao.dump_matrix = opts->dump_matrix != 0;
    }
    const auto res = epinet::analyze_document(net->doc, epinet::make_params(beta, delta), ao);
    auto rep = std::make_unique<epinet_report>();
    rep->json = epinet::to_json(res.report).dump(2);
    rep->summary = summary_text(res.report);
    rep->matrix_market = res.matrix_market;
    fill_verdicts(*rep, res.report);
    *out = rep.release();
  });
}

epinet_status epinet_example(const char* name, epinet_report** out) {
  return guarded([&] {
    need(name, "name");
    need(out, "out");
    *out = nullptr;
    const auto ex = epinet::run_example(name);
    auto rep = std::make_unique<epinet_report>();
    rep->json = epinet::to_json(ex).dump(2);
    std::string text = summary_text(ex.report);
    for (const auto& q : ex.quantities) {
      std::ostringstream os;
      os << q.name << ": computed " << q.computed << ", reference " << q.reference << ", deviation "
         << q.deviation() * 100.0 << "% (tolerance " << q.tolerance * 100.0 << "%) " << (q.ok() ? "ok" : "MISMATCH")
         << "\n";
      text += os.str();
    }
    std::ostringstream os;
    os << "time: " << ex.seconds << " s (budget " << ex.time_budget << " s)\n";
    text += os.str();
    for (const auto& note : ex.notes)
      text += "note: " + note + "\n";
    rep->summary = std::move(text);
    rep->ok = ex.ok();
    fill_verdicts(*rep, ex.report);
    *out = rep.release();
  });
}

epinet_status epinet_oracle_suite(size_t count, uint64_t seed, epinet_report** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    const auto reports = epinet::run_sandwich_suite(count, seed);
    nlohmann::json cases = nlohmann::json::array();
    std::size_t failed = 0, tail_violations = 0;
    for (const auto& r : reports) {
      cases.push_back(epinet::to_json(r));
      failed += r.passed() ? 0 : 1;
      tail_violations += r.tail_violations;
    }
    auto rep = std::make_unique<epinet_report>();
    rep->ok = failed == 0;
    rep->json = nlohmann::json{{"count", reports.size()},
                               {"seed", seed},
                               {"failed", failed},
                               {"tail_violations", tail_violations},
                               {"passed", rep->ok},
                               {"cases", cases}}
                    .dump(2);
    std::ostringstream os;
    os << reports.size() << " instances, " << failed << " failed, " << tail_violations << " tail-bound violations\n";
    for (const auto& r : reports)
      if (!r.passed()) {
        os << "FAILED " << r.descriptor << "\n";
        for (const auto& d : r.details)
          os << "  " << d << "\n";
      }
    rep->summary = os.str();
    *out = rep.release();
  });
}

epinet_status epinet_f_eval(double s, size_t n, double delta_u, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = epinet::f_eval(s, n, delta_u);
  });
}

epinet_status epinet_minimize_f(size_t n, double delta_u, epinet_uncertainty_bound* out) {
  return guarded([&] {
    need(out, "out");
    const auto ub = epinet::minimize_f(n, delta_u);
    *out = {ub.f_min, ub.s_star, ub.s0, ub.s_upper, ub.min_at_zero ? 1 : 0};
  });
}

epinet_status epinet_lambda_max_dense(const double* matrix, size_t n, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = epinet::lambda_max_dense(row_major(matrix, n));
  });
}

epinet_status epinet_spectral_abscissa(const double* matrix, size_t n, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = epinet::spectral_abscissa(row_major(matrix, n));
  });
}

const char* epinet_report_json(const epinet_report* report) { return report ? report->json.c_str() : nullptr; }

const char* epinet_report_summary(const epinet_report* report) { return report ? report->summary.c_str() : nullptr; }

const char* epinet_report_matrix_market(const epinet_report* report) {
  return report && report->matrix_market ? report->matrix_market->c_str() : nullptr;
}

int epinet_report_ok(const epinet_report* report) { return report && report->ok ? 1 : 0; }

epinet_status epinet_report_verdicts(const epinet_report* report, int* sufficient, int* exact) {
  return guarded([&] {
    need(report, "report");
    if (sufficient)
      *sufficient = report->sufficient;
    if (exact)
      *exact = report->exact;
  });
}

void epinet_report_free(epinet_report* report) { delete report; }

void epinet_sim_options_default(epinet_sim_options* opts) {
  if (!opts)
    return;
  const epinet::SimConfig d;
  opts->horizon = d.horizon;
  opts->step = d.step;
  opts->sample_interval = d.sample_interval;
  opts->trials = d.trials;
  opts->seed = d.seed;
  opts->linearized = d.linearized ? 1 : 0;
  opts->coupled = 0;
}

epinet_status epinet_simulate(const epinet_network* net, double beta, double delta, const double* p0, size_t p0_len,
                              const epinet_sim_options* opts, epinet_simulation** out) {
  return guarded([&] {
    need(net, "net");
    need(out, "out");
    *out = nullptr;
    epinet_sim_options o;
    epinet_sim_options_default(&o);
    if (opts)
      o = *opts;
    epinet::SimConfig cfg;
    cfg.horizon = o.horizon;
    cfg.step = o.step;
    cfg.sample_interval = o.sample_interval;
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    cfg.linearized = o.linearized != 0;
    cfg.validate();
    const auto params = epinet::make_params(beta, delta);
    const auto spec = simulation_network(net->doc);
    std::vector<double> init(spec.vertex_count(), 1.0);
    if (p0) {
      epinet::require(p0_len == spec.vertex_count(), "initial state has " + std::to_string(p0_len) +
                                                         " entries, network has " +
                                                         std::to_string(spec.vertex_count()) + " vertices");
      init.assign(p0, p0 + p0_len);
    }

    auto sim = std::make_unique<epinet_simulation>();
    nlohmann::json meta = {{"n", spec.vertex_count()},  {"beta", beta},           {"delta", delta},
                           {"horizon", cfg.horizon},     {"step", cfg.step},       {"seed", cfg.seed},
                           {"trials", cfg.trials},       {"linearized", cfg.linearized}, {"coupled", o.coupled != 0}};
    if (o.coupled) {
      const auto run = epinet::simulate_coupled(spec, params, init, cfg);
      sim->trajectory = epinet::trajectory_csv(run.nonlinear);
      sim->linear = epinet::trajectory_csv(run.linear);
      sim->events = epinet::events_csv(run.nonlinear, spec);
      sim->min_margin = run.min_margin;
      meta["min_margin"] = run.min_margin;
    } else {
      const auto traj = cfg.linearized ? epinet::simulate_linear_path(spec, params, init, cfg)
                                       : epinet::simulate_path(spec, params, init, cfg);
      sim->trajectory = epinet::trajectory_csv(traj);
      sim->events = epinet::events_csv(traj, spec);
    }
    meta["decay"] = epinet::to_json(epinet::estimate_decay(spec, params, cfg, init));
    sim->json = meta.dump(2);
    *out = sim.release();
  });
}

const char* epinet_simulation_trajectory_csv(const epinet_simulation* sim) {
  return sim ? sim->trajectory.c_str() : nullptr;
}

const char* epinet_simulation_linear_csv(const epinet_simulation* sim) {
  return sim && sim->linear ? sim->linear->c_str() : nullptr;
}

const char* epinet_simulation_events_csv(const epinet_simulation* sim) { return sim ? sim->events.c_str() : nullptr; }

const char* epinet_simulation_json(const epinet_simulation* sim) { return sim ? sim->json.c_str() : nullptr; }

double epinet_simulation_min_margin(const epinet_simulation* sim) {
  return sim ? sim->min_margin : std::numeric_limits<double>::quiet_NaN();
}

void epinet_simulation_free(epinet_simulation* sim) { delete sim; }

}  // extern "C"
