#include "epinet/io.hpp"

#include "epinet/error.hpp"

#include <algorithm>
#include <cmath>

namespace epinet {

using nlohmann::json;

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& msg) {
  fail(ErrorKind::Parse, (path.empty() ? std::string("document") : path) + ": " + msg);
}

const json& field(const json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object())
    schema_error(path, "expected an object");
  const auto it = obj.find(key);
  if (it == obj.end())
    schema_error(path.empty() ? key : path + "." + key, "missing required field");
  return *it;
}

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }

double number(const json& obj, const std::string& key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (!v.is_number())
    schema_error(join(path, key), "expected a number");
  return v.get<double>();
}

double number_or(const json& obj, const std::string& key, const std::string& path, double fallback) {
  return obj.contains(key) ? number(obj, key, path) : fallback;
}

std::size_t count(const json& obj, const std::string& key, const std::string& path) {
  const json& v = field(obj, key, path);
  if (v.is_number_unsigned() || (v.is_number_integer() && v.get<long long>() >= 0))
    return v.get<std::size_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0.0 && std::floor(d) == d && d < 9.007199254740992e15)
      return static_cast<std::size_t>(d);
  }
  schema_error(join(path, key), "expected a non-negative integer");
}

std::size_t vertex(const json& obj, const std::string& key, const std::string& path, std::size_t n) {
  const std::size_t v = count(obj, key, path);
  if (v < 1 || v > n)
    schema_error(join(path, key), "vertex " + std::to_string(v) + " outside [1, " + std::to_string(n) + "]");
  return v - 1;
}

std::vector<double> number_array(const json& v, const std::string& path) {
  if (!v.is_array())
    schema_error(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) {
    if (!v[k].is_number())
      schema_error(path + "[" + std::to_string(k) + "]", "expected a number");
    out.push_back(v[k].get<double>());
  }
  return out;
}

ProbabilityPolicy policy_field(const json& obj, const std::string& path) {
  if (!obj.contains("probability_policy"))
    return ProbabilityPolicy::Strict;
  const json& v = obj.at("probability_policy");
  if (v == "strict")
    return ProbabilityPolicy::Strict;
  if (v == "unclipped")
    return ProbabilityPolicy::Unclipped;
  schema_error(join(path, "probability_policy"), "expected \"strict\" or \"unclipped\"");
}

json parse_text(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t upto = std::min<std::size_t>(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t k = 0; k < upto; ++k) {
      if (text[k] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    fail(ErrorKind::Parse, "JSON syntax error at line " + std::to_string(line) + ", column " + std::to_string(col) +
                               ": " + e.what());
  }
}

SwitchedNetworkSpec network_from_json(const json& doc) {
  const std::size_t n = count(doc, "n", "");
  if (n < 1)
    schema_error("n", "must be >= 1");
  const json& edges = field(doc, "edges", "");
  if (!edges.is_array())
    schema_error("edges", "expected an array");

  bool weighted = false;
  if (!edges.empty())
    weighted = edges[0].is_object() && edges[0].contains("states");

  std::vector<EdgeChain> binary;
  std::vector<WeightedEdgeChain> wedges;
  for (std::size_t k = 0; k < edges.size(); ++k) {
    const std::string path = "edges[" + std::to_string(k) + "]";
    const json& e = edges[k];
    if (!e.is_object())
      schema_error(path, "expected an object");
    if (e.contains("states") != weighted)
      schema_error(path, "binary (p, q) and weighted (states, generator) edges cannot be mixed");
    const std::size_t i = vertex(e, "i", path, n);
    const std::size_t j = vertex(e, "j", path, n);
    if (!weighted) {
      binary.push_back({i, j, number(e, "p", path), number(e, "q", path)});
      continue;
    }
    WeightedEdgeChain w;
    w.i = i;
    w.j = j;
    w.states = number_array(field(e, "states", path), path + ".states");
    const json& g = field(e, "generator", path);
    if (!g.is_array() || g.size() != w.states.size())
      schema_error(path + ".generator", "expected a square array matching the number of states");
    const auto k_states = static_cast<Eigen::Index>(w.states.size());
    w.generator.resize(k_states, k_states);
    for (Eigen::Index r = 0; r < k_states; ++r) {
      const std::string rpath = path + ".generator[" + std::to_string(r) + "]";
      const auto row = number_array(g[static_cast<std::size_t>(r)], rpath);
      if (row.size() != w.states.size())
        schema_error(rpath, "row length does not match the number of states");
      for (Eigen::Index c = 0; c < k_states; ++c)
        w.generator(r, c) = row[static_cast<std::size_t>(c)];
    }
    wedges.push_back(std::move(w));
  }
  return weighted ? SwitchedNetworkSpec::weighted(n, std::move(wedges)) : SwitchedNetworkSpec::binary(n, std::move(binary));
}

CommunitySpec community_from_json(const json& b) {
  const std::string p = "community";
  CommunitySpec c;
  c.n1 = count(b, "n1", p);
  c.n2 = count(b, "n2", p);
  c.theta1 = number(b, "theta1", p);
  c.theta2 = number(b, "theta2", p);
  c.phi = number(b, "phi", p);
  c.switch_scale = number_or(b, "switch_scale", p, 1.0);
  c.validate();
  return c;
}

}  // namespace

SpecDocument parse_spec_document(std::string_view text) {
  const json doc = parse_text(text);
  if (!doc.is_object())
    schema_error("", "expected a JSON object");
  if (doc.contains("community"))
    return community_from_json(doc.at("community"));
  if (doc.contains("power_law")) {
    const json& b = doc.at("power_law");
    PowerLawDocument d;
    d.spec.n = count(b, "n", "power_law");
    d.spec.exponent = number(b, "exponent", "power_law");
    d.spec.max_degree = number(b, "max_degree", "power_law");
    d.spec.avg_degree = number(b, "avg_degree", "power_law");
    d.policy = policy_field(b, "power_law");
    power_law_degrees(d.spec);
    return d;
  }
  if (doc.contains("expected_degrees")) {
    const json& b = doc.at("expected_degrees");
    ExpectedDegreeDocument d;
    d.spec.d = number_array(field(b, "d", "expected_degrees"), "expected_degrees.d");
    d.spec.switch_scale = number_or(b, "switch_scale", "expected_degrees", 1.0);
    d.policy = policy_field(b, "expected_degrees");
    return d;
  }
  return network_from_json(doc);
}

SwitchedNetworkSpec parse_network_spec(std::string_view text) { return network_from_json(parse_text(text)); }

json to_json(const SwitchedNetworkSpec& spec) {
  json edges = json::array();
  if (spec.kind() == EdgeKind::Binary) {
    for (const auto& e : spec.binary_edges())
      edges.push_back({{"i", e.i + 1}, {"j", e.j + 1}, {"p", e.p_rate}, {"q", e.q_rate}});
  } else {
    for (const auto& p : spec.processes()) {
      json g = json::array();
      for (Eigen::Index r = 0; r < p.generator.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < p.generator.cols(); ++c)
          row.push_back(p.generator(r, c));
        g.push_back(row);
      }
      edges.push_back({{"i", p.i + 1}, {"j", p.j + 1}, {"states", p.values}, {"generator", g}});
    }
  }
  return {{"n", spec.vertex_count()}, {"edges", edges}};
}

json to_json(const UncertaintyBound& ub) {
  return {{"n", ub.n},           {"delta_uncertainty", ub.delta_uncertainty},
          {"f_min", ub.f_min},   {"s_star", ub.s_star},
          {"s0", ub.s0},         {"s_upper", ub.s_upper},
          {"min_at_zero", ub.min_at_zero}};
}

json to_json(const StabilityReport& r) {
  json j = {{"condition", r.condition},
            {"n", r.n},
            {"beta", r.beta},
            {"delta", r.delta},
            {"threshold", r.threshold},
            {"lambda_max_abar", r.lambda_max_abar},
            {"lambda_method", r.lambda_method},
            {"delta_uncertainty", r.delta_uncertainty},
            {"static_branch", r.static_branch},
            {"f_min", r.f_min},
            {"lhs_sufficient", r.lhs_sufficient},
            {"verdict_sufficient", to_string(r.verdict_sufficient)},
            {"verdict_exact", to_string(r.verdict_exact)}};
  j["bound"] = r.bound ? to_json(*r.bound) : json(nullptr);
  j["d_tilde"] = r.d_tilde ? json(*r.d_tilde) : json(nullptr);
  j["lhs_expected_degree"] = r.lhs_expected_degree ? json(*r.lhs_expected_degree) : json(nullptr);
  j["e_lambda_max"] = r.e_lambda_max ? json(*r.e_lambda_max) : json(nullptr);
  j["lhs_exact"] = r.lhs_exact ? json(*r.lhs_exact) : json(nullptr);
  j["configurations"] = r.configurations ? json(*r.configurations) : json(nullptr);
  j["notes"] = r.notes;
  j["summary"] = verdict_lines(r);
  return j;
}

json to_json(const OracleReport& r) {
  json tails = json::array();
  for (const auto& t : r.tails)
    tails.push_back({{"s", t.s}, {"exact_tail", t.exact_tail}, {"bound", t.bound}, {"ok", t.ok}});
  return {{"descriptor", r.descriptor},
          {"n", r.n},
          {"m", r.m},
          {"lambda_max_abar", r.lambda_max_abar},
          {"e_lambda_max", r.e_lambda_max},
          {"delta_uncertainty", r.delta_uncertainty},
          {"f_min", r.f_min},
          {"upper_bound", r.upper_bound},
          {"exact_abscissa", r.exact_abscissa},
          {"sandwich_ok", r.sandwich_ok},
          {"tail_violations", r.tail_violations},
          {"passed", r.passed()},
          {"tails", tails},
          {"details", r.details}};
}

json to_json(const DecayEstimate& e) {
  return {{"rate", e.all_zero ? json(nullptr) : json(e.rate)},
          {"all_zero", e.all_zero},
          {"half_width", e.half_width ? json(*e.half_width) : json(nullptr)},
          {"trials", e.trials},
          {"grid_times", e.grid_times},
          {"mean_norm", e.mean_norm}};
}

}  // namespace epinet
