#ifndef EPINET_ANALYSIS_HPP
#define EPINET_ANALYSIS_HPP

// End-to-end analyses behind the command-line front end.

#include "epinet/io.hpp"
#include "epinet/stability.hpp"

#include <optional>
#include <string>
#include <vector>

namespace epinet {

struct AnalyzeOptions {
  std::size_t exact_cap = 4096;           // joint configurations
  std::size_t exact_dimension_cap = 10000;  // n * configurations
  bool dump_matrix = false;
};

struct AnalysisResult {
  StabilityReport report;
  std::optional<std::string> matrix_market;  // mean-dynamics matrix, when requested and computed
};

/// Sufficient condition for the document kind, plus the exact mean-stability
/// test whenever the joint chain fits the caps (reported as authoritative).
AnalysisResult analyze_document(const SpecDocument& doc, const EpidemicParams& params, const AnalyzeOptions& opts = {});

struct ExampleQuantity {
  std::string name;
  double computed = 0.0;
  double reference = 0.0;
  double tolerance = 0.0;  // relative
  double deviation() const;
  bool ok() const { return deviation() <= tolerance; }
};

struct ExampleReport {
  std::string name;
  std::vector<ExampleQuantity> quantities;
  StabilityReport report;
  double seconds = 0.0;
  double time_budget = 0.0;
  std::vector<std::string> notes;

  bool ok() const;
};

/// "community" or "powerlaw".
ExampleReport run_example(const std::string& name);

nlohmann::json to_json(const ExampleReport& report);

}  // namespace epinet

#endif
