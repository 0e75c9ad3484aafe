#ifndef EPINET_IO_HPP
#define EPINET_IO_HPP

// JSON documents in and out. Network documents use 1-based vertex labels:
//
//   {"n": 3, "edges": [{"i": 1, "j": 2, "p": 1.0, "q": 1.0}, ...]}
//   {"n": 3, "edges": [{"i": 1, "j": 2, "states": [0, 0.4],
//                       "generator": [[-1, 1], [1, -1]]}, ...]}
//
// Ensemble documents hold one block: {"community": {...}},
// {"power_law": {...}} or {"expected_degrees": {"d": [...]}}.

#include "epinet/ensembles.hpp"
#include "epinet/net_model.hpp"
#include "epinet/oracle.hpp"
#include "epinet/simulator.hpp"
#include "epinet/stability.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <variant>

namespace epinet {

struct PowerLawDocument {
  PowerLawSpec spec;
  ProbabilityPolicy policy = ProbabilityPolicy::Strict;
};

struct ExpectedDegreeDocument {
  ExpectedDegreeSpec spec;
  ProbabilityPolicy policy = ProbabilityPolicy::Strict;
};

using SpecDocument = std::variant<SwitchedNetworkSpec, CommunitySpec, PowerLawDocument, ExpectedDegreeDocument>;

/// Throws Error(Parse) with "line L, column C" for syntax errors and a field
/// path such as "edges[2].p" for schema errors.
SpecDocument parse_spec_document(std::string_view text);
SwitchedNetworkSpec parse_network_spec(std::string_view text);

nlohmann::json to_json(const SwitchedNetworkSpec& spec);
nlohmann::json to_json(const UncertaintyBound& ub);
nlohmann::json to_json(const StabilityReport& report);
nlohmann::json to_json(const OracleReport& report);
nlohmann::json to_json(const DecayEstimate& est);

}  // namespace epinet

#endif
