#pragma once

// JSON problem files and reports for the command-line tool.

#include <optional>
#include <string>

#include <json.hpp>

#include "tracemin/pencil.hpp"
#include "tracemin/report.hpp"

namespace tracemin {

inline constexpr const char* kToolVersion = "1.0.0";

struct ProblemFile {
  HermitianMatrix a;
  HermitianMatrix b;
  HermitianMatrix d;  // full D; block diagonal when given as d_plus / d_minus
  bool d_from_blocks = false;
  ConstraintSpec constraint;
  Sense sense = Sense::Min;
};

/// Entries are numbers or [re, im] pairs; matrices are arrays of rows.
CMatrix matrix_from_json(const nlohmann::json& j, const std::string& name);
nlohmann::json matrix_to_json(const CMatrix& m);

/// Throws Error(ParseError) for malformed documents and InvalidInput /
/// DimensionMismatch for inconsistent ones.
ProblemFile parse_problem(const nlohmann::json& j);
ProblemFile load_problem(const std::string& path);

/// Only the pencil (a, b) is required.
std::pair<HermitianMatrix, HermitianMatrix> load_pencil(const std::string& path);

nlohmann::json report_to_json(const SolveReport& r, const ProblemFile& p, bool include_x);
nlohmann::json analysis_to_json(const PsdPencilAnalysis& an);

/// One "path = value" line per leaf, numbers formatted exactly as in JSON.
std::string render_text(const nlohmann::json& j);

}  // namespace tracemin
