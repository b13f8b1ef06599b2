#include "tracemin/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace tracemin {

using nlohmann::json;

namespace {

Complex entry_from_json(const json& e, const std::string& name) {
  if (e.is_number()) return {e.get<double>(), 0.0};
  if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
    return {e[0].get<double>(), e[1].get<double>()};
  }
  throw Error(ErrorCode::ParseError, name + ": entries must be numbers or [re, im] pairs");
}

json entry_to_json(const Complex& z) {
  if (z.imag() == 0.0) return z.real();
  return json::array({z.real(), z.imag()});
}

HermitianMatrix hermitian_field(const json& j, const char* key) {
  if (!j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field '") + key + "'");
  try {
    return HermitianMatrix(matrix_from_json(j.at(key), key));
  } catch (const Error& e) {
    if (e.code() == ErrorCode::ParseError) throw;
    throw Error(e.code(), std::string(key) + ": " + e.what());
  }
}

int int_field(const json& j, const char* key) {
  const auto& v = j.at(key);
  if (!v.is_number_integer()) {
    throw Error(ErrorCode::ParseError, std::string("field '") + key + "' must be an integer");
  }
  return v.get<int>();
}

json vec_json(const std::vector<double>& v) { return json(v); }

}  // namespace

CMatrix matrix_from_json(const json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) {
    throw Error(ErrorCode::ParseError, name + ": matrix must be a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  Eigen::Index cols = -1;
  CMatrix m;
  for (Eigen::Index i = 0; i < rows; ++i) {
    const json& row = j[i];
    if (!row.is_array()) throw Error(ErrorCode::ParseError, name + ": each row must be an array");
    if (cols < 0) {
      cols = static_cast<Eigen::Index>(row.size());
      m.resize(rows, cols);
    } else if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw Error(ErrorCode::ParseError, name + ": ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) m(i, c) = entry_from_json(row[c], name);
  }
  return m;
}

json matrix_to_json(const CMatrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(entry_to_json(m(i, c)));
    rows.push_back(row);
  }
  return rows;
}

ProblemFile parse_problem(const json& j) {
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "problem file must be a JSON object");
  try {
    ProblemFile p;
    p.a = hermitian_field(j, "a");
    p.b = hermitian_field(j, "b");
    if (p.a.dim() != p.b.dim()) throw Error(ErrorCode::DimensionMismatch, "a and b differ in size");

    const std::string kind = j.value("constraint", std::string("plus_identity"));
    const std::string sense = j.value("sense", std::string("min"));
    if (sense == "min") {
      p.sense = Sense::Min;
    } else if (sense == "max") {
      p.sense = Sense::Max;
    } else {
      throw Error(ErrorCode::ParseError, "sense must be \"min\" or \"max\"");
    }

    const bool has_blocks = j.contains("d_plus") || j.contains("d_minus");
    if (j.contains("d") == has_blocks) {
      throw Error(ErrorCode::ParseError, "give either 'd' or the blocks 'd_plus' / 'd_minus'");
    }
    if (has_blocks) {
      if (kind != "signature") {
        throw Error(ErrorCode::ParseError, "d_plus / d_minus require constraint \"signature\"");
      }
      const CMatrix dp = j.contains("d_plus") ? HermitianMatrix(matrix_from_json(j["d_plus"], "d_plus")).matrix()
                                              : CMatrix(0, 0);
      const CMatrix dm = j.contains("d_minus") ? HermitianMatrix(matrix_from_json(j["d_minus"], "d_minus")).matrix()
                                               : CMatrix(0, 0);
      CMatrix d = CMatrix::Zero(dp.rows() + dm.rows(), dp.rows() + dm.rows());
      d.topLeftCorner(dp.rows(), dp.rows()) = dp;
      d.bottomRightCorner(dm.rows(), dm.rows()) = dm;
      p.d = HermitianMatrix(d);
      p.d_from_blocks = true;
      p.constraint = ConstraintSpec::signature(static_cast<int>(dp.rows()), static_cast<int>(dm.rows()));
    } else {
      p.d = hermitian_field(j, "d");
      const int k = j.contains("k") ? int_field(j, "k") : p.d.dim();
      if (kind == "plus_identity") {
        p.constraint = ConstraintSpec::plus_identity(k);
      } else if (kind == "minus_identity") {
        p.constraint = ConstraintSpec::minus_identity(k);
      } else if (kind == "signature") {
        if (!j.contains("k_plus") || !j.contains("k_minus")) {
          throw Error(ErrorCode::ParseError, "signature constraint with full 'd' needs k_plus and k_minus");
        }
        p.constraint = ConstraintSpec::signature(int_field(j, "k_plus"), int_field(j, "k_minus"));
      } else {
        throw Error(ErrorCode::ParseError,
                    "constraint must be plus_identity, minus_identity or signature");
      }
    }
    if (p.d.dim() != p.constraint.k) {
      throw Error(ErrorCode::DimensionMismatch, "d must be k x k");
    }
    if (p.constraint.k > p.a.dim()) throw Error(ErrorCode::DimensionMismatch, "k exceeds n");
    return p;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

namespace {

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

}  // namespace

ProblemFile load_problem(const std::string& path) { return parse_problem(read_json(path)); }

std::pair<HermitianMatrix, HermitianMatrix> load_pencil(const std::string& path) {
  const json j = read_json(path);
  if (!j.is_object()) throw Error(ErrorCode::ParseError, "problem file must be a JSON object");
  auto a = hermitian_field(j, "a");
  auto b = hermitian_field(j, "b");
  if (a.dim() != b.dim()) throw Error(ErrorCode::DimensionMismatch, "a and b differ in size");
  return {a, b};
}

json report_to_json(const SolveReport& r, const ProblemFile& p, bool include_x) {
  json out;
  out["route"] = std::string(route_name(r.route));
  out["constraint"] = {{"kind", std::string(constraint_name(p.constraint.kind))},
                       {"k", p.constraint.k},
                       {"k_plus", p.constraint.k_plus},
                       {"k_minus", p.constraint.k_minus}};
  out["sense"] = p.sense == Sense::Min ? "min" : "max";
  out["finite"] = r.finite;
  if (r.finite && r.value) out["value"] = *r.value;
  out["attained"] = r.attained;
  json pairing = json::array();
  for (const auto& t : r.pairing) {
    pairing.push_back({{"omega", t.omega},
                       {"lambda", t.lambda},
                       {"omega_index", t.omega_index},
                       {"lambda_index", t.lambda_index},
                       {"role", t.role},
                       {"sign", t.sign}});
  }
  out["pairing"] = pairing;
  if (include_x && r.x_opt) out["x_opt"] = matrix_to_json(*r.x_opt);
  out["warnings"] = r.warnings;

  const auto& dg = r.diagnostics;
  json diag;
  diag["inertia_b"] = {{"n_plus", dg.inertia_b.n_plus},
                       {"n_zero", dg.inertia_b.n_zero},
                       {"n_minus", dg.inertia_b.n_minus}};
  diag["omegas"] = vec_json(dg.omegas);
  if (!dg.lambdas.empty()) {
    diag["lambdas"] = vec_json(dg.lambdas);
    diag["ell"] = dg.ell;
  }
  if (dg.lambda0) diag["lambda0"] = *dg.lambda0;
  if (dg.diagonalizable) {
    diag["lambda_plus"] = vec_json(dg.lambda_plus);
    diag["lambda_minus"] = vec_json(dg.lambda_minus);
    diag["diagonalizable"] = *dg.diagonalizable;
    diag["m0"] = dg.m0;
  }
  if (r.x_opt) {
    const double res = constraint_residual(*r.x_opt, p.b, p.constraint);
    const double obj = objective(p.a, p.d, *r.x_opt);
    diag["residuals"] = {{"constraint", res},
                         {"objective", std::abs(obj - r.value.value_or(obj))},
                         {"pairing", std::abs(r.pairing_sum() - r.value.value_or(0.0))}};
  } else if (r.value) {
    diag["residuals"] = {{"pairing", std::abs(r.pairing_sum() - *r.value)}};
  }
  out["diagnostics"] = diag;
  return out;
}

json analysis_to_json(const PsdPencilAnalysis& an) {
  json out;
  out["inertia_b"] = {{"n_plus", an.inertia_b.n_plus},
                      {"n_zero", an.inertia_b.n_zero},
                      {"n_minus", an.inertia_b.n_minus}};
  out["lambda0"] = an.lambda0;
  out["lambda_plus"] = vec_json(an.lambda_plus);
  out["lambda_minus"] = vec_json(an.lambda_minus);
  out["finite_eigenvalue_count"] = an.rank();
  out["diagonalizable"] = an.diagonalizable;
  out["m0"] = an.m0;
  return out;
}

namespace {

void flatten(const json& j, const std::string& path, std::ostringstream& out) {
  if (j.is_object()) {
    if (j.empty()) out << path << " = {}\n";
    for (auto it = j.begin(); it != j.end(); ++it) {
      flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), out);
    }
  } else if (j.is_array()) {
    if (j.empty()) out << path << " = []\n";
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], path + "[" + std::to_string(i) + "]", out);
  } else if (j.is_string()) {
    out << path << " = " << j.get<std::string>() << "\n";
  } else {
    out << path << " = " << j.dump() << "\n";
  }
}

}  // namespace

std::string render_text(const json& j) {
  std::ostringstream out;
  flatten(j, "", out);
  return out.str();
}

}  // namespace tracemin
