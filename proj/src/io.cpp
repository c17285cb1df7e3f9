#include "medsolve/io.hpp"

namespace medsolve {

namespace {

double number_at(const json& j, const std::string& where) {
  if (!j.is_number()) throw MedError(ErrorKind::ParseError, where + ": expected a number");
  return j.get<double>();
}

ErrorKind kind_of_failure(const std::string& msg) {
  if (msg.starts_with("shape")) return ErrorKind::ShapeMismatch;
  if (msg.starts_with("hermiticity")) return ErrorKind::NotHermitian;
  if (msg.starts_with("positivity")) return ErrorKind::NotPositiveSemidefinite;
  if (msg.starts_with("rank")) return ErrorKind::RankMismatch;
  return ErrorKind::InvalidEnsemble;
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ComplexMatrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw MedError(ErrorKind::ShapeMismatch, where + ": expected a non-empty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array()) throw MedError(ErrorKind::ShapeMismatch, where + ": rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  if (rows != cols) {
    throw MedError(ErrorKind::ShapeMismatch, where + ": matrix is " + std::to_string(rows) + "x" +
                                                 std::to_string(cols) + ", not square");
  }
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw MedError(ErrorKind::ShapeMismatch,
                     where + ": row " + std::to_string(r) + " has the wrong length");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& z = row[c];
      const std::string at = where + "[" + std::to_string(r) + "][" + std::to_string(c) + "]";
      if (!z.is_array() || z.size() != 2) {
        throw MedError(ErrorKind::ParseError, at + ": expected [re, im]");
      }
      m(r, c) = Complex(number_at(z[0], at), number_at(z[1], at));
    }
  }
  return m;
}

json ensemble_to_json(const Ensemble& e, const EnsembleMetadata& meta) {
  json states = json::array();
  for (int i = 0; i < e.size(); ++i) {
    states.push_back({{"p", e.priors[i]}, {"rho", matrix_to_json(e.states[i])}});
  }
  json out = {{"dim", e.dim()}, {"states", std::move(states)}};
  if (meta.seed || meta.profile) {
    json m = json::object();
    if (meta.seed) m["seed"] = *meta.seed;
    if (meta.profile) m["profile"] = *meta.profile;
    out["metadata"] = std::move(m);
  }
  return out;
}

Ensemble ensemble_from_json(const json& j) {
  if (!j.is_object()) throw MedError(ErrorKind::ParseError, "ensemble document must be an object");
  if (!j.contains("dim") || !j["dim"].is_number_integer()) {
    throw MedError(ErrorKind::ParseError, "missing integer field 'dim'");
  }
  if (!j.contains("states") || !j["states"].is_array() || j["states"].empty()) {
    throw MedError(ErrorKind::ParseError, "missing non-empty array 'states'");
  }
  const int n = j["dim"].get<int>();
  if (n < 1) throw MedError(ErrorKind::ShapeMismatch, "'dim' must be positive");

  std::vector<double> priors;
  std::vector<ComplexMatrix> states;
  for (std::size_t i = 0; i < j["states"].size(); ++i) {
    const json& s = j["states"][i];
    const std::string where = "states[" + std::to_string(i) + "]";
    if (!s.is_object() || !s.contains("p") || !s.contains("rho")) {
      throw MedError(ErrorKind::ParseError, where + ": expected {p, rho}");
    }
    priors.push_back(number_at(s["p"], where + ".p"));
    ComplexMatrix rho = matrix_from_json(s["rho"], where + ".rho");
    if (rho.rows() != n) {
      throw MedError(ErrorKind::ShapeMismatch,
                     where + ".rho: size " + std::to_string(rho.rows()) + " does not match dim " +
                         std::to_string(n));
    }
    states.push_back(std::move(rho));
  }

  for (std::size_t i = 0; i < states.size(); ++i) {
    if (hermiticity_residual(states[i]) > 1e-8) {
      throw MedError(ErrorKind::NotHermitian, "states[" + std::to_string(i) + "] is not Hermitian");
    }
  }
  Ensemble e = Ensemble::from_states(std::move(priors), std::move(states));
  if (j.contains("metadata") && j["metadata"].is_object() && j["metadata"].contains("profile")) {
    const auto& declared = j["metadata"]["profile"];
    std::vector<int> ranks;
    if (declared.is_array()) {
      for (const auto& r : declared) ranks.push_back(r.is_number_integer() ? r.get<int>() : -1);
    }
    if (ranks != e.profile.ranks()) {
      throw MedError(ErrorKind::ProfileMismatch,
                     "metadata profile does not match the numerical ranks of the states");
    }
  }
  const auto rep = validate(e);
  if (!rep.passed) throw MedError(kind_of_failure(rep.failures.front()), rep.failures.front());
  return e;
}

json povm_to_json(const Povm& p) {
  json elems = json::array();
  for (const auto& m : p.elements) elems.push_back(matrix_to_json(m));
  return {{"povm", std::move(elems)}};
}

Povm povm_from_json(const json& j, const RankProfile& profile) {
  if (!j.is_object() || !j.contains("povm") || !j["povm"].is_array()) {
    throw MedError(ErrorKind::ParseError, "missing array 'povm'");
  }
  if (static_cast<int>(j["povm"].size()) != profile.blocks()) {
    throw MedError(ErrorKind::ShapeMismatch, "POVM has " + std::to_string(j["povm"].size()) +
                                                 " elements, ensemble has " +
                                                 std::to_string(profile.blocks()) + " states");
  }
  Povm p{profile, {}};
  for (std::size_t i = 0; i < j["povm"].size(); ++i) {
    ComplexMatrix m = matrix_from_json(j["povm"][i], "povm[" + std::to_string(i) + "]");
    if (m.rows() != profile.dim()) {
      throw MedError(ErrorKind::ShapeMismatch,
                     "povm[" + std::to_string(i) + "] does not match the ensemble dimension");
    }
    p.elements.push_back(std::move(m));
  }
  return p;
}

json certificate_to_json(const Certificate& c) {
  return {{"passed", c.passed},
          {"projectivity_residual", c.projectivity_residual},
          {"completeness_residual", c.completeness_residual},
          {"rank_ok", c.rank_ok},
          {"stationarity_residual", c.stationarity_residual},
          {"z_min_eigenvalue", c.z_min_eigenvalue},
          {"global_min_eigenvalue", c.global_min_eigenvalue},
          {"p_success", c.p_success}};
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw MedError(ErrorKind::ParseError, e.what());
  }
}

json error_to_json(const MedError& e) {
  return {{"error", {{"kind", std::string(kind_name(e.kind()))}, {"detail", e.detail()}}}};
}

}  // namespace medsolve
