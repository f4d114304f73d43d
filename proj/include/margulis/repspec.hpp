#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "margulis/error.hpp"
#include "margulis/liegroup.hpp"
#include "margulis/spectrum.hpp"

namespace margulis {

/// On-disk representation spec. Matrices are row-major arrays of rows;
/// validation happens at parse time with field-level diagnostics so the CLI
/// can point at the offending generator.
struct RepSpecFile {
  AffineRep rep;
  std::string label;
  std::optional<std::uint64_t> seed;
};

namespace detail {

inline Eigen::MatrixXd matrix_from_json(const nlohmann::json& rows, int n, const std::string& where) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    fail(Errc::InvalidInput, where + ": expected " + std::to_string(n) + " rows");
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      fail(Errc::InvalidInput, where + " row " + std::to_string(i) + ": expected " + std::to_string(n) +
                                   " entries");
    for (int j = 0; j < n; ++j) {
      const auto& cell = row[static_cast<std::size_t>(j)];
      if (!cell.is_number())
        fail(Errc::InvalidInput,
             where + " entry (" + std::to_string(i) + "," + std::to_string(j) + "): expected a number");
      m(i, j) = cell.get<double>();
    }
  }
  return m;
}

inline nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace detail

/// Parses and structurally validates a representation spec (determinant and
/// trace tolerances per the file contract). Loxodromy of the generators is a
/// separate concern checked by first_nonloxodromic below, so callers can
/// distinguish malformed input from a non-loxodromic representation.
inline RepSpecFile parse_repspec(const nlohmann::json& doc) {
  if (!doc.is_object()) fail(Errc::InvalidInput, "spec: top-level object expected");
  if (!doc.contains("model") || !doc["model"].is_object())
    fail(Errc::InvalidInput, "spec: missing model object");
  const auto& model_json = doc["model"];
  if (model_json.value("family", std::string()) != "adjoint_sl")
    fail(Errc::InvalidInput, "model.family: only \"adjoint_sl\" is supported");
  if (!model_json.contains("n") || !model_json["n"].is_number_integer())
    fail(Errc::InvalidInput, "model.n: integer expected");
  const int n = model_json["n"].get<int>();
  if (n < 2) fail(Errc::InvalidInput, "model.n: must be at least 2");

  RepSpecFile spec;
  spec.rep.model = ModelSpec(n);

  if (!doc.contains("generators") || !doc["generators"].is_array() || doc["generators"].empty())
    fail(Errc::InvalidInput, "generators: non-empty array expected");
  int index = 0;
  for (const auto& gen : doc["generators"]) {
    const std::string where = "generators[" + std::to_string(index) + "]";
    if (!gen.is_object() || !gen.contains("g") || !gen.contains("X"))
      fail(Errc::InvalidInput, where + ": expected fields g and X");
    Eigen::MatrixXd g_mat = detail::matrix_from_json(gen["g"], n, where + ".g");
    Eigen::MatrixXd x_mat = detail::matrix_from_json(gen["X"], n, where + ".X");
    try {
      spec.rep.generators.push_back({GroupElement(std::move(g_mat)), VElement(std::move(x_mat))});
    } catch (const Error& e) {
      fail(Errc::InvalidInput, where + ": " + e.what());
    }
    ++index;
  }

  if (doc.contains("metadata") && doc["metadata"].is_object()) {
    const auto& meta = doc["metadata"];
    spec.label = meta.value("label", std::string());
    if (meta.contains("seed") && meta["seed"].is_number_unsigned())
      spec.seed = meta["seed"].get<std::uint64_t>();
  }
  return spec;
}

inline RepSpecFile load_repspec(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::InvalidInput, path + ": cannot open");
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    fail(Errc::InvalidInput, path + ": " + e.what());
  }
  return parse_repspec(doc);
}

inline nlohmann::json repspec_to_json(const AffineRep& rep, const std::string& label = std::string(),
                                      std::optional<std::uint64_t> seed = std::nullopt) {
  nlohmann::json doc;
  doc["model"] = {{"family", "adjoint_sl"}, {"n", rep.model.n}};
  doc["generators"] = nlohmann::json::array();
  for (const AffineElement& g : rep.generators)
    doc["generators"].push_back(
        {{"g", detail::matrix_to_json(g.linear.mat())}, {"X", detail::matrix_to_json(g.translation.mat())}});
  if (!label.empty() || seed) {
    nlohmann::json meta;
    if (!label.empty()) meta["label"] = label;
    if (seed) meta["seed"] = *seed;
    doc["metadata"] = std::move(meta);
  }
  return doc;
}

inline void save_repspec(const std::string& path, const AffineRep& rep,
                         const std::string& label = std::string(),
                         std::optional<std::uint64_t> seed = std::nullopt) {
  std::ofstream out(path);
  if (!out) fail(Errc::InvalidInput, path + ": cannot open for writing");
  out << repspec_to_json(rep, label, seed).dump(2) << '\n';
}

/// Index of the first generator whose linear part fails the loxodromy test,
/// if any.
inline std::optional<int> first_nonloxodromic(const AffineRep& rep, double tol = kLoxodromyTol) {
  for (int i = 0; i < rep.k(); ++i)
    if (!is_loxodromic(rep.generators[static_cast<std::size_t>(i)].linear, tol)) return i;
  return std::nullopt;
}

}  // namespace margulis
