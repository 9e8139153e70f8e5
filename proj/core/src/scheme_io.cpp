#include "densecode/scheme_io.hpp"

#include <fstream>
#include <string>

#include "densecode/errors.hpp"

namespace densecode {

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorKind::ParseError, msg); }

ComplexMatrix parse_matrix(const nlohmann::json& j, int d, std::size_t index) {
  const std::string where = "unitaries[" + std::to_string(index) + "]";
  if (!j.is_array() || j.size() != static_cast<std::size_t>(d)) {
    fail(where + " must be an array of " + std::to_string(d) + " rows");
  }
  ComplexMatrix m(d, d);
  for (int r = 0; r < d; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != static_cast<std::size_t>(d)) {
      fail(where + " row " + std::to_string(r) + " must hold " + std::to_string(d) + " entries");
    }
    for (int c = 0; c < d; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        fail(where + " entry (" + std::to_string(r) + "," + std::to_string(c) + ") must be [re, im]");
      }
      m(r, c) = Complex{e[0].get<double>(), e[1].get<double>()};
    }
  }
  return m;
}

}  // namespace

SchemeFile parse_scheme(const nlohmann::json& j) {
  if (!j.is_object()) fail("scheme must be a JSON object");
  if (!j.contains("d") || !j["d"].is_number_integer()) fail("missing integer field 'd'");
  const auto d64 = j["d"].get<long long>();
  if (d64 < 1 || d64 > 64) fail("'d' must be a positive integer, got " + std::to_string(d64));
  const int d = static_cast<int>(d64);

  if (!j.contains("lambda") || !j["lambda"].is_array()) fail("missing array field 'lambda'");
  const auto& jl = j["lambda"];
  if (jl.size() != static_cast<std::size_t>(d)) {
    fail("'lambda' has " + std::to_string(jl.size()) + " entries, expected " + std::to_string(d));
  }
  std::vector<double> lambdas;
  for (const auto& v : jl) {
    if (!v.is_number()) fail("'lambda' entries must be numbers");
    lambdas.push_back(v.get<double>());
  }
  SchmidtSpectrum spectrum(std::move(lambdas));

  if (!j.contains("unitaries") || !j["unitaries"].is_array()) fail("missing array field 'unitaries'");
  const auto& ju = j["unitaries"];
  std::vector<ComplexMatrix> members;
  members.reserve(ju.size());
  for (std::size_t i = 0; i < ju.size(); ++i) {
    const ComplexMatrix raw = parse_matrix(ju[i], d, i);
    ComplexMatrix permuted(d, d);
    for (int c = 0; c < d; ++c) permuted.col(c) = raw.col(spectrum.order()[static_cast<std::size_t>(c)]);
    members.push_back(std::move(permuted));
  }
  EncodingScheme scheme(d, std::move(members));
  return {std::move(spectrum), std::move(scheme)};
}

SchemeFile read_scheme_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(path.string() + ": " + e.what());
  }
  return parse_scheme(j);
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  auto rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    auto row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json scheme_to_json(const EncodingScheme& scheme, const SchmidtSpectrum& lambda) {
  nlohmann::json j;
  j["d"] = scheme.dim();
  j["lambda"] = std::vector<double>(lambda.values().begin(), lambda.values().end());
  auto us = nlohmann::json::array();
  for (const auto& u : scheme.unitaries()) us.push_back(matrix_to_json(u));
  j["unitaries"] = std::move(us);
  return j;
}

}  // namespace densecode
