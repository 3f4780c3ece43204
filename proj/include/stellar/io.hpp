#pragma once

// JSON documents for states, operators, and point constellations, with
// deterministic 12-significant-digit number formatting so identical inputs
// always serialize byte-identically.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include <stellar/bloch.hpp>
#include <stellar/majorana.hpp>
#include <stellar/schur.hpp>

namespace stellar {

using json = nlohmann::ordered_json;

// Fails that should map to the I/O-or-parse exit path.
struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// Fails that should map to the domain/precondition exit path.
struct domain_error : std::runtime_error {
  explicit domain_error(const std::string& what) : std::runtime_error(what) {}
};

// Canonical value with at most 12 significant digits; serializing this
// double reproduces the same text on every run.
inline double round12(double x) {
  if (x == 0.0) return 0.0;
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline json complex_json(cplx z) { return json::array({round12(z.real()), round12(z.imag())}); }

inline json amps_json(const Eigen::VectorXcd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_json(v(i)));
  return out;
}

namespace detail {

inline const json& require_field(const json& doc, const char* key) {
  if (!doc.is_object() || !doc.contains(key))
    throw parse_error(std::string("missing field \"") + key + "\"");
  return doc.at(key);
}

inline void require_schema_version(const json& doc) {
  const json& v = require_field(doc, "v");
  if (!v.is_number_integer() || v.get<int>() != 1)
    throw parse_error("unsupported schema version (expected \"v\": 1)");
}

inline Eigen::VectorXcd parse_amps(const json& arr, std::size_t expected) {
  if (!arr.is_array()) throw parse_error("\"amps\" must be an array of [re, im] pairs");
  if (arr.size() != expected)
    throw parse_error("\"amps\" has " + std::to_string(arr.size()) + " entries, expected " +
                      std::to_string(expected));
  Eigen::VectorXcd v(static_cast<Eigen::Index>(expected));
  for (std::size_t i = 0; i < expected; ++i) {
    const json& pair = arr[i];
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() || !pair[1].is_number())
      throw parse_error("\"amps\" entry " + std::to_string(i) + " is not an [re, im] pair");
    v(static_cast<Eigen::Index>(i)) = cplx(pair[0].get<double>(), pair[1].get<double>());
  }
  return v;
}

}  // namespace detail

// A loaded state file: either a single spin-J state or an N-qubit register.
struct StateDocument {
  std::variant<SpinState, MultiQubitState> state;
  bool renormalized = false;  // norm was off by more than 1e-9 and was fixed

  bool is_qubits() const { return std::holds_alternative<MultiQubitState>(state); }
  const SpinState& spin() const { return std::get<SpinState>(state); }
  const MultiQubitState& qubits() const { return std::get<MultiQubitState>(state); }
};

inline StateDocument parse_state(const json& doc) {
  detail::require_schema_version(doc);
  const json& kind = detail::require_field(doc, "kind");
  if (!kind.is_string()) throw parse_error("\"kind\" must be \"spin\" or \"qubits\"");
  const std::string k = kind.get<std::string>();

  Eigen::VectorXcd amps;
  int two_j = -1, n = -1;
  if (k == "spin") {
    const json& jv = detail::require_field(doc, "J");
    if (!jv.is_number()) throw parse_error("\"J\" must be a number");
    const double j = jv.get<double>();
    two_j = static_cast<int>(std::llround(2.0 * j));
    if (two_j < 0 || std::abs(2.0 * j - two_j) > 1e-9)
      throw parse_error("\"J\" must be a nonnegative integer or half-integer");
    amps = detail::parse_amps(detail::require_field(doc, "amps"),
                              static_cast<std::size_t>(two_j) + 1);
  } else if (k == "qubits") {
    const json& nv = detail::require_field(doc, "N");
    if (!nv.is_number_integer()) throw parse_error("\"N\" must be an integer");
    n = nv.get<int>();
    if (n < 1) throw parse_error("\"N\" must be at least 1");
    if (n > 26) throw domain_error("qubit registers above 26 qubits are not supported");
    amps = detail::parse_amps(detail::require_field(doc, "amps"), std::size_t{1} << n);
  } else {
    throw parse_error("\"kind\" must be \"spin\" or \"qubits\"");
  }

  const double norm = amps.norm();
  if (std::abs(norm - 1.0) > 1e-6)
    throw domain_error("state norm deviates from 1 by " + std::to_string(std::abs(norm - 1.0)) +
                       " (tolerance 1e-06)");
  StateDocument out{k == "spin" ? std::variant<SpinState, MultiQubitState>(SpinState(two_j, amps))
                                : std::variant<SpinState, MultiQubitState>(MultiQubitState(n, amps)),
                    std::abs(norm - 1.0) > 1e-9};
  return out;
}

inline json state_to_json(const SpinState& s) {
  json doc;
  doc["v"] = 1;
  doc["kind"] = "spin";
  doc["J"] = round12(0.5 * s.two_j());
  doc["amps"] = amps_json(s.amps());
  return doc;
}

inline json state_to_json(const MultiQubitState& s) {
  json doc;
  doc["v"] = 1;
  doc["kind"] = "qubits";
  doc["N"] = s.n();
  doc["amps"] = amps_json(s.amps());
  return doc;
}

inline json state_to_json(const StateDocument& d) {
  return d.is_qubits() ? state_to_json(d.qubits()) : state_to_json(d.spin());
}

// 2x2 complex matrix document: a bare [[ [re,im], [re,im] ], [ ... ]] array,
// or an object carrying that array under "m".
inline Eigen::Matrix2cd parse_matrix2(const json& doc) {
  const json& rows = doc.is_object() ? detail::require_field(doc, "m") : doc;
  if (!rows.is_array() || rows.size() != 2) throw parse_error("matrix must have two rows");
  Eigen::Matrix2cd m;
  for (int r = 0; r < 2; ++r) {
    const json& row = rows[r];
    if (!row.is_array() || row.size() != 2) throw parse_error("matrix rows must have two entries");
    for (int c = 0; c < 2; ++c) {
      const json& e = row[c];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
        throw parse_error("matrix entries must be [re, im] pairs");
      m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

// Distinct point locations with their multiplicities, in a canonical order
// (descending z, then x, then y) so emission is deterministic.
struct GroupedPoints {
  std::vector<BlochPoint> points;
  std::vector<int> degeneracy;
};

inline GroupedPoints group_constellation(std::vector<BlochPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](const BlochPoint& a, const BlochPoint& b) {
    if (a.z != b.z) return a.z > b.z;
    if (a.x != b.x) return a.x > b.x;
    return a.y > b.y;
  });
  GroupedPoints out;
  for (const BlochPoint& p : pts) {
    if (!out.points.empty()) {
      const BlochPoint& last = out.points.back();
      if (last.x == p.x && last.y == p.y && last.z == p.z) {
        ++out.degeneracy.back();
        continue;
      }
    }
    out.points.push_back(p);
    out.degeneracy.push_back(1);
  }
  return out;
}

struct ConstellationGroup {
  double j = 0.0;
  int alpha = 0;  // -1 on the multiplicity sphere (no path label there)
  GroupedPoints grouped;
  std::optional<Eigen::VectorXcd> amps;  // amplitude dump when no sphere is drawn
  bool no_sphere = false;
};

struct ConstellationSphere {
  std::string label;  // "representation" or "multiplicity"
  std::vector<ConstellationGroup> groups;
};

inline json constellation_json(const std::vector<ConstellationSphere>& spheres) {
  json doc;
  doc["v"] = 1;
  doc["spheres"] = json::array();
  for (const auto& sphere : spheres) {
    json s;
    s["label"] = sphere.label;
    s["groups"] = json::array();
    for (const auto& g : sphere.groups) {
      json jg;
      jg["j"] = round12(g.j);
      jg["alpha"] = g.alpha;
      json pts = json::array();
      for (const BlochPoint& p : g.grouped.points) {
        const double r = std::sqrt(p.x * p.x + p.y * p.y + p.z * p.z);
        if (std::abs(r - 1.0) > 1e-9) throw std::logic_error("constellation point off the sphere");
        pts.push_back(json::array({round12(p.x), round12(p.y), round12(p.z)}));
      }
      jg["points"] = std::move(pts);
      jg["degeneracy"] = g.grouped.degeneracy;
      if (g.no_sphere) jg["no_sphere"] = true;
      if (g.amps) jg["amps"] = amps_json(*g.amps);
      s["groups"].push_back(std::move(jg));
    }
    doc["spheres"].push_back(std::move(s));
  }
  return doc;
}

inline std::string dump_document(const json& doc) { return doc.dump(2) + "\n"; }

}  // namespace stellar
