#pragma once

/**
 * @file serialize.hpp
 * @brief JSON forms of flag maps, invariants, records and verification reports.
 *
 * Keys are lowercase snake_case and objects keep insertion order, so equal
 * values always serialize to identical bytes.
 */

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "knnmap/classify.hpp"
#include "knnmap/errors.hpp"
#include "knnmap/flagmap.hpp"
#include "knnmap/numthy.hpp"
#include "knnmap/perm.hpp"

namespace knnmap::serialize {

using json = nlohmann::ordered_json;

/// Raised for JSON that does not describe a flag map.
class FormatError : public Error {
 public:
  using Error::Error;
};

inline json to_json(const Perm& p) { return json(std::vector<point_t>(p.image().begin(), p.image().end())); }

inline json to_json(const FlagMap& m) {
  json j;
  j["flag_count"] = m.flag_count();
  j["lambda"] = to_json(m.lambda());
  j["rho"] = to_json(m.rho());
  j["tau"] = to_json(m.tau());
  return j;
}

namespace detail {
inline Perm perm_field(const json& j, const char* key, std::size_t expected) {
  if (!j.contains(key) || !j[key].is_array()) throw FormatError(std::string("missing array '") + key + "'");
  const auto& arr = j[key];
  if (arr.size() != expected) throw FormatError(std::string("'") + key + "' has the wrong length");
  std::vector<point_t> img;
  img.reserve(arr.size());
  for (const auto& v : arr) {
    if (!v.is_number_unsigned()) throw FormatError(std::string("'") + key + "' holds a non-index entry");
    img.push_back(v.get<point_t>());
  }
  try {
    return Perm(std::move(img));
  } catch (const DomainError&) {
    throw FormatError(std::string("'") + key + "' is not a permutation");
  }
}
}  // namespace detail

/// Parses and revalidates; map-axiom violations propagate as their own error types.
inline FlagMap flagmap_from_json(const json& j) {
  if (!j.is_object()) throw FormatError("flag map must be a JSON object");
  if (!j.contains("flag_count") || !j["flag_count"].is_number_unsigned()) throw FormatError("missing 'flag_count'");
  const auto m = j["flag_count"].get<std::size_t>();
  return validate(detail::perm_field(j, "lambda", m), detail::perm_field(j, "rho", m),
                  detail::perm_field(j, "tau", m));
}

inline FlagMap flagmap_from_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  return flagmap_from_json(j);
}

inline json to_json(const MapInvariants& inv) {
  json j;
  j["vertices"] = inv.vertices;
  j["edges"] = inv.edges;
  j["faces"] = inv.faces;
  j["euler_characteristic"] = inv.euler_characteristic;
  j["orientable"] = inv.orientable;
  j[inv.orientable ? "genus" : "crosscaps"] = inv.genus_or_crosscaps;
  j["valency"] = inv.valency;
  j["covalency"] = inv.covalency;
  j["equivelar"] = inv.equivelar;
  return j;
}

inline json to_json(const classify::EmbeddingRecord& r) {
  json j;
  j["n"] = r.n;
  j["x"] = r.x ? json(*r.x) : json(nullptr);
  j["group_order"] = r.group_order;
  j["class_id"] = r.class_id;
  j["source"] = classify::to_string(r.source);
  j["deltabar"] = to_json(r.deltabar.perm());
  j["invariants"] = r.invariants ? to_json(*r.invariants) : json(nullptr);
  return j;
}

inline json to_json(const classify::VerificationReport& r, bool with_time = false) {
  json j;
  j["n"] = r.n;
  j["predicted"] = r.predicted;
  j["constructive_count"] = r.constructive_count;
  j["brute_count"] = r.brute_count ? json(*r.brute_count) : json(nullptr);
  j["agreement"] = r.agreement;
  if (with_time) j["wall_time_ms"] = r.wall_time.count();
  j["notes"] = r.notes;
  return j;
}

/// The count record: n, count, and the factorization of n/2 with residues mod 8 (null for odd n).
inline json count_record(std::uint64_t n) {
  json j;
  j["n"] = n;
  j["count"] = numthy::predicted_count(n);
  if (n % 2 != 0) {
    j["half_factorization"] = nullptr;
    return j;
  }
  json factors = json::array();
  if (n / 2 > 1)
    for (const auto& [p, a] : numthy::factorize(n / 2).factors) {
      json f;
      f["p"] = p;
      f["a"] = a;
      f["p_mod_8"] = p % 8;
      factors.push_back(std::move(f));
    }
  j["half_factorization"] = std::move(factors);
  return j;
}

}  // namespace knnmap::serialize
