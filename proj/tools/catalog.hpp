#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rootarr/realizer.hpp"

namespace rootarr::cli {

inline constexpr int kCatalogVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

struct CatalogHeader {
  int n = 0, s = 0, m = 0;
  std::string tool_version = kToolVersion;
  std::string config_hash;
  std::uint64_t seed = 0;
};

struct CatalogRow {
  std::string arrangement;
  bool admissible = true;
  // Absent for enumerate catalogs, which carry verdicts only.
  std::optional<bool> realized;
  std::vector<std::string> witness;     // descending coefficients, 17 digits
  std::vector<std::string> witness_hp;  // 40 digits; JSON only
  std::optional<double> residual;
  std::string residual_kind;
  std::string method;
  std::optional<double> wall_seconds;
};

struct CatalogSoundness {
  long samples = 0;
  long violations = 0;
  std::vector<std::string> examples;
  long out_of_scope = 0;
};

struct Catalog {
  CatalogHeader header;
  std::vector<CatalogRow> rows;  // sorted by arrangement
  std::optional<CatalogSoundness> soundness;

  void sort_rows();
};

Catalog catalog_from_report(const VerificationReport& rep, const SolverConfig& cfg, bool timings);
Catalog catalog_from_enumeration(int n, int s, int m, const std::vector<Arrangement>& arrs, const SolverConfig& cfg);

nlohmann::ordered_json to_json(const Catalog& c);
Catalog catalog_from_json(const nlohmann::json& j);

// CSV: '#'-prefixed header block, a column line, then one line per row.
void write_csv(std::ostream& os, const Catalog& c);
Catalog read_csv(std::istream& is);

// Picks the format from the extension (".csv" or anything else for JSON).
void save_catalog(const std::string& path, const Catalog& c);
Catalog load_catalog(const std::string& path);

}  // namespace rootarr::cli
