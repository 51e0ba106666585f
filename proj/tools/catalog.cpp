#include "catalog.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "rootarr/errors.hpp"
#include "rootarr/numeric.hpp"

namespace rootarr::cli {

namespace {

const char* kColumns = "arrangement,admissible,realized,residual,residual_kind,method,witness,wall_seconds";

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ParseError("catalog: bad boolean '" + v + "'", 0);
}

double parse_double(const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw ParseError("catalog: bad number '" + v + "'", 0);
  }
}

}  // namespace

void Catalog::sort_rows() {
  std::sort(rows.begin(), rows.end(),
            [](const CatalogRow& a, const CatalogRow& b) { return a.arrangement < b.arrangement; });
}

Catalog catalog_from_report(const VerificationReport& rep, const SolverConfig& cfg, bool timings) {
  Catalog c;
  c.header.n = rep.n;
  c.header.s = rep.s;
  c.header.m = rep.m;
  c.header.config_hash = cfg.hash();
  c.header.seed = cfg.seed;
  for (const auto& r : rep.rows) {
    CatalogRow row;
    row.arrangement = r.arrangement;
    row.admissible = r.admissible;
    row.realized = r.realized;
    row.witness = r.witness;
    row.witness_hp = r.witness_hp;
    row.residual = r.residual;
    row.residual_kind = r.residual_kind;
    row.method = r.method;
    if (timings) row.wall_seconds = r.wall_seconds;
    c.rows.push_back(std::move(row));
  }
  if (rep.soundness.samples > 0) {
    c.soundness = CatalogSoundness{rep.soundness.samples, rep.soundness.violations, rep.soundness.examples,
                                   rep.soundness.out_of_scope};
  }
  c.sort_rows();
  return c;
}

Catalog catalog_from_enumeration(int n, int s, int m, const std::vector<Arrangement>& arrs, const SolverConfig& cfg) {
  Catalog c;
  c.header.n = n;
  c.header.s = s;
  c.header.m = m;
  c.header.config_hash = cfg.hash();
  c.header.seed = cfg.seed;
  for (const auto& a : arrs) {
    CatalogRow row;
    row.arrangement = format_arrangement(a);
    row.admissible = true;
    c.rows.push_back(std::move(row));
  }
  c.sort_rows();
  return c;
}

nlohmann::ordered_json to_json(const Catalog& c) {
  nlohmann::ordered_json j;
  j["format"] = "rootarr-catalog";
  j["catalog_version"] = kCatalogVersion;
  j["header"] = {{"n", c.header.n},
                 {"s", c.header.s},
                 {"m", c.header.m},
                 {"tool_version", c.header.tool_version},
                 {"config_hash", c.header.config_hash},
                 {"seed", c.header.seed}};
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : c.rows) {
    nlohmann::ordered_json row;
    row["arrangement"] = r.arrangement;
    row["admissible"] = r.admissible;
    if (r.realized) {
      row["realized"] = *r.realized;
      row["witness"] = r.witness.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.witness);
      row["witness_hp"] =
          r.witness_hp.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(r.witness_hp);
      row["residual"] = r.residual ? nlohmann::ordered_json(format_decimal17(*r.residual)) : nullptr;
      row["residual_kind"] = r.residual_kind;
      row["method"] = r.method;
    }
    if (r.wall_seconds) row["wall_seconds"] = *r.wall_seconds;
    rows.push_back(std::move(row));
  }
  j["rows"] = std::move(rows);
  if (c.soundness) {
    j["soundness"] = {{"samples", c.soundness->samples},
                      {"violations", c.soundness->violations},
                      {"out_of_scope", c.soundness->out_of_scope},
                      {"examples", c.soundness->examples}};
  }
  return j;
}

Catalog catalog_from_json(const nlohmann::json& j) {
  try {
    if (j.value("format", "") != "rootarr-catalog") throw ParseError("catalog: not a rootarr catalog", 0);
    if (j.at("catalog_version").get<int>() != kCatalogVersion)
      throw ParseError("catalog: unsupported catalog version", 0);
    Catalog c;
    const auto& h = j.at("header");
    c.header.n = h.at("n").get<int>();
    c.header.s = h.at("s").get<int>();
    c.header.m = h.at("m").get<int>();
    c.header.tool_version = h.at("tool_version").get<std::string>();
    c.header.config_hash = h.at("config_hash").get<std::string>();
    c.header.seed = h.at("seed").get<std::uint64_t>();
    for (const auto& r : j.at("rows")) {
      CatalogRow row;
      row.arrangement = r.at("arrangement").get<std::string>();
      row.admissible = r.at("admissible").get<bool>();
      if (r.contains("realized")) {
        row.realized = r.at("realized").get<bool>();
        if (!r.at("witness").is_null()) row.witness = r.at("witness").get<std::vector<std::string>>();
        if (r.contains("witness_hp") && !r.at("witness_hp").is_null())
          row.witness_hp = r.at("witness_hp").get<std::vector<std::string>>();
        if (!r.at("residual").is_null()) row.residual = parse_double(r.at("residual").get<std::string>());
        row.residual_kind = r.value("residual_kind", "");
        row.method = r.value("method", "");
      }
      if (r.contains("wall_seconds")) row.wall_seconds = r.at("wall_seconds").get<double>();
      c.rows.push_back(std::move(row));
    }
    if (j.contains("soundness")) {
      const auto& s = j.at("soundness");
      c.soundness = CatalogSoundness{s.at("samples").get<long>(), s.at("violations").get<long>(),
                                     s.at("examples").get<std::vector<std::string>>(), s.value("out_of_scope", 0L)};
    }
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("catalog: ") + e.what(), 0);
  }
}

void write_csv(std::ostream& os, const Catalog& c) {
  os << "# rootarr catalog v" << kCatalogVersion << "\n";
  os << "# n=" << c.header.n << " s=" << c.header.s << " m=" << c.header.m << "\n";
  os << "# tool_version=" << c.header.tool_version << "\n";
  os << "# config_hash=" << c.header.config_hash << "\n";
  os << "# seed=" << c.header.seed << "\n";
  if (c.soundness) {
    os << "# soundness_samples=" << c.soundness->samples << " soundness_violations=" << c.soundness->violations
       << " soundness_out_of_scope=" << c.soundness->out_of_scope
       << "\n";
  }
  os << kColumns << "\n";
  for (const auto& r : c.rows) {
    os << r.arrangement << ',' << (r.admissible ? "true" : "false") << ',';
    if (r.realized) os << (*r.realized ? "true" : "false");
    os << ',';
    if (r.residual) os << format_decimal17(*r.residual);
    os << ',' << r.residual_kind << ',' << r.method << ',';
    for (std::size_t i = 0; i < r.witness.size(); ++i) os << (i ? ";" : "") << r.witness[i];
    os << ',';
    if (r.wall_seconds) os << format_decimal17(*r.wall_seconds);
    os << "\n";
  }
}

Catalog read_csv(std::istream& is) {
  Catalog c;
  std::string line;
  bool seen_columns = false;
  bool seen_magic = false;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const std::string body = trim(line.substr(1));
      if (body.rfind("rootarr catalog v", 0) == 0) {
        if (body != "rootarr catalog v" + std::to_string(kCatalogVersion))
          throw ParseError("catalog: unsupported catalog version", 0);
        seen_magic = true;
        continue;
      }
      std::istringstream kv(body);
      std::string item;
      while (kv >> item) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
        if (key == "n") c.header.n = static_cast<int>(parse_double(value));
        else if (key == "s") c.header.s = static_cast<int>(parse_double(value));
        else if (key == "m") c.header.m = static_cast<int>(parse_double(value));
        else if (key == "tool_version") c.header.tool_version = value;
        else if (key == "config_hash") c.header.config_hash = value;
        else if (key == "seed") c.header.seed = std::stoull(value);
        else if (key == "soundness_samples") {
          if (!c.soundness) c.soundness.emplace();
          c.soundness->samples = std::stol(value);
        } else if (key == "soundness_violations") {
          if (!c.soundness) c.soundness.emplace();
          c.soundness->violations = std::stol(value);
        } else if (key == "soundness_out_of_scope") {
          if (!c.soundness) c.soundness.emplace();
          c.soundness->out_of_scope = std::stol(value);
        }
      }
      continue;
    }
    if (!seen_columns) {
      if (line != kColumns) throw ParseError("catalog: unexpected column line '" + line + "'", 0);
      seen_columns = true;
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 8) throw ParseError("catalog: expected 8 fields in '" + line + "'", 0);
    CatalogRow row;
    row.arrangement = f[0];
    row.admissible = parse_bool(f[1]);
    if (!f[2].empty()) row.realized = parse_bool(f[2]);
    if (!f[3].empty()) row.residual = parse_double(f[3]);
    row.residual_kind = f[4];
    row.method = f[5];
    if (!f[6].empty()) row.witness = split(f[6], ';');
    if (!f[7].empty()) row.wall_seconds = parse_double(f[7]);
    c.rows.push_back(std::move(row));
  }
  if (!seen_magic || !seen_columns) throw ParseError("catalog: missing header", 0);
  return c;
}

void save_catalog(const std::string& path, const Catalog& c) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidParams("cannot write " + path);
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) {
    write_csv(os, c);
  } else {
    os << to_json(c).dump(2) << "\n";
  }
}

Catalog load_catalog(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidParams("cannot read " + path);
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0) return read_csv(is);
  try {
    return catalog_from_json(nlohmann::json::parse(is));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("catalog: ") + e.what(), e.byte);
  }
}

}  // namespace rootarr::cli
