#include "ceq/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace ceq {

using nlohmann::json;

std::string read_file(std::string const &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) { throw std::runtime_error("cannot open '" + path + "'"); }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

namespace {

std::string number(double v, int precision)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", precision, v);
  return buf;
}

bool ends_with(std::string const &s, std::string const &suffix)
{
  return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

int infer_n(Index states)
{
  int n = 0;
  while (n < kMaxVariables && state_count(n) < states) { ++n; }
  if (state_count(n) != states || n == 0) {
    throw std::invalid_argument("TPM side " + std::to_string(states) + " is not 2^n with n >= 1");
  }
  return n;
}

} // namespace

TpmD tpm_from_json(std::string const &text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (json::parse_error const &e) {
    throw std::invalid_argument(std::string("TPM JSON: ") + e.what());
  }
  if (!j.is_object() || !j.contains("rows") || !j["rows"].is_array()) {
    throw std::invalid_argument("TPM JSON: expected an object with a \"rows\" array");
  }
  auto const &rows = j["rows"];
  Index const N = static_cast<Index>(rows.size());
  Matrix<double> m(N, N);
  for (Index r = 0; r < N; ++r) {
    auto const &row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Index>(row.size()) != N) {
      throw std::invalid_argument("TPM JSON: row " + std::to_string(r) + " must hold " + std::to_string(N) +
                                  " numbers");
    }
    for (Index c = 0; c < N; ++c) {
      auto const &v = row[static_cast<std::size_t>(c)];
      if (!v.is_number()) {
        throw std::invalid_argument("TPM JSON: entry (" + std::to_string(r) + ", " + std::to_string(c) +
                                    ") is not a number");
      }
      m(r, c) = v.get<double>();
    }
  }
  int const n = j.contains("n") ? j["n"].get<int>() : infer_n(N);
  return TpmD(n, std::move(m));
}

std::string tpm_to_json(TpmD const &tpm, int precision)
{
  std::ostringstream os;
  os << "{\"n\": " << tpm.variables() << ", \"rows\": [\n";
  for (Index r = 0; r < tpm.states(); ++r) {
    os << "  [";
    for (Index c = 0; c < tpm.states(); ++c) {
      if (c) { os << ", "; }
      os << number(tpm(r, c), precision);
    }
    os << (r + 1 < tpm.states() ? "],\n" : "]\n");
  }
  os << "]}\n";
  return os.str();
}

TpmD tpm_from_csv(std::string const &text)
{
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') { line.pop_back(); }
    if (line.find_first_not_of(" \t") == std::string::npos) { continue; }
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (cell.find_first_not_of(" \t", used) != std::string::npos) { throw std::invalid_argument(cell); }
      } catch (std::exception const &) {
        throw std::invalid_argument("TPM CSV: line " + std::to_string(line_no) + ": '" + cell + "' is not a number");
      }
    }
    rows.push_back(std::move(row));
  }
  Index const N = static_cast<Index>(rows.size());
  if (N == 0) { throw std::invalid_argument("TPM CSV: no rows"); }
  Matrix<double> m(N, N);
  for (Index r = 0; r < N; ++r) {
    if (static_cast<Index>(rows[static_cast<std::size_t>(r)].size()) != N) {
      throw std::invalid_argument("TPM CSV: row " + std::to_string(r) + " has " +
                                  std::to_string(rows[static_cast<std::size_t>(r)].size()) + " values, expected " +
                                  std::to_string(N));
    }
    for (Index c = 0; c < N; ++c) { m(r, c) = rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]; }
  }
  return TpmD(infer_n(N), std::move(m));
}

std::string tpm_to_csv(TpmD const &tpm, int precision)
{
  std::ostringstream os;
  for (Index r = 0; r < tpm.states(); ++r) {
    for (Index c = 0; c < tpm.states(); ++c) {
      if (c) { os << ','; }
      os << number(tpm(r, c), precision);
    }
    os << '\n';
  }
  return os.str();
}

TpmD load_tpm(std::string const &path)
{
  auto const text = read_file(path);
  return ends_with(path, ".json") ? tpm_from_json(text) : tpm_from_csv(text);
}

void save_tpm(std::string const &path, TpmD const &tpm, int precision)
{
  std::ofstream out(path, std::ios::binary);
  if (!out) { throw std::runtime_error("cannot write '" + path + "'"); }
  out << (ends_with(path, ".json") ? tpm_to_json(tpm, precision) : tpm_to_csv(tpm, precision));
}

CoarseMapping mapping_from_json(std::string const &text)
{
  json j;
  try {
    j = json::parse(text);
  } catch (json::parse_error const &e) {
    throw std::invalid_argument(std::string("mapping JSON: ") + e.what());
  }
  CoarseMapping cm;
  try {
    cm.n_micro = j.at("n_micro").get<int>();
    cm.n_macro = j.at("n_macro").get<int>();
    cm.map = j.at("map").get<std::vector<Index>>();
  } catch (json::exception const &e) {
    throw std::invalid_argument(std::string("mapping JSON: ") + e.what());
  }
  check_mapping(cm);
  return cm;
}

CoarseMapping load_mapping(std::string const &path)
{
  auto const text = read_file(path);
  if (ends_with(path, ".json")) { return mapping_from_json(text); }
  CoarseMapping cm;
  std::string flat = text;
  for (char &c : flat) {
    if (c == '\n' || c == '\r') { c = ','; }
  }
  std::istringstream in(flat);
  std::string cell;
  Index top = 0;
  while (std::getline(in, cell, ',')) {
    if (cell.find_first_not_of(" \t") == std::string::npos) { continue; }
    try {
      cm.map.push_back(std::stoll(cell));
    } catch (std::exception const &) {
      throw std::invalid_argument("mapping CSV: '" + cell + "' is not an integer");
    }
    top = std::max(top, cm.map.back());
  }
  cm.n_micro = infer_n(static_cast<Index>(cm.map.size()));
  cm.n_macro = infer_n(std::max<Index>(2, top + 1));
  check_mapping(cm);
  return cm;
}

std::string mapping_to_json(CoarseMapping const &cm)
{
  json j;
  j["n_micro"] = cm.n_micro;
  j["n_macro"] = cm.n_macro;
  j["map"] = cm.map;
  return j.dump();
}

} // namespace ceq
