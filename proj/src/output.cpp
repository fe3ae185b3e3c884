#include "recage/output.hpp"

#include <charconv>
#include <ctime>
#include <stdexcept>
#include <system_error>
#include <utility>

#include <json.hpp>

namespace recage::output {

namespace {

std::string utc_now_iso8601() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  if (std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm) == 0) {
    return "1970-01-01T00:00:00Z";
  }
  return buf;
}

std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

nlohmann::json manifest_object(const RunManifest& m) {
  nlohmann::json j;
  j["command"] = m.command;
  j["params"] = m.params;
  j["seed"] = m.seed;
  j["version"] = m.version;
  j["timestamp"] = m.timestamp;
  return j;
}

}  // namespace

RunManifest make_manifest(std::string command,
                          std::map<std::string, std::string> params,
                          std::string seed) {
  RunManifest m;
  m.command = std::move(command);
  m.params = std::move(params);
  m.seed = std::move(seed);
  m.timestamp = utc_now_iso8601();
  return m;
}

std::string manifest_json(const RunManifest& m) {
  return manifest_object(m).dump();
}

std::string cell(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc()) throw std::runtime_error("cell: format failure");
  return std::string(buf, res.ptr);
}

std::string cell(std::int64_t v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  if (res.ec != std::errc()) throw std::runtime_error("cell: format failure");
  return std::string(buf, res.ptr);
}

std::string cell(int v) { return cell(static_cast<std::int64_t>(v)); }

std::string cell(std::string v) { return v; }

void write_csv(std::ostream& os, const RunManifest& m,
               const std::vector<std::string>& header,
               const std::vector<Row>& rows) {
  os << "#manifest " << manifest_json(m) << "\n";
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) os << ',';
    os << csv_escape(header[i]);
  }
  os << "\n";
  for (const Row& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) os << ',';
      os << csv_escape(row[i]);
    }
    os << "\n";
  }
}

void write_json(std::ostream& os, const RunManifest& m,
                const std::vector<std::string>& header,
                const std::vector<Row>& rows) {
  nlohmann::json j;
  j["manifest"] = manifest_object(m);
  nlohmann::json arr = nlohmann::json::array();
  for (const Row& row : rows) {
    nlohmann::json obj;
    for (std::size_t i = 0; i < row.size() && i < header.size(); ++i) {
      obj[header[i]] = row[i];
    }
    arr.push_back(std::move(obj));
  }
  j["rows"] = std::move(arr);
  os << j.dump(2) << "\n";
}

}  // namespace recage::output
