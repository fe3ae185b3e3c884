#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

// Deterministic tabular output.  Every file starts with a '#manifest' comment
// carrying the run parameters as compact JSON; the data section (header +
// rows) contains no timestamps and is byte-identical across reruns with equal
// parameters, whatever the worker-thread count.
namespace recage::output {

inline constexpr const char* kToolVersion = "0.1.0";

struct RunManifest {
  std::string command;
  std::map<std::string, std::string> params;
  std::string seed;  // empty for commands without randomness
  std::string version = kToolVersion;
  std::string timestamp;  // ISO 8601 UTC, set by make_manifest
};

RunManifest make_manifest(std::string command,
                          std::map<std::string, std::string> params,
                          std::string seed = {});

std::string manifest_json(const RunManifest& m);

// Shortest round-trip decimal form (via std::to_chars).
std::string cell(double v);
std::string cell(std::int64_t v);
std::string cell(int v);
std::string cell(std::string v);

using Row = std::vector<std::string>;

void write_csv(std::ostream& os, const RunManifest& m,
               const std::vector<std::string>& header,
               const std::vector<Row>& rows);

// The same rows re-encoded as JSON: {"manifest": ..., "rows": [{col: cell}]}.
void write_json(std::ostream& os, const RunManifest& m,
                const std::vector<std::string>& header,
                const std::vector<Row>& rows);

}  // namespace recage::output
