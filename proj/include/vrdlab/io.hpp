#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "vrdlab/device_model.hpp"
#include "vrdlab/profiler.hpp"

namespace vrdlab {

// FNV-1a over a byte string / file contents; used for manifest
// integrity checks (tamper detection, not cryptography).
std::uint64_t fnv1a64(const void* data, std::size_t size);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);
std::string hash_hex(std::uint64_t h);

// Series CSV: header `index,rdt`, one row per measurement, sentinel
// written as the literal `noflip`. A sidecar `<file>.meta.json` holds
// the sweep config and test parameters.
void save_series_csv(const MeasurementSeries& series, const std::filesystem::path& path);
MeasurementSeries load_series_csv(const std::filesystem::path& path);

// Replay files: one positive integer per line.
std::vector<std::uint64_t> load_replay_file(const std::filesystem::path& path);

// Model files: JSON document with one record per row, e.g.
// {"rows":[{"row":0,"family":"discrete_normal","mean":4000,
//           "stddev":200,"grid":{"min":2000,"max":6000,"step":40},
//           "modifiers":{"checkered0|tras|c50":1.1}}]}
// Replay rows reference a replay_file relative to the model file.
std::map<std::uint64_t, RdtModel> load_model_file(const std::filesystem::path& path);
void save_model_file(const std::map<std::uint64_t, RdtModel>& models,
                     const std::filesystem::path& path);

std::string modifier_key_to_string(const Condition& c);
Condition modifier_key_from_string(const std::string& key);

} // namespace vrdlab
