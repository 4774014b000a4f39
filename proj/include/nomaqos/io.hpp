#pragma once

#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "nomaqos/experiments.hpp"
#include "nomaqos/noma_core.hpp"
#include "nomaqos/qos_model.hpp"

namespace nomaqos {

// JSON readers and writers for the CLI. Every reader throws ValidationError
// naming the offending field. See docs/file_formats.md for the schemas.

using Json = nlohmann::json;

Json load_json_file(const std::string& path);

/// Top-level array of {"layers": [{"rate_bps": ..., "psnr_db": ...}, ...]}.
std::vector<SvcLayerTable> tables_from_json(const Json& doc);
Json tables_to_json(std::span<const SvcLayerTable> tables);

/// {"bandwidth_hz", "noise_psd_dbm_per_hz", "devices": [{"gain_sq" | "distance_km",
/// "p_max_dbm", "ee_min"}]}. Distances map to path loss only, no fading. One
/// table is shared by all devices; otherwise one table per device in file
/// order.
UplinkScenario scenario_from_json(const Json& doc, std::span<const SvcLayerTable> tables);

/// Overlays the fields present in doc onto base. Unknown keys are rejected.
SweepSpec sweep_spec_from_json(const Json& doc, SweepSpec base);
Json to_json(const SweepSpec& spec);

}  // namespace nomaqos
