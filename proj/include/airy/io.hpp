#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "airy/model.hpp"
#include "airy/sampling.hpp"

namespace airy::io {

// Writes `content` to a sibling temporary file and renames it over `path`.
void write_file_atomic(const std::filesystem::path &path, std::string_view content);

std::string read_file(const std::filesystem::path &path);

// Shortest round-trip text for a double (17 significant digits at most).
std::string format_double(double v);

// CSV with header `x,y`, 17 significant digits per value.
std::string photons_to_csv(const PhotonBatch &batch);
// Parses points only; metadata comes from the sidecar.
std::vector<Vec2> photons_from_csv(std::string_view text);

nlohmann::json photon_sidecar(const PhotonBatch &batch);
std::filesystem::path sidecar_path(const std::filesystem::path &csv_path);

// Writes the CSV and its `<path>.json` sidecar atomically.
void save_photons(const std::filesystem::path &path, const PhotonBatch &batch);
// Reads the CSV and, if present, the sidecar. Missing sidecar leaves sigma 0.
PhotonBatch load_photons(const std::filesystem::path &path);

nlohmann::json model_to_json(const SuperpositionModel &model, std::string_view label = {});
// Accepts {"sigma", "weights", "centers"}; extra keys ignored.
SuperpositionModel model_from_json(const nlohmann::json &j);

// 2-space indented JSON with a trailing newline.
std::string dump_json(const nlohmann::json &j);

}  // namespace airy::io
