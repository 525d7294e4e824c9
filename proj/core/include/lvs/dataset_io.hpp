#pragma once

#include <filesystem>

#include "lvs/tube.hpp"

namespace lvs {

// On-disk scene layout: <dir>/scene.json plus one P6 PPM background per
// camera, referenced by relative path from the manifest. `path` may point at
// the directory or directly at scene.json.
//
// Throws ParseError for malformed JSON/RLE, ValidationError for invariant
// violations, IoError for filesystem failures. Leading/trailing empty mask
// frames are trimmed at ingestion; interior empty frames are an error.
Dataset load_dataset(const std::filesystem::path& path);

// Writes scene.json and background PPMs in canonical order (cameras, tubes,
// detections, reid entries all sorted by id/frame). save followed by load
// followed by save is byte-identical.
void save_dataset(const Dataset& dataset, const std::filesystem::path& dir);

// ground_truth.json: {"<tube_id>": object_id, ...}.
GroundTruth load_ground_truth(const std::filesystem::path& path);
void save_ground_truth(const GroundTruth& gt, const std::filesystem::path& path);

}  // namespace lvs
