#pragma once
// Free-format MPS export and import.

#include <filesystem>
#include <string>
#include <vector>

#include "spacelog/model.hpp"

namespace spacelog {

/// Deterministic names: the model's explicit names when present, otherwise
/// an encoding of the index and metadata restricted to [A-Za-z0-9_].
std::vector<std::string> mps_row_names(const MilpModel& model);
std::vector<std::string> mps_column_names(const MilpModel& model);

std::string export_mps(const MilpModel& model);
void export_mps(const MilpModel& model, const std::filesystem::path& destination);

/// Metadata of the parsed model is generic; names are kept so that a
/// re-export reproduces the input byte for byte. Throws Error(kParseError).
MilpModel parse_mps(const std::string& text);
MilpModel load_mps(const std::filesystem::path& path);

}  // namespace spacelog
