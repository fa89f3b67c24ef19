#pragma once

#include <filesystem>
#include <iosfwd>

#include "imgep/archive.hpp"

namespace imgep {

inline constexpr int kArchiveFormatVersion = 1;

/// Line-delimited archive dump: a header record followed by one record per
/// experiment. Doubles are written in shortest round-trip form, so loading
/// restores contexts, parameters and outcomes bit-exactly.
void dump_archive(const MetaPolicyArchive& archive, std::ostream& out);
void dump_archive(const MetaPolicyArchive& archive, const std::filesystem::path& path);

/// Throws std::runtime_error on a missing file, a version mismatch or records
/// that do not fit the given registry and dimensions.
MetaPolicyArchive load_archive(std::istream& in, const GoalSpaceRegistry& spaces, ArchiveConfig cfg = {});
MetaPolicyArchive load_archive(const std::filesystem::path& path, const GoalSpaceRegistry& spaces,
                               ArchiveConfig cfg = {});

}  // namespace imgep
