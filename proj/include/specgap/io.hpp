// Deterministic text formatting and file output shared by the CSV emitters.
#pragma once

#include <string>
#include <vector>

namespace specgap {

// Shortest round-trippable decimal with 17 significant digits (%.17g).
std::string g17(double v);

// Comma-joined CSV record with trailing newline.
std::string csv_row(const std::vector<std::string>& fields);

// Writes the whole content in one call; throws std::runtime_error on failure.
void write_text_file(const std::string& path, const std::string& content);

} // namespace specgap
