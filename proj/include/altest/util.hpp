// Copyright (c) altest contributors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace altest {

std::optional<std::string> read_file(const std::filesystem::path& path);

// Writes via a temp file in the same directory followed by a rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

// FNV-1a, used to fingerprint prompt texts in reports.
std::uint64_t fnv1a64(std::string_view data);
std::string fnv1a64_hex(std::string_view data);

std::string now_iso8601();

std::string join(const std::vector<std::string>& parts, std::string_view sep);

}  // namespace altest
