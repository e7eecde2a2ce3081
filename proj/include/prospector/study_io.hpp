#pragma once

// Delimited-text exports of study results. All numbers are written with
// 17 significant digits; the console table uses 6.

#include "prospector/study.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>

namespace prospector {

std::string_view to_string(FilterMode mode);

/// One CSV row per evaluation record.
void write_results(std::ostream& out, const StudyReport& report);

/// Sectioned text: [table1], [networks], [diagnostics], [strength_error].
void write_report(std::ostream& out, const StudyReport& report);

/// CSV rows p_new_e1, p_new_e2, signed_error.
void write_surface(std::ostream& out, std::span<const SurfacePoint> surface);

/// Human-readable rule-set comparison table.
void print_table1(std::ostream& out, const StudyReport& report);

void save_results(const std::filesystem::path& path, const StudyReport& report);
void save_report(const std::filesystem::path& path, const StudyReport& report);
void save_surface(const std::filesystem::path& path, std::span<const SurfacePoint> surface);

}  // namespace prospector
