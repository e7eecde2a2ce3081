#pragma once

// Network file: a JSON document holding an ordered list of tables. Cells are
// written in canonical order with 17 significant digits so files round-trip
// bit-exactly.
//
//   {
//     "format": "prospector-networks",
//     "version": 1,
//     "networks": [
//       {"kind": "independent",
//        "provenance": {"seed": 7, "index": 0, "resamples": 0},
//        "cells": [c_fff, c_fft, c_ftf, c_ftt, c_tff, c_tft, c_ttf, c_ttt]}
//     ]
//   }

#include "prospector/joint_table.hpp"

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace prospector {

inline constexpr const char* kNetworkFormat = "prospector-networks";
inline constexpr int kNetworkFormatVersion = 1;

/// %.17g formatting used by every file writer.
std::string format_exact(double value);

void write_networks(std::ostream& out, std::span<const JointTable> networks);
std::vector<JointTable> read_networks(std::istream& in);

void save_networks(const std::filesystem::path& path, std::span<const JointTable> networks);
std::vector<JointTable> load_networks(const std::filesystem::path& path);

}  // namespace prospector
