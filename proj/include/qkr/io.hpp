#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "qkr/core.hpp"
#include "qkr/observables.hpp"

namespace qkr {

// Doubles rendered with 17 significant digits (round-trip exact).
std::string format_double(double v);

// series CSV: header n,n_star,m1,m2,sigma,norm_error.
void write_series_csv(const std::filesystem::path& path, const TimeSeries& series);
TimeSeries read_series_csv(const std::filesystem::path& path);

// state CSV: header l,re,im,prob, one row per lattice site.
void write_state_csv(const std::filesystem::path& path, const WaveState& state);

// profile CSV: header l,prob.
void write_profile_csv(const std::filesystem::path& path, const WaveState& state);

// Flat INI-style config: [section] plus key = value lines, '#' or ';'
// comments. Returned keys are "section.key" (keys before any section header
// get "run." by default).
std::map<std::string, std::string> read_ini(const std::filesystem::path& path);

}  // namespace qkr
