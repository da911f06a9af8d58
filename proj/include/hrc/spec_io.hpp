#pragma once

#include <string>

#include "hrc/model.hpp"

namespace hrc::io {

// Work-cell spec document (JSON, schema_version 1). All lengths in the file
// are in its declared `length_unit`, and the loaded spec keeps that unit
// internally so save/load round-trips are bit-exact; only built-in defaults
// (speeds, d_safe, reach thresholds, sigma0) are defined in meters and scaled
// at load time.
model::WorkcellSpec load_spec(const std::string& path);
model::WorkcellSpec parse_spec(const std::string& text, const std::string& origin);
std::string serialize_spec(const model::WorkcellSpec& spec);
void save_spec(const model::WorkcellSpec& spec, const std::string& path);

model::Chromosome load_chromosome(const std::string& path, const model::WorkcellSpec& spec);
std::string serialize_chromosome(const model::Chromosome& x, const model::WorkcellSpec& spec);
void save_chromosome(const model::Chromosome& x, const model::WorkcellSpec& spec,
                     const std::string& path);

std::string read_file(const std::string& path);
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace hrc::io
