#pragma once

#include <string>

#include "stratwave/grid.hpp"

namespace stratwave {

// '#' header with grid metadata, F, epsilon and the background hash, then one line
// "q p w" per node, rows of constant p in order, both interface copies included.
void write_field(const HeightField& f, const std::string& path, const std::string& hash,
                 const std::string& extra_header = "");
HeightField read_field(const std::string& path, std::string* hash = nullptr);

}  // namespace stratwave
