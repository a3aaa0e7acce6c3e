#pragma once

#include <string>

#include "ggb/graph.hpp"
#include "ggb/types.hpp"

namespace ggb {

// Edge list: header "p <count>", then "u v" per line, 1-based, '#' comments.
SeedGraph read_edge_list(const std::string& path);
void write_edge_list(const SeedGraph& g, const std::string& path);

// Dense CSV, no header, '.' decimal. Symmetric reads accept max asymmetry
// 1e-8 and average it away.
Mat read_matrix_csv(const std::string& path);
Mat read_symmetric_csv(const std::string& path);
void write_matrix_csv(const Mat& m, const std::string& path);

// All writers land atomically: temp file in the target directory + rename.
void atomic_write_text(const std::string& path, const std::string& text);

std::string read_text_file(const std::string& path);

}  // namespace ggb
