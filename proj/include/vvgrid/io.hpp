// Plain-text serialization helpers shared by the model and dataset formats.
#pragma once

#include "vvgrid/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace vvgrid {

// Formats a double with 17 significant digits (lossless round-trip).
std::string format_full(double x);

// Named dense blocks:
//   <name> <rows> <cols>
//   row-major values, one row per line
// Blank lines and '#' comments allowed between blocks.
void write_matrix_block(std::ostream& os, const std::string& name, const Mat& m);
void write_vector_block(std::ostream& os, const std::string& name, const Vec& v);

struct MatrixFile {
    std::map<std::string, Mat> blocks;

    const Mat& get(const std::string& name) const;
    Vec get_vector(const std::string& name) const;
    double get_scalar(const std::string& name) const;
    bool has(const std::string& name) const { return blocks.count(name) > 0; }
};

MatrixFile read_matrix_blocks(std::istream& is);
MatrixFile read_matrix_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

std::vector<std::string> split_ws(const std::string& line);

// FNV-1a, used for config/feeder identity stamps.
std::uint64_t fnv1a(const std::string& s);

}  // namespace vvgrid
