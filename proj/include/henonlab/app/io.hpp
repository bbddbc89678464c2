#pragma once

#include <string>

#include "json.hpp"

#include "henonlab/green.hpp"

namespace henonlab::app {

/// Throws ConfigError unless the directory that would hold `path` exists.
void check_output_path(const std::string &path);

/// Shortest decimal form that reads back to the same double; "nan"/"inf" otherwise.
std::string format_double(double v);

/// "i,j,x,y,value" header and one row per node, j-major.
std::string grid_csv(const FieldGrid &grid);

struct PngScaling {
    double lo = 0.0;
    double hi = 1.0;
};

/// 16-bit grayscale PNG, top row = largest imaginary part. Values are mapped
/// linearly from [lo, hi] to [1, 65535]; non-finite values become 0.
PngScaling write_png16(const std::string &path, const FieldGrid &grid);

void write_text(const std::string &path, const std::string &text);

/// Pretty-printed JSON; an empty path writes to stdout.
void write_json(const std::string &path, const nlohmann::json &j);

} // namespace henonlab::app
