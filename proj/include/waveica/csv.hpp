#ifndef WAVEICA_CSV_HPP
#define WAVEICA_CSV_HPP

#include <string>

#include "waveica/sample.hpp"

namespace waveica {

struct csv_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Comma-separated, one observation per row; an optional header line is
// detected by a non-numeric first token. Throws csv_error naming the
// offending row and column.
Sample read_csv_sample(const std::string& path);

// Square matrix in the same format.
Matrix read_csv_matrix(const std::string& path);

// 17 significant digits, so a written sample re-reads to identical doubles.
void write_csv_sample(const std::string& path, const Sample& sample);

std::string format_double(double v);  // %.17g

}  // namespace waveica

#endif
