#include "waveica/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace waveica {

namespace {

bool parse_double(const std::string& token, double& out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    out = std::strtod(begin, &end);
    if (end == begin) return false;
    while (*end == ' ' || *end == '\t' || *end == '\r') ++end;
    return *end == '\0';
}

std::vector<std::vector<double>> read_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw csv_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    long lineno = 0;
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        std::stringstream ss(line);
        std::string token;
        std::vector<double> row;
        int col = 0;
        bool header = false;
        while (std::getline(ss, token, ',')) {
            ++col;
            double v;
            if (!parse_double(token, v)) {
                if (first_data_line && col == 1) { header = true; break; }
                throw csv_error(path + ": cannot parse value at row " + std::to_string(lineno) +
                                ", column " + std::to_string(col));
            }
            row.push_back(v);
        }
        if (header) continue;
        first_data_line = false;
        if (!rows.empty() && rows.front().size() != row.size())
            throw csv_error(path + ": inconsistent column count at row " + std::to_string(lineno));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw csv_error(path + ": no data rows");
    return rows;
}

}  // namespace

Sample read_csv_sample(const std::string& path) {
    auto rows = read_rows(path);
    int d = static_cast<int>(rows.front().size());
    Sample out(d, {});
    out.data.reserve(rows.size() * d);
    for (const auto& row : rows)
        out.data.insert(out.data.end(), row.begin(), row.end());
    return out;
}

Matrix read_csv_matrix(const std::string& path) {
    auto rows = read_rows(path);
    int d = static_cast<int>(rows.front().size());
    if (static_cast<int>(rows.size()) != d)
        throw csv_error(path + ": matrix must be square");
    Matrix out(d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) out(i, j) = rows[i][j];
    return out;
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_csv_sample(const std::string& path, const Sample& sample) {
    std::ofstream out(path);
    if (!out) throw csv_error("cannot open " + path + " for writing");
    long n = sample.n();
    for (long i = 0; i < n; ++i) {
        for (int l = 0; l < sample.dim; ++l) {
            if (l) out << ',';
            out << format_double(sample.at(i, l));
        }
        out << '\n';
    }
}

}  // namespace waveica
