#include "csvio.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace nosched::csvio {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string num(int64_t v) { return std::to_string(v); }

void write(const std::string& path, const std::string& manifest_hash,
           const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot write " + path);
    out << "# manifest: " << manifest_hash << "\n";
    for (size_t i = 0; i < header.size(); ++i)
        out << header[i] << (i + 1 < header.size() ? "," : "");
    out << "\n";
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i)
            out << row[i] << (i + 1 < row.size() ? "," : "");
        out << "\n";
    }
    if (!out) throw IoError("write failed: " + path);
}

static std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

Table read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot read " + path);
    Table t;
    std::string line;
    bool header_done = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# manifest:", 0) == 0) {
            std::string h = line.substr(std::string("# manifest:").size());
            size_t b = h.find_first_not_of(' ');
            t.manifest_hash = b == std::string::npos ? "" : h.substr(b);
            continue;
        }
        if (line[0] == '#') continue;
        if (!header_done) {
            t.header = split_row(line);
            header_done = true;
        } else {
            t.rows.push_back(split_row(line));
        }
    }
    return t;
}

} // namespace nosched::csvio
