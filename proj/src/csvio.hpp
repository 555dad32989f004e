#pragma once

#include <string>
#include <vector>

namespace nosched::csvio {

// canonical numeric cell: 12 significant digits, '.' decimal, inf/nan spelled out
std::string num(double v);
std::string num(int64_t v);

struct Table {
    std::string manifest_hash;            // from the "# manifest:" comment line
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

// writes "# manifest: <hash>" then the header then the rows
void write(const std::string& path, const std::string& manifest_hash,
           const std::vector<std::string>& header,
           const std::vector<std::vector<std::string>>& rows);

Table read(const std::string& path);

} // namespace nosched::csvio
