#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace nosched::cfg {

// Flat key-value configuration. Keys are addressed as "section.key"; the file
// format is INI-like: [section] headers, one "key = value" per line, '#'
// comments. Unknown keys are rejected so typos fail loudly.
class Config {
public:
    static Config defaults();
    static Config from_file(const std::string& path);   // defaults overlaid with file
    static Config from_text(const std::string& text);   // defaults overlaid with text

    void set(const std::string& key, const std::string& value);
    bool has(const std::string& key) const;
    const std::string& raw(const std::string& key) const;

    double      get_double(const std::string& key) const;
    double      get_double_positive(const std::string& key) const;
    int64_t     get_int(const std::string& key) const;
    bool        get_bool(const std::string& key) const;
    std::string get_string(const std::string& key) const;
    std::vector<double>      get_double_list(const std::string& key) const;
    std::vector<std::string> get_string_list(const std::string& key) const;

    // canonical text: fixed section order, keys in declaration order
    std::string dump() const;
    // FNV-1a 64 over the canonical dump; stable across runs
    uint64_t hash() const;
    std::string hash_hex() const;

private:
    std::map<std::string, std::string> kv_;
    void overlay_text(const std::string& text, const std::string& origin);
};

std::vector<std::string> split_list(const std::string& value);

} // namespace nosched::cfg
