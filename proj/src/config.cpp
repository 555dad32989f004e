#include "config.hpp"

#include <array>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "errors.hpp"

namespace nosched::cfg {
namespace {

struct DefaultEntry {
    const char* key;
    const char* value;
};

// Embedded defaults. Study constants follow the headline experiment; kernel,
// allocation and sim defaults are nominal mid-range operating values.
constexpr std::array kDefaults = {
    // deterministic margin/tail study
    DefaultEntry{"study.a", "1.0"},
    DefaultEntry{"study.b", "0.9"},
    DefaultEntry{"study.dbar", "0.30"},
    DefaultEntry{"study.tau_ctrl_ms", "10.0"},
    DefaultEntry{"study.weight", "0.60"},
    DefaultEntry{"study.spike_slope", "1.0"},
    DefaultEntry{"study.coupling", "auto"},
    DefaultEntry{"study.topologies", "pair2,line4,ring8"},
    DefaultEntry{"study.delays_ms", "5,12,20"},
    DefaultEntry{"study.kappa_u", "25.0"},
    DefaultEntry{"study.kappa_theta", "4.0"},
    DefaultEntry{"study.mu_min", "0.12"},
    DefaultEntry{"study.gamma_nom", "0.95"},
    DefaultEntry{"study.budget_us", "120.0"},
    DefaultEntry{"study.users_per_cell", "8"},
    DefaultEntry{"study.phi_obs", "0.15"},
    DefaultEntry{"study.spill_cap_ms", "1.0"},
    DefaultEntry{"study.mode", "nominal"},
    DefaultEntry{"study.eps", "1e-9"},
    DefaultEntry{"study.tau_grid_max_ms", "150"},
    DefaultEntry{"study.tau_grid_step_ms", "5"},

    // two-state excitability kernel
    DefaultEntry{"kernel.alpha", "1.0"},
    DefaultEntry{"kernel.kappa", "1.0"},
    DefaultEntry{"kernel.beta", "0.5"},
    DefaultEntry{"kernel.chi", "0.2"},
    DefaultEntry{"kernel.v_ref", "0.0"},
    DefaultEntry{"kernel.a", "1.0"},
    DefaultEntry{"kernel.b", "0.9"},
    DefaultEntry{"kernel.g", "0.25"},
    DefaultEntry{"kernel.v_th", "1.0"},
    DefaultEntry{"kernel.eps", "1e-9"},
    DefaultEntry{"kernel.reset_base", "0.05"},
    DefaultEntry{"kernel.reset_kick", "0.10"},
    DefaultEntry{"kernel.reset_rate", "0.5"},
    DefaultEntry{"kernel.reset_slots", "3"},
    DefaultEntry{"kernel.tau_s", "2.0"},
    DefaultEntry{"kernel.queue_scale", "400.0"},
    DefaultEntry{"kernel.delay_slots", "5"},
    DefaultEntry{"kernel.h", "0.5"},
    DefaultEntry{"kernel.divergence_guard", "1e9"},

    // grant pipeline
    DefaultEntry{"alloc.zeta", "0.2"},
    DefaultEntry{"alloc.vartheta", "0.0667"},
    DefaultEntry{"alloc.eps", "1e-9"},
    DefaultEntry{"alloc.gamma", "0.95"},
    DefaultEntry{"alloc.prb_total", "50"},
    DefaultEntry{"alloc.mcs_min_prb", "1"},

    // slot simulator
    DefaultEntry{"sim.slots", "20000"},
    DefaultEntry{"sim.warmup", "auto"},
    DefaultEntry{"sim.topology", "ring8"},
    DefaultEntry{"sim.weight", "0.60"},
    DefaultEntry{"sim.schedulers", "NOS,PF,BP"},
    DefaultEntry{"sim.seeds", "1"},
    DefaultEntry{"sim.lambda", "25.0"},
    DefaultEntry{"sim.arrival_rate", "2.0"},
    DefaultEntry{"sim.mu", "120.0"},
    DefaultEntry{"sim.mu_fading", "off"},
    DefaultEntry{"sim.bp_delay_slots", "5"},
    DefaultEntry{"sim.sync_window", "64"},
    DefaultEntry{"sim.sync_mode", "covariance"},
    DefaultEntry{"sim.warn_persist", "10"},
    DefaultEntry{"sim.grant_trace", ""},
};

const std::vector<std::string>& section_order() {
    static const std::vector<std::string> order = {"study", "kernel", "alloc", "sim"};
    return order;
}

std::string trim(const std::string& s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

bool known_key(const std::string& key) {
    for (const auto& d : kDefaults)
        if (key == d.key) return true;
    return false;
}

} // namespace

Config Config::defaults() {
    Config c;
    for (const auto& d : kDefaults) c.kv_[d.key] = d.value;
    return c;
}

void Config::overlay_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash_pos = line.find('#');
        if (hash_pos != std::string::npos) line.erase(hash_pos);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(lineno) +
                                  ": malformed section header '" + line + "'");
            section = trim(line.substr(1, line.size() - 2));
            if (section.empty())
                throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty section name");
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(lineno) +
                              ": expected 'key = value', got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(lineno) + ": empty key");
        if (!section.empty() && key.find('.') == std::string::npos)
            key = section + "." + key;
        set(key, value);
    }
}

Config Config::from_text(const std::string& text) {
    Config c = defaults();
    c.overlay_text(text, "<config>");
    return c;
}

Config Config::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("config file not readable: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    Config c = defaults();
    c.overlay_text(buf.str(), path);
    return c;
}

void Config::set(const std::string& key, const std::string& value) {
    if (!known_key(key)) throw ConfigError("unknown config key '" + key + "'");
    kv_[key] = value;
}

bool Config::has(const std::string& key) const { return kv_.count(key) != 0; }

const std::string& Config::raw(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) throw ConfigError("unknown config key '" + key + "'");
    return it->second;
}

double Config::get_double(const std::string& key) const {
    const std::string& v = raw(key);
    char* end = nullptr;
    double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(key + ": expected a number, got '" + v + "'");
    return x;
}

double Config::get_double_positive(const std::string& key) const {
    double x = get_double(key);
    if (!(x > 0.0)) throw ConfigError(key + ": must be > 0, got '" + raw(key) + "'");
    return x;
}

int64_t Config::get_int(const std::string& key) const {
    const std::string& v = raw(key);
    char* end = nullptr;
    long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
        throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return x;
}

bool Config::get_bool(const std::string& key) const {
    const std::string& v = raw(key);
    if (v == "on" || v == "true" || v == "1") return true;
    if (v == "off" || v == "false" || v == "0") return false;
    throw ConfigError(key + ": expected on/off, got '" + v + "'");
}

std::string Config::get_string(const std::string& key) const { return raw(key); }

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(value);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<std::string> Config::get_string_list(const std::string& key) const {
    return split_list(raw(key));
}

std::vector<double> Config::get_double_list(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(raw(key))) {
        char* end = nullptr;
        double x = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0')
            throw ConfigError(key + ": expected a number list, got '" + raw(key) + "'");
        out.push_back(x);
    }
    if (out.empty()) throw ConfigError(key + ": list must not be empty");
    return out;
}

std::string Config::dump() const {
    std::ostringstream out;
    bool first = true;
    for (const auto& sec : section_order()) {
        if (!first) out << "\n";
        first = false;
        out << "[" << sec << "]\n";
        // declaration order of the defaults table, not map order
        for (const auto& d : kDefaults) {
            std::string key = d.key;
            if (key.rfind(sec + ".", 0) != 0) continue;
            out << key.substr(sec.size() + 1) << " = " << kv_.at(key) << "\n";
        }
    }
    return out.str();
}

uint64_t Config::hash() const {
    const std::string text = dump();
    uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

std::string Config::hash_hex() const {
    char buf[19];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(hash()));
    return buf;
}

} // namespace nosched::cfg
