#include "nosched.h"

#include <CLI11.hpp>
#include <json.hpp>

#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

int exit_code(nos_status st) {
    switch (st) {
    case NOS_OK:
        return 0;
    case NOS_ECONFIG:
        return 2;
    case NOS_EUNSTABLE:
        return 3;
    default:
        return 1;
    }
}

int report(nos_status st) {
    std::fprintf(stderr, "error: %s\n", nos_last_error());
    return exit_code(st);
}

struct ConfigHandle {
    nos_config* cfg = nullptr;
    ~ConfigHandle() { nos_config_free(cfg); }
};

nos_status build_config(const std::string& path, const std::vector<std::string>& sets,
                        ConfigHandle& h) {
    nos_status st = path.empty() ? nos_config_create(&h.cfg)
                                 : nos_config_load(path.c_str(), &h.cfg);
    if (st != NOS_OK)
        return st;
    for (const auto& kv : sets) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::fprintf(stderr, "error: --set expects key=value, got '%s'\n", kv.c_str());
            return NOS_ECONFIG;
        }
        st = nos_config_set(h.cfg, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str());
        if (st != NOS_OK)
            return st;
    }
    return NOS_OK;
}

std::string get_value(const nos_config* cfg, const char* key) {
    size_t need = 0;
    if (nos_config_get(cfg, key, nullptr, 0, &need) != NOS_OK)
        return "";
    std::string s(need, '\0');
    nos_config_get(cfg, key, s.data(), need, nullptr);
    s.resize(need - 1);
    return s;
}

std::string get_dump(const nos_config* cfg) {
    size_t need = 0;
    nos_config_dump(cfg, nullptr, 0, &need);
    std::string s(need, '\0');
    nos_config_dump(cfg, s.data(), need, nullptr);
    s.resize(need - 1);
    return s;
}

std::string get_hash(const nos_config* cfg) {
    char buf[17] = {0};
    nos_config_hash(cfg, buf, sizeof buf);
    return buf;
}

void write_manifest(const std::string& out_dir, const std::string& hash,
                    const std::string& subcommand, const std::vector<std::string>& outputs,
                    double seconds) {
    nlohmann::json j;
    j["config_hash"] = hash;
    j["tool_version"] = nos_version();
    j["subcommand"] = subcommand;
    j["outputs"] = outputs;
    j["runtime_seconds"] = seconds;
    std::ofstream f(std::filesystem::path(out_dir) / "manifest.json");
    f << j.dump(2) << "\n";
}

std::vector<double> parse_list(const std::string& raw) {
    std::vector<double> out;
    std::string cur;
    for (char ch : raw + ",") {
        if (ch == ',') {
            if (!cur.empty())
                out.push_back(std::strtod(cur.c_str(), nullptr));
            cur.clear();
        } else if (!std::isspace(static_cast<unsigned char>(ch))) {
            cur += ch;
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"delay-aware spiking scheduler toolkit"};
    app.require_subcommand(0, 1);

    std::string config_path;
    std::vector<std::string> sets;
    bool print_config = false;
    app.add_option("--config", config_path, "configuration file (defaults when omitted)");
    app.add_option("--set", sets, "override key=value (repeatable)");
    app.add_flag("--print-config", print_config,
                 "dump the resolved configuration and exit");

    std::string study_out = "out", mode;
    CLI::App* cmd_study = app.add_subcommand("study", "calibrated deterministic sweep");
    cmd_study->add_option("--out", study_out, "output directory");
    cmd_study->add_option("--mode", mode, "tail normalisation")
        ->check(CLI::IsMember({"nominal", "effective"}));

    std::string topology = "ring8";
    std::vector<double> deltas;
    bool exact = false;
    CLI::App* cmd_stab = app.add_subcommand("stability", "delay-aware margin report");
    cmd_stab->add_option("--topology", topology, "pair2, line4 or ring8");
    cmd_stab->add_option("--delta", deltas, "delay in ms (repeatable)");
    cmd_stab->add_flag("--exact", exact, "characteristic-equation crossing instead of the envelope");

    std::string sim_out = "out";
    uint64_t seed = 0;
    int parallel = 1;
    CLI::App* cmd_sim = app.add_subcommand("simulate", "slot-level simulation");
    cmd_sim->add_option("--out", sim_out, "output directory");
    CLI::Option* seed_opt = cmd_sim->add_option("--seed", seed, "single seed override");
    cmd_sim->add_option("--parallel", parallel, "worker threads")->check(CLI::PositiveNumber);

    CLI::App* cmd_cal = app.add_subcommand("calibrate", "print the tail-parity gain");

    CLI11_PARSE(app, argc, argv);

    ConfigHandle h;
    nos_status st = build_config(config_path, sets, h);
    if (st != NOS_OK) {
        if (nos_last_error()[0])
            std::fprintf(stderr, "error: %s\n", nos_last_error());
        return exit_code(st);
    }

    if (print_config) {
        std::fputs(get_dump(h.cfg).c_str(), stdout);
        return 0;
    }
    if (app.get_subcommands().empty()) {
        std::fputs(app.help().c_str(), stdout);
        return 1;
    }

    using clock = std::chrono::steady_clock;
    auto t0 = clock::now();
    auto seconds = [&t0]() {
        return std::chrono::duration<double>(clock::now() - t0).count();
    };

    if (cmd_study->parsed()) {
        if (!mode.empty()) {
            st = nos_config_set(h.cfg, "study.mode", mode.c_str());
            if (st != NOS_OK)
                return report(st);
        }
        nos_calibration cal{};
        st = nos_study_run(h.cfg, study_out.c_str(), &cal);
        if (st != NOS_OK)
            return report(st);
        if (cal.floored)
            std::fprintf(stderr, "warning: tail parity has no root, floored at g=%.12g\n",
                         cal.g);
        // manifest paths are relative to the out dir so the bundle stays
        // self-contained when moved
        std::vector<std::string> outputs{"auc.csv", "maxq.csv", "p999.csv",
                                         "tails_line4.csv", "summary.csv"};
        write_manifest(study_out, get_hash(h.cfg), "study", outputs, seconds());
        std::printf("study: g=%.12g (%d iterations), 5 tables in %s\n", cal.g, cal.iters,
                    study_out.c_str());
        return 0;
    }

    if (cmd_stab->parsed()) {
        if (deltas.empty())
            deltas = parse_list(get_value(h.cfg, "study.delays_ms"));
        std::printf("topology,delta_ms,k_star,k,delta,omega0,h_max\n");
        for (double d : deltas) {
            nos_margin_row row{};
            st = nos_stability_margin(h.cfg, topology.c_str(), d, exact ? 1 : 0, &row);
            if (st != NOS_OK)
                return report(st);
            std::printf("%s,%.12g,%.12g,%.12g,%.12g,%.12g,%.12g\n", topology.c_str(), d,
                        row.k_star, row.coupling, row.margin, row.omega0, row.h_max);
            if (row.degenerate)
                std::fprintf(stderr, "note: no finite crossing at delta=%g, zero-delay threshold reported\n", d);
        }
        return 0;
    }

    if (cmd_sim->parsed()) {
        if (seed_opt->count() > 0) {
            st = nos_config_set(h.cfg, "sim.seeds", std::to_string(seed).c_str());
            if (st != NOS_OK)
                return report(st);
        }
        int rows = 0;
        st = nos_sim_run_all(h.cfg, sim_out.c_str(), parallel, &rows);
        if (st != NOS_OK)
            return report(st);
        std::vector<std::string> outputs{"sim_metrics.csv"};
        std::string trace = get_value(h.cfg, "sim.grant_trace");
        if (!trace.empty())
            outputs.push_back(trace);
        write_manifest(sim_out, get_hash(h.cfg), "simulate", outputs, seconds());
        std::printf("simulate: %d runs -> %s\n", rows,
                    (std::filesystem::path(sim_out) / outputs.front()).string().c_str());
        return 0;
    }

    if (cmd_cal->parsed()) {
        nos_calibration cal{};
        st = nos_study_calibrate(h.cfg, &cal);
        if (st != NOS_OK)
            return report(st);
        if (cal.floored)
            std::fprintf(stderr, "warning: tail parity has no root, floored at g=%.12g\n",
                         cal.g);
        std::printf("%.12g\n", cal.g);
        return 0;
    }

    std::fputs(app.help().c_str(), stdout);
    return 1;
}
