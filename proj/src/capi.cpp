#include "nosched.h"

#include <cstring>
#include <exception>
#include <filesystem>
#include <string>

#include "alloc.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "graph.hpp"
#include "sim.hpp"
#include "stability.hpp"
#include "study.hpp"

struct nos_config {
    nosched::cfg::Config impl;
};

struct nos_graph {
    nosched::Graph impl;
};

namespace {

thread_local std::string t_last_error;

nos_status fail(nos_status code, const std::string& what) {
    t_last_error = what;
    return code;
}

nos_status from_exception() {
    try {
        throw;
    } catch (const nosched::ConfigError& e) {
        return fail(NOS_ECONFIG, e.what());
    } catch (const nosched::UnstableError& e) {
        return fail(NOS_EUNSTABLE, e.what());
    } catch (const nosched::NumericError& e) {
        return fail(NOS_ENUMERIC, e.what());
    } catch (const nosched::DivergenceError& e) {
        return fail(NOS_EDIVERGED, e.what());
    } catch (const nosched::IoError& e) {
        return fail(NOS_EIO, e.what());
    } catch (const std::exception& e) {
        return fail(NOS_EINVAL, e.what());
    } catch (...) {
        return fail(NOS_EINVAL, "unknown error");
    }
}

nos_status copy_out(const std::string& s, char* buf, size_t cap, size_t* needed) {
    if (needed)
        *needed = s.size() + 1;
    if (buf && cap > 0) {
        size_t n = std::min(cap - 1, s.size());
        std::memcpy(buf, s.data(), n);
        buf[n] = '\0';
    }
    return NOS_OK;
}

} // namespace

extern "C" {

const char* nos_last_error(void) {
    return t_last_error.c_str();
}

const char* nos_version(void) {
    return "0.1.0";
}

nos_status nos_config_create(nos_config** out) {
    if (!out)
        return fail(NOS_EINVAL, "null out pointer");
    try {
        *out = new nos_config{nosched::cfg::Config::defaults()};
        return NOS_OK;
    } catch (...) {
        return from_exception();
    }
}

nos_status nos_config_load(const char* path, nos_config** out) {
    if (!path || !out)
        return fail(NOS_EINVAL, "null argument");
    try {
        *out = new nos_config{nosched::cfg::Config::from_file(path)};
        return NOS_OK;
    } catch (...) {
        return from_exception();
    }
}

void nos_config_free(nos_config* cfg) {
    delete cfg;
}

nos_status nos_config_set(nos_config* cfg, const char* key, const char* value) {
    if (!cfg || !key || !value)
        return fail(NOS_EINVAL, "null argument");
    try {
        cfg->impl.set(key, value);
        return NOS_OK;
    } catch (...) {
        return from_exception();
    }
}

nos_status nos_config_get(const nos_config* cfg, const char* key, char* buf, size_t cap,
                          size_t* needed) {
    if (!cfg || !key)
        return fail(NOS_EINVAL, "null argument");
    try {
        return copy_out(cfg->impl.raw(key), buf, cap, needed);
    } catch (...) {
        return from_exception();
    }
}

nos_status nos_config_dump(const nos_config* cfg, char* buf, size_t cap, size_t* needed) {
    if (!cfg)
        return fail(NOS_EINVAL, "null config");
    try {
        return copy_out(cfg->impl.dump(), buf, cap, needed);
    } catch (...) {
        return from_exception();
    }
}

nos_status nos_config_hash(const nos_config* cfg, char* buf, size_t cap) {
    if (!cfg || !buf)
        return fail(NOS_EINVAL, "null argument");
    if (cap < 17)
        return fail(NOS_EINVAL, "hash buffer needs 17 bytes");
    try {
        return copy_out(cfg->impl.hash_hex(), buf, cap, nullptr);
    } catch (...) {
        return from_exception();
    }
}

nos_status nos_graph_named(const char* name, double weight, nos_graph** out) {
    if (!name || !out)
        return fail(NOS_EINVAL, "null argument");
    try {
        *out = new nos_graph{nosched::Graph::named(name, weight)};
        return NOS_OK;
    } catch (...) {
        return from_exception();
    }
}

nos_status nos_graph_from_file(const char* path, nos_graph** out) {
    if (!path || !out)
        return fail(NOS_EINVAL, "null argument");
    try {
        *out = new nos_graph{nosched::Graph::from_file(path)};
        return NOS_OK;
    } catch (...) {
        return from_exception();
    }
}

void nos_graph_free(nos_graph* g) {
    delete g;
}

nos_status nos_graph_nodes(const nos_graph* g, int* out) {
    if (!g || !out)
        return fail(NOS_EINVAL, "null argument");
    *out = g->impl.nodes();
    return NOS_OK;
}

nos_status nos_graph_edges(const nos_graph* g, int* out) {
    if (!g || !out)
        return fail(NOS_EINVAL, "null argument");
    *out = g->impl.edge_count();
    return NOS_OK;
}

nos_status nos_graph_weight(const nos_graph* g, int i, int j, double* out) {
    if (!g || !out)
        return fail(NOS_EINVAL, "null argument");
    if (i < 0 || j < 0 || i >= g->impl.nodes() || j >= g->impl.nodes())
        return fail(NOS_EINVAL, "node index out of range");
    *out = g->impl.weight(i, j);
    return NOS_OK;
}

nos_status nos_graph_spectral_radius(const nos_graph* g, double* out) {
    if (!g || !out)
        return fail(NOS_EINVAL, "null argument");
    try {
        *out = nosched::spectral_radius(g->impl);
        return NOS_OK;
    } catch (...) {
        return from_exception();
    }
}

nos_status nos_stability_margin(const nos_config* cfg, const char* topology, double delta_ms,
                                int use_exact, nos_margin_row* out) {
    if (!cfg || !topology || !out)
        return fail(NOS_EINVAL, "null argument");
    if (delta_ms < 0.0)
        return fail(NOS_EINVAL, "delay must be non-negative");
    try {
        namespace st = nosched::stability;
        nosched::study::StudyConfig sc = nosched::study::from_config(cfg->impl);
        nosched::Graph g = nosched::Graph::named(topology, sc.weight);
        double rho = nosched::spectral_radius(g);
        double gain = sc.auto_gain ? 0.0 : sc.gain;

        nos_margin_row row{};
        row.rho = rho;
        row.omega0 = st::omega_zero(sc.lin);
        row.coupling = gain * sc.lin.spike_slope * rho;
        if (use_exact) {
            st::ExactResult ex = st::k_star_exact(sc.lin, delta_ms);
            row.k_star = ex.k;
            row.degenerate = ex.no_crossing ? 1 : 0;
        } else {
            double k0 = st::k_star_zero(sc.lin);
            row.k_star = st::k_star_envelope(k0, sc.tau_ctrl_ms, delta_ms);
            row.degenerate = 0;
        }
        row.margin = row.k_star - row.coupling;
        st::StepBound sb = st::step_bound(sc.lin,
                                          cfg->impl.get_double_positive("kernel.alpha"),
                                          cfg->impl.get_double_positive("kernel.kappa"),
                                          cfg->impl.get_double("kernel.beta"),
                                          cfg->impl.get_double_positive("kernel.chi"),
                                          row.coupling);
        row.h_max = sb.h_max;
        *out = row;
        return NOS_OK;
    } catch (...) {
        return from_exception();
    }
}

nos_status nos_study_calibrate(const nos_config* cfg, nos_calibration* out) {
    if (!cfg || !out)
        return fail(NOS_EINVAL, "null argument");
    try {
        nosched::study::StudyConfig sc = nosched::study::from_config(cfg->impl);
        nosched::study::Calibration cal = nosched::study::calibrate_gain(sc);
        out->g = cal.g;
        out->floored = cal.floored ? 1 : 0;
        out->iters = cal.iters;
        return NOS_OK;
    } catch (...) {
        return from_exception();
    }
}

nos_status nos_study_run(const nos_config* cfg, const char* out_dir, nos_calibration* out) {
    if (!cfg || !out_dir)
        return fail(NOS_EINVAL, "null argument");
    try {
        nosched::study::StudyConfig sc = nosched::study::from_config(cfg->impl);
        nosched::study::SweepResult r = nosched::study::run_sweep(sc);
        nosched::study::write_outputs(r, sc, out_dir, cfg->impl.hash_hex());
        if (out) {
            out->g = r.calib.g;
            out->floored = r.calib.floored ? 1 : 0;
            out->iters = r.calib.iters;
        }
        return NOS_OK;
    } catch (...) {
        return from_exception();
    }
}

nos_status nos_sim_run(const nos_config* cfg, const char* scheduler, uint64_t seed,
                       nos_sim_summary* out) {
    if (!cfg || !scheduler || !out)
        return fail(NOS_EINVAL, "null argument");
    try {
        nosched::alloc::Sched s = nosched::alloc::parse_sched(scheduler);
        nosched::sim::SimConfig sc = nosched::sim::from_config(cfg->impl, s, seed);
        nosched::sim::SimMetrics m = nosched::sim::run(sc);
        out->mean_queue = m.mean_queue;
        out->p999_delay_slots = m.p999_delay_slots;
        out->max_queue = m.max_queue;
        out->util = m.util;
        out->trend_slope = m.trend_slope;
        out->virtual_delay_slots = m.virtual_delay_slots;
        out->warn_count = m.warn_count;
        out->delta_ms = m.delta_ms;
        return NOS_OK;
    } catch (...) {
        return from_exception();
    }
}

nos_status nos_sim_run_all(const nos_config* cfg, const char* out_dir, int n_threads,
                           int* n_rows) {
    if (!cfg || !out_dir)
        return fail(NOS_EINVAL, "null argument");
    try {
        std::vector<nosched::sim::SimMetrics> runs =
            nosched::sim::run_all(cfg->impl, n_threads);
        std::filesystem::create_directories(out_dir);
        std::string path = (std::filesystem::path(out_dir) / "sim_metrics.csv").string();
        nosched::sim::write_metrics_csv(path, cfg->impl.hash_hex(), runs);
        if (n_rows)
            *n_rows = static_cast<int>(runs.size());
        return NOS_OK;
    } catch (...) {
        return from_exception();
    }
}

} // extern "C"
