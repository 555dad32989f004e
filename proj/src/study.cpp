#include "study.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

#include "csvio.hpp"
#include "errors.hpp"
#include "graph.hpp"

namespace nosched::study {

namespace fs = std::filesystem;

static const double kInf = std::numeric_limits<double>::infinity();

StudyConfig from_config(const cfg::Config& c) {
    StudyConfig s;
    s.lin.a = c.get_double_positive("study.a");
    s.lin.b = c.get_double_positive("study.b");
    s.lin.dbar = c.get_double_positive("study.dbar");
    s.lin.spike_slope = c.get_double_positive("study.spike_slope");
    s.tau_ctrl_ms = c.get_double_positive("study.tau_ctrl_ms");
    s.weight = c.get_double_positive("study.weight");
    s.topologies = c.get_string_list("study.topologies");
    s.delays_ms = c.get_double_list("study.delays_ms");
    if (s.topologies.empty())
        throw ConfigError("study.topologies: must name at least one topology");
    if (s.delays_ms.empty())
        throw ConfigError("study.delays_ms: must hold at least one delay");
    for (double d : s.delays_ms)
        if (d < 0.0)
            throw ConfigError("study.delays_ms: delays must be non-negative");
    s.kappa_u = c.get_double_positive("study.kappa_u");
    s.kappa_theta = c.get_double_positive("study.kappa_theta");
    s.mu_min = c.get_double_positive("study.mu_min");
    s.gamma_nom = c.get_double_positive("study.gamma_nom");
    s.budget_us = c.get_double_positive("study.budget_us");
    s.users_per_cell = c.get_double_positive("study.users_per_cell");
    if (s.users_per_cell < 1.0)
        throw ConfigError("study.users_per_cell: must be at least 1");
    s.phi_obs = c.get_double("study.phi_obs");
    if (s.phi_obs < 0.0)
        throw ConfigError("study.phi_obs: must be non-negative");
    s.spill_cap_ms = c.get_double("study.spill_cap_ms");
    if (s.spill_cap_ms < 0.0)
        throw ConfigError("study.spill_cap_ms: must be non-negative");
    const std::string mode = c.get_string("study.mode");
    if (mode == "effective")
        s.effective_mode = true;
    else if (mode == "nominal")
        s.effective_mode = false;
    else
        throw ConfigError("study.mode: must be nominal or effective");
    s.eps = c.get_double_positive("study.eps");
    s.tau_grid_max = c.get_double_positive("study.tau_grid_max_ms");
    s.tau_grid_step = c.get_double_positive("study.tau_grid_step_ms");
    if (c.get_string("study.coupling") == "auto") {
        s.auto_gain = true;
        s.gain = 0.0;
    } else {
        s.auto_gain = false;
        s.gain = c.get_double("study.coupling");
        if (s.gain < 0.0)
            throw ConfigError("study.coupling: must be auto or a non-negative gain");
    }
    return s;
}

Headroom headroom(const StudyConfig& c, alloc::Sched s, const std::string& topology) {
    Graph g = Graph::named(topology, c.weight);
    double edges_per_cell = static_cast<double>(g.edge_count()) / g.nodes();
    double cost = alloc::du_cost(s, c.users_per_cell, edges_per_cell);
    Headroom h;
    h.gamma_eff = c.gamma_nom * std::max(0.0, 1.0 - cost / c.budget_us);
    h.spill_ms = std::min(c.spill_cap_ms, std::max(0.0, (cost - c.budget_us) / c.budget_us));
    return h;
}

double delta_eff(const StudyConfig& c, alloc::Sched s, double delta_ms, double spill_ms) {
    double lag = s == alloc::Sched::BP ? (1.0 + c.phi_obs) * delta_ms : delta_ms;
    return lag + spill_ms;
}

double margin_proxy(const StudyConfig& c, alloc::Sched s, double delta_eff_ms, double g,
                    double rho) {
    double k0 = stability::k_star_zero(c.lin);
    stability::MarginReport r = stability::margin(c.lin, k0, c.tau_ctrl_ms, g, rho,
                                                  delta_eff_ms, s == alloc::Sched::NOS);
    return r.delta;
}

double auc_map(const StudyConfig& c, double delta, double gamma_eff) {
    if (delta <= 0.0)
        return 0.05 * gamma_eff;
    double k = c.kappa_u * delta;
    return gamma_eff * k / (1.0 + k);
}

Tails tails(const StudyConfig& c, double delta, double auc, double gamma_norm) {
    Tails t;
    t.xbar = std::min(1.0, auc / (gamma_norm + c.eps));
    double mx = c.mu_min * t.xbar;
    t.theta = c.kappa_theta * delta * mx * mx;
    if (delta <= 0.0) {
        t.p999 = kInf;
        t.maxq = kInf;
        t.clamped = true;
        return t;
    }
    t.maxq = std::sqrt(std::log(1000.0) / (c.kappa_theta * delta));
    t.p999 = mx > 0.0 ? t.maxq / mx : kInf;
    return t;
}

static StudyPoint make_point(const StudyConfig& c, const std::string& topo, double rho,
                             double delta_ms, alloc::Sched s, double g) {
    StudyPoint p;
    p.topology = topo;
    p.delta_ms = delta_ms;
    p.scheduler = s;
    Headroom h = headroom(c, s, topo);
    p.gamma_eff = h.gamma_eff;
    p.spill_ms = h.spill_ms;
    p.delta_eff_ms = delta_eff(c, s, delta_ms, h.spill_ms);
    p.delta_margin = margin_proxy(c, s, p.delta_eff_ms, g, rho);
    p.auc = auc_map(c, p.delta_margin, h.gamma_eff);
    Tails t = tails(c, p.delta_margin, p.auc,
                    c.effective_mode ? h.gamma_eff : c.gamma_nom);
    p.xbar = t.xbar;
    p.theta = t.theta;
    p.p999_ms = t.p999;
    p.maxq = t.maxq;
    p.clamped = t.clamped;
    return p;
}

Calibration calibrate_gain(const StudyConfig& c) {
    std::string worst_topo;
    double worst_rho = -1.0;
    for (const auto& t : c.topologies) {
        double r = spectral_radius(Graph::named(t, c.weight));
        if (r > worst_rho) {
            worst_rho = r;
            worst_topo = t;
        }
    }
    double worst_delay = *std::max_element(c.delays_ms.begin(), c.delays_ms.end());

    Headroom hp = headroom(c, alloc::Sched::PF, worst_topo);
    double de_pf = delta_eff(c, alloc::Sched::PF, worst_delay, hp.spill_ms);
    double dm_pf = margin_proxy(c, alloc::Sched::PF, de_pf, 0.0, worst_rho);
    double target = tails(c, dm_pf, auc_map(c, dm_pf, hp.gamma_eff), c.gamma_nom).p999;

    Headroom hn = headroom(c, alloc::Sched::NOS, worst_topo);
    double de_nos = delta_eff(c, alloc::Sched::NOS, worst_delay, hn.spill_ms);
    double k0 = stability::k_star_zero(c.lin);
    double k_star = stability::k_star_envelope(k0, c.tau_ctrl_ms, de_nos);
    double hi = k_star / (c.lin.spike_slope * worst_rho);

    auto p999_at = [&](double g) {
        double dm = margin_proxy(c, alloc::Sched::NOS, de_nos, g, worst_rho);
        return tails(c, dm, auc_map(c, dm, hn.gamma_eff), c.gamma_nom).p999;
    };

    if (!std::isfinite(target))
        return {hi, true, 0};
    double p0 = p999_at(0.0);
    if (p0 > target)
        return {0.0, true, 0};

    double lo = 0.0, hib = hi;
    double best_g = 0.0, best_diff = std::abs(p0 - target);
    for (int it = 1; it <= 200; ++it) {
        double mid = 0.5 * (lo + hib);
        double p = p999_at(mid);
        double diff = std::abs(p - target);
        if (std::isfinite(diff) && diff < best_diff) {
            best_diff = diff;
            best_g = mid;
        }
        if (diff <= 1e-9 * target)
            return {mid, false, it};
        if (p < target)
            lo = mid;
        else
            hib = mid;
    }
    return {best_g, true, 200};
}

SweepResult run_sweep(const StudyConfig& c) {
    SweepResult r;
    r.calib = c.auto_gain ? calibrate_gain(c) : Calibration{c.gain, false, 0};

    for (const auto& topo : c.topologies) {
        double rho = spectral_radius(Graph::named(topo, c.weight));
        for (double d : c.delays_ms)
            for (alloc::Sched s : {alloc::Sched::NOS, alloc::Sched::PF, alloc::Sched::BP})
                r.points.push_back(make_point(c, topo, rho, d, s, r.calib.g));
    }

    if (std::find(c.topologies.begin(), c.topologies.end(), "line4") != c.topologies.end())
        for (double d : c.delays_ms)
            for (alloc::Sched s : {alloc::Sched::NOS, alloc::Sched::PF, alloc::Sched::BP}) {
                const StudyPoint* pt = nullptr;
                for (const auto& p : r.points)
                    if (p.topology == "line4" && p.delta_ms == d && p.scheduler == s)
                        pt = &p;
                for (int i = 0;; ++i) {
                    double tau = static_cast<double>(i) * c.tau_grid_step;
                    if (tau > c.tau_grid_max + 1e-9)
                        break;
                    r.curves.push_back({s, d, tau, std::exp(-pt->theta * tau * tau)});
                }
            }
    return r;
}

std::vector<std::string> write_outputs(const SweepResult& r, const StudyConfig& c,
                                       const std::string& out_dir,
                                       const std::string& manifest_hash) {
    fs::create_directories(out_dir);
    const char* mode = c.effective_mode ? "effective" : "nominal";
    std::vector<std::string> written;

    auto value_file = [&](const char* name, double StudyPoint::* field) {
        std::vector<std::vector<std::string>> rows;
        for (const auto& p : r.points)
            rows.push_back({p.topology, csvio::num(p.delta_ms), alloc::sched_name(p.scheduler),
                            csvio::num(p.*field), csvio::num(p.delta_margin),
                            csvio::num(p.gamma_eff), mode});
        std::string path = (fs::path(out_dir) / name).string();
        csvio::write(path, manifest_hash,
                     {"topology", "delta_ms", "scheduler", "value", "delta_margin",
                      "gamma_eff", "mode"},
                     rows);
        written.push_back(path);
    };
    value_file("auc.csv", &StudyPoint::auc);
    value_file("maxq.csv", &StudyPoint::maxq);
    value_file("p999.csv", &StudyPoint::p999_ms);

    {
        std::vector<std::vector<std::string>> rows;
        for (const auto& t : r.curves)
            rows.push_back({alloc::sched_name(t.scheduler), csvio::num(t.delta_ms),
                            csvio::num(t.tau), csvio::num(t.bound)});
        std::string path = (fs::path(out_dir) / "tails_line4.csv").string();
        csvio::write(path, manifest_hash, {"scheduler", "delta_ms", "tau", "bound"}, rows);
        written.push_back(path);
    }
    {
        std::vector<std::vector<std::string>> rows;
        for (const auto& p : r.points)
            rows.push_back({p.topology, csvio::num(p.delta_ms), alloc::sched_name(p.scheduler),
                            csvio::num(p.delta_eff_ms), csvio::num(p.delta_margin),
                            csvio::num(p.gamma_eff), csvio::num(p.spill_ms), csvio::num(p.auc),
                            csvio::num(p.xbar), csvio::num(p.theta), csvio::num(p.p999_ms),
                            csvio::num(p.maxq), p.clamped ? "1" : "0", mode});
        std::string path = (fs::path(out_dir) / "summary.csv").string();
        csvio::write(path, manifest_hash,
                     {"topology", "delta_ms", "scheduler", "delta_eff_ms", "delta_margin",
                      "gamma_eff", "spill_ms", "auc", "xbar", "theta", "p999_ms", "maxq",
                      "clamped", "mode"},
                     rows);
        written.push_back(path);
    }
    return written;
}

} // namespace nosched::study
