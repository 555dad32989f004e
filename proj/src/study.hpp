#pragma once

#include <string>
#include <vector>

#include "alloc.hpp"
#include "config.hpp"
#include "stability.hpp"

namespace nosched::study {

struct StudyConfig {
    stability::LocalLin lin;     // a, b, dbar, spike slope
    double tau_ctrl_ms = 10.0;
    double weight = 0.6;
    std::vector<std::string> topologies{"pair2", "line4", "ring8"};
    std::vector<double> delays_ms{5.0, 12.0, 20.0};
    double kappa_u = 25.0;
    double kappa_theta = 4.0;
    double mu_min = 0.12;        // pkts/slot
    double gamma_nom = 0.95;
    double budget_us = 120.0;
    double users_per_cell = 8.0;
    double phi_obs = 0.15;       // observation lag fraction (BP)
    double spill_cap_ms = 1.0;
    bool effective_mode = false; // normalise xbar by gamma_eff instead of gamma_nom
    double eps = 1e-9;
    double tau_grid_max = 150.0;
    double tau_grid_step = 5.0;
    bool auto_gain = true;       // calibrate the coupling unless pinned in config
    double gain = 0.0;
};

StudyConfig from_config(const cfg::Config& c);

struct StudyPoint {
    std::string topology;
    double delta_ms = 0.0;
    alloc::Sched scheduler = alloc::Sched::NOS;
    double delta_eff_ms = 0.0;
    double delta_margin = 0.0;
    double gamma_eff = 0.0;
    double spill_ms = 0.0;
    double auc = 0.0;
    double xbar = 0.0;
    double theta = 0.0;
    double p999_ms = 0.0;
    double maxq = 0.0;
    bool clamped = false;        // margin was non-positive
};

struct TailPoint {
    alloc::Sched scheduler = alloc::Sched::NOS;
    double delta_ms = 0.0;
    double tau = 0.0;
    double bound = 0.0;          // exp(-theta tau^2)
};

struct Headroom {
    double gamma_eff = 0.0;
    double spill_ms = 0.0;
};

struct Tails {
    double xbar = 0.0;
    double theta = 0.0;
    double p999 = 0.0;
    double maxq = 0.0;
    bool clamped = false;
};

struct Calibration {
    double g = 0.0;
    bool floored = false;        // no parity root in the bracket, nearest match returned
    int iters = 0;
};

struct SweepResult {
    std::vector<StudyPoint> points;
    std::vector<TailPoint> curves;
    Calibration calib;
};

// DU cost eats into the radio cap; overflow spills into extra loop delay
Headroom headroom(const StudyConfig& c, alloc::Sched s, const std::string& topology);

double delta_eff(const StudyConfig& c, alloc::Sched s, double delta_ms, double spill_ms);

// envelope threshold at the effective delay minus the coupling term (NOS only)
double margin_proxy(const StudyConfig& c, alloc::Sched s, double delta_eff_ms, double g,
                    double rho);

double auc_map(const StudyConfig& c, double delta, double gamma_eff);

// gamma_norm picks the normalisation cap; non-positive margins flag the point
// and push the tail quantiles to infinity
Tails tails(const StudyConfig& c, double delta, double auc, double gamma_norm);

// tail-parity calibration at the worst case (largest rho, largest delay):
// bisect g until NOS p99.9 matches PF p99.9 there. Normalisation is always the
// nominal cap so the calibrated gain does not depend on the reporting mode.
Calibration calibrate_gain(const StudyConfig& c);

SweepResult run_sweep(const StudyConfig& c);

// auc.csv, maxq.csv, p999.csv, tails_line4.csv, summary.csv
std::vector<std::string> write_outputs(const SweepResult& r, const StudyConfig& c,
                                       const std::string& out_dir,
                                       const std::string& manifest_hash);

} // namespace nosched::study
