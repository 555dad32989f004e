#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "graph.hpp"

namespace nosched::alloc {

enum class Sched { NOS, PF, BP };

Sched parse_sched(const std::string& name);
const char* sched_name(Sched s);

struct Params {
    double zeta = 0.2;       // request EWMA gain
    double vartheta = 0.0667; // realised-rate EWMA gain
    double eps = 1e-9;
    double gamma = 0.95;     // per-clique budget fraction
    int prb_total = 50;
    int mcs_min_prb = 1;
};

struct Shares {
    std::vector<double> x;
    bool zero_weight_clique = false; // some clique fell back to a uniform split
};

// r <- (1 - zeta) r + zeta S
void update_request(std::vector<double>& r, const std::vector<uint8_t>& spikes, double zeta);

// r~_i = r_i / (1 + sum_j w_ij S_j(t - delay))
std::vector<double> suppress(const std::vector<double>& r, const Graph& g,
                             const std::vector<uint8_t>& delayed_spikes);

// rbar <- (1 - vartheta) rbar + vartheta * mu_prev * x_prev
void update_rate_ewma(std::vector<double>& rbar, const std::vector<double>& mu_prev,
                      const std::vector<double>& x_prev, double vartheta);

// w_i = r~_i mu_i / (rbar_i + eps)
std::vector<double> pf_weight(const std::vector<double>& rt, const std::vector<double>& mu,
                              const std::vector<double>& rbar, double eps);

// PF: mu/(rbar+eps); BP: delayed queue times mu (max-weight)
std::vector<double> baseline_weights(Sched kind, const std::vector<double>& mu,
                                     const std::vector<double>& rbar,
                                     const std::vector<double>& q_delayed, double eps);

// x_i = min{1, gamma w_i / (sum_C w_j + eps)} per clique; bearers in several
// cliques take the minimum share. An all-zero-weight clique splits gamma evenly.
Shares continuous_shares(const std::vector<double>& w, const Graph& g,
                         double gamma, double eps);

// four stages per clique: floor, drop below the MCS minimum, renormalise over
// survivors, water-fill leftovers to the largest residuals (ties: lowest index).
// Shared bearers take the minimum over their cliques.
std::vector<int> integerise(const std::vector<double>& x, const Graph& g, const Params& p);

// single-clique pipeline on a dense member vector (used directly by the tests)
std::vector<int> integerise_clique(const std::vector<double>& x, int prb_total,
                                   int mcs_min_prb, double gamma);

// per-slot scheduler compute cost (us) for a DU with uc users per cell and
// edges_per_cell mean interference degree
double du_cost(Sched kind, double uc, double edges_per_cell);

} // namespace nosched::alloc
