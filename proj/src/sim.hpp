#pragma once

#include <cstdint>
#include <deque>
#include <string>
#include <vector>

#include "alloc.hpp"
#include "config.hpp"
#include "graph.hpp"
#include "kernel.hpp"

namespace nosched::sim {

struct SimConfig {
    int64_t n_slots = 20000;
    int64_t warmup = 0;          // 0 = auto: max(n/10, 1000), capped at n/2
    std::string topology = "ring8";
    double weight = 0.6;
    alloc::Sched scheduler = alloc::Sched::NOS;
    uint64_t seed = 1;
    double lambda = 25.0;        // mean arrival bytes per slot per bearer
    double arrival_rate = 2.0;   // mean batches per slot (compound Poisson)
    double mu = 120.0;           // full-allocation bytes per slot
    bool mu_fading = false;      // i.i.d. uniform +-20% around mu
    int bp_delay_slots = 5;
    int sync_window = 64;
    bool kuramoto = false;       // phase-based sync order instead of covariance
    int warn_persist = 10;
    std::string grant_trace;     // optional CSV path, empty = off
    kernel::Params kp;
    alloc::Params ap;

    int64_t warmup_slots() const;
};

struct SimMetrics {
    std::string topology;
    alloc::Sched scheduler = alloc::Sched::NOS;
    uint64_t seed = 0;
    int delta_ms = 0;            // reporting delay: kernel line (NOS), observation lag (BP)
    std::vector<double> mean_queue_per_bearer;
    double mean_queue = 0.0;     // bytes, averaged over bearers post-warmup
    double p999_delay_slots = 0.0;
    double max_queue = 0.0;
    double util = 0.0;
    double trend_slope = 0.0;    // bytes/slot over the last half of the run
    double virtual_delay_slots = 0.0;
    int64_t warn_count = 0;
    bool zero_weight_clique = false;
    std::vector<double> r_trace;
    std::vector<double> util_trace;
    std::vector<double> delay_ccdf; // P(D > tau), tau = 0..len-1 slots
    std::vector<std::string> warnings;
};

SimConfig from_config(const cfg::Config& c, alloc::Sched scheduler, uint64_t seed);

// Lindley recursion, one bearer one slot
double queue_step(double q, double arrivals, double service);

// one deterministic single-threaded run
SimMetrics run(const SimConfig& c);

// covariance principal ratio (default) or Kuramoto order parameter of one window;
// rows = bearers, window = slots per bearer. Exposed for the tests.
double sync_order_cov(const std::vector<std::vector<double>>& window);
double sync_order_kuramoto(const std::vector<std::vector<double>>& window);

// rolling spike window with exact integer sums; order() matches sync_order_cov
// on the buffered columns
class SpikeWindow {
public:
    SpikeWindow(int bearers, int window);
    void push(const std::vector<uint8_t>& spikes);
    bool full() const { return static_cast<int>(buf_.size()) == cap_; }
    double order() const;

private:
    int n_ = 0, cap_ = 0;
    std::deque<std::vector<uint8_t>> buf_;
    std::vector<int64_t> s_;
    std::vector<int64_t> p_; // n x n pair sums
    void apply(const std::vector<uint8_t>& v, int64_t sign);
};

// warning flags: R above threshold for at least persist consecutive slots
std::vector<uint8_t> warn_flags(const std::vector<double>& r_trace, double threshold,
                                int persist);

// every configured scheduler x seed, optionally across threads
std::vector<SimMetrics> run_all(const cfg::Config& c, int n_threads);

void write_metrics_csv(const std::string& path, const std::string& manifest_hash,
                       const std::vector<SimMetrics>& runs);

} // namespace nosched::sim
