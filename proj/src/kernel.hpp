#pragma once

#include <cstdint>
#include <deque>
#include <vector>

#include "graph.hpp"

namespace nosched::kernel {

struct Params {
    double alpha = 1.0;       // saturating growth scale
    double kappa = 1.0;       // saturation curvature
    double beta = 0.5;        // linear growth
    double chi = 0.2;         // leak rate
    double v_ref = 0.0;       // leak reference
    double a = 1.0;           // recovery rate
    double b = 0.9;           // recovery feedback gain
    double g = 0.25;          // neighbour coupling gain
    double v_th = 1.0;        // spike threshold on mu*v/(rbar+eps)
    double eps = 1e-9;
    double reset_base = 0.05; // post-spike baseline c
    double reset_kick = 0.10; // recovery increment d
    double reset_rate = 0.5;  // pullback rate nu
    int reset_slots = 3;      // pullback duration tau_rst
    double tau_s = 2.0;       // shot-noise decay (slots)
    double queue_scale = 400.0; // bytes per unit excitability
    int delay_slots = 5;      // neighbour delay (slots)
    double h = 0.5;           // integration step (slots)
    double divergence_guard = 1e9;
};

double f_sat(double v, double alpha, double kappa);
double soft_reset(double v, double base, double rate, int slots);

// Two-state excitability kernel over a shared interference graph. The spike
// line holds the last delay_slots spike vectors; delay 0 degenerates to a
// length-1 line carrying the previous slot (zero at t=0), so every path reads
// the same ring buffer.
class Kernel {
public:
    Kernel(const Graph& g, const Params& p);

    // scale turning per-slot arrival bytes into drive amplitudes so the
    // stationary noise mean is arrivals/queue_scale
    double amplitude_scale() const;

    // noise <- noise * exp(-h/tau_s) + amplitudes
    void shot_noise_step(const std::vector<double>& amplitudes);

    // one explicit Euler step of (v, u) with the delayed neighbour drive and
    // the current noise, then spike test and soft reset; returns this slot's
    // spike vector and rotates the line. Throws DivergenceError on blow-up.
    std::vector<uint8_t> step(const std::vector<double>& mu, const std::vector<double>& rbar);

    const std::vector<uint8_t>& delayed_spikes() const { return line_.front(); }
    const std::vector<double>& v() const { return v_; }
    const std::vector<double>& u() const { return u_; }
    const std::vector<double>& noise() const { return noise_; }
    int64_t slot() const { return slot_; }

    void set_state(const std::vector<double>& v, const std::vector<double>& u);
    void set_v_ref(const std::vector<double>& v_ref);
    void set_noise(const std::vector<double>& noise);

private:
    const Graph* graph_;
    Params p_;
    int n_;
    std::vector<double> v_, u_, noise_, v_ref_;
    std::deque<std::vector<uint8_t>> line_; // front = oldest = S(t - len)
    int64_t slot_ = 0;
};

} // namespace nosched::kernel
