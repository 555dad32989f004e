#include "kernel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "errors.hpp"

namespace nosched::kernel {

double f_sat(double v, double alpha, double kappa) {
    return alpha * v * v / (1.0 + kappa * v * v);
}

double soft_reset(double v, double base, double rate, int slots) {
    return base + (v - base) * std::exp(-rate * static_cast<double>(slots));
}

static void check_params(const Params& p) {
    auto pos = [](double x, const char* name) {
        if (!(x > 0.0))
            throw ConfigError(std::string("kernel: ") + name + " must be positive");
    };
    pos(p.alpha, "alpha");
    pos(p.kappa, "kappa");
    pos(p.chi, "chi");
    pos(p.a, "a");
    pos(p.b, "b");
    pos(p.reset_rate, "reset_rate");
    pos(p.tau_s, "tau_s");
    pos(p.queue_scale, "queue_scale");
    pos(p.eps, "eps");
    pos(p.h, "h");
    pos(p.v_th, "v_th");
    if (p.reset_slots < 1)
        throw ConfigError("kernel: reset_slots must be at least 1");
    if (p.delay_slots < 0)
        throw ConfigError("kernel: delay_slots must be non-negative");
    if (p.g < 0.0)
        throw ConfigError("kernel: coupling gain must be non-negative");
}

Kernel::Kernel(const Graph& g, const Params& p) : graph_(&g), p_(p), n_(g.nodes()) {
    check_params(p);
    v_.assign(n_, 0.0);
    u_.assign(n_, 0.0);
    noise_.assign(n_, 0.0);
    v_ref_.assign(n_, p.v_ref);
    int len = std::max(p.delay_slots, 1);
    for (int i = 0; i < len; ++i)
        line_.emplace_back(n_, uint8_t{0});
}

double Kernel::amplitude_scale() const {
    // kernel time advances h per slot, so a mean arrival load of lambda
    // bytes/slot must appear as a stationary drive of lambda/(varsigma*h):
    // each Euler step then adds h*eta = arrivals/varsigma worth of v.
    return (1.0 - std::exp(-p_.h / p_.tau_s)) / (p_.queue_scale * p_.h);
}

void Kernel::shot_noise_step(const std::vector<double>& amplitudes) {
    if (static_cast<int>(amplitudes.size()) != n_)
        throw ConfigError("kernel: amplitude vector size mismatch");
    double decay = std::exp(-p_.h / p_.tau_s);
    for (int i = 0; i < n_; ++i) {
        if (amplitudes[i] < 0.0)
            throw ConfigError("kernel: negative shot-noise amplitude");
        noise_[i] = noise_[i] * decay + amplitudes[i];
    }
}

std::vector<uint8_t> Kernel::step(const std::vector<double>& mu, const std::vector<double>& rbar) {
    if (static_cast<int>(mu.size()) != n_ || static_cast<int>(rbar.size()) != n_)
        throw ConfigError("kernel: rate vector size mismatch");

    const std::vector<uint8_t>& delayed = line_.front();
    std::vector<double> nv(n_), nu(n_);
    for (int i = 0; i < n_; ++i) {
        double drive = p_.g * graph_->weighted_sum(i, delayed);
        double dv = f_sat(v_[i], p_.alpha, p_.kappa) + p_.beta * v_[i] - u_[i]
                    - p_.chi * (v_[i] - v_ref_[i]) + drive + noise_[i];
        double du = p_.a * (p_.b * v_[i] - u_[i]);
        nv[i] = v_[i] + p_.h * dv;
        nu[i] = u_[i] + p_.h * du;
        if (!std::isfinite(nv[i]) || !std::isfinite(nu[i])
            || std::abs(nv[i]) > p_.divergence_guard || std::abs(nu[i]) > p_.divergence_guard)
            throw DivergenceError("kernel state diverged at bearer " + std::to_string(i)
                                  + ", slot " + std::to_string(slot_ + 1));
    }

    std::vector<uint8_t> spikes(n_, uint8_t{0});
    for (int i = 0; i < n_; ++i) {
        if (mu[i] * nv[i] / (rbar[i] + p_.eps) >= p_.v_th) {
            spikes[i] = 1;
            nv[i] = soft_reset(nv[i], p_.reset_base, p_.reset_rate, p_.reset_slots);
            nu[i] += p_.reset_kick;
        }
    }

    v_ = std::move(nv);
    u_ = std::move(nu);
    line_.push_back(spikes);
    line_.pop_front();
    ++slot_;
    return spikes;
}

void Kernel::set_state(const std::vector<double>& v, const std::vector<double>& u) {
    if (static_cast<int>(v.size()) != n_ || static_cast<int>(u.size()) != n_)
        throw ConfigError("kernel: state vector size mismatch");
    v_ = v;
    u_ = u;
}

void Kernel::set_v_ref(const std::vector<double>& v_ref) {
    if (static_cast<int>(v_ref.size()) != n_)
        throw ConfigError("kernel: v_ref vector size mismatch");
    v_ref_ = v_ref;
}

void Kernel::set_noise(const std::vector<double>& noise) {
    if (static_cast<int>(noise.size()) != n_)
        throw ConfigError("kernel: noise vector size mismatch");
    noise_ = noise;
}

} // namespace nosched::kernel
