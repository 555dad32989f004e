#include "sim.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <deque>
#include <limits>
#include <mutex>
#include <random>
#include <stdexcept>
#include <thread>

#include "csvio.hpp"
#include "errors.hpp"

namespace nosched::sim {

int64_t SimConfig::warmup_slots() const {
    if (warmup > 0)
        return std::min(warmup, n_slots);
    int64_t w = std::max<int64_t>(n_slots / 10, 1000);
    return std::min(w, n_slots / 2);
}

SimConfig from_config(const cfg::Config& c, alloc::Sched scheduler, uint64_t seed) {
    SimConfig s;
    s.n_slots = c.get_int("sim.slots");
    if (s.n_slots < 1)
        throw ConfigError("sim.slots: must be at least 1");
    if (c.get_string("sim.warmup") == "auto")
        s.warmup = 0;
    else {
        s.warmup = c.get_int("sim.warmup");
        if (s.warmup < 0)
            throw ConfigError("sim.warmup: must be non-negative or auto");
    }
    s.topology = c.get_string("sim.topology");
    s.weight = c.get_double_positive("sim.weight");
    s.scheduler = scheduler;
    s.seed = seed;
    s.lambda = c.get_double("sim.lambda");
    if (s.lambda < 0.0)
        throw ConfigError("sim.lambda: must be non-negative");
    s.arrival_rate = c.get_double("sim.arrival_rate");
    if (s.arrival_rate < 0.0)
        throw ConfigError("sim.arrival_rate: must be non-negative");
    s.mu = c.get_double_positive("sim.mu");
    const std::string fading = c.get_string("sim.mu_fading");
    if (fading == "on")
        s.mu_fading = true;
    else if (fading == "off")
        s.mu_fading = false;
    else
        throw ConfigError("sim.mu_fading: must be on or off");
    s.bp_delay_slots = static_cast<int>(c.get_int("sim.bp_delay_slots"));
    if (s.bp_delay_slots < 0)
        throw ConfigError("sim.bp_delay_slots: must be non-negative");
    s.sync_window = static_cast<int>(c.get_int("sim.sync_window"));
    if (s.sync_window < 32)
        throw ConfigError("sim.sync_window: must be at least 32");
    const std::string mode = c.get_string("sim.sync_mode");
    if (mode == "kuramoto")
        s.kuramoto = true;
    else if (mode == "covariance")
        s.kuramoto = false;
    else
        throw ConfigError("sim.sync_mode: must be covariance or kuramoto");
    s.warn_persist = static_cast<int>(c.get_int("sim.warn_persist"));
    if (s.warn_persist < 1)
        throw ConfigError("sim.warn_persist: must be at least 1");
    s.grant_trace = c.has("sim.grant_trace") ? c.raw("sim.grant_trace") : "";

    kernel::Params& k = s.kp;
    k.alpha = c.get_double_positive("kernel.alpha");
    k.kappa = c.get_double_positive("kernel.kappa");
    k.beta = c.get_double("kernel.beta");
    k.chi = c.get_double_positive("kernel.chi");
    k.v_ref = c.get_double("kernel.v_ref");
    k.a = c.get_double_positive("kernel.a");
    k.b = c.get_double_positive("kernel.b");
    k.g = c.get_double("kernel.g");
    k.v_th = c.get_double_positive("kernel.v_th");
    k.eps = c.get_double_positive("kernel.eps");
    k.reset_base = c.get_double("kernel.reset_base");
    k.reset_kick = c.get_double("kernel.reset_kick");
    k.reset_rate = c.get_double_positive("kernel.reset_rate");
    k.reset_slots = static_cast<int>(c.get_int("kernel.reset_slots"));
    k.tau_s = c.get_double_positive("kernel.tau_s");
    k.queue_scale = c.get_double_positive("kernel.queue_scale");
    k.delay_slots = static_cast<int>(c.get_int("kernel.delay_slots"));
    k.h = c.get_double_positive("kernel.h");
    k.divergence_guard = c.get_double_positive("kernel.divergence_guard");

    alloc::Params& a = s.ap;
    a.zeta = c.get_double_positive("alloc.zeta");
    a.vartheta = c.get_double_positive("alloc.vartheta");
    a.eps = c.get_double_positive("alloc.eps");
    a.gamma = c.get_double_positive("alloc.gamma");
    if (a.gamma > 1.0)
        throw ConfigError("alloc.gamma: must be in (0, 1]");
    a.prb_total = static_cast<int>(c.get_int("alloc.prb_total"));
    if (a.prb_total < 1)
        throw ConfigError("alloc.prb_total: must be at least 1");
    a.mcs_min_prb = static_cast<int>(c.get_int("alloc.mcs_min_prb"));
    if (a.mcs_min_prb < 0)
        throw ConfigError("alloc.mcs_min_prb: must be non-negative");
    return s;
}

namespace {

double percentile_nearest(std::vector<double> v, double p) {
    if (v.empty())
        return 0.0;
    std::sort(v.begin(), v.end());
    double rank = std::ceil(p * static_cast<double>(v.size()));
    auto idx = static_cast<size_t>(std::max(1.0, rank)) - 1;
    return v[std::min(idx, v.size() - 1)];
}

double ols_slope(const std::vector<double>& y, size_t from) {
    if (y.size() < from + 2)
        return 0.0;
    size_t n = y.size() - from;
    double tbar = (static_cast<double>(n) - 1.0) / 2.0;
    double ybar = 0.0;
    for (size_t i = from; i < y.size(); ++i)
        ybar += y[i];
    ybar /= static_cast<double>(n);
    double num = 0.0, den = 0.0;
    for (size_t i = from; i < y.size(); ++i) {
        double dt = static_cast<double>(i - from) - tbar;
        num += dt * (y[i] - ybar);
        den += dt * dt;
    }
    return num / den;
}

// two cascaded one-pole sections, time constant a few slots
struct Lowpass2 {
    double y1 = 0.0, y2 = 0.0;
    double c = 0.3;
    double push(double x) {
        y1 += c * (x - y1);
        y2 += c * (y1 - y2);
        return y2;
    }
};

} // namespace

// 0/1 entries keep the integer sums exact under push/pop
SpikeWindow::SpikeWindow(int bearers, int window) : n_(bearers), cap_(window) {
    s_.assign(static_cast<size_t>(n_), 0);
    p_.assign(static_cast<size_t>(n_) * n_, 0);
}

void SpikeWindow::push(const std::vector<uint8_t>& spikes) {
    buf_.push_back(spikes);
    apply(spikes, +1);
    if (static_cast<int>(buf_.size()) > cap_) {
        apply(buf_.front(), -1);
        buf_.pop_front();
    }
}

void SpikeWindow::apply(const std::vector<uint8_t>& v, int64_t sign) {
    for (int i = 0; i < n_; ++i) {
        if (!v[i])
            continue;
        s_[i] += sign;
        for (int j = 0; j < n_; ++j)
            if (v[j])
                p_[static_cast<size_t>(i) * n_ + j] += sign;
    }
}

double SpikeWindow::order() const {
    double w = static_cast<double>(buf_.size());
    if (w <= 0.0)
        return 0.0;
    Eigen::MatrixXd c(n_, n_);
    double trace = 0.0;
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            double cij = static_cast<double>(p_[static_cast<size_t>(i) * n_ + j]) / w
                         - static_cast<double>(s_[i]) * static_cast<double>(s_[j]) / (w * w);
            c(i, j) = cij;
            if (i == j)
                trace += cij;
        }
    if (trace <= 1e-15)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
    return std::clamp(es.eigenvalues().maxCoeff() / trace, 0.0, 1.0);
}

double sync_order_cov(const std::vector<std::vector<double>>& window) {
    int n = static_cast<int>(window.size());
    if (n == 0 || window[0].empty())
        return 0.0;
    auto w = static_cast<double>(window[0].size());
    std::vector<double> mean(static_cast<size_t>(n), 0.0);
    for (int i = 0; i < n; ++i) {
        for (double x : window[i])
            mean[i] += x;
        mean[i] /= w;
    }
    Eigen::MatrixXd c(n, n);
    double trace = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j) {
            double acc = 0.0;
            for (size_t t = 0; t < window[0].size(); ++t)
                acc += (window[i][t] - mean[i]) * (window[j][t] - mean[j]);
            acc /= w;
            c(i, j) = acc;
            c(j, i) = acc;
            if (i == j)
                trace += acc;
        }
    if (trace <= 1e-15)
        return 0.0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c, Eigen::EigenvaluesOnly);
    return std::clamp(es.eigenvalues().maxCoeff() / trace, 0.0, 1.0);
}

namespace {

// analytic-signal phase of the last sample via a direct DFT (windows are short)
double hilbert_phase_last(const std::vector<double>& x) {
    size_t w = x.size();
    double mean = 0.0;
    for (double v : x)
        mean += v;
    mean /= static_cast<double>(w);
    double var = 0.0;
    for (double v : x)
        var += (v - mean) * (v - mean);
    if (var / static_cast<double>(w) < 1e-18)
        return 0.0;

    const double two_pi = 2.0 * std::acos(-1.0);
    std::complex<double> z(0.0, 0.0);
    size_t half = w / 2;
    for (size_t k = 1; k < half; ++k) {
        std::complex<double> xk(0.0, 0.0);
        for (size_t t = 0; t < w; ++t) {
            double ang = -two_pi * static_cast<double>(k) * static_cast<double>(t)
                         / static_cast<double>(w);
            xk += (x[t] - mean) * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        double ang = two_pi * static_cast<double>(k) * static_cast<double>(w - 1)
                     / static_cast<double>(w);
        z += 2.0 * xk * std::complex<double>(std::cos(ang), std::sin(ang));
    }
    if (w % 2 == 0 && half >= 1) {
        std::complex<double> xk(0.0, 0.0);
        for (size_t t = 0; t < w; ++t)
            xk += (x[t] - mean) * ((t % 2 == 0) ? 1.0 : -1.0);
        z += xk * (((w - 1) % 2 == 0) ? 1.0 : -1.0); // e^{i pi (w-1)}
    }
    return std::arg(z);
}

} // namespace

double sync_order_kuramoto(const std::vector<std::vector<double>>& window) {
    size_t n = window.size();
    if (n == 0 || window[0].empty())
        return 0.0;
    bool any = false;
    std::complex<double> acc(0.0, 0.0);
    for (const auto& row : window) {
        for (double v : row)
            if (v != 0.0)
                any = true;
        double phi = hilbert_phase_last(row);
        acc += std::complex<double>(std::cos(phi), std::sin(phi));
    }
    if (!any)
        return 0.0;
    return std::abs(acc) / static_cast<double>(n);
}

double queue_step(double q, double arrivals, double service) {
    return std::max(0.0, q + arrivals - service);
}

std::vector<uint8_t> warn_flags(const std::vector<double>& r_trace, double threshold,
                                int persist) {
    std::vector<uint8_t> flags(r_trace.size(), uint8_t{0});
    int consec = 0;
    for (size_t t = 0; t < r_trace.size(); ++t) {
        consec = r_trace[t] > threshold ? consec + 1 : 0;
        flags[t] = consec >= persist ? 1 : 0;
    }
    return flags;
}

SimMetrics run(const SimConfig& c) {
    Graph graph = Graph::named(c.topology, c.weight);
    const int n = graph.nodes();
    const int64_t warmup = c.warmup_slots();
    const bool nos = c.scheduler == alloc::Sched::NOS;

    SimMetrics m;
    m.topology = c.topology;
    m.scheduler = c.scheduler;
    m.seed = c.seed;
    m.delta_ms = nos ? c.kp.delay_slots
                     : (c.scheduler == alloc::Sched::BP ? c.bp_delay_slots : 0);

    // Assumption check: per-clique offered load inside the radio cap. Violations
    // only warn; overload runs are how the negative-margin experiments work.
    for (size_t ci = 0; ci < graph.cliques().size(); ++ci) {
        double load = static_cast<double>(graph.cliques()[ci].size()) * c.lambda / c.mu;
        if (load >= c.ap.gamma)
            m.warnings.push_back("clique " + std::to_string(ci) + " offered load "
                                 + csvio::num(load) + " is not below the cap "
                                 + csvio::num(c.ap.gamma));
    }
    for (const std::string& w : m.warnings)
        std::fprintf(stderr, "warning: %s %s seed %llu: %s\n", alloc::sched_name(c.scheduler),
                     c.topology.c_str(), static_cast<unsigned long long>(c.seed), w.c_str());

    std::mt19937_64 rng(c.seed);
    std::poisson_distribution<int> batch_count(c.arrival_rate > 0.0 ? c.arrival_rate : 1.0);
    std::exponential_distribution<double> batch_size(
        c.lambda > 0.0 && c.arrival_rate > 0.0 ? c.arrival_rate / c.lambda : 1.0);
    std::uniform_real_distribution<double> fade(0.8, 1.2);
    const bool arrivals_on = c.lambda > 0.0 && c.arrival_rate > 0.0;

    kernel::Kernel kern(graph, c.kp);
    const double amp_scale = kern.amplitude_scale();

    std::vector<double> q(n, 0.0), r(n, 0.0), rbar(n, c.lambda);
    std::vector<double> mu_prev(n, c.mu), x_prev(n, 0.0);
    struct Batch {
        double bytes;
        int64_t slot;
    };
    std::vector<std::deque<Batch>> fifo(n);
    std::deque<std::vector<double>> qhist; // start-of-slot queues for BP observation

    SpikeWindow spike_win(n, c.sync_window);
    std::vector<Lowpass2> lp(n);
    std::deque<std::vector<double>> lp_win;

    std::vector<double> sum_q(n, 0.0), grant_sum(n, 0.0), served_sum(n, 0.0);
    std::vector<double> qtrace;
    qtrace.reserve(static_cast<size_t>(c.n_slots));
    std::vector<double> delays;
    double served_total = 0.0, mu_total = 0.0, max_q = 0.0;
    m.r_trace.assign(static_cast<size_t>(c.n_slots), 0.0);

    std::vector<std::vector<std::string>> trace_rows;

    std::vector<double> mu_t(n, c.mu), arr(n, 0.0), amps(n, 0.0);
    for (int64_t t = 0; t < c.n_slots; ++t) {
        qhist.push_back(q);
        if (static_cast<int>(qhist.size()) > c.bp_delay_slots + 1)
            qhist.pop_front();
        const std::vector<double>& q_delayed = qhist.front();

        for (int i = 0; i < n; ++i)
            mu_t[i] = c.mu_fading ? c.mu * fade(rng) : c.mu;

        // realised-rate feedback from the previous slot's grant
        if (t > 0)
            alloc::update_rate_ewma(rbar, mu_prev, x_prev, c.ap.vartheta);

        for (int i = 0; i < n; ++i) {
            arr[i] = 0.0;
            if (!arrivals_on)
                continue;
            int k = batch_count(rng);
            for (int b = 0; b < k; ++b) {
                double bytes = batch_size(rng);
                arr[i] += bytes;
                fifo[i].push_back({bytes, t});
            }
        }

        std::vector<double> w;
        if (nos) {
            std::vector<uint8_t> delayed = kern.delayed_spikes();
            for (int i = 0; i < n; ++i)
                amps[i] = arr[i] * amp_scale;
            kern.shot_noise_step(amps);
            std::vector<uint8_t> spikes = kern.step(mu_t, rbar);
            alloc::update_request(r, spikes, c.ap.zeta);
            std::vector<double> rt = alloc::suppress(r, graph, delayed);
            w = alloc::pf_weight(rt, mu_t, rbar, c.ap.eps);

            if (c.kuramoto) {
                std::vector<double> f(n);
                for (int i = 0; i < n; ++i)
                    f[i] = lp[i].push(r[i]);
                lp_win.push_back(std::move(f));
                if (static_cast<int>(lp_win.size()) > c.sync_window)
                    lp_win.pop_front();
                if (static_cast<int>(lp_win.size()) == c.sync_window) {
                    std::vector<std::vector<double>> rows(
                        static_cast<size_t>(n),
                        std::vector<double>(static_cast<size_t>(c.sync_window)));
                    for (int s = 0; s < c.sync_window; ++s)
                        for (int i = 0; i < n; ++i)
                            rows[i][s] = lp_win[s][i];
                    m.r_trace[static_cast<size_t>(t)] = sync_order_kuramoto(rows);
                }
            } else {
                spike_win.push(spikes);
                if (spike_win.full())
                    m.r_trace[static_cast<size_t>(t)] = spike_win.order();
            }
        } else {
            w = alloc::baseline_weights(c.scheduler, mu_t, rbar, q_delayed, c.ap.eps);
        }

        alloc::Shares shares = alloc::continuous_shares(w, graph, c.ap.gamma, c.ap.eps);
        m.zero_weight_clique = m.zero_weight_clique || shares.zero_weight_clique;
        std::vector<int> grants = alloc::integerise(shares.x, graph, c.ap);

        double slot_served = 0.0, slot_mu = 0.0;
        for (int i = 0; i < n; ++i) {
            double x = static_cast<double>(grants[i]) / c.ap.prb_total;
            double s = mu_t[i] * x;
            double served = std::min(q[i] + arr[i], s);
            q[i] = queue_step(q[i], arr[i], s);

            double left = served;
            while (!fifo[i].empty() && left > 0.0) {
                Batch& b = fifo[i].front();
                if (b.bytes <= left + 1e-12) {
                    left -= b.bytes;
                    if (t >= warmup)
                        delays.push_back(static_cast<double>(t - b.slot));
                    fifo[i].pop_front();
                } else {
                    b.bytes -= left;
                    left = 0.0;
                }
            }

            if (t < warmup)
                grant_sum[i] += s;
            if (t >= warmup) {
                sum_q[i] += q[i];
                served_sum[i] += served;
                slot_served += served;
                slot_mu += mu_t[i];
                max_q = std::max(max_q, q[i]);
            }
            x_prev[i] = x;
        }
        mu_prev = mu_t;

        if (!c.grant_trace.empty())
            for (int i = 0; i < n; ++i) {
                int which = 0;
                for (size_t ci = 0; ci < graph.cliques().size(); ++ci) {
                    const auto& members = graph.cliques()[ci];
                    if (std::find(members.begin(), members.end(), i) == members.end())
                        continue;
                    std::vector<double> xs(members.size());
                    for (size_t k = 0; k < members.size(); ++k)
                        xs[k] = shares.x[static_cast<size_t>(members[k])];
                    auto cg = alloc::integerise_clique(xs, c.ap.prb_total, c.ap.mcs_min_prb,
                                                       c.ap.gamma);
                    for (size_t k = 0; k < members.size(); ++k)
                        if (members[k] == i && cg[k] == grants[static_cast<size_t>(i)])
                            which = static_cast<int>(ci);
                }
                trace_rows.push_back({csvio::num(static_cast<int64_t>(t)), std::to_string(i),
                                      std::to_string(which),
                                      csvio::num(shares.x[static_cast<size_t>(i)]),
                                      std::to_string(grants[static_cast<size_t>(i)])});
            }

        if (t >= warmup) {
            m.util_trace.push_back(slot_mu > 0.0 ? slot_served / slot_mu : 0.0);
            served_total += slot_served;
            mu_total += slot_mu;
        }

        double qm = 0.0;
        for (int i = 0; i < n; ++i)
            qm += q[i];
        qtrace.push_back(qm / n);

        // pin the leak reference to the warmup operating point: chi*v_ref
        // balances the mean granted rate in kernel-time units
        if (nos && t == warmup - 1 && warmup > 0) {
            std::vector<double> vref(n);
            for (int i = 0; i < n; ++i)
                vref[i] = grant_sum[i] / static_cast<double>(warmup)
                          / (c.kp.queue_scale * c.kp.h * c.kp.chi);
            kern.set_v_ref(vref);
        }
    }

    const auto post = static_cast<double>(c.n_slots - warmup);
    m.mean_queue_per_bearer.resize(n);
    double agg = 0.0, vd = 0.0;
    for (int i = 0; i < n; ++i) {
        m.mean_queue_per_bearer[i] = post > 0.0 ? sum_q[i] / post : 0.0;
        agg += m.mean_queue_per_bearer[i];
        double rate = post > 0.0 ? served_sum[i] / post : 0.0;
        vd += m.mean_queue_per_bearer[i] / (rate + c.ap.eps);
    }
    m.mean_queue = agg / n;
    m.virtual_delay_slots = vd / n;
    m.max_queue = max_q;
    m.util = mu_total > 0.0 ? served_total / mu_total : 0.0;
    m.p999_delay_slots = percentile_nearest(delays, 0.999);
    m.trend_slope = ols_slope(qtrace, static_cast<size_t>(c.n_slots / 2));

    m.delay_ccdf.assign(201, 0.0);
    if (!delays.empty())
        for (size_t k = 0; k < m.delay_ccdf.size(); ++k) {
            int64_t over = 0;
            for (double d : delays)
                if (d > static_cast<double>(k))
                    ++over;
            m.delay_ccdf[k] = static_cast<double>(over) / static_cast<double>(delays.size());
        }

    if (nos) {
        std::vector<double> calib;
        for (int64_t t = c.sync_window - 1; t < warmup; ++t)
            if (t >= 0)
                calib.push_back(m.r_trace[static_cast<size_t>(t)]);
        double thresh = calib.empty() ? std::numeric_limits<double>::infinity()
                                      : percentile_nearest(calib, 0.95);
        std::vector<uint8_t> flags = warn_flags(m.r_trace, thresh, c.warn_persist);
        for (int64_t t = warmup; t < c.n_slots; ++t)
            m.warn_count += flags[static_cast<size_t>(t)] ? 1 : 0;
    }

    if (!c.grant_trace.empty())
        csvio::write(c.grant_trace, "none", {"slot", "bearer", "clique", "x_cont", "prbs"},
                     trace_rows);
    return m;
}

std::vector<SimMetrics> run_all(const cfg::Config& c, int n_threads) {
    std::vector<alloc::Sched> scheds;
    for (const auto& name : c.get_string_list("sim.schedulers"))
        scheds.push_back(alloc::parse_sched(name));
    std::vector<uint64_t> seeds;
    for (const auto& s : c.get_string_list("sim.seeds")) {
        try {
            size_t pos = 0;
            unsigned long long v = std::stoull(s, &pos);
            if (pos != s.size())
                throw std::invalid_argument(s);
            seeds.push_back(v);
        } catch (const std::exception&) {
            throw ConfigError("sim.seeds: not an integer: " + s);
        }
    }
    if (scheds.empty() || seeds.empty())
        throw ConfigError("sim.schedulers and sim.seeds must be non-empty");

    std::vector<SimConfig> jobs;
    for (alloc::Sched s : scheds)
        for (uint64_t seed : seeds)
            jobs.push_back(from_config(c, s, seed));

    std::vector<SimMetrics> out(jobs.size());
    if (n_threads <= 1 || jobs.size() == 1) {
        for (size_t i = 0; i < jobs.size(); ++i)
            out[i] = run(jobs[i]);
        return out;
    }
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    std::mutex err_mu;
    std::string first_err;
    auto worker = [&]() {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= jobs.size())
                return;
            try {
                out[i] = run(jobs[i]);
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lk(err_mu);
                if (first_err.empty())
                    first_err = e.what();
            }
        }
    };
    int nt = std::min<int>(n_threads, static_cast<int>(jobs.size()));
    pool.reserve(static_cast<size_t>(nt));
    for (int i = 0; i < nt; ++i)
        pool.emplace_back(worker);
    for (auto& th : pool)
        th.join();
    if (!first_err.empty())
        throw DivergenceError(first_err);
    return out;
}

void write_metrics_csv(const std::string& path, const std::string& manifest_hash,
                       const std::vector<SimMetrics>& runs) {
    std::vector<std::vector<std::string>> rows;
    for (const SimMetrics& m : runs)
        rows.push_back({manifest_hash, alloc::sched_name(m.scheduler), m.topology,
                        std::to_string(m.delta_ms), csvio::num(m.mean_queue),
                        csvio::num(m.p999_delay_slots), csvio::num(m.max_queue), csvio::num(m.util),
                        std::to_string(m.warn_count)});
    csvio::write(path, manifest_hash,
               {"config_hash", "scheduler", "topology", "delta_ms", "mean_queue",
                "p999_delay_slots", "max_queue", "util", "warn_count"},
               rows);
}

} // namespace nosched::sim
