#include "alloc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "errors.hpp"

namespace nosched::alloc {

Sched parse_sched(const std::string& name) {
    if (name == "NOS") return Sched::NOS;
    if (name == "PF") return Sched::PF;
    if (name == "BP") return Sched::BP;
    throw ConfigError("unknown scheduler kind '" + name + "' (expected NOS, PF or BP)");
}

const char* sched_name(Sched s) {
    switch (s) {
        case Sched::NOS: return "NOS";
        case Sched::PF: return "PF";
        default: return "BP";
    }
}

void update_request(std::vector<double>& r, const std::vector<uint8_t>& spikes, double zeta) {
    for (size_t i = 0; i < r.size(); ++i)
        r[i] = (1.0 - zeta) * r[i] + zeta * (spikes[i] ? 1.0 : 0.0);
}

std::vector<double> suppress(const std::vector<double>& r, const Graph& g,
                             const std::vector<uint8_t>& delayed_spikes) {
    std::vector<double> rt(r.size());
    for (size_t i = 0; i < r.size(); ++i)
        rt[i] = r[i] / (1.0 + g.weighted_sum(static_cast<int>(i), delayed_spikes));
    return rt;
}

void update_rate_ewma(std::vector<double>& rbar, const std::vector<double>& mu_prev,
                      const std::vector<double>& x_prev, double vartheta) {
    for (size_t i = 0; i < rbar.size(); ++i)
        rbar[i] = (1.0 - vartheta) * rbar[i] + vartheta * mu_prev[i] * x_prev[i];
}

std::vector<double> pf_weight(const std::vector<double>& rt, const std::vector<double>& mu,
                              const std::vector<double>& rbar, double eps) {
    std::vector<double> w(rt.size());
    for (size_t i = 0; i < rt.size(); ++i) w[i] = rt[i] * mu[i] / (rbar[i] + eps);
    return w;
}

std::vector<double> baseline_weights(Sched kind, const std::vector<double>& mu,
                                     const std::vector<double>& rbar,
                                     const std::vector<double>& q_delayed, double eps) {
    std::vector<double> w(mu.size());
    if (kind == Sched::PF) {
        for (size_t i = 0; i < w.size(); ++i) w[i] = mu[i] / (rbar[i] + eps);
    } else if (kind == Sched::BP) {
        for (size_t i = 0; i < w.size(); ++i) w[i] = q_delayed[i] * mu[i];
    } else {
        throw ConfigError("baseline_weights expects PF or BP");
    }
    return w;
}

Shares continuous_shares(const std::vector<double>& w, const Graph& g,
                         double gamma, double eps) {
    Shares out;
    out.x.assign(w.size(), std::numeric_limits<double>::infinity());
    for (const auto& clique : g.cliques()) {
        double sum = 0.0;
        for (int i : clique) sum += w[i];
        for (int i : clique) {
            double xi;
            if (sum <= 0.0) {
                xi = gamma / static_cast<double>(clique.size());
                out.zero_weight_clique = true;
            } else {
                xi = std::min(1.0, gamma * w[i] / (sum + eps));
            }
            out.x[i] = std::min(out.x[i], xi);
        }
    }
    return out;
}

std::vector<int> integerise_clique(const std::vector<double>& x, int prb_total,
                                   int mcs_min_prb, double gamma) {
    const size_t n = x.size();
    std::vector<int> p(n, 0);
    const int budget = static_cast<int>(std::floor(gamma * prb_total));

    // stage 1+2: floor the raw targets, drop anything under the MCS minimum
    std::vector<size_t> survivors;
    double surv_share = 0.0;
    for (size_t i = 0; i < n; ++i) {
        int fl = static_cast<int>(std::floor(x[i] * prb_total));
        if (fl >= mcs_min_prb) {
            survivors.push_back(i);
            surv_share += x[i];
        }
    }
    if (survivors.empty() || surv_share <= 0.0) return p;

    // stage 3: renormalise the surviving shares onto the clique budget
    std::vector<double> target(n, 0.0);
    for (size_t i : survivors) {
        target[i] = gamma * (x[i] / surv_share) * prb_total;
        p[i] = static_cast<int>(std::floor(target[i]));
    }

    // stage 4: water-fill leftovers one PRB at a time, largest residual first,
    // ties to the lowest index; a survivor at its ceiling takes no more
    int used = 0;
    for (size_t i : survivors) used += p[i];
    int leftover = budget - used;
    while (leftover > 0) {
        double best_res = 0.0;
        int best = -1;
        for (size_t i : survivors) {
            double res = target[i] - p[i];
            if (res > best_res + 1e-15) {
                best_res = res;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) break; // everyone at their continuous ceiling
        ++p[best];
        --leftover;
    }
    return p;
}

std::vector<int> integerise(const std::vector<double>& x, const Graph& g, const Params& p) {
    std::vector<int> grants(x.size(), std::numeric_limits<int>::max());
    for (const auto& clique : g.cliques()) {
        std::vector<double> xc;
        xc.reserve(clique.size());
        for (int i : clique) xc.push_back(x[i]);
        auto pc = integerise_clique(xc, p.prb_total, p.mcs_min_prb, p.gamma);
        for (size_t k = 0; k < clique.size(); ++k)
            grants[clique[k]] = std::min(grants[clique[k]], pc[k]);
    }
    for (auto& v : grants)
        if (v == std::numeric_limits<int>::max()) v = 0;
    return grants;
}

double du_cost(Sched kind, double uc, double edges_per_cell) {
    switch (kind) {
        case Sched::NOS: return 22.0 + 1.2 * uc + 0.06 * edges_per_cell;
        case Sched::PF: return 28.0 + 1.8 * uc;
        case Sched::BP: return 38.0 + 2.7 * uc + 0.14 * edges_per_cell;
    }
    throw ConfigError("unknown scheduler kind in du_cost");
}

} // namespace nosched::alloc
