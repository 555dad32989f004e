#include "stability.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <string>
#include <vector>

#include "errors.hpp"

namespace nosched::stability {
namespace {

using cplx = std::complex<double>;

// Characteristic boundary: along s = jw the closed-loop determinant
//   det(sI - J_loc - k e^{-s delta} E) = (s - dbar)(s + a) + ab - k e^{-s delta}(s + a)
// vanishes iff k = e^{s delta} [(s - dbar)(s + a) + ab] / (s + a).
// Real, positive k at some w marks a stability crossing.
cplx boundary_gain(const LocalLin& lin, double delta, double omega) {
    const cplx s(0.0, omega);
    const cplx num = (s - lin.dbar) * (s + lin.a) + lin.a * lin.b;
    return std::exp(s * delta) * num / (s + lin.a);
}

} // namespace

double k_star_zero(const LocalLin& lin) {
    const double ka = lin.a - lin.dbar;
    const double kb = lin.b - lin.dbar;
    const double k = std::min(ka, kb);
    if (!(k > 0.0))
        throw UnstableError("open-loop unstable: a-dbar=" + std::to_string(ka) +
                            ", b-dbar=" + std::to_string(kb));
    return k;
}

double omega_zero(const LocalLin& lin) {
    if (lin.a > lin.b) return 0.0;
    return std::sqrt(lin.a * (lin.b - lin.a));
}

PadeResult k_star_pade(const LocalLin& lin, double delta_ms) {
    const double k0 = k_star_zero(lin);
    const double w0 = omega_zero(lin);
    if (w0 == 0.0) return {k0, true};
    return {k0 / (1.0 + 0.5 * delta_ms * w0), false};
}

double k_star_envelope(double k0, double tau_ctrl_ms, double delta_ms) {
    return k0 * std::exp(-delta_ms / tau_ctrl_ms);
}

ExactResult k_star_exact(const LocalLin& lin, double delta_ms) {
    const double k0 = k_star_zero(lin); // also validates the open loop
    double best_k = std::numeric_limits<double>::infinity();
    double best_w = 0.0;

    // w = 0 is always a boundary: k = b - dbar (static determinant condition)
    {
        const double k = lin.b - lin.dbar;
        if (k > 0.0) {
            best_k = k;
            best_w = 0.0;
        }
    }

    const double w_max = 10.0 * std::max(lin.a, lin.b);
    const int steps = 10000;
    const double dw = w_max / steps;
    double prev_w = dw;
    double prev_im = boundary_gain(lin, delta_ms, prev_w).imag();
    for (int i = 2; i <= steps; ++i) {
        const double w = i * dw;
        const double im = boundary_gain(lin, delta_ms, w).imag();
        if ((prev_im < 0.0) != (im < 0.0) && prev_im != 0.0) {
            double lo = prev_w, hi = w;
            double lo_im = prev_im;
            double k_prev = std::numeric_limits<double>::infinity();
            for (int it = 0; it < 200; ++it) {
                const double mid = 0.5 * (lo + hi);
                const cplx km = boundary_gain(lin, delta_ms, mid);
                if ((km.imag() < 0.0) == (lo_im < 0.0)) {
                    lo = mid;
                    lo_im = km.imag();
                } else {
                    hi = mid;
                }
                if (std::abs(km.real() - k_prev) <= 1e-8) break;
                k_prev = km.real();
            }
            const double wc = 0.5 * (lo + hi);
            const double kc = boundary_gain(lin, delta_ms, wc).real();
            if (kc > 1e-12 && kc < best_k) {
                best_k = kc;
                best_w = wc;
            }
        }
        prev_w = w;
        prev_im = im;
    }

    if (!std::isfinite(best_k)) return {k0, 0.0, true};
    return {best_k, best_w, false};
}

MarginReport margin(const LocalLin& lin, double k0, double tau_ctrl_ms,
                    double g, double rho, double delta_ms, bool coupled) {
    MarginReport r;
    r.k_star = k_star_envelope(k0, tau_ctrl_ms, delta_ms);
    r.k = coupled ? g * lin.spike_slope * rho : 0.0;
    r.delta = r.k_star - r.k;
    r.omega0 = omega_zero(lin);
    return r;
}

LipschitzBounds lipschitz_bounds(const LocalLin& lin, double alpha, double kappa,
                                 double beta, double chi) {
    if (!(kappa > 0.0)) throw ConfigError("kappa must be > 0");
    LipschitzBounds b;
    b.l_sat = (3.0 * std::sqrt(3.0) / 8.0) * alpha / std::sqrt(kappa);
    b.l = std::max(b.l_sat + std::abs(beta - chi) + 1.0, lin.a * lin.b + lin.a);
    return b;
}

double spectral_norm_2x2(double m00, double m01, double m10, double m11) {
    // singular values from the eigenvalues of M^T M:
    //   sigma^2 = (f +/- sqrt(f^2 - 4 d^2)) / 2, f = sum of squares, d = det
    const double f = m00 * m00 + m01 * m01 + m10 * m10 + m11 * m11;
    const double det = m00 * m11 - m01 * m10;
    const double disc = std::max(0.0, f * f - 4.0 * det * det);
    return std::sqrt(0.5 * (f + std::sqrt(disc)));
}

StepBound step_bound(const LocalLin& lin, double alpha, double kappa,
                     double beta, double chi, double k) {
    StepBound sb;
    const auto lb = lipschitz_bounds(lin, alpha, kappa, beta, chi);
    sb.l_sat = lb.l_sat;
    sb.l = lb.l;
    sb.jnorm = spectral_norm_2x2(lin.dbar + k, -1.0, lin.a * lin.b, -lin.a);
    sb.omega0 = omega_zero(lin);
    sb.h_max = std::min(1.0 / sb.l, 2.0 / (sb.jnorm + 1e-6));
    return sb;
}

} // namespace nosched::stability
