#pragma once

namespace nosched::stability {

// Local linearisation around a subthreshold equilibrium:
//   J_loc = [[dbar, -1], [a*b, -a]]
// with dbar the effective local slope and spike_slope the trigger gain H.
struct LocalLin {
    double a = 1.0;
    double b = 0.9;
    double dbar = 0.30;
    double spike_slope = 1.0;
};

struct MarginReport {
    double k_star = 0.0;   // threshold at the evaluated delay
    double k = 0.0;        // loop gain g*H*rho(W), zero for uncoupled schedulers
    double delta = 0.0;    // k_star - k
    double omega0 = 0.0;   // zero-delay crossing frequency
};

struct PadeResult {
    double k = 0.0;
    bool degenerate = false; // omega0 = 0 (a > b): correction vanishes
};

struct ExactResult {
    double k = 0.0;
    double omega = 0.0;      // first crossing frequency
    bool no_crossing = false;
};

struct LipschitzBounds {
    double l_sat = 0.0;
    double l = 0.0;
};

struct StepBound {
    double h_max = 0.0;
    double l_sat = 0.0;
    double l = 0.0;
    double jnorm = 0.0;      // ||J_loc + k*E||_2
    double omega0 = 0.0;
    // usable step: within h_max and resolving the crossing frequency
    bool ok(double h) const { return h <= h_max && (omega0 == 0.0 || h * omega0 <= 1.0); }
};

// min{a - dbar, b - dbar}; throws UnstableError when the open loop has no margin
double k_star_zero(const LocalLin& lin);

// sqrt(a(b - a)) for a <= b, else 0
double omega_zero(const LocalLin& lin);

// k_star_zero / (1 + (delta/2) * omega0); degenerate flag when omega0 = 0
PadeResult k_star_pade(const LocalLin& lin, double delta_ms);

// monotone surrogate k0 * exp(-delta / tau_ctrl)
double k_star_envelope(double k0, double tau_ctrl_ms, double delta_ms);

// smallest k > 0 with det(jwI - J_loc - k e^{-jw delta} E) = 0 for some real w.
// Scans w in [0, 10*max(a,b)] on 1e4 points and bisects each sign change of
// Im k(w) until the candidate moves by <= 1e-8.
ExactResult k_star_exact(const LocalLin& lin, double delta_ms);

// envelope threshold minus the coupling term g*H*rho (coupled schedulers only)
MarginReport margin(const LocalLin& lin, double k0, double tau_ctrl_ms,
                    double g, double rho, double delta_ms, bool coupled);

// L_sat = (3*sqrt(3)/8) * alpha / sqrt(kappa);
// L = max{L_sat + |beta - chi| + 1, a*b + a}
LipschitzBounds lipschitz_bounds(const LocalLin& lin, double alpha, double kappa,
                                 double beta, double chi);

// h_max = min{1/L, 2/(||J_loc + kE||_2 + 1e-6)}
StepBound step_bound(const LocalLin& lin, double alpha, double kappa,
                     double beta, double chi, double k);

// closed-form largest singular value of [[m00, m01], [m10, m11]]
double spectral_norm_2x2(double m00, double m01, double m10, double m11);

} // namespace nosched::stability
