#pragma once

// Weak-probe response of the dressed ensembles: complex susceptibility,
// its probe-frequency derivative, refractive and group index, and the
// collective switching time.

#include "collopt/core_model.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace collopt {

/// Raised when a group index is requested at n = 0.
class SingularIndex : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Probe frequency relative to ensemble a and to the laser.
/// delta_p = nu_minus_omega_a + delta_a always holds.
class ProbePoint {
public:
    static ProbePoint from_offset(double nu_minus_omega_a, double delta_a)
    {
        return ProbePoint(nu_minus_omega_a, nu_minus_omega_a + delta_a);
    }
    static ProbePoint from_laser_detuning(double delta_p, double delta_a)
    {
        return ProbePoint(delta_p - delta_a, delta_p);
    }

    double nu_minus_omega_a() const { return offset_; }
    double delta_p() const { return delta_p_; }
    /// delta_p / (gamma N) for the given ensemble.
    double delta_p_tilde(const EnsembleParams& e) const { return delta_p_ / (e.gamma * e.n_atoms); }

private:
    ProbePoint(double offset, double delta_p) : offset_(offset), delta_p_(delta_p) {}
    double offset_;
    double delta_p_;
};

struct DampingRates {
    double gamma_s = 0.0;
    double gamma_c = 0.0;
    double gamma_tilde = 0.0;  ///< (gamma_s - gamma_c) / (gamma N)
};

DampingRates damping_rates(double theta, double gamma, double r, double rz, int n_atoms);

struct SolvedEnsemble {
    EnsembleParams params;
    DressedSteadyState state;
};

/// Solves each ensemble's steady state.
std::vector<SolvedEnsemble> solve_all(std::span<const EnsembleParams> ensembles);

struct ResponseOptions {
    /// When false the collective rate gamma_c is forced to zero, which gives
    /// the independent-atom line widths.
    bool collective_damping = true;
};

/// chi = sum_i s_i (rz_i / N_i) [cos^4 / (x - 2 Wbar + i gt) - sin^4 / (x + 2 Wbar + i gt)]
/// in units of N d^2 / (gamma hbar), with s_i the ensemble density weight.
std::complex<double> susceptibility(const ProbePoint& probe,
                                    std::span<const SolvedEnsemble> ensembles,
                                    const ResponseOptions& options = {});

/// d chi' / d delta_p (equivalently d/d nu at fixed laser frequency).
double chi_prime_derivative(const ProbePoint& probe,
                            std::span<const SolvedEnsemble> ensembles,
                            const ResponseOptions& options = {});

struct RefractiveIndex {
    double n = 0.0;  ///< NaN when not propagating
    bool propagating = false;
};

/// n = sqrt(1 + s chi'). A negative radicand is flagged, not an error.
RefractiveIndex refractive_index(double chi_prime, double density_prefactor);

struct GroupIndex {
    double n_g = 0.0;
    double v_g_over_c = 0.0;
};

/// n_g = n + nu dn/dnu with dn/dnu = s (dchi'/dnu) / (2n).
GroupIndex group_index(double n, double nu_over_gamma, double dchi_prime, double density_prefactor);

/// tau_s = 2 L / (lambda gamma N) in seconds.
double switching_time(const SampleGeometry& geom, int n_atoms);

struct ResponseSample {
    double delta_a_over_2omega = 0.0;
    double chi_prime = 0.0;
    double chi_double_prime = 0.0;
    double dchi_prime = 0.0;
    double n = 0.0;
    double n_g = 0.0;
    bool propagating = false;
};

/// Full response at one probe point; n and n_g are NaN when not propagating.
ResponseSample evaluate_response(const ProbePoint& probe,
                                 std::span<const SolvedEnsemble> ensembles,
                                 double density_prefactor, double nu_over_gamma,
                                 const ResponseOptions& options = {});

/// Roots of f on [lo, hi]: sign changes on a uniform grid of `points`,
/// each refined by bisection until |f| < tol or the bracket collapses.
std::vector<double> find_sign_changes(const std::function<double(double)>& f, double lo,
                                      double hi, int points, double tol = 1e-10);

} // namespace collopt
