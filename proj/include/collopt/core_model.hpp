#pragma once

// Parameters and per-ensemble dressed-state quantities for two laser-driven
// two-level atomic ensembles.
//
// Unit convention: every rate (gamma, r, delta, omega, probe detunings) is
// measured in units of a reference decay rate, normally gamma of ensemble a.
// Physical units only appear in SampleGeometry.

#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace collopt {

/// Raised when a drive/damping combination lies outside the model's domain.
class InvalidRegime : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when the steady-state exponent is an indeterminate ratio.
class DegenerateParameters : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when inputs are combined incorrectly (e.g. an unsolved ensemble).
class UsageError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class Species { a, b };

std::string to_string(Species s);
Species species_from_string(const std::string& s);

struct EnsembleParams {
    Species label = Species::a;
    int n_atoms = 1;
    double gamma = 1.0;
    double r = 0.0;
    double delta = 0.0;   ///< atomic transition minus laser frequency
    double omega = 1.0;   ///< half Rabi frequency
    /// Relative density weight of this species in the susceptibility sum.
    /// The overall sample scale N d^2/(gamma hbar) is applied separately
    /// when converting to a refractive index.
    double density_prefactor = 1.0;

    /// Throws InvalidRegime on the first violated invariant.
    void validate() const;
};

struct DressedSteadyState {
    static constexpr double unset = std::numeric_limits<double>::quiet_NaN();

    double theta = unset;          ///< mixing angle, cot(2 theta) = delta / (2 omega)
    double xi = unset;             ///< thermal-like exponent of exp(-xi R_z)
    double omega_tilde = unset;    ///< generalized Rabi frequency
    double omega_bar = unset;      ///< omega_tilde / (gamma N)
    double log_partition = unset;  ///< ln Z
    double rz = unset;             ///< <R_z>, in [-N, N]

    bool solved() const;
};

struct SampleGeometry {
    double length_L = 5.0;   ///< sample length in wavelengths
    double area_S = 2.0;     ///< cross section in squared wavelengths
    double lambda = 1e-4;    ///< cm
    double gamma_phys = 1e7; ///< 1/s
    double c = 2.99792458e10; ///< cm/s

    void validate() const;
};

/// theta in (0, pi/2) with cot(2 theta) = delta / (2 omega).
double mixing_angle(double delta, double omega);

/// sqrt(omega^2 + (delta/2)^2).
double generalized_rabi(double omega, double delta);

struct SecularDiagnostics {
    bool intense_field_a = false;   ///< 2 Omega_a >= 10 gamma_a N_a
    bool intense_field_b = false;
    bool cross_damping_negligible = false;  ///< N_i gamma_i <= delta_omega for both species
    bool secular_splitting = false;         ///< delta_omega < omega_tilde_i for both species
    double delta_omega = 0.0;               ///< |delta_a - delta_b|

    bool all_pass() const
    {
        return intense_field_a && intense_field_b && cross_damping_negligible &&
               secular_splitting;
    }

    /// Human-readable description of each failed check.
    std::vector<std::string> warnings() const;
};

/// Regime diagnostics for the analytic path. Never throws on a failed check.
SecularDiagnostics secular_validity_check(const EnsembleParams& a, const EnsembleParams& b);

} // namespace collopt
