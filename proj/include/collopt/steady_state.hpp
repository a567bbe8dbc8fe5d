#pragma once

// Dressed-basis steady state rho ~ exp(-xi R_z) of one collectively damped
// ensemble: exponent, partition function and collective inversion.

#include "collopt/core_model.hpp"

namespace collopt {

struct XiInputs {
    double theta = 0.0;
    double gamma = 1.0;
    double r = 0.0;
};

/// Below this value of |xi| (N + 1) the inversion is evaluated from its odd
/// Taylor series instead of the coth difference.
inline constexpr double kInversionSeriesThreshold = 1e-4;

/// Half log of the ratio of upward to downward dressed transition rates.
/// Throws DegenerateParameters when the ratio is 0/0 or theta is outside (0, pi/2).
double xi(const XiInputs& in);

/// ln sum_{k=0}^{N} exp(-xi (2k - N)), evaluated in the log domain.
double log_partition(double xi, int n_atoms);

/// <R_z> = -d ln Z / d xi = -[(N+1) coth((N+1) xi) - coth xi].
double dressed_inversion(double xi, int n_atoms);

/// Composes mixing_angle, xi, log_partition and dressed_inversion.
DressedSteadyState solve_ensemble(const EnsembleParams& params);

} // namespace collopt
