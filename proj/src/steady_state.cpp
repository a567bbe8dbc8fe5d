#include "collopt/steady_state.hpp"

#include <cmath>
#include <numbers>

namespace collopt {

namespace {

// coth(x) - 1/x for x >= 0.
double langevin(double x)
{
    if (x < 0.1) {
        const double x2 = x * x;
        return x * (1.0 / 3.0 +
                    x2 * (-1.0 / 45.0 +
                          x2 * (2.0 / 945.0 + x2 * (-1.0 / 4725.0 + x2 * (2.0 / 93555.0)))));
    }
    if (x > 20.0)
        return 1.0 - 1.0 / x;  // coth(x) == 1 to double precision
    return 1.0 / std::tanh(x) - 1.0 / x;
}

} // namespace

double xi(const XiInputs& in)
{
    constexpr double half_pi = std::numbers::pi / 2.0;
    if (!(in.theta > 0.0 && in.theta < half_pi))
        throw DegenerateParameters("xi: theta must lie in (0, pi/2)");
    if (in.gamma < 0.0 || in.r < 0.0 || !(in.gamma + in.r > 0.0))
        throw DegenerateParameters("xi: requires gamma >= 0, r >= 0, gamma + r > 0");

    const double s = std::sin(in.theta);
    const double s2t = std::sin(2.0 * in.theta);
    const double dephasing = in.r * s2t * s2t / 4.0;
    const double down = in.gamma * s * s * s * s + dephasing;
    const double up = in.gamma * std::pow(std::cos(in.theta), 4) + dephasing;
    if (!(down > 0.0) || !(up > 0.0))
        throw DegenerateParameters("xi: rate ratio is indeterminate (0/0)");

    // up - down = gamma cos(2 theta) exactly, which keeps the log accurate near pi/4.
    // Written as sin(pi/2 - 2 theta) so that the resonant angle gives exactly zero.
    const double c2t = std::sin(half_pi - 2.0 * in.theta);
    return 0.5 * std::log1p(in.gamma * c2t / down);
}

double log_partition(double xi, int n_atoms)
{
    if (n_atoms < 1)
        throw InvalidRegime("log_partition: n_atoms must be >= 1");
    const double n = n_atoms;
    if (xi == 0.0)
        return std::log(n + 1.0);
    const double a = std::abs(xi);
    // Z = e^{aN} (1 - e^{-2a(N+1)}) / (1 - e^{-2a}), symmetric in xi. The ratio
    // is taken before the log so tiny |xi| does not cancel two large logs.
    return a * n + std::log(std::expm1(-2.0 * a * (n + 1.0)) / std::expm1(-2.0 * a));
}

double dressed_inversion(double xi, int n_atoms)
{
    if (n_atoms < 1)
        throw InvalidRegime("dressed_inversion: n_atoms must be >= 1");
    if (xi == 0.0)
        return 0.0;

    const double m = n_atoms + 1.0;
    const double a = std::abs(xi);
    double magnitude;
    if (a * m < kInversionSeriesThreshold) {
        // (N+1) coth((N+1) x) - coth x expanded to fifth order in x.
        const double m2 = m * m;
        const double a2 = a * a;
        magnitude = a * ((m2 - 1.0) / 3.0 - a2 * (m2 * m2 - 1.0) / 45.0 +
                         2.0 * a2 * a2 * (m2 * m2 * m2 - 1.0) / 945.0);
    } else {
        magnitude = m * langevin(m * a) - langevin(a);
    }
    return xi > 0.0 ? -magnitude : magnitude;
}

DressedSteadyState solve_ensemble(const EnsembleParams& params)
{
    params.validate();
    DressedSteadyState st;
    st.theta = mixing_angle(params.delta, params.omega);
    st.xi = xi({st.theta, params.gamma, params.r});
    st.omega_tilde = generalized_rabi(params.omega, params.delta);
    st.omega_bar = st.omega_tilde / (params.gamma * params.n_atoms);
    st.log_partition = log_partition(st.xi, params.n_atoms);
    st.rz = dressed_inversion(st.xi, params.n_atoms);
    return st;
}

} // namespace collopt
