#include "collopt/core_model.hpp"

#include <cmath>
#include <numbers>

namespace collopt {

std::string to_string(Species s)
{
    return s == Species::a ? "a" : "b";
}

Species species_from_string(const std::string& s)
{
    if (s == "a")
        return Species::a;
    if (s == "b")
        return Species::b;
    throw std::invalid_argument("unknown species label '" + s + "' (expected a or b)");
}

void EnsembleParams::validate() const
{
    const std::string who = "ensemble " + to_string(label) + ": ";
    if (n_atoms < 1)
        throw InvalidRegime(who + "n_atoms must be >= 1");
    if (!std::isfinite(gamma) || gamma < 0.0)
        throw InvalidRegime(who + "gamma must be finite and >= 0");
    if (!std::isfinite(r) || r < 0.0)
        throw InvalidRegime(who + "r must be finite and >= 0");
    if (gamma + r <= 0.0)
        throw InvalidRegime(who + "gamma + r must be > 0");
    if (!std::isfinite(omega) || omega <= 0.0)
        throw InvalidRegime(who + "omega must be finite and > 0");
    if (!std::isfinite(delta))
        throw InvalidRegime(who + "delta must be finite");
    if (!std::isfinite(density_prefactor) || density_prefactor < 0.0)
        throw InvalidRegime(who + "density_prefactor must be finite and >= 0");
}

bool DressedSteadyState::solved() const
{
    return std::isfinite(theta) && std::isfinite(xi) && std::isfinite(rz) &&
           std::isfinite(omega_tilde) && std::isfinite(log_partition);
}

void SampleGeometry::validate() const
{
    auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
    if (!positive(length_L) || !positive(area_S) || !positive(lambda) ||
        !positive(gamma_phys) || !positive(c))
        throw InvalidRegime("geometry: all fields must be finite and > 0");
}

double mixing_angle(double delta, double omega)
{
    if (!(omega > 0.0) || !std::isfinite(omega))
        throw InvalidRegime("mixing_angle: omega must be > 0");
    if (std::isnan(delta))
        throw InvalidRegime("mixing_angle: delta is NaN");
    // atan2 with a positive first argument lands in (0, pi), the arccot branch.
    return 0.5 * std::atan2(2.0 * omega, delta);
}

double generalized_rabi(double omega, double delta)
{
    if (!(omega > 0.0))
        throw InvalidRegime("generalized_rabi: omega must be > 0");
    return std::hypot(omega, 0.5 * delta);
}

SecularDiagnostics secular_validity_check(const EnsembleParams& a, const EnsembleParams& b)
{
    SecularDiagnostics d;
    d.delta_omega = std::abs(a.delta - b.delta);

    // The intense-field condition compares the full Rabi frequency 2 Omega.
    d.intense_field_a = 2.0 * a.omega >= 10.0 * a.gamma * a.n_atoms;
    d.intense_field_b = 2.0 * b.omega >= 10.0 * b.gamma * b.n_atoms;

    d.cross_damping_negligible = d.delta_omega > 0.0 &&
                                 a.n_atoms * a.gamma <= d.delta_omega &&
                                 b.n_atoms * b.gamma <= d.delta_omega;

    d.secular_splitting = d.delta_omega < generalized_rabi(a.omega, a.delta) &&
                          d.delta_omega < generalized_rabi(b.omega, b.delta);
    return d;
}

std::vector<std::string> SecularDiagnostics::warnings() const
{
    std::vector<std::string> out;
    if (!intense_field_a)
        out.emplace_back("ensemble a: drive not intense (2 Omega < 10 gamma N)");
    if (!intense_field_b)
        out.emplace_back("ensemble b: drive not intense (2 Omega < 10 gamma N)");
    if (!cross_damping_negligible)
        out.emplace_back("cross damping not negligible (N gamma > delta_omega)");
    if (!secular_splitting)
        out.emplace_back("species splitting not below generalized Rabi frequency");
    return out;
}

} // namespace collopt
