#include "collopt/response.hpp"

#include "collopt/steady_state.hpp"

#include <cmath>
#include <limits>

namespace collopt {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

// Per-ensemble quantities shared by chi and its derivative.
struct LineShape {
    double weight;      // s (rz / N)
    double cos4;
    double sin4;
    double x_minus;     // delta_p_tilde - 2 omega_bar
    double x_plus;      // delta_p_tilde + 2 omega_bar
    double width;       // gamma_tilde
    double scale;       // gamma N
};

LineShape line_shape(const ProbePoint& probe, const SolvedEnsemble& e, const ResponseOptions& opt)
{
    const auto& p = e.params;
    const auto& st = e.state;
    if (!st.solved())
        throw UsageError("susceptibility: ensemble " + to_string(p.label) + " has not been solved");
    if (!(p.gamma > 0.0))
        throw UsageError("susceptibility: ensemble " + to_string(p.label) + " needs gamma > 0");
    if (std::abs(st.theta - mixing_angle(p.delta, p.omega)) > 1e-12)
        throw UsageError("susceptibility: steady state of ensemble " + to_string(p.label) +
                         " does not match its parameters");

    DampingRates rates = damping_rates(st.theta, p.gamma, p.r, st.rz, p.n_atoms);
    if (!opt.collective_damping)
        rates.gamma_tilde = rates.gamma_s / (p.gamma * p.n_atoms);

    const double c = std::cos(st.theta);
    const double s = std::sin(st.theta);
    const double t = probe.delta_p_tilde(p);
    const double two_wbar = 2.0 * st.omega_bar;
    return {p.density_prefactor * st.rz / p.n_atoms,
            c * c * c * c,
            s * s * s * s,
            t - two_wbar,
            t + two_wbar,
            rates.gamma_tilde,
            p.gamma * p.n_atoms};
}

} // namespace

DampingRates damping_rates(double theta, double gamma, double r, double rz, int n_atoms)
{
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double s2 = std::sin(2.0 * theta);
    const double c2 = std::cos(2.0 * theta);

    DampingRates out;
    out.gamma_s = gamma * (s2 * s2 + c * c * c * c + s * s * s * s) + r * (c2 * c2 + s2 * s2 / 2.0);
    out.gamma_c = gamma * c2 * rz;
    out.gamma_tilde = (out.gamma_s - out.gamma_c) / (gamma * n_atoms);
    return out;
}

std::vector<SolvedEnsemble> solve_all(std::span<const EnsembleParams> ensembles)
{
    std::vector<SolvedEnsemble> out;
    out.reserve(ensembles.size());
    for (const auto& e : ensembles)
        out.push_back({e, solve_ensemble(e)});
    return out;
}

std::complex<double> susceptibility(const ProbePoint& probe,
                                    std::span<const SolvedEnsemble> ensembles,
                                    const ResponseOptions& options)
{
    using namespace std::complex_literals;
    std::complex<double> chi = 0.0;
    for (const auto& e : ensembles) {
        const LineShape l = line_shape(probe, e, options);
        chi += l.weight * (l.cos4 / (l.x_minus + 1i * l.width) -
                           l.sin4 / (l.x_plus + 1i * l.width));
    }
    return chi;
}

double chi_prime_derivative(const ProbePoint& probe,
                            std::span<const SolvedEnsemble> ensembles,
                            const ResponseOptions& options)
{
    // d/dx [x / (g^2 + x^2)] = (g^2 - x^2) / (g^2 + x^2)^2, and dx/d delta_p = 1 / (gamma N).
    auto slope = [](double x, double g) {
        const double d = g * g + x * x;
        return (g * g - x * x) / (d * d);
    };
    double total = 0.0;
    for (const auto& e : ensembles) {
        const LineShape l = line_shape(probe, e, options);
        total += l.weight *
                 (l.cos4 * slope(l.x_minus, l.width) - l.sin4 * slope(l.x_plus, l.width)) /
                 l.scale;
    }
    return total;
}

RefractiveIndex refractive_index(double chi_prime, double density_prefactor)
{
    const double radicand = 1.0 + density_prefactor * chi_prime;
    if (!(radicand >= 0.0))
        return {nan, false};
    return {std::sqrt(radicand), true};
}

GroupIndex group_index(double n, double nu_over_gamma, double dchi_prime, double density_prefactor)
{
    if (n == 0.0)
        throw SingularIndex("group_index: refractive index is zero");
    const double dn_dnu = density_prefactor * dchi_prime / (2.0 * n);
    GroupIndex g;
    g.n_g = n + nu_over_gamma * dn_dnu;
    g.v_g_over_c = 1.0 / g.n_g;
    return g;
}

double switching_time(const SampleGeometry& geom, int n_atoms)
{
    geom.validate();
    if (n_atoms < 1)
        throw InvalidRegime("switching_time: n_atoms must be >= 1");
    // 2 (length_L lambda) / (lambda gamma N); the wavelength cancels.
    return 2.0 * geom.length_L / (geom.gamma_phys * n_atoms);
}

ResponseSample evaluate_response(const ProbePoint& probe,
                                 std::span<const SolvedEnsemble> ensembles,
                                 double density_prefactor, double nu_over_gamma,
                                 const ResponseOptions& options)
{
    ResponseSample out;
    if (!ensembles.empty()) {
        const auto& a = ensembles.front().params;
        out.delta_a_over_2omega = a.delta / (2.0 * a.omega);
    }
    const auto chi = susceptibility(probe, ensembles, options);
    out.chi_prime = chi.real();
    out.chi_double_prime = chi.imag();
    out.dchi_prime = chi_prime_derivative(probe, ensembles, options);

    const auto idx = refractive_index(out.chi_prime, density_prefactor);
    out.propagating = idx.propagating && idx.n > 0.0;
    if (out.propagating) {
        out.n = idx.n;
        out.n_g = group_index(idx.n, nu_over_gamma, out.dchi_prime, density_prefactor).n_g;
    } else {
        out.n = idx.n;
        out.n_g = nan;
    }
    return out;
}

std::vector<double> find_sign_changes(const std::function<double(double)>& f, double lo,
                                      double hi, int points, double tol)
{
    if (!(lo < hi) || points < 2)
        throw std::invalid_argument("find_sign_changes: need lo < hi and points >= 2");
    std::vector<double> roots;
    const double step = (hi - lo) / (points - 1);
    double x0 = lo;
    double f0 = f(x0);
    for (int i = 1; i < points; ++i) {
        const double x1 = (i == points - 1) ? hi : lo + i * step;
        const double f1 = f(x1);
        if (f0 == 0.0) {
            roots.push_back(x0);
        } else if ((f0 < 0.0) != (f1 < 0.0) && f1 != 0.0) {
            double a = x0, b = x1, fa = f0;
            double mid = 0.5 * (a + b);
            for (int it = 0; it < 200; ++it) {
                mid = 0.5 * (a + b);
                const double fm = f(mid);
                if (std::abs(fm) < tol || mid == a || mid == b)
                    break;
                if ((fm < 0.0) == (fa < 0.0)) {
                    a = mid;
                    fa = fm;
                } else {
                    b = mid;
                }
            }
            roots.push_back(mid);
        }
        x0 = x1;
        f0 = f1;
    }
    if (f0 == 0.0)
        roots.push_back(x0);
    return roots;
}

} // namespace collopt
