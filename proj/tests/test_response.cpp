#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "collopt/response.hpp"
#include "collopt/steady_state.hpp"
#include "fig3_fixture.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace collopt;
constexpr double pi = std::numbers::pi;

namespace {

// Dispersion and absorption written out term by term, independent of the
// library's complex-Lorentzian grouping.
std::pair<double, double> chi_real_form(const ProbePoint& probe, const SolvedEnsemble& e,
                                        bool collective)
{
    const auto& p = e.params;
    const auto& st = e.state;
    const double th = st.theta;
    const double c4 = std::pow(std::cos(th), 4);
    const double s4 = std::pow(std::sin(th), 4);
    const double gs = p.gamma * (std::pow(std::sin(2 * th), 2) + c4 + s4) +
                      p.r * (std::pow(std::cos(2 * th), 2) + std::pow(std::sin(2 * th), 2) / 2);
    const double gc = collective ? p.gamma * std::cos(2 * th) * st.rz : 0.0;
    const double gt = (gs - gc) / (p.gamma * p.n_atoms);
    const double wbar = st.omega_tilde / (p.gamma * p.n_atoms);
    const double t = probe.delta_p() / (p.gamma * p.n_atoms);
    const double pre = p.density_prefactor * st.rz / p.n_atoms;
    const double dm = t - 2 * wbar;
    const double dp = t + 2 * wbar;
    const double re = pre * (c4 * dm / (gt * gt + dm * dm) - s4 * dp / (gt * gt + dp * dp));
    const double im = pre * (s4 * gt / (gt * gt + dp * dp) - c4 * gt / (gt * gt + dm * dm));
    return {re, im};
}

} // namespace

TEST_CASE("damping rates examples")
{
    auto d = damping_rates(pi / 4, 1.0, 0.3, 123.0, 10);
    CHECK(d.gamma_s == doctest::Approx(1.65).epsilon(1e-15));
    CHECK(std::abs(d.gamma_c) < 1e-12);

    const int n = 50;
    d = damping_rates(1e-9, 1.0, 0.0, -n, n);
    CHECK(d.gamma_s == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.gamma_c == doctest::Approx(-1.0 * n).epsilon(1e-12));
    CHECK(d.gamma_tilde == doctest::Approx(1.0 + 1.0 / n).epsilon(1e-12));

    // 40-digit reference for delta/(2 Omega) = 0.1, r = 0.3, N = 1000.
    EnsembleParams e{Species::a, 1000, 1.0, 0.3, 0.2 * 5000.0, 5000.0, 1.0};
    const auto st = solve_ensemble(e);
    d = damping_rates(st.theta, 1.0, 0.3, st.rz, 1000);
    CHECK(d.gamma_s == doctest::Approx(1.6465346534653465347).epsilon(1e-14));
    CHECK(d.gamma_c == doctest::Approx(-98.949757393485259015).epsilon(1e-12));
    CHECK(d.gamma_tilde == doctest::Approx(0.10059629204695060555).epsilon(1e-12));
}

TEST_CASE("complex grouping reproduces the term-by-term dispersion and absorption")
{
    for (double da : {-0.3, -0.01, 0.001, 0.07, 0.25}) {
        const auto solved = solve_all(fixture::ensembles(da));
        for (double off : {-1.0, -0.2, 0.35, 1.0}) {
            const auto probe = fixture::probe(off, da);
            for (bool collective : {true, false}) {
                double re = 0, im = 0;
                for (const auto& s : solved) {
                    const auto [r, i] = chi_real_form(probe, s, collective);
                    re += r;
                    im += i;
                }
                const auto chi = susceptibility(probe, solved, {collective});
                const double scale = std::max({std::abs(re), std::abs(im), 1e-300});
                CHECK(std::abs(chi.real() - re) <= 1e-12 * scale);
                CHECK(std::abs(chi.imag() - im) <= 1e-12 * scale);
            }
        }
    }
}

TEST_CASE("two-ensemble additivity")
{
    const auto solved = solve_all(fixture::ensembles(0.02));
    for (double off : {-1.0, 0.0, 0.35, 1.0}) {
        const auto probe = fixture::probe(off, 0.02);
        const auto both = susceptibility(probe, solved);
        const auto a = susceptibility(probe, std::span(solved).first(1));
        const auto b = susceptibility(probe, std::span(solved).last(1));
        CHECK(both == a + b);
    }
}

TEST_CASE("independent-atom limit drops only the collective width")
{
    const auto solved = solve_all(fixture::ensembles(0.05));
    const auto probe = fixture::probe(-1.0, 0.05);
    const auto independent = susceptibility(probe, solved, {false});
    double re = 0, im = 0;
    for (const auto& s : solved) {
        const auto [r, i] = chi_real_form(probe, s, false);
        re += r;
        im += i;
    }
    CHECK(independent.real() == doctest::Approx(re).epsilon(1e-12));
    CHECK(independent.imag() == doctest::Approx(im).epsilon(1e-12));
    CHECK(std::abs(independent - susceptibility(probe, solved)) > 0.0);
}

TEST_CASE("Lorentzian tails")
{
    const auto solved = solve_all(fixture::ensembles(0.2));
    const double da = 0.2 * 2 * fixture::kOmega;
    auto at = [&](double t) {
        return susceptibility(ProbePoint::from_laser_detuning(t * fixture::kN, da), solved);
    };
    const auto c1 = at(1e6);
    const auto c2 = at(1e7);
    CHECK(c1.real() * 1e6 == doctest::Approx(c2.real() * 1e7).epsilon(1e-4));
    CHECK(c1.imag() * 1e12 == doctest::Approx(c2.imag() * 1e14).epsilon(1e-4));
}

TEST_CASE("unsolved or mismatched ensembles are usage errors")
{
    auto ens = fixture::ensembles(0.1);
    std::vector<SolvedEnsemble> unsolved = {{ens[0], DressedSteadyState{}}};
    const auto probe = fixture::probe(-1.0, 0.1);
    CHECK_THROWS_AS(susceptibility(probe, unsolved), UsageError);

    auto solved = solve_all(ens);
    solved[1].params.delta += 100.0;
    CHECK_THROWS_AS(susceptibility(probe, solved), UsageError);
    CHECK_THROWS_AS(chi_prime_derivative(probe, solved), UsageError);
}

TEST_CASE("probe point identity")
{
    const auto p = ProbePoint::from_offset(-3.0, 1.25);
    CHECK(p.delta_p() == p.nu_minus_omega_a() + 1.25);
    const auto q = ProbePoint::from_laser_detuning(4.0, 1.5);
    CHECK(q.nu_minus_omega_a() == 2.5);
    EnsembleParams e{Species::a, 10, 2.0, 0.0, 0.0, 1.0, 1.0};
    CHECK(q.delta_p_tilde(e) == 0.2);
}

TEST_CASE("analytic derivative at a Lorentzian center")
{
    // Single ensemble with the probe on x = delta_p_tilde - 2 omega_bar = 0.
    EnsembleParams e{Species::a, 1000, 1.0, 0.3, 0.3 * 2 * 5000.0, 5000.0, 1.0};
    const std::vector<SolvedEnsemble> one = {{e, solve_ensemble(e)}};
    const auto& st = one[0].state;
    const auto probe = ProbePoint::from_laser_detuning(2.0 * st.omega_tilde, e.delta);
    const auto rates = damping_rates(st.theta, 1.0, 0.3, st.rz, 1000);
    const double c4 = std::pow(std::cos(st.theta), 4);
    const double s4 = std::pow(std::sin(st.theta), 4);
    const double g2 = rates.gamma_tilde * rates.gamma_tilde;
    const double y = 4.0 * st.omega_bar;
    const double expected = (st.rz / 1000) *
                            (c4 / g2 - s4 * (g2 - y * y) / ((g2 + y * y) * (g2 + y * y))) / 1000.0;
    CHECK(chi_prime_derivative(probe, one) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("analytic derivative matches central differences across the detuning sweep")
{
    // Step set to 1e-4 of the narrowest local line width (in probe-detuning units).
    for (double off : {-1.0, 1.0}) {
        for (int k = 0; k <= 400; ++k) {
            const double da = (k < 200) ? -0.5 + k * 0.005 : -0.002 + (k - 200) * 3e-5;
            const auto solved = solve_all(fixture::ensembles(da));
            double width = INFINITY;
            for (const auto& s : solved)
                width = std::min(width, damping_rates(s.state.theta, 1.0, fixture::kR, s.state.rz,
                                                      fixture::kN).gamma_tilde * fixture::kN);
            const double h = 1e-4 * width;
            const auto probe = fixture::probe(off, da);
            auto chi_r = [&](double dp) {
                return susceptibility(ProbePoint::from_laser_detuning(dp, probe.delta_p() - probe.nu_minus_omega_a()),
                                      solved).real();
            };
            const double fd = (chi_r(probe.delta_p() + h) - chi_r(probe.delta_p() - h)) / (2 * h);
            const double an = chi_prime_derivative(probe, solved);
            CHECK(std::abs(fd - an) <= 1e-6 * std::abs(an) + 1e-9 * std::abs(chi_r(probe.delta_p())) / width);
        }
    }
}

TEST_CASE("refractive index")
{
    CHECK(refractive_index(0.0, 0.1).n == 1.0);
    CHECK(refractive_index(63.0, 1.0).n == 8.0);
    CHECK(refractive_index(6.3, 10.0).n == doctest::Approx(8.0).epsilon(1e-15));
    const auto blocked = refractive_index(-1.5, 1.0);
    CHECK_FALSE(blocked.propagating);
    CHECK(std::isnan(blocked.n));
    CHECK(refractive_index(-1.0, 1.0).propagating);
}

TEST_CASE("group index")
{
    auto g = group_index(1.3, 1e8, 0.0, 0.1);
    CHECK(g.n_g == 1.3);
    CHECK(g.v_g_over_c == doctest::Approx(1.0 / 1.3));
    // n = 1 and nu dn/dnu = -2
    g = group_index(1.0, 4.0, -1.0, 1.0);
    CHECK(g.n_g == -1.0);
    CHECK(g.v_g_over_c == -1.0);
    CHECK_THROWS_AS(group_index(0.0, 1e8, 1.0, 0.1), SingularIndex);
}

TEST_CASE("switching time")
{
    SampleGeometry g{5.0, 2.0, 1e-4, 1e7, 3e10};
    CHECK(switching_time(g, 1000) == 1e-9);
    CHECK(switching_time(g, 2000) == doctest::Approx(0.5e-9).epsilon(1e-15));
    g.length_L = 10.0;
    CHECK(switching_time(g, 1000) == doctest::Approx(2e-9).epsilon(1e-15));
    CHECK_THROWS_AS(switching_time(g, 0), InvalidRegime);
}

TEST_CASE("evaluate_response flags non-propagating samples")
{
    // Fig. 3c-type zero-absorption point: chi' well below -1 at s = 10.
    const auto solved = solve_all(fixture::ensembles(0.0013));
    const auto r = evaluate_response(fixture::probe(1.0, 0.0013), solved, 10.0, 1e8);
    CHECK(r.chi_prime < -1.0);
    CHECK_FALSE(r.propagating);
    CHECK(std::isnan(r.n));
    CHECK(std::isnan(r.n_g));
    CHECK(r.delta_a_over_2omega == doctest::Approx(0.0013));
}

TEST_CASE("gamma_tilde stays positive over the parameter grid")
{
    for (double th = 0.01; th < pi / 2 - 0.01; th += 0.005)
        for (int n : {1, 10, 1000})
            for (double r : {0.0, 0.3, 3.0}) {
                const double rz = dressed_inversion(xi({th, 1.0, r}), n);
                CHECK(damping_rates(th, 1.0, r, rz, n).gamma_tilde > 0.0);
            }
}

TEST_CASE("collective enhancement of the dispersive slope at delta_a = 0")
{
    // d chi' / d delta_a at the delta_a = 0 crossing, probe fixed at nu - omega_a = 0.35 * 2 Omega.
    auto slope = [](int n) {
        const double h = 1e-7;
        auto chi_at = [&](double da) {
            const auto solved = solve_all(fixture::ensembles(da, n));
            return susceptibility(fixture::probe(0.35, da), solved).real();
        };
        return std::abs((chi_at(h) - chi_at(-h)) / (2 * h));
    };
    CHECK(slope(1000) > slope(1));
}

TEST_CASE("sign changes are located by bisection")
{
    auto roots = find_sign_changes([](double x) { return std::sin(x); }, 0.5, 10.0, 101);
    REQUIRE(roots.size() == 3);
    CHECK(roots[0] == doctest::Approx(pi).epsilon(1e-10));
    CHECK(roots[2] == doctest::Approx(3 * pi).epsilon(1e-10));
    CHECK(find_sign_changes([](double) { return 1.0; }, 0.0, 1.0, 10).empty());
    CHECK_THROWS(find_sign_changes([](double x) { return x; }, 1.0, 0.0, 10));
}
