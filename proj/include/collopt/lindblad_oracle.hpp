#pragma once

// Brute-force reference model: the collective master equation for up to two
// ensembles in the symmetric Dicke basis, its steady state, and the probe
// susceptibility from the two-time commutator via the regression theorem.
//
// Everything is dense; the model exists to check the closed forms at small N.

#include "collopt/core_model.hpp"

#include <Eigen/Dense>

#include <complex>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace collopt::oracle {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr int kMaxAtomsPerEnsemble = 12;
/// Upper bound on D^2, the Liouvillian dimension.
inline constexpr Eigen::Index kMaxLiouvillianRows = 1600;

class SizeError : public std::length_error {
public:
    using std::length_error::length_error;
};

class DegenerateSteadyState : public std::runtime_error {
public:
    DegenerateSteadyState(Eigen::Index null_dimension);
    Eigen::Index null_dimension() const { return null_dimension_; }

private:
    Eigen::Index null_dimension_;
};

/// Spin-N/2 ladder operators, basis ordered m = N/2, N/2 - 1, ..., -N/2.
struct CollectiveOperators {
    int n_atoms = 0;
    Matrix s_plus;
    Matrix s_minus;
    Matrix s_z;

    Eigen::Index dimension() const { return s_z.rows(); }
};

CollectiveOperators build_operators(int n_atoms);

class OracleModel {
public:
    Eigen::Index dimension() const { return dimension_; }
    const Matrix& hamiltonian() const { return hamiltonian_; }
    /// vec(d rho / dt) = L vec(rho), column-major vectorization.
    const Matrix& liouvillian() const { return liouvillian_; }
    bool include_cross_damping() const { return include_cross_; }
    std::span<const EnsembleParams> ensembles() const { return ensembles_; }
    /// Collective operators of ensemble i embedded in the joint space.
    const CollectiveOperators& operators(std::size_t i) const { return embedded_.at(i); }

    /// Applies L to a D x D matrix.
    Matrix apply(const Matrix& rho) const;

private:
    friend OracleModel build_liouvillian(std::span<const EnsembleParams>, bool);

    Eigen::Index dimension_ = 0;
    bool include_cross_ = false;
    std::vector<EnsembleParams> ensembles_;
    std::vector<CollectiveOperators> embedded_;
    Matrix hamiltonian_;
    Matrix liouvillian_;
};

/// Builds H0 = sum_j [delta_j S_z + omega_j (S+ + S-)] and
///   L rho = -i [H0, rho] - sum_ij (sqrt(g_i g_j) [S+_i, S-_j rho]
///                                  + sqrt(r_i r_j) [Sz_i, Sz_j rho]) + h.c.
/// with the i != j terms present only when include_cross is set.
/// Accepts one or two ensembles.
OracleModel build_liouvillian(std::span<const EnsembleParams> ensembles, bool include_cross);

struct SteadyState {
    Matrix rho;
    Eigen::Index null_dimension = 0;
    double min_eigenvalue = 0.0;
    double residual = 0.0;  ///< max |L vec(rho)|
};

/// Null vector of L by SVD (rank threshold 1e-9 of the largest singular
/// value), normalized to unit trace and symmetrized. Throws
/// DegenerateSteadyState when the null space is not one-dimensional.
SteadyState steady_rho(const OracleModel& model);

/// Tr(rho A).
std::complex<double> expectation(const Matrix& rho, const Matrix& op);

/// Dressed inversion operator cos(2 theta) 2 S_z + sin(2 theta) (S+ + S-) of
/// ensemble i, with theta from its own detuning and drive.
Matrix dressed_inversion_operator(const OracleModel& model, std::size_t i);

/// <R_z> of ensemble i in the state rho.
double dressed_inversion(const OracleModel& model, const Matrix& rho, std::size_t i);

struct SpectrumPoint {
    double delta_p = 0.0;
    std::optional<std::complex<double>> chi;  ///< empty when the resolvent is singular
};

/// chi(delta_p) = sum_j s_j gamma_j i int_0^inf e^{i delta_p tau} <[S-_j(tau), S+_j]> d tau,
/// evaluated through the resolvent of L. Units match collopt::susceptibility.
std::vector<SpectrumPoint> regression_spectrum(const OracleModel& model, const Matrix& rho,
                                               std::span<const double> delta_p_grid);

} // namespace collopt::oracle
