#include "collopt/lindblad_oracle.hpp"

#include <cmath>
#include <string>

namespace collopt::oracle {

namespace {

using namespace std::complex_literals;

Matrix kron(const Matrix& a, const Matrix& b)
{
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Matrix embed(const Matrix& op, std::size_t slot, std::span<const Eigen::Index> dims)
{
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t k = 0; k < dims.size(); ++k)
        out = kron(out, k == slot ? op : Matrix::Identity(dims[k], dims[k]));
    return out;
}

Vector vec(const Matrix& m)
{
    return Eigen::Map<const Vector>(m.data(), m.size());
}

Matrix unvec(const Vector& v, Eigen::Index d)
{
    return Eigen::Map<const Matrix>(v.data(), d, d);
}

} // namespace

DegenerateSteadyState::DegenerateSteadyState(Eigen::Index null_dimension)
    : std::runtime_error("degenerate steady state: null space of the Liouvillian has dimension " +
                         std::to_string(null_dimension)),
      null_dimension_(null_dimension)
{
}

CollectiveOperators build_operators(int n_atoms)
{
    if (n_atoms < 1 || n_atoms > kMaxAtomsPerEnsemble)
        throw SizeError("build_operators: N = " + std::to_string(n_atoms) +
                        " outside [1, " + std::to_string(kMaxAtomsPerEnsemble) + "]");
    const Eigen::Index d = n_atoms + 1;
    const double s = 0.5 * n_atoms;

    CollectiveOperators ops;
    ops.n_atoms = n_atoms;
    ops.s_plus = Matrix::Zero(d, d);
    ops.s_z = Matrix::Zero(d, d);
    for (Eigen::Index k = 0; k < d; ++k) {
        const double m = s - static_cast<double>(k);
        ops.s_z(k, k) = m;
        // <m + 1| S+ |m> sits one row above the diagonal.
        if (k > 0)
            ops.s_plus(k - 1, k) = std::sqrt(s * (s + 1.0) - m * (m + 1.0));
    }
    ops.s_minus = ops.s_plus.adjoint();
    return ops;
}

Matrix OracleModel::apply(const Matrix& rho) const
{
    return unvec(liouvillian_ * vec(rho), dimension_);
}

OracleModel build_liouvillian(std::span<const EnsembleParams> ensembles, bool include_cross)
{
    if (ensembles.empty() || ensembles.size() > 2)
        throw UsageError("build_liouvillian: expects one or two ensembles");

    std::vector<CollectiveOperators> local;
    std::vector<Eigen::Index> dims;
    Eigen::Index d = 1;
    for (const auto& e : ensembles) {
        if (!std::isfinite(e.gamma) || !std::isfinite(e.r) || !std::isfinite(e.delta) ||
            !std::isfinite(e.omega) || e.gamma < 0.0 || e.r < 0.0)
            throw InvalidRegime("build_liouvillian: rates must be finite, gamma and r >= 0");
        local.push_back(build_operators(e.n_atoms));
        dims.push_back(local.back().dimension());
        d *= dims.back();
    }
    if (d * d > kMaxLiouvillianRows)
        throw SizeError("build_liouvillian: Liouvillian dimension " + std::to_string(d * d) +
                        " exceeds " + std::to_string(kMaxLiouvillianRows));

    OracleModel model;
    model.dimension_ = d;
    model.include_cross_ = include_cross;
    model.ensembles_.assign(ensembles.begin(), ensembles.end());
    for (std::size_t i = 0; i < local.size(); ++i) {
        CollectiveOperators op;
        op.n_atoms = local[i].n_atoms;
        op.s_plus = embed(local[i].s_plus, i, dims);
        op.s_minus = embed(local[i].s_minus, i, dims);
        op.s_z = embed(local[i].s_z, i, dims);
        model.embedded_.push_back(std::move(op));
    }

    const Matrix id = Matrix::Identity(d, d);
    auto left = [&](const Matrix& a) { return kron(id, a); };
    auto right = [&](const Matrix& b) { return kron(b.transpose(), id); };
    // -c ([A, B rho] + h.c.) = -c (A B rho - B rho A + rho B^+ A^+ - A^+ rho B^+)
    auto damping = [&](double c, const Matrix& a, const Matrix& b) -> Matrix {
        const Matrix ad = a.adjoint();
        const Matrix bd = b.adjoint();
        return -c * (left(a * b) - kron(a.transpose(), b) + right(bd * ad) -
                     kron(bd.transpose(), ad));
    };

    Matrix h = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < ensembles.size(); ++i) {
        const auto& op = model.embedded_[i];
        h += ensembles[i].delta * op.s_z + ensembles[i].omega * (op.s_plus + op.s_minus);
    }
    model.hamiltonian_ = h;

    Matrix lv = -1i * (left(h) - right(h));
    for (std::size_t i = 0; i < ensembles.size(); ++i) {
        for (std::size_t j = 0; j < ensembles.size(); ++j) {
            if (i != j && !include_cross)
                continue;
            const double g = std::sqrt(ensembles[i].gamma * ensembles[j].gamma);
            const double r = std::sqrt(ensembles[i].r * ensembles[j].r);
            if (g != 0.0)
                lv += damping(g, model.embedded_[i].s_plus, model.embedded_[j].s_minus);
            if (r != 0.0)
                lv += damping(r, model.embedded_[i].s_z, model.embedded_[j].s_z);
        }
    }
    model.liouvillian_ = std::move(lv);
    return model;
}

SteadyState steady_rho(const OracleModel& model)
{
    const Matrix& lv = model.liouvillian();
    Eigen::BDCSVD<Matrix> svd(lv, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const double threshold = 1e-9 * sv(0);
    Eigen::Index null_dim = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) <= threshold)
            ++null_dim;
    if (null_dim != 1)
        throw DegenerateSteadyState(null_dim);

    const Eigen::Index d = model.dimension();
    Matrix rho = unvec(svd.matrixV().col(sv.size() - 1), d);
    rho /= rho.trace();
    rho = 0.5 * (rho + rho.adjoint()).eval();

    SteadyState out;
    out.null_dimension = null_dim;
    Eigen::SelfAdjointEigenSolver<Matrix> eig(rho, Eigen::EigenvaluesOnly);
    out.min_eigenvalue = eig.eigenvalues().minCoeff();
    out.residual = (lv * vec(rho)).cwiseAbs().maxCoeff();
    out.rho = std::move(rho);
    return out;
}

std::complex<double> expectation(const Matrix& rho, const Matrix& op)
{
    return (rho * op).trace();
}

Matrix dressed_inversion_operator(const OracleModel& model, std::size_t i)
{
    const auto& e = model.ensembles()[i];
    const auto& op = model.operators(i);
    const double theta = mixing_angle(e.delta, e.omega);
    return std::cos(2.0 * theta) * 2.0 * op.s_z + std::sin(2.0 * theta) * (op.s_plus + op.s_minus);
}

double dressed_inversion(const OracleModel& model, const Matrix& rho, std::size_t i)
{
    return expectation(rho, dressed_inversion_operator(model, i)).real();
}

std::vector<SpectrumPoint> regression_spectrum(const OracleModel& model, const Matrix& rho,
                                               std::span<const double> delta_p_grid)
{
    const Eigen::Index d = model.dimension();

    // L - vec(rho) vec(1)^T shifts the stationary eigenvalue to -1 and leaves
    // the traceless sector untouched, so the resolvent stays regular at delta_p = 0.
    const Vector rho_vec = vec(rho);
    const Vector trace_row = vec(Matrix::Identity(d, d));
    const Matrix base = model.liouvillian() - rho_vec * trace_row.transpose();

    std::vector<Vector> sources;
    for (std::size_t j = 0; j < model.ensembles().size(); ++j) {
        const auto& sp = model.operators(j).s_plus;
        sources.push_back(vec(sp * rho - rho * sp));
    }

    std::vector<SpectrumPoint> out;
    out.reserve(delta_p_grid.size());
    for (double dp : delta_p_grid) {
        SpectrumPoint pt;
        pt.delta_p = dp;
        Matrix m = base;
        m.diagonal().array() += 1i * dp;
        Eigen::PartialPivLU<Matrix> lu(m);
        if (!(lu.rcond() > 1e-13)) {
            out.push_back(pt);
            continue;
        }
        std::complex<double> chi = 0.0;
        for (std::size_t j = 0; j < sources.size(); ++j) {
            // y = int_0^inf e^{(L + i dp) tau} x d tau = -(L + i dp)^{-1} x
            const Matrix y = unvec(-lu.solve(sources[j]), d);
            const auto& e = model.ensembles()[j];
            chi += e.density_prefactor * e.gamma * 1i * (model.operators(j).s_minus * y).trace();
        }
        pt.chi = chi;
        out.push_back(pt);
    }
    return out;
}

} // namespace collopt::oracle
