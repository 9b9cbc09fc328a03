#include "mlhp/protocols.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "mlhp/errors.hpp"

namespace mlhp {

void ProtocolParams::validate() const
{
    if (spin.twice() < 1)
        throw InvalidArgument("protocols need F >= 1/2");
    if (grid < 2)
        throw InvalidArgument("grid must have at least 2 points");
    if (ode_steps < 10)
        throw InvalidArgument("ode_steps must be at least 10");
    if (!(n_atoms > 0.0) || !(k_max >= 0.0) || !(kappa_tilde >= 0.0) || !(ode_tolerance > 0.0) ||
        !std::isfinite(k_max) || !std::isfinite(kappa_tilde) || !std::isfinite(n_atoms))
        throw InvalidArgument("physical parameters must be finite and non-negative");
}

double ProtocolParams::k_at(int i) const
{
    return k_max * static_cast<double>(i) / static_cast<double>(grid - 1);
}

// --- TwistingEvolution -----------------------------------------------------

TwistingEvolution::TwistingEvolution(SpinQuantum spin) : ops_(build_spin_operators(spin, Axis::x))
{
    Eigen::SelfAdjointEigenSolver<Matrix> eig(ops_.t);
    eigenvectors_ = eig.eigenvectors();
    eigenvalues_ = eig.eigenvalues();
}

Matrix TwistingEvolution::propagator(double k) const
{
    if (k == 0.0)
        return Matrix::Identity(eigenvalues_.size(), eigenvalues_.size());
    Vector phases(eigenvalues_.size());
    for (Eigen::Index j = 0; j < eigenvalues_.size(); ++j)
        phases(j) = std::polar(1.0, -k * eigenvalues_(j));
    return eigenvectors_ * phases.asDiagonal() * eigenvectors_.adjoint();
}

Vector TwistingEvolution::evolve(double k, const Vector& state) const
{
    if (k == 0.0)
        return state;
    Vector c = eigenvectors_.adjoint() * state;
    for (Eigen::Index j = 0; j < c.size(); ++j)
        c(j) *= std::polar(1.0, -k * eigenvalues_(j));
    return eigenvectors_ * c;
}

Vector TwistingEvolution::reference(double k) const
{
    return evolve(k, basis_state(spin().dim(), 0));
}

ReferenceFrame TwistingEvolution::frame(double k) const
{
    return ReferenceFrame(propagator(k));
}

Vector TwistingEvolution::jz_column(double k) const
{
    // U^dagger F_z U e_0, with U^dagger = evolve(-k).
    const Vector full = evolve(-k, ops_.fz * reference(k));
    return full.tail(full.size() - 1);
}

// --- internal squeezing ----------------------------------------------------

SqueezingRow squeezing_parameters(const SpinOperatorSet& ops, const Vector& phi, double n_atoms)
{
    const double f = ops.spin.value();
    const Moments mx = mean_and_variance(ops.fx, phi);
    const Moments mz = mean_and_variance(ops.fz, phi);

    // Collective moments of the product state.
    const double var_jz = n_atoms * mz.variance;
    const double mean_jx = n_atoms * mx.mean;

    SqueezingRow row{0.0, 2.0 * var_jz / (n_atoms * f), 0.0, 0.0, mx.mean > 1e-9 * f};
    const double single = 2.0 * mz.variance / f;
    if (std::abs(row.chi_sq - single) > 1e-12 * std::max(1.0, single))
        throw NumericError("collective squeezing parameter depends on N");

    if (row.valid) {
        row.zeta_sq = 2.0 * var_jz / mean_jx;
        row.xi_sq = 2.0 * n_atoms * f * var_jz / (mean_jx * mean_jx);
    } else {
        row.zeta_sq = std::numeric_limits<double>::quiet_NaN();
        row.xi_sq = std::numeric_limits<double>::quiet_NaN();
    }
    return row;
}

std::vector<SqueezingRow> internal_curve(const ProtocolParams& params)
{
    params.validate();
    const TwistingEvolution twist(params.spin);
    std::vector<SqueezingRow> rows;
    rows.reserve(static_cast<std::size_t>(params.grid));
    for (int i = 0; i < params.grid; ++i) {
        const double k = params.k_at(i);
        SqueezingRow row = squeezing_parameters(twist.ops(), twist.reference(k), params.n_atoms);
        row.k = k;
        rows.push_back(row);
    }
    return rows;
}

// --- chi1 ------------------------------------------------------------------

double chi1_closed_form(double chi0_sq, double kappa_tilde)
{
    return 1.0 / (1.0 / chi0_sq + kappa_tilde * kappa_tilde);
}

double chi1_gaussian(double chi0_sq, double kappa_tilde)
{
    const double kappa = kappa_tilde * std::sqrt(chi0_sq);
    GaussianState state = GaussianState::vacuum({"atom", "light"});
    state = apply_qnd(state, "light", {"atom"}, QndCoupling::single(kappa));
    state = measure_x(state, "light", 0.0);
    // Var(J_z) = Var(J_z)_0 * Var(P_1) in vacuum-one units.
    return chi0_sq * state.cov()(1, 1);
}

std::vector<CurvePoint> chi1_curve(const ProtocolParams& params)
{
    std::vector<CurvePoint> out;
    for (const SqueezingRow& row : internal_curve(params)) {
        const double closed = chi1_closed_form(row.chi_sq, params.kappa_tilde);
        const double gaussian = chi1_gaussian(row.chi_sq, params.kappa_tilde);
        if (std::abs(closed - gaussian) > 1e-10)
            throw NumericError("chi1 closed form and Gaussian pipeline disagree at K = " +
                               std::to_string(row.k));
        out.push_back({row.k, closed});
    }
    return out;
}

// --- chi2 ------------------------------------------------------------------

namespace {

std::vector<std::string> atom_labels(int count)
{
    std::vector<std::string> labels;
    for (int a = 1; a <= count; ++a)
        labels.push_back("a" + std::to_string(a));
    return labels;
}

RealMatrix momentum_block(const GaussianState& state, int atoms)
{
    RealMatrix gamma(atoms, atoms);
    for (int a = 0; a < atoms; ++a)
        for (int b = 0; b < atoms; ++b)
            gamma(a, b) = state.cov()(2 * a + 1, 2 * b + 1);
    return gamma;
}

} // namespace

double chi2_closed_form(const TwistingEvolution& twist, double k, double kappa_tilde)
{
    const double f = twist.spin().value();
    const double chi0_sq = 2.0 * mean_and_variance(twist.ops().fz, twist.reference(k)).variance / f;
    if (kappa_tilde == 0.0)
        return chi0_sq;
    const double im10 = twist.jz_weights(k)(0);
    return chi0_sq - (2.0 / f) * im10 * im10 / (1.0 + 1.0 / (kappa_tilde * kappa_tilde));
}

double chi2_first_principles(const TwistingEvolution& twist, double k, double kappa_tilde)
{
    const double f = twist.spin().value();
    const int atoms = twist.spin().dim() - 1;
    std::vector<std::string> labels = atom_labels(atoms);
    const std::vector<std::string> atom_modes = labels;
    labels.push_back("L");

    // QND on the coherent state: J_z couples through Im J^z_{a0}(0).
    GaussianState state = GaussianState::vacuum(labels);
    state = apply_qnd(state, "L", atom_modes,
                      QndCoupling(std::sqrt(2.0 / f) * kappa_tilde, twist.jz_weights(0.0)));
    state = measure_x(state, "L", 0.0);

    // Twisting rotates the frame only; J_z picks up the new weights.
    const RealVector v = twist.jz_weights(k);
    return (2.0 / f) * v.dot(momentum_block(state, atoms) * v);
}

std::vector<CurvePoint> chi2_curve(const ProtocolParams& params)
{
    params.validate();
    const TwistingEvolution twist(params.spin);
    std::vector<CurvePoint> out;
    for (int i = 0; i < params.grid; ++i) {
        const double k = params.k_at(i);
        const double closed = chi2_closed_form(twist, k, params.kappa_tilde);
        const double direct = chi2_first_principles(twist, k, params.kappa_tilde);
        if (std::abs(closed - direct) > 1e-10)
            throw NumericError("chi2 closed form and oscillator sum disagree at K = " +
                               std::to_string(k));
        out.push_back({k, closed});
    }
    return out;
}

// --- chi3 ------------------------------------------------------------------

RealMatrix integrate_gamma_flow(const TwistingEvolution& twist, double k_total, double rate,
                                int steps, std::vector<RealMatrix>* trajectory)
{
    if (steps < 1)
        throw InvalidArgument("integrator needs at least one step");
    const int n = twist.spin().dim() - 1;
    const double h = 1.0 / steps;

    auto rhs = [&](double s, const RealMatrix& gamma) -> RealMatrix {
        const RealVector gv = gamma * twist.jz_weights(k_total * s);
        return -rate * gv * gv.transpose();
    };

    RealMatrix gamma = RealMatrix::Identity(n, n);
    if (trajectory)
        trajectory->push_back(gamma);
    for (int step = 0; step < steps; ++step) {
        const double s = step * h;
        const RealMatrix k1 = rhs(s, gamma);
        const RealMatrix k2 = rhs(s + 0.5 * h, gamma + 0.5 * h * k1);
        const RealMatrix k3 = rhs(s + 0.5 * h, gamma + 0.5 * h * k2);
        const RealMatrix k4 = rhs(s + h, gamma + h * k3);
        gamma += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        gamma = 0.5 * (gamma + gamma.transpose()).eval();
        if (!gamma.allFinite())
            throw NumericError("covariance flow diverged");
        if (trajectory)
            trajectory->push_back(gamma);
    }
    return gamma;
}

Chi3Result chi3(const TwistingEvolution& twist, double k_total, const ProtocolParams& params)
{
    const double f = twist.spin().value();
    const double rate = params.ode_prefactor_scale * 2.0 * params.kappa_tilde * params.kappa_tilde / f;
    const RealVector v = twist.jz_weights(k_total);

    const RealMatrix gamma = integrate_gamma_flow(twist, k_total, rate, params.ode_steps);
    const RealMatrix gamma_fine = integrate_gamma_flow(twist, k_total, rate, 2 * params.ode_steps);
    const double coarse = (2.0 / f) * v.dot(gamma * v);
    const double fine = (2.0 / f) * v.dot(gamma_fine * v);

    Chi3Result result{coarse, gamma, std::abs(coarse - fine)};
    if (result.halving_change > params.ode_tolerance)
        throw NumericError("covariance flow not converged: step halving changes chi3^2 by " +
                           std::to_string(result.halving_change));
    return result;
}

std::vector<CurvePoint> chi3_curve(const ProtocolParams& params)
{
    params.validate();
    const TwistingEvolution twist(params.spin);
    std::vector<CurvePoint> out;
    for (int i = 0; i < params.grid; ++i) {
        const double k = params.k_at(i);
        out.push_back({k, chi3(twist, k, params).chi_sq});
    }
    return out;
}

double chi3_segment_chain(const TwistingEvolution& twist, double k_total, double kappa_tilde,
                          int segments)
{
    if (segments < 1)
        throw InvalidArgument("segment chain needs at least one segment");
    const double f = twist.spin().value();
    const int atoms = twist.spin().dim() - 1;
    const std::vector<std::string> atom_modes = atom_labels(atoms);
    const double segment_kappa = std::sqrt(2.0 * kappa_tilde * kappa_tilde / (f * segments));

    GaussianState state = GaussianState::vacuum(atom_modes);
    for (int j = 0; j < segments; ++j) {
        const double s = (j + 0.5) / segments;
        state = add_vacuum_mode(state, "L");
        state = apply_qnd(state, "L", atom_modes,
                          QndCoupling(segment_kappa, twist.jz_weights(k_total * s)));
        state = measure_x(state, "L", 0.0);
    }
    const RealVector v = twist.jz_weights(k_total);
    return (2.0 / f) * v.dot(momentum_block(state, atoms) * v);
}

// --- chi0 minimum ----------------------------------------------------------

Chi0Minimum find_chi0_minimum(const ProtocolParams& params)
{
    params.validate();
    const TwistingEvolution twist(params.spin);
    const double f = params.spin.value();
    auto chi0_sq = [&](double k) {
        return 2.0 * mean_and_variance(twist.ops().fz, twist.reference(k)).variance / f;
    };

    int best = 0;
    double best_value = chi0_sq(0.0);
    for (int i = 1; i < params.grid; ++i) {
        const double value = chi0_sq(params.k_at(i));
        if (value < best_value) {
            best_value = value;
            best = i;
        }
    }
    const double lo = params.k_at(std::max(0, best - 1));
    const double hi = params.k_at(std::min(params.grid - 1, best + 1));
    const auto [k, value] = boost::math::tools::brent_find_minima(
        chi0_sq, lo, hi, std::numeric_limits<double>::digits);
    return {k, value};
}

// --- reference states ------------------------------------------------------

Vector coherent_x_state(SpinQuantum spin)
{
    return basis_state(spin.dim(), 0);
}

Vector twisted_state(SpinQuantum spin, double k, double theta)
{
    const SpinOperatorSet ops = build_spin_operators(spin, Axis::x);
    return evolve_state(ops.fx, theta, evolve_state(ops.t, k, coherent_x_state(spin)));
}

Vector intelligent_state(SpinQuantum spin, double squeeze, double theta)
{
    if (!spin.is_integer() || spin.twice() == 0)
        throw InvalidArgument("intelligent states with <F_z> = 0 need integer F >= 1");
    if (!(squeeze > 0.0) || !std::isfinite(squeeze))
        throw InvalidArgument("squeeze factor must be positive");

    const SpinOperatorSet ops = build_spin_operators(spin, Axis::x);
    const Matrix m = ops.fz - complex(0.0, squeeze) * ops.fy;
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const Eigen::Index last = m.cols() - 1;
    if (svd.singularValues()(last) > 1e-8 * std::max(1.0, svd.singularValues()(0)))
        throw NumericError("F_z - i s F_y has no kernel");

    Vector phi = svd.matrixV().col(last);
    Eigen::Index pivot = 0;
    phi.cwiseAbs().maxCoeff(&pivot);
    phi *= std::polar(1.0, -std::arg(phi(pivot)));
    phi.normalize();
    return evolve_state(ops.fx, theta, phi);
}

} // namespace mlhp
