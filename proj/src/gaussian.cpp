#include "mlhp/gaussian.hpp"

#include <cmath>
#include <set>

#include "mlhp/errors.hpp"

namespace mlhp {

namespace {

// Drop rows/columns of one mode's (X, P) pair.
std::vector<Eigen::Index> kept_indices(int modes, int removed)
{
    std::vector<Eigen::Index> keep;
    for (int m = 0; m < modes; ++m) {
        if (m == removed)
            continue;
        keep.push_back(2 * m);
        keep.push_back(2 * m + 1);
    }
    return keep;
}

} // namespace

GaussianState::GaussianState(std::vector<std::string> labels, RealVector mean, RealMatrix cov)
    : labels_(std::move(labels)), mean_(std::move(mean)), cov_(std::move(cov))
{
    const Eigen::Index n = 2 * static_cast<Eigen::Index>(labels_.size());
    if (mean_.size() != n || cov_.rows() != n || cov_.cols() != n)
        throw InvalidArgument("Gaussian state dimensions do not match 2 x mode count");
    if (std::set<std::string>(labels_.begin(), labels_.end()).size() != labels_.size())
        throw InvalidArgument("mode labels must be distinct");
    if (n > 0 && (cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-10)
        throw InvalidArgument("covariance matrix is not symmetric");
    cov_ = 0.5 * (cov_ + cov_.transpose());
    if (n > 0 && uncertainty_margin(*this) < -1e-8)
        throw InvalidArgument("covariance matrix violates the uncertainty relation");
}

GaussianState GaussianState::vacuum(std::vector<std::string> labels)
{
    const Eigen::Index n = 2 * static_cast<Eigen::Index>(labels.size());
    return GaussianState(std::move(labels), RealVector::Zero(n), RealMatrix::Identity(n, n));
}

bool GaussianState::has_mode(const std::string& label) const
{
    for (const auto& l : labels_)
        if (l == label)
            return true;
    return false;
}

int GaussianState::mode_index(const std::string& label) const
{
    for (std::size_t k = 0; k < labels_.size(); ++k)
        if (labels_[k] == label)
            return static_cast<int>(k);
    throw InvalidArgument("unknown mode label '" + label + "'");
}

double GaussianState::quadrature_variance(const RealVector& coefficients) const
{
    if (coefficients.size() != cov_.rows())
        throw InvalidArgument("coefficient vector has the wrong length");
    return coefficients.dot(cov_ * coefficients);
}

RealMatrix symplectic_form(int modes)
{
    RealMatrix omega = RealMatrix::Zero(2 * modes, 2 * modes);
    for (int m = 0; m < modes; ++m) {
        omega(2 * m, 2 * m + 1) = 1.0;
        omega(2 * m + 1, 2 * m) = -1.0;
    }
    return omega;
}

double uncertainty_margin(const GaussianState& state)
{
    const Matrix h = state.cov().cast<complex>() +
                     complex(0.0, 1.0) * symplectic_form(state.mode_count()).cast<complex>();
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h, Eigen::EigenvaluesOnly);
    return eig.eigenvalues().minCoeff();
}

QndCoupling::QndCoupling(double kappa, RealVector weights) : kappa_(kappa), weights_(std::move(weights))
{
    if (!(kappa >= 0.0) || !std::isfinite(kappa))
        throw InvalidArgument("QND coupling must be finite and non-negative");
    const double norm = weights_.norm();
    if (weights_.size() == 0 || !(norm > 0.0)) {
        // No atomic participation: the map is the identity.
        kappa_ = 0.0;
        if (weights_.size() > 0)
            weights_.setZero();
        return;
    }
    weights_ /= norm;
    kappa_ *= norm;
}

RealMatrix qnd_matrix(const GaussianState& state, const std::string& light_mode,
                      const std::vector<std::string>& atom_modes, const QndCoupling& coupling)
{
    if (static_cast<Eigen::Index>(atom_modes.size()) != coupling.atom_weights().size())
        throw InvalidArgument("one weight per atomic mode is required");
    const Eigen::Index n = 2 * state.mode_count();
    RealMatrix s = RealMatrix::Identity(n, n);
    const int xl = state.x_index(light_mode);
    const int pl = state.p_index(light_mode);
    for (std::size_t k = 0; k < atom_modes.size(); ++k) {
        if (atom_modes[k] == light_mode)
            throw InvalidArgument("light mode cannot also be an atomic mode");
        const double g = coupling.kappa() * coupling.atom_weights()(static_cast<Eigen::Index>(k));
        s(state.x_index(atom_modes[k]), pl) += g;
        s(xl, state.p_index(atom_modes[k])) += g;
    }
    return s;
}

GaussianState add_vacuum_mode(const GaussianState& state, const std::string& label)
{
    const Eigen::Index n = state.cov().rows();
    RealVector mean = RealVector::Zero(n + 2);
    mean.head(n) = state.mean();
    RealMatrix cov = RealMatrix::Identity(n + 2, n + 2);
    cov.topLeftCorner(n, n) = state.cov();
    std::vector<std::string> labels = state.labels();
    labels.push_back(label);
    return GaussianState(std::move(labels), std::move(mean), std::move(cov));
}

GaussianState apply_symplectic(const GaussianState& state, const RealMatrix& s)
{
    if (s.rows() != state.cov().rows() || s.cols() != state.cov().cols())
        throw InvalidArgument("symplectic matrix has the wrong size");
    return GaussianState(state.labels(), s * state.mean(), s * state.cov() * s.transpose());
}

GaussianState apply_qnd(const GaussianState& state, const std::string& light_mode,
                        const std::vector<std::string>& atom_modes, const QndCoupling& coupling)
{
    return apply_symplectic(state, qnd_matrix(state, light_mode, atom_modes, coupling));
}

GaussianState beam_splitter(const GaussianState& state, const std::string& mode_a,
                            const std::string& mode_b, double theta)
{
    const int a = state.mode_index(mode_a);
    const int b = state.mode_index(mode_b);
    if (a == b)
        throw InvalidArgument("beam splitter needs two distinct modes");
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    RealMatrix m = RealMatrix::Identity(state.cov().rows(), state.cov().cols());
    for (int q = 0; q < 2; ++q) {
        const int ia = 2 * a + q;
        const int ib = 2 * b + q;
        m(ia, ia) = c;
        m(ia, ib) = s;
        m(ib, ia) = -s;
        m(ib, ib) = c;
    }
    return apply_symplectic(state, m);
}

GaussianState measure_x(const GaussianState& state, const std::string& mode, double outcome)
{
    const int idx = state.mode_index(mode);
    const int xi = 2 * idx;
    const double var = state.cov()(xi, xi);
    if (!(var > 1e-300))
        throw NumericError("measured quadrature has zero variance");

    const RealVector c = state.cov().col(xi);
    const RealVector mean = state.mean() + c * ((outcome - state.mean()(xi)) / var);
    const RealMatrix cov = state.cov() - c * c.transpose() / var;

    const auto keep = kept_indices(state.mode_count(), idx);
    std::vector<std::string> labels = state.labels();
    labels.erase(labels.begin() + idx);
    return GaussianState(std::move(labels), mean(keep), cov(keep, keep));
}

GaussianState displace(const GaussianState& state, const std::string& mode, double dx, double dp)
{
    RealVector mean = state.mean();
    mean(state.x_index(mode)) += dx;
    mean(state.p_index(mode)) += dp;
    return GaussianState(state.labels(), std::move(mean), state.cov());
}

double sample_x(const GaussianState& state, const std::string& mode, std::mt19937_64& rng)
{
    const int xi = state.x_index(mode);
    std::normal_distribution<double> dist(state.mean()(xi), std::sqrt(0.5 * state.cov()(xi, xi)));
    return dist(rng);
}

GaussianState measure_with_feedback(const GaussianState& state, const std::string& mode,
                                    const std::vector<Feedback>& feedback)
{
    const int idx = state.mode_index(mode);
    const int xi = 2 * idx;
    const double var = state.cov()(xi, xi);
    if (!(var > 1e-300))
        throw NumericError("measured quadrature has zero variance");

    // Shift of every quadrature per unit outcome deviation: conditioning
    // plus feedback.
    RealVector shift = state.cov().col(xi) / var;
    for (const auto& fb : feedback) {
        if (fb.mode == mode)
            throw InvalidArgument("feedback target is the measured mode");
        shift(fb.on_p ? state.p_index(fb.mode) : state.x_index(fb.mode)) += fb.gain;
    }
    const RealVector c = state.cov().col(xi);
    // Conditional covariance plus the spread of the outcome-dependent mean.
    const RealMatrix cov = state.cov() - c * c.transpose() / var + var * shift * shift.transpose();

    const auto keep = kept_indices(state.mode_count(), idx);
    std::vector<std::string> labels = state.labels();
    labels.erase(labels.begin() + idx);
    return GaussianState(std::move(labels), state.mean()(keep), cov(keep, keep));
}

} // namespace mlhp
