#ifndef MLHP_GAUSSIAN_HPP
#define MLHP_GAUSSIAN_HPP

#include <random>
#include <string>
#include <vector>

#include "mlhp/spin_algebra.hpp"

namespace mlhp {

/**
 * Gaussian state of labelled bosonic modes.
 *
 * Ordering is (X_1, P_1, ..., X_M, P_M). The covariance uses the
 * vacuum = identity convention, i.e. it is twice the physical covariance
 * <{dy_i, dy_j}>/2. Physical variances are therefore cov/2.
 */
class GaussianState
{
public:
    /// Validates symmetry (1e-10), distinct labels, and the uncertainty
    /// relation cov + i Omega >= -1e-8.
    GaussianState(std::vector<std::string> labels, RealVector mean, RealMatrix cov);

    /// All modes in vacuum.
    static GaussianState vacuum(std::vector<std::string> labels);

    const std::vector<std::string>& labels() const { return labels_; }
    const RealVector& mean() const { return mean_; }
    const RealMatrix& cov() const { return cov_; }
    int mode_count() const { return static_cast<int>(labels_.size()); }

    bool has_mode(const std::string& label) const;
    /// Mode position; throws InvalidArgument for an unknown label.
    int mode_index(const std::string& label) const;
    int x_index(const std::string& label) const { return 2 * mode_index(label); }
    int p_index(const std::string& label) const { return 2 * mode_index(label) + 1; }

    /// Variance of the linear combination c . y over all 2M quadratures,
    /// vacuum-one units.
    double quadrature_variance(const RealVector& coefficients) const;

private:
    std::vector<std::string> labels_;
    RealVector mean_;
    RealMatrix cov_;
};

/// Standard symplectic form with [X, P] = i blocks; Gamma + i Omega >= 0.
RealMatrix symplectic_form(int modes);

/// Smallest eigenvalue of cov + i Omega.
double uncertainty_margin(const GaussianState& state);

/**
 * QND coupling between one light mode and a set of atomic modes:
 *     X_a <- X_a + kappa w_a P_L,   X_L <- X_L + kappa sum_a w_a P_a.
 * Weights are normalized on construction; their norm is folded into kappa.
 */
class QndCoupling
{
public:
    QndCoupling(double kappa, RealVector weights);

    /// Single atomic oscillator, weight 1.
    static QndCoupling single(double kappa) { return QndCoupling(kappa, RealVector::Ones(1)); }

    double kappa() const { return kappa_; }
    const RealVector& atom_weights() const { return weights_; }

private:
    double kappa_;
    RealVector weights_;
};

/// Symplectic matrix of apply_qnd on the state's mode ordering.
RealMatrix qnd_matrix(const GaussianState& state, const std::string& light_mode,
                      const std::vector<std::string>& atom_modes, const QndCoupling& coupling);

/// Appends an uncorrelated vacuum mode.
GaussianState add_vacuum_mode(const GaussianState& state, const std::string& label);

GaussianState apply_symplectic(const GaussianState& state, const RealMatrix& s);

GaussianState apply_qnd(const GaussianState& state, const std::string& light_mode,
                        const std::vector<std::string>& atom_modes, const QndCoupling& coupling);

/// Passive two-mode mixer: (X_a, X_b) and (P_a, P_b) rotated by theta,
/// X_a' = cos X_a + sin X_b, X_b' = -sin X_a + cos X_b.
GaussianState beam_splitter(const GaussianState& state, const std::string& mode_a,
                            const std::string& mode_b, double theta);

/// Homodyne measurement of X on one mode with the given outcome; the mode
/// is removed from the returned state. Throws NumericError when Var(X) <= 0.
GaussianState measure_x(const GaussianState& state, const std::string& mode, double outcome);

GaussianState displace(const GaussianState& state, const std::string& mode, double dx, double dp);

/// Draw an X outcome from the mode's marginal (mean, cov_XX / 2).
double sample_x(const GaussianState& state, const std::string& mode, std::mt19937_64& rng);

/// Linear feedback of a measured outcome onto one quadrature of a mode:
/// shift by gain * (outcome - <X_measured>).
struct Feedback
{
    std::string mode;
    bool on_p; ///< false: X quadrature, true: P quadrature
    double gain;
};

/**
 * Measure X on a mode, feed the outcome back, and average over outcomes.
 * Equals the Heisenberg-picture input-output map of measurement plus
 * feedback; the measured mode is removed.
 */
GaussianState measure_with_feedback(const GaussianState& state, const std::string& mode,
                                    const std::vector<Feedback>& feedback);

} // namespace mlhp

#endif
