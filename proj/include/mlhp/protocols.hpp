#ifndef MLHP_PROTOCOLS_HPP
#define MLHP_PROTOCOLS_HPP

#include <vector>

#include "mlhp/gaussian.hpp"
#include "mlhp/hp_core.hpp"
#include "mlhp/spin_algebra.hpp"

namespace mlhp {

/**
 * Parameters shared by the squeezing protocols.
 *
 * K is the integrated internal-squeezing strength; kappa_tilde the
 * state-independent measurement coupling. The atom number only sets the
 * scale of collective quantities; every squeezing parameter is
 * N-independent.
 */
struct ProtocolParams
{
    SpinQuantum spin{8};
    double n_atoms = 1e6;
    double k_max = 1.0;
    double kappa_tilde = 2.0;
    int grid = 400;
    int ode_steps = 2000;
    /// Largest accepted change of chi3^2 under step halving.
    double ode_tolerance = 1e-8;
    /// Multiplies the measurement-rate prefactor of the covariance flow.
    /// Only the validate command's mutation check sets this to anything but 1.
    double ode_prefactor_scale = 1.0;

    /// Throws InvalidArgument on F = 0, grid < 2, ode_steps < 10, or a
    /// negative physical parameter.
    void validate() const;

    /// k_max * i / (grid - 1).
    double k_at(int i) const;
};

/**
 * Internal squeezing of the x-polarized coherent state under
 * exp(-i K T), with T diagonalized once so that every K costs O(d^2).
 */
class TwistingEvolution
{
public:
    explicit TwistingEvolution(SpinQuantum spin);

    const SpinOperatorSet& ops() const { return ops_; }
    SpinQuantum spin() const { return ops_.spin; }

    /// exp(-i K T) applied to a vector.
    Vector evolve(double k, const Vector& state) const;

    /// |phi_0(K)> = exp(-i K T)|F, m_x = F>.
    Vector reference(double k) const;

    /// Rotated frame {exp(-i K T)|F, m_x = F - a>}.
    ReferenceFrame frame(double k) const;

    /// J^z_{a0}(K) = <phi_a(K)|F_z|phi_0(K)> for a = 1..d-1.
    Vector jz_column(double k) const;

    /// Im J^z_{a0}(K), the weights of the P_a quadratures in J_z.
    RealVector jz_weights(double k) const { return jz_column(k).imag(); }

private:
    SpinOperatorSet ops_;
    Matrix eigenvectors_;
    RealVector eigenvalues_;

    Matrix propagator(double k) const;
};

struct SqueezingRow
{
    double k;
    double chi_sq;
    double zeta_sq; ///< NaN when the row is invalid
    double xi_sq;   ///< NaN when the row is invalid
    bool valid;     ///< false when <F_x> <= 0 makes zeta, xi undefined
};

/// chi^2 = 2 Var(J_z)/(N F), zeta^2 = 2 Var(J_z)/<J_x>,
/// xi^2 = 2 N F Var(J_z)/<J_x>^2 for the product state (x)^N |phi>.
SqueezingRow squeezing_parameters(const SpinOperatorSet& ops, const Vector& phi, double n_atoms);

std::vector<SqueezingRow> internal_curve(const ProtocolParams& params);

struct CurvePoint
{
    double k;
    double value;
};

/// Internal squeezing followed by QND measurement: [chi0^-2 + kt^2]^-1.
double chi1_closed_form(double chi0_sq, double kappa_tilde);
/// Same quantity from a QND + homodyne Gaussian pipeline with kappa = kt chi0.
double chi1_gaussian(double chi0_sq, double kappa_tilde);
std::vector<CurvePoint> chi1_curve(const ProtocolParams& params);

/// QND measurement on the coherent state, then internal squeezing K:
/// chi0^2(K) - (2/F) [Im J^z_10(K)]^2 / (1 + kt^-2).
double chi2_closed_form(const TwistingEvolution& twist, double k, double kappa_tilde);
/// Same quantity by conditioning the oscillators with a Gaussian pipeline
/// and summing 2N sum_a [Im J^z_a0]^2 Var(P_a).
double chi2_first_principles(const TwistingEvolution& twist, double k, double kappa_tilde);
std::vector<CurvePoint> chi2_curve(const ProtocolParams& params);

/**
 * Momentum covariance gamma(s) under simultaneous twisting and continuous
 * measurement, s in [0, 1]:
 *     d gamma/ds = -rate gamma v(s) v(s)^T gamma,  v(s) = Im J^z(K_total s),
 * gamma(0) = identity, classical RK4 with symmetrization after each step.
 */
RealMatrix integrate_gamma_flow(const TwistingEvolution& twist, double k_total, double rate,
                                int steps, std::vector<RealMatrix>* trajectory = nullptr);

struct Chi3Result
{
    double chi_sq;
    RealMatrix gamma;    ///< gamma(1), vacuum-one units
    double halving_change; ///< |chi3^2(steps) - chi3^2(2 steps)|
};

/// chi3^2 = (2/F) v(1)^T gamma(1) v(1). Throws NumericError when step
/// halving changes the result by more than params.ode_tolerance.
Chi3Result chi3(const TwistingEvolution& twist, double k_total, const ProtocolParams& params);
std::vector<CurvePoint> chi3_curve(const ProtocolParams& params);

/// chi3^2 from an explicit chain of light segments, each coupled with the
/// midpoint weights and measured (outcome 0).
double chi3_segment_chain(const TwistingEvolution& twist, double k_total, double kappa_tilde,
                          int segments);

struct Chi0Minimum
{
    double k;
    double chi_sq;
};

/// Grid scan over params' K grid refined by Brent's method.
Chi0Minimum find_chi0_minimum(const ProtocolParams& params);

/// |F, m_x = F>.
Vector coherent_x_state(SpinQuantum spin);

/// exp(-i theta F_x) exp(-i K T)|F, m_x = F>.
Vector twisted_state(SpinQuantum spin, double k, double theta = 0.0);

/**
 * Minimum-uncertainty state for (F_y, F_z): the kernel of F_z - i s F_y
 * rotated by exp(-i theta F_x). s < 1 squeezes F_z, s > 1 squeezes F_y,
 * s = 1 is the coherent state. Integer F only (otherwise the kernel is
 * empty and <F_z> cannot vanish).
 */
Vector intelligent_state(SpinQuantum spin, double squeeze, double theta = 0.0);

} // namespace mlhp

#endif
