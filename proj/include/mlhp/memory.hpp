#ifndef MLHP_MEMORY_HPP
#define MLHP_MEMORY_HPP

#include "mlhp/spin_algebra.hpp"

namespace mlhp {

/**
 * Added noise of a QND-and-feedback quantum memory around a product
 * reference state, in units of vacuum noise.
 *
 * Write: eta2_write = 1/kappa^2 with kappa = kt chi_z0.
 * Read-out: eta2_read = [4 Var(F_y) Var(F_z) - <F_x>^2] / (kappa^2 <T>^2),
 * bounded below by 1/(kt^2 chi_z0^2) with equality exactly for
 * minimum-uncertainty references.
 */
struct MemoryNoiseReport
{
    double kappa_tilde = 0.0;
    double kappa = 0.0;
    double kappa_prime = 0.0;
    double chi_z0_sq = 0.0; ///< 2 Var(F_z)/F
    double chi_y0_sq = 0.0; ///< 2 Var(F_y)/F
    double eta_sq_write = 0.0;
    double eta_sq_write_simulated = 0.0;
    double lower_bound = 0.0;

    bool read_computed = false;
    double varphi = 0.0;
    double vartheta = 0.0;
    double eta_sq_read = 0.0;
    double eta_sq_read_simulated = 0.0;
    /// 4 Var(F_y) Var(F_z) - <F_x>^2 - <T>^2 >= 0.
    double uncertainty_excess = 0.0;
    bool minimum_uncertainty = false;
    bool saturated = false;
};

/// Relative tolerance for saturation and minimum-uncertainty equality.
inline constexpr double saturation_tolerance = 1e-8;

/// Validates <F_y> = <F_z> = 0 and Var(F_z) > 0 (InvalidArgument).
MemoryNoiseReport memory_write_noise(SpinQuantum spin, const Vector& phi0, double kappa_tilde);

/// Write and read-out noise. Throws DegenerateGeometry when <T> = 0.
MemoryNoiseReport memory_read_noise(SpinQuantum spin, const Vector& phi0, double kappa_tilde,
                                    double kappa_prime);

/// Gaussian simulation of writing with coupling kappa and feedback gain
/// -1/kappa; returns Var(X_1'')/kappa^2 - Var(P_L^in).
double simulate_write_noise(double kappa);

/// Gaussian simulation of write followed by read-out with coupling
/// kappa_prime, tilted measurement of X_1 + (tan(vartheta)/cos(varphi)) X_2
/// and feedback onto the read pulse; returns the added noise in P_R^out
/// referred to P_L^in.
double simulate_read_noise(double kappa, double kappa_prime, double varphi, double vartheta);

} // namespace mlhp

#endif
