#include "mlhp/memory.hpp"

#include <cmath>

#include "mlhp/errors.hpp"
#include "mlhp/gaussian.hpp"

namespace mlhp {

namespace {

struct TransverseMoments
{
    double mean_fx;
    double mean_t;
    double var_fy;
    double var_fz;
};

TransverseMoments transverse_moments(SpinQuantum spin, const Vector& phi0)
{
    require_normalized(phi0, "reference state");
    if (phi0.size() != spin.dim())
        throw InvalidArgument("reference state dimension does not match 2F+1");
    const SpinOperatorSet ops = build_spin_operators(spin, Axis::x);
    const Moments my = mean_and_variance(ops.fy, phi0);
    const Moments mz = mean_and_variance(ops.fz, phi0);
    const double tol = 1e-9 * std::max(1.0, spin.value());
    if (std::abs(my.mean) > tol || std::abs(mz.mean) > tol)
        throw InvalidArgument("reference state must be polarized along x (<F_y> = <F_z> = 0)");
    if (mz.variance <= 1e-20)
        throw InvalidArgument("reference state is an F_z eigenstate; J_z has no oscillator");
    return {expectation(ops.fx, phi0), expectation(ops.t, phi0), my.variance, mz.variance};
}

bool close_relative(double a, double b, double rel)
{
    return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

} // namespace

double simulate_write_noise(double kappa)
{
    if (!(kappa > 0.0))
        throw InvalidArgument("write coupling must be positive");
    GaussianState state = GaussianState::vacuum({"A1", "L"});
    state = apply_qnd(state, "L", {"A1"}, QndCoupling::single(kappa));
    // Feedback P_1 <- P_1 - x/kappa leaves P_1'' = -X_L^in/kappa.
    state = measure_with_feedback(state, "L", {{"A1", true, -1.0 / kappa}});
    // X_1'' = X_1^in + kappa P_L^in; subtract the stored signal.
    return state.cov()(0, 0) / (kappa * kappa) - 1.0;
}

double simulate_read_noise(double kappa, double kappa_prime, double varphi, double vartheta)
{
    if (!(kappa > 0.0) || !(kappa_prime > 0.0))
        throw InvalidArgument("write and read couplings must be positive");
    const double tilt = std::tan(vartheta) / std::cos(varphi);

    GaussianState state = GaussianState::vacuum({"A1", "A2", "L", "R"});
    state = apply_qnd(state, "L", {"A1"}, QndCoupling::single(kappa));
    state = measure_with_feedback(state, "L", {{"A1", true, -1.0 / kappa}});

    state = apply_qnd(state, "R", {"A1"}, QndCoupling::single(kappa_prime));
    // Rotate so that A1 carries (X_1 + tilt X_2)/sqrt(1 + tilt^2), then
    // measure it and feed x' back onto the read pulse: P_R <- P_R - x'/kappa'.
    state = beam_splitter(state, "A1", "A2", std::atan(tilt));
    const double scale = std::sqrt(1.0 + tilt * tilt);
    state = measure_with_feedback(state, "A1", {{"R", true, -scale / kappa_prime}});

    // P_R^out = -(kappa/kappa')(P_L^in + noise); P_L^in is vacuum.
    const double var_pr = state.cov()(state.p_index("R"), state.p_index("R"));
    const double ratio = kappa_prime / kappa;
    return ratio * ratio * var_pr - 1.0;
}

MemoryNoiseReport memory_write_noise(SpinQuantum spin, const Vector& phi0, double kappa_tilde)
{
    if (!(kappa_tilde > 0.0) || !std::isfinite(kappa_tilde))
        throw InvalidArgument("kappa_tilde must be positive");
    const double f = spin.value();
    const TransverseMoments m = transverse_moments(spin, phi0);

    MemoryNoiseReport r;
    r.kappa_tilde = kappa_tilde;
    r.chi_z0_sq = 2.0 * m.var_fz / f;
    r.chi_y0_sq = 2.0 * m.var_fy / f;
    r.kappa = kappa_tilde * std::sqrt(r.chi_z0_sq);
    // The oscillator assigned to J_z is in vacuum for any product reference.
    r.eta_sq_write = 1.0 / (r.kappa * r.kappa);
    r.lower_bound = r.eta_sq_write;
    r.eta_sq_write_simulated = simulate_write_noise(r.kappa);
    if (!close_relative(r.eta_sq_write, r.eta_sq_write_simulated, 1e-10))
        throw NumericError("write noise: Gaussian simulation disagrees with 1/kappa^2");

    // chi_y^2 / kt^2 whenever Var(J_y) Var(J_z) sits at the coherent-state value.
    if (close_relative(4.0 * m.var_fy * m.var_fz, f * f, 1e-10) &&
        !close_relative(r.eta_sq_write, r.chi_y0_sq / (kappa_tilde * kappa_tilde), 1e-10))
        throw NumericError("write noise differs from chi_y^2 / kappa_tilde^2");
    return r;
}

MemoryNoiseReport memory_read_noise(SpinQuantum spin, const Vector& phi0, double kappa_tilde,
                                    double kappa_prime)
{
    if (!(kappa_prime > 0.0) || !std::isfinite(kappa_prime))
        throw InvalidArgument("kappa_prime must be positive");
    MemoryNoiseReport r = memory_write_noise(spin, phi0, kappa_tilde);
    r.kappa_prime = kappa_prime;

    const TransverseMoments m = transverse_moments(spin, phi0);
    if (std::abs(m.mean_t) <= 1e-9 * std::max(1.0, spin.value() * spin.value()))
        throw DegenerateGeometry("<T> = 0 in the reference state: the read-out angle "
                                 "tan(varphi) = -<F_x>/<T> is undefined");

    const double product = 4.0 * m.var_fy * m.var_fz;
    const double robertson = m.mean_fx * m.mean_fx + m.mean_t * m.mean_t;
    r.uncertainty_excess = product - robertson;
    r.minimum_uncertainty = std::abs(r.uncertainty_excess) <= saturation_tolerance * product;

    r.varphi = std::atan(-m.mean_fx / m.mean_t);
    r.vartheta = std::acos(std::sqrt(std::min(1.0, robertson / product)));
    r.eta_sq_read = (product - m.mean_fx * m.mean_fx) / (r.kappa * r.kappa * m.mean_t * m.mean_t);
    r.read_computed = true;

    if (r.eta_sq_read < r.lower_bound - 1e-10 * std::max(1.0, r.lower_bound))
        throw NumericError("read-out noise below the Cauchy-Schwarz bound");
    r.saturated = std::abs(r.eta_sq_read - r.lower_bound) <= saturation_tolerance * r.lower_bound;

    r.eta_sq_read_simulated = simulate_read_noise(r.kappa, kappa_prime, r.varphi, r.vartheta);
    if (!close_relative(r.eta_sq_read, r.eta_sq_read_simulated, 1e-8))
        throw NumericError("read-out noise: Gaussian simulation disagrees with closed form");
    return r;
}

} // namespace mlhp
