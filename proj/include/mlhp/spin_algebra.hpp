#ifndef MLHP_SPIN_ALGEBRA_HPP
#define MLHP_SPIN_ALGEBRA_HPP

#include <complex>

#include <Eigen/Dense>

namespace mlhp {

using complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

/// Tolerance for Hermiticity checks (absolute, on the largest entry of
/// A - A^dagger).
inline constexpr double hermitian_tolerance = 1e-10;
/// Tolerance on the norm of a single-particle state.
inline constexpr double norm_tolerance = 1e-12;

/**
 * Spin quantum number F, stored as the integer 2F so that half-integer
 * spins are exact.
 */
class SpinQuantum
{
public:
    /// Throws InvalidArgument when twice_f < 0.
    explicit SpinQuantum(int twice_f);

    /// Accepts 0, 0.5, 1, 1.5, ...; anything else throws InvalidArgument.
    static SpinQuantum from_value(double f);

    double value() const { return 0.5 * twice_f_; }
    int twice() const { return twice_f_; }
    int dim() const { return twice_f_ + 1; }
    bool is_integer() const { return twice_f_ % 2 == 0; }

    bool operator==(const SpinQuantum&) const = default;

private:
    int twice_f_;
};

/// Quantization axis of the basis in which operators are represented.
enum class Axis { x, z };

/**
 * Single-particle angular momentum operators in a fixed basis.
 *
 * With Axis::x the basis vector at index a is |F, m_x = F - a>, so f_x is
 * diagonal with entries F, F-1, ..., -F. The x-basis is the Condon-Shortley
 * z-basis of the cyclically relabelled frame (x, y, z) -> (z', x', y'),
 * which is the rotation taking z to x. In that basis
 * f_y|0> = sqrt(F/2)|1> and f_z|0> = i sqrt(F/2)|1>.
 */
struct SpinOperatorSet
{
    SpinQuantum spin;
    Axis axis;
    Matrix fx;
    Matrix fy;
    Matrix fz;
    Matrix fx_plus;  ///< F_y + i F_z, raises m_x
    Matrix fx_minus; ///< F_y - i F_z
    Matrix t;        ///< {F_y, F_z}, the two-axis counter-twisting generator
    Matrix v;        ///< F_y^2 - F_z^2
};

SpinOperatorSet build_spin_operators(SpinQuantum spin, Axis axis = Axis::x);

bool is_hermitian(const Matrix& m, double tol = hermitian_tolerance);
void require_hermitian(const Matrix& m, const char* what);
void require_normalized(const Vector& state, const char* what);

/// Unit vector e_index in C^dim.
Vector basis_state(int dim, int index);

/// exp(-i * strength * generator) for a Hermitian generator, computed from
/// its eigendecomposition.
Matrix propagator(const Matrix& generator, double strength);

/// exp(-i * strength * generator) |state>.
Vector evolve_state(const Matrix& generator, double strength, const Vector& state);

struct Moments
{
    double mean;
    double variance;
};

/// <O> and <O^2> - <O>^2 in a normalized state. Variance is clamped at 0
/// once it is within rounding of it.
Moments mean_and_variance(const Matrix& op, const Vector& state);

/// Real expectation value of a Hermitian operator.
double expectation(const Matrix& op, const Vector& state);

/**
 * An orthonormal single-particle basis {|phi_a>}, stored as the columns of
 * a unitary matrix. Column 0 is the reference state |phi_0>.
 */
class ReferenceFrame
{
public:
    /// Throws InvalidArgument unless the columns are orthonormal to 1e-10.
    explicit ReferenceFrame(Matrix columns);

    /// The computational basis of dimension dim.
    static ReferenceFrame identity(int dim);

    /// An orthonormal basis whose first vector is phi0 (Householder
    /// completion).
    static ReferenceFrame completing(const Vector& phi0);

    int dim() const { return static_cast<int>(columns_.cols()); }
    const Matrix& vectors() const { return columns_; }
    Vector vector(int index) const { return columns_.col(index); }
    Vector reference() const { return columns_.col(0); }

private:
    Matrix columns_;
};

} // namespace mlhp

#endif
