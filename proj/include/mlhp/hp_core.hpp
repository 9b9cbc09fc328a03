#ifndef MLHP_HP_CORE_HPP
#define MLHP_HP_CORE_HPP

#include "mlhp/spin_algebra.hpp"

namespace mlhp {

/// Thresholds for classifying operator pairs and rejecting eigenstates.
struct GeometryTolerances
{
    double angle = 1e-8; ///< rad
    double norm = 1e-10;
};

/**
 * Assignment of a collective operator O = sum_j O^(j) to one oscillator
 * quadrature around the product state (x)^N |phi0>:
 *
 *     O ~ collective_mean + collective_scale * X_1,
 *
 * with X_1 of vacuum variance 1/2 (physical units).
 */
struct OscillatorAssignment
{
    double xi0;              ///< <phi0|O|phi0>
    double xi1;              ///< single-particle standard deviation, > 0
    Vector phi1;             ///< (O - xi0)|phi0> / xi1, orthogonal to phi0
    double collective_mean;  ///< N * xi0
    double collective_scale; ///< sqrt(2N) * xi1
};

/// Throws EigenstateError when Var(O) <= tol.norm^2, i.e. when phi0 is an
/// eigenstate and only the quadratic expansion applies.
OscillatorAssignment assign_quadrature(const Matrix& op, const Vector& phi0, double n_atoms,
                                       const GeometryTolerances& tol = {});

enum class PairClass { parallel, orthogonal, general, degenerate };

const char* to_string(PairClass c);

/**
 * Relative geometry of |a> = (A - <A>)|phi0> and |b> = (B - <B>)|phi0>.
 *
 * If A is assigned X_A and B is assigned P_B,
 *     P_B = (X_1 cos(varphi) + P_1 sin(varphi)) cos(vartheta) + P_2 sin(vartheta).
 */
struct TwoOperatorGeometry
{
    double norm_a;
    double norm_b;
    complex overlap; ///< <a|b>
    double varphi;   ///< arg <a|b>, 0 when <a|b> = 0
    double vartheta; ///< in [0, pi/2]; cos = |<a|b>| / (|a||b|)
    PairClass classification;

    /// Signed [X_A, P_B]/i = sin(varphi) cos(vartheta); 0 when degenerate.
    double commutator() const;
};

TwoOperatorGeometry two_operator_geometry(const Matrix& a, const Matrix& b, const Vector& phi0,
                                          const GeometryTolerances& tol = {});

/// O_{ab} = <phi_a|O|phi_b> in a frame, split by reference index 0.
struct LinearizationCoefficients
{
    complex o00;
    Vector o_alpha0;     ///< O_{a0}, a = 1..d-1
    Matrix o_alphabeta;  ///< O_{ab}, a,b = 1..d-1

    /// Vacuum standard deviation of the linear term: sqrt(sum |O_{a0}|^2).
    double linear_norm() const { return o_alpha0.norm(); }
};

LinearizationCoefficients linearize(const Matrix& op, const ReferenceFrame& frame);

/// Full matrix <phi_a|O|phi_b>.
Matrix frame_matrix(const Matrix& op, const ReferenceFrame& frame);

/// Every basis vector evolved by exp(-i strength generator).
ReferenceFrame rotate_frame(const Matrix& generator, double strength, const ReferenceFrame& frame);

} // namespace mlhp

#endif
