#include "mlhp/hp_core.hpp"

#include <cmath>
#include <numbers>

#include "mlhp/errors.hpp"

namespace mlhp {

namespace {

// (O - <O>)|phi0>
Vector fluctuation_vector(const Matrix& op, const Vector& phi0)
{
    const Vector o_phi = op * phi0;
    const complex mean = phi0.dot(o_phi);
    return o_phi - mean * phi0;
}

} // namespace

OscillatorAssignment assign_quadrature(const Matrix& op, const Vector& phi0, double n_atoms,
                                       const GeometryTolerances& tol)
{
    require_hermitian(op, "operator");
    require_normalized(phi0, "reference state");
    if (op.rows() != phi0.size())
        throw InvalidArgument("operator and reference state dimensions differ");
    if (!(n_atoms > 0.0))
        throw InvalidArgument("atom number must be positive");

    const double xi0 = expectation(op, phi0);
    const Vector residual = fluctuation_vector(op, phi0);
    const double xi1 = residual.norm();
    if (xi1 * xi1 <= tol.norm * tol.norm)
        throw EigenstateError("reference state is an eigenstate of the operator; "
                              "use the quadratic expansion");

    return {xi0, xi1, residual / xi1, n_atoms * xi0, std::sqrt(2.0 * n_atoms) * xi1};
}

const char* to_string(PairClass c)
{
    switch (c) {
    case PairClass::parallel:
        return "parallel";
    case PairClass::orthogonal:
        return "orthogonal";
    case PairClass::general:
        return "general";
    case PairClass::degenerate:
        return "degenerate";
    }
    return "unknown";
}

double TwoOperatorGeometry::commutator() const
{
    if (classification == PairClass::degenerate)
        return 0.0;
    return overlap.imag() / (norm_a * norm_b);
}

TwoOperatorGeometry two_operator_geometry(const Matrix& a_op, const Matrix& b_op,
                                          const Vector& phi0, const GeometryTolerances& tol)
{
    require_hermitian(a_op, "operator A");
    require_hermitian(b_op, "operator B");
    require_normalized(phi0, "reference state");
    if (a_op.rows() != phi0.size() || b_op.rows() != phi0.size())
        throw InvalidArgument("operator and reference state dimensions differ");

    const Vector a = fluctuation_vector(a_op, phi0);
    const Vector b = fluctuation_vector(b_op, phi0);
    TwoOperatorGeometry g{a.norm(), b.norm(), a.dot(b), 0.0, 0.0, PairClass::degenerate};
    if (g.norm_a < tol.norm || g.norm_b < tol.norm)
        return g;

    g.varphi = g.overlap == complex(0.0) ? 0.0 : std::arg(g.overlap);
    // Gram-Schmidt residual keeps vartheta accurate near 0.
    const Vector b_perp = b - (g.overlap / (g.norm_a * g.norm_a)) * a;
    g.vartheta = std::atan2(b_perp.norm(), std::abs(g.overlap) / g.norm_a);

    if (g.vartheta < tol.angle)
        g.classification = PairClass::parallel;
    else if (std::abs(std::numbers::pi / 2 - g.vartheta) < tol.angle)
        g.classification = PairClass::orthogonal;
    else
        g.classification = PairClass::general;
    return g;
}

Matrix frame_matrix(const Matrix& op, const ReferenceFrame& frame)
{
    if (op.rows() != frame.dim() || op.cols() != frame.dim())
        throw InvalidArgument("operator and frame dimensions differ");
    return frame.vectors().adjoint() * op * frame.vectors();
}

LinearizationCoefficients linearize(const Matrix& op, const ReferenceFrame& frame)
{
    require_hermitian(op, "operator");
    const Matrix m = frame_matrix(op, frame);
    const Eigen::Index n = m.rows() - 1;
    return {m(0, 0), m.col(0).tail(n), m.bottomRightCorner(n, n)};
}

ReferenceFrame rotate_frame(const Matrix& generator, double strength, const ReferenceFrame& frame)
{
    if (generator.rows() != frame.dim())
        throw InvalidArgument("generator and frame dimensions differ");
    return ReferenceFrame(propagator(generator, strength) * frame.vectors());
}

} // namespace mlhp
