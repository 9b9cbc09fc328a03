#include "mlhp/spin_algebra.hpp"

#include <cmath>
#include <string>

#include "mlhp/errors.hpp"

namespace mlhp {

SpinQuantum::SpinQuantum(int twice_f) : twice_f_(twice_f)
{
    if (twice_f < 0)
        throw InvalidArgument("spin quantum number must be non-negative, got 2F = " +
                              std::to_string(twice_f));
}

SpinQuantum SpinQuantum::from_value(double f)
{
    const double twice = 2.0 * f;
    const double rounded = std::round(twice);
    if (!std::isfinite(f) || f < 0.0 || std::abs(twice - rounded) > 1e-12)
        throw InvalidArgument("F must be a non-negative multiple of 1/2, got " +
                              std::to_string(f));
    return SpinQuantum(static_cast<int>(rounded));
}

SpinOperatorSet build_spin_operators(SpinQuantum spin, Axis axis)
{
    const int d = spin.dim();
    const double f = spin.value();
    const complex i(0.0, 1.0);

    // Condon-Shortley, index k <-> m = F - k.
    Matrix jz = Matrix::Zero(d, d);
    Matrix jplus = Matrix::Zero(d, d);
    for (int k = 0; k < d; ++k) {
        const double m = f - k;
        jz(k, k) = m;
        if (k > 0)
            jplus(k - 1, k) = std::sqrt(f * (f + 1.0) - m * (m + 1.0));
    }
    const Matrix jminus = jplus.adjoint();
    const Matrix jx = 0.5 * (jplus + jminus);
    const Matrix jy = (jplus - jminus) / (2.0 * i);

    SpinOperatorSet ops{spin, axis, {}, {}, {}, {}, {}, {}, {}};
    if (axis == Axis::z) {
        ops.fx = jx;
        ops.fy = jy;
        ops.fz = jz;
    } else {
        ops.fx = jz;
        ops.fy = jx;
        ops.fz = jy;
    }
    ops.fx_plus = ops.fy + i * ops.fz;
    ops.fx_minus = ops.fy - i * ops.fz;
    ops.t = ops.fy * ops.fz + ops.fz * ops.fy;
    ops.v = ops.fy * ops.fy - ops.fz * ops.fz;
    return ops;
}

bool is_hermitian(const Matrix& m, double tol)
{
    if (m.rows() != m.cols())
        return false;
    if (m.size() == 0)
        return true;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

void require_hermitian(const Matrix& m, const char* what)
{
    if (!is_hermitian(m))
        throw InvalidArgument(std::string(what) + " must be a square Hermitian matrix");
}

void require_normalized(const Vector& state, const char* what)
{
    if (state.size() == 0 || std::abs(state.norm() - 1.0) > norm_tolerance)
        throw InvalidArgument(std::string(what) + " must be a unit vector");
}

Vector basis_state(int dim, int index)
{
    if (index < 0 || index >= dim)
        throw InvalidArgument("basis index out of range");
    Vector e = Vector::Zero(dim);
    e(index) = 1.0;
    return e;
}

Matrix propagator(const Matrix& generator, double strength)
{
    require_hermitian(generator, "generator");
    const Matrix h = 0.5 * (generator + generator.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> eig(h);
    const RealVector& w = eig.eigenvalues();
    Vector phases(w.size());
    for (Eigen::Index k = 0; k < w.size(); ++k)
        phases(k) = std::polar(1.0, -strength * w(k));
    return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

Vector evolve_state(const Matrix& generator, double strength, const Vector& state)
{
    if (state.size() != generator.rows())
        throw InvalidArgument("state and generator dimensions differ");
    return propagator(generator, strength) * state;
}

double expectation(const Matrix& op, const Vector& state)
{
    return state.dot(op * state).real();
}

Moments mean_and_variance(const Matrix& op, const Vector& state)
{
    require_hermitian(op, "observable");
    if (state.size() != op.rows())
        throw InvalidArgument("state and observable dimensions differ");
    const Vector o_state = op * state;
    const double mean = state.dot(o_state).real();
    // <O^2> = |O psi|^2 for Hermitian O.
    const double variance = o_state.squaredNorm() - mean * mean;
    return {mean, variance < 0.0 ? 0.0 : variance};
}

ReferenceFrame::ReferenceFrame(Matrix columns) : columns_(std::move(columns))
{
    if (columns_.rows() != columns_.cols() || columns_.rows() == 0)
        throw InvalidArgument("reference frame must be a square, non-empty basis");
    const Matrix gram = columns_.adjoint() * columns_;
    const double err = (gram - Matrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
    if (err > 1e-10)
        throw InvalidArgument("reference frame vectors are not orthonormal");
}

ReferenceFrame ReferenceFrame::identity(int dim)
{
    return ReferenceFrame(Matrix::Identity(dim, dim));
}

ReferenceFrame ReferenceFrame::completing(const Vector& phi0)
{
    require_normalized(phi0, "reference state");
    Eigen::HouseholderQR<Matrix> qr{Matrix(phi0)};
    Matrix q = qr.householderQ();
    // Q's first column equals phi0 up to a phase; remove it.
    const complex phase = q.col(0).dot(phi0);
    q.col(0) *= phase;
    return ReferenceFrame(std::move(q));
}

} // namespace mlhp
