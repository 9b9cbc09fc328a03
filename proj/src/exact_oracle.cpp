#include "mlhp/exact_oracle.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <ostream>
#include <string>

#include "mlhp/errors.hpp"
#include "mlhp/hp_core.hpp"

namespace mlhp {

std::size_t symmetric_dimension(int n_atoms, int levels)
{
    if (n_atoms < 0 || levels < 1)
        return 0;
    // C(N+d-1, d-1) built incrementally; each partial product is itself a
    // binomial coefficient so the division is exact.
    const std::size_t max = std::numeric_limits<std::size_t>::max();
    std::size_t result = 1;
    for (int k = 1; k < levels; ++k) {
        const std::size_t num = static_cast<std::size_t>(n_atoms + k);
        if (result > max / num)
            return max;
        result = result * num / static_cast<std::size_t>(k);
    }
    return result;
}

namespace {

void enumerate_into(int remaining, int level, OccupationVector& current,
                    std::vector<OccupationVector>& out)
{
    const int levels = static_cast<int>(current.size());
    if (level == levels - 1) {
        current[level] = remaining;
        out.push_back(current);
        return;
    }
    for (int n = remaining; n >= 0; --n) {
        current[level] = n;
        enumerate_into(remaining - n, level + 1, current, out);
    }
}

} // namespace

std::vector<OccupationVector> enumerate_basis(int n_atoms, int levels, std::size_t cap)
{
    if (n_atoms < 1 || levels < 1)
        throw InvalidArgument("need N >= 1 and d >= 1");
    const std::size_t dim = symmetric_dimension(n_atoms, levels);
    if (dim > cap)
        throw CapExceeded("symmetric subspace dimension " + std::to_string(dim) +
                          " exceeds cap " + std::to_string(cap));
    std::vector<OccupationVector> out;
    out.reserve(dim);
    OccupationVector current(static_cast<std::size_t>(levels), 0);
    enumerate_into(n_atoms, 0, current, out);
    return out;
}

SymmetricSpace::SymmetricSpace(int n_atoms, int levels, std::size_t cap)
    : n_atoms_(n_atoms), levels_(levels), basis_(enumerate_basis(n_atoms, levels, cap))
{
    for (std::size_t k = 0; k < basis_.size(); ++k)
        index_.emplace(basis_[k], k);
}

std::size_t SymmetricSpace::index_of(const OccupationVector& occ) const
{
    const auto it = index_.find(occ);
    return it == index_.end() ? basis_.size() : it->second;
}

Matrix SymmetricSpace::sigma(int alpha, int beta) const
{
    Matrix coeffs = Matrix::Zero(levels_, levels_);
    coeffs(alpha, beta) = 1.0;
    return collective(coeffs);
}

Matrix SymmetricSpace::collective(const Matrix& coeffs) const
{
    if (coeffs.rows() != levels_ || coeffs.cols() != levels_)
        throw InvalidArgument("coefficient matrix must be d x d");
    const Eigen::Index dim = static_cast<Eigen::Index>(basis_.size());
    Matrix out = Matrix::Zero(dim, dim);
    OccupationVector target;
    for (Eigen::Index col = 0; col < dim; ++col) {
        const OccupationVector& occ = basis_[static_cast<std::size_t>(col)];
        for (int a = 0; a < levels_; ++a) {
            out(col, col) += coeffs(a, a) * static_cast<double>(occ[a]);
            for (int b = 0; b < levels_; ++b) {
                if (a == b || occ[b] == 0 || coeffs(a, b) == complex(0.0))
                    continue;
                target = occ;
                --target[b];
                ++target[a];
                const double amp = std::sqrt(static_cast<double>(occ[a] + 1) * occ[b]);
                out(static_cast<Eigen::Index>(index_of(target)), col) += coeffs(a, b) * amp;
            }
        }
    }
    return out;
}

SymmetricState::SymmetricState(std::shared_ptr<const SymmetricSpace> space, Vector amplitudes)
    : space_(std::move(space)), amplitudes_(std::move(amplitudes))
{
    if (!space_)
        throw InvalidArgument("symmetric state needs a space");
    if (static_cast<std::size_t>(amplitudes_.size()) != space_->size())
        throw InvalidArgument("amplitude vector does not match the basis size");
}

complex SymmetricState::amplitude(const OccupationVector& occ) const
{
    const std::size_t k = space_->index_of(occ);
    return k == space_->size() ? complex(0.0) : amplitudes_(static_cast<Eigen::Index>(k));
}

SymmetricState apply_sigma(int alpha, int beta, const SymmetricState& state)
{
    const SymmetricSpace& space = state.space();
    if (alpha < 0 || beta < 0 || alpha >= space.levels() || beta >= space.levels())
        throw InvalidArgument("level index out of range");

    Vector out = Vector::Zero(state.amplitudes().size());
    OccupationVector target;
    for (std::size_t k = 0; k < space.size(); ++k) {
        const complex amp = state.amplitudes()(static_cast<Eigen::Index>(k));
        if (amp == complex(0.0))
            continue;
        const OccupationVector& occ = space.occupation(k);
        if (alpha == beta) {
            out(static_cast<Eigen::Index>(k)) += static_cast<double>(occ[alpha]) * amp;
            continue;
        }
        if (occ[beta] == 0)
            continue;
        target = occ;
        --target[beta];
        ++target[alpha];
        const double factor = std::sqrt(static_cast<double>(occ[alpha] + 1) * occ[beta]);
        out(static_cast<Eigen::Index>(space.index_of(target))) += factor * amp;
    }
    return SymmetricState(state.space_ptr(), std::move(out));
}

SymmetricState product_state(const Vector& phi, const ReferenceFrame& frame,
                             std::shared_ptr<const SymmetricSpace> space)
{
    require_normalized(phi, "single-particle state");
    if (!space || phi.size() != frame.dim() || frame.dim() != space->levels())
        throw InvalidArgument("state, frame and space dimensions differ");

    const Vector c = frame.vectors().adjoint() * phi;
    const double log_n_fact = std::lgamma(space->atoms() + 1.0);
    Vector amps(static_cast<Eigen::Index>(space->size()));
    for (std::size_t k = 0; k < space->size(); ++k) {
        const OccupationVector& occ = space->occupation(k);
        double log_weight = log_n_fact;
        complex product(1.0);
        for (int a = 0; a < space->levels(); ++a) {
            log_weight -= std::lgamma(occ[a] + 1.0);
            for (int p = 0; p < occ[a]; ++p)
                product *= c(a);
        }
        amps(static_cast<Eigen::Index>(k)) = std::exp(0.5 * log_weight) * product;
    }
    return SymmetricState(std::move(space), std::move(amps));
}

Moments collective_operator_moments(const Matrix& op, const SymmetricState& state,
                                    const ReferenceFrame& frame)
{
    require_hermitian(op, "operator");
    if (std::abs(state.norm() - 1.0) > 1e-10)
        throw InvalidArgument("collective moments need a normalized state");
    const Matrix collective = state.space().collective(frame_matrix(op, frame));
    const Vector o_psi = collective * state.amplitudes();
    const double mean = state.amplitudes().dot(o_psi).real();
    const double variance = o_psi.squaredNorm() - mean * mean;
    return {mean, variance < 0.0 ? 0.0 : variance};
}

void write_matrix_csv(std::ostream& out, const Matrix& m)
{
    const auto old_precision = out.precision(17);
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c > 0)
                out << ',';
            out << m(r, c).real() << ',' << m(r, c).imag();
        }
        out << '\n';
    }
    out.precision(old_precision);
}

void write_matrix_binary(std::ostream& out, const Matrix& m)
{
    static_assert(std::endian::native == std::endian::little,
                  "binary dump layout assumes a little-endian host");
    const std::int64_t rows = m.rows();
    const std::int64_t cols = m.cols();
    out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
    out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            const double parts[2] = {m(r, c).real(), m(r, c).imag()};
            out.write(reinterpret_cast<const char*>(parts), sizeof parts);
        }
}

} // namespace mlhp
