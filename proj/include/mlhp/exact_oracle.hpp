#ifndef MLHP_EXACT_ORACLE_HPP
#define MLHP_EXACT_ORACLE_HPP

#include <cstddef>
#include <iosfwd>
#include <map>
#include <memory>
#include <vector>

#include "mlhp/spin_algebra.hpp"

namespace mlhp {

/// Occupations (n_0, ..., n_{d-1}) of the single-particle frame vectors.
using OccupationVector = std::vector<int>;

inline constexpr std::size_t default_basis_cap = 100000;

/// Binomial C(N+d-1, d-1), saturating at SIZE_MAX.
std::size_t symmetric_dimension(int n_atoms, int levels);

/// All occupation vectors with sum N, lexicographically descending in
/// (n_0, n_1, ...): (N,0,..,0) first, (0,..,0,N) last.
std::vector<OccupationVector> enumerate_basis(int n_atoms, int levels,
                                              std::size_t cap = default_basis_cap);

/**
 * The permutation-symmetric subspace of N particles with d levels, in the
 * occupation-number basis of a given single-particle frame. Collective
 * operators are dense matrices in this basis.
 */
class SymmetricSpace
{
public:
    SymmetricSpace(int n_atoms, int levels, std::size_t cap = default_basis_cap);

    int atoms() const { return n_atoms_; }
    int levels() const { return levels_; }
    std::size_t size() const { return basis_.size(); }
    const std::vector<OccupationVector>& basis() const { return basis_; }
    const OccupationVector& occupation(std::size_t index) const { return basis_[index]; }

    /// Index of an occupation vector, or size() if absent.
    std::size_t index_of(const OccupationVector& occ) const;

    /// Sigma_{ab} = sum_j |phi_a>_j <phi_b|_j.
    Matrix sigma(int alpha, int beta) const;

    /// sum_{ab} coeffs(a, b) Sigma_{ab}.
    Matrix collective(const Matrix& coeffs) const;

private:
    int n_atoms_;
    int levels_;
    std::vector<OccupationVector> basis_;
    std::map<OccupationVector, std::size_t> index_;
};

/// Amplitudes over a SymmetricSpace basis. Operator images are allowed to be
/// unnormalized.
class SymmetricState
{
public:
    SymmetricState(std::shared_ptr<const SymmetricSpace> space, Vector amplitudes);

    const SymmetricSpace& space() const { return *space_; }
    std::shared_ptr<const SymmetricSpace> space_ptr() const { return space_; }
    const Vector& amplitudes() const { return amplitudes_; }

    /// Amplitude at an occupation vector; 0 for vectors not in the basis.
    complex amplitude(const OccupationVector& occ) const;

    double norm() const { return amplitudes_.norm(); }

private:
    std::shared_ptr<const SymmetricSpace> space_;
    Vector amplitudes_;
};

/// Sigma_{ab} applied directly to the amplitude map.
SymmetricState apply_sigma(int alpha, int beta, const SymmetricState& state);

/// (x)^N |phi>, with phi expanded in the frame: c_a = <phi_a|phi>.
SymmetricState product_state(const Vector& phi, const ReferenceFrame& frame,
                             std::shared_ptr<const SymmetricSpace> space);

/// Mean and variance of the collective operator sum_j O^(j).
Moments collective_operator_moments(const Matrix& op, const SymmetricState& state,
                                    const ReferenceFrame& frame);

/// Row-major CSV dump: one row per basis index, "re,im" pairs separated by
/// commas, 17 significant digits.
void write_matrix_csv(std::ostream& out, const Matrix& m);

/// Binary dump: int64 rows, int64 cols, then rows*cols pairs of little-endian
/// IEEE-754 doubles (re, im) in row-major order.
void write_matrix_binary(std::ostream& out, const Matrix& m);

} // namespace mlhp

#endif
