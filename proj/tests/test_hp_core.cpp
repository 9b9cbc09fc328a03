#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mlhp/errors.hpp"
#include "mlhp/hp_core.hpp"
#include "mlhp/protocols.hpp"

using namespace mlhp;

namespace {

Vector random_state(int dim, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Vector v(dim);
    for (int a = 0; a < dim; ++a)
        v(a) = complex(g(rng), g(rng));
    return v / v.norm();
}

} // namespace

TEST_CASE("quadrature assignment on the coherent state")
{
    const SpinOperatorSet s = build_spin_operators(SpinQuantum(8));
    const Vector phi0 = coherent_x_state(SpinQuantum(8));
    const OscillatorAssignment y = assign_quadrature(s.fy, phi0, 1000.0);
    CHECK(y.xi0 == doctest::Approx(0.0));
    CHECK(y.xi1 == doctest::Approx(std::sqrt(2.0)));
    CHECK(std::abs(y.phi1(1) - complex(1.0, 0.0)) < 1e-14);
    CHECK(y.collective_scale == doctest::Approx(std::sqrt(2000.0 * 2.0)));
    // Vacuum variance 1/2 reproduces N Var(F_y) = N F / 2.
    CHECK(y.collective_scale * y.collective_scale * 0.5 == doctest::Approx(1000.0 * 2.0));

    const OscillatorAssignment z = assign_quadrature(s.fz, phi0, 10.0);
    CHECK(std::abs(z.phi1(1) - complex(0.0, 1.0)) < 1e-14);

    CHECK_THROWS_AS(assign_quadrature(s.fx, phi0, 10.0), EigenstateError);
    CHECK_THROWS_AS(assign_quadrature(s.fy, phi0, 0.0), InvalidArgument);
}

TEST_CASE("phi1 is orthogonal to phi0 and unit norm for random states")
{
    std::mt19937_64 rng(7);
    const SpinOperatorSet s = build_spin_operators(SpinQuantum(5));
    for (int trial = 0; trial < 20; ++trial) {
        const Vector phi0 = random_state(6, rng);
        const OscillatorAssignment a = assign_quadrature(s.fz, phi0, 1.0);
        CHECK(std::abs(phi0.dot(a.phi1)) < 1e-12);
        CHECK(a.phi1.norm() == doctest::Approx(1.0));
        CHECK(a.xi1 * a.xi1 == doctest::Approx(mean_and_variance(s.fz, phi0).variance));
    }
}

TEST_CASE("two-operator geometry of F_y, F_z on the coherent state")
{
    const SpinOperatorSet s = build_spin_operators(SpinQuantum(8));
    const Vector phi0 = coherent_x_state(SpinQuantum(8));
    const TwoOperatorGeometry g = two_operator_geometry(s.fy, s.fz, phi0);
    CHECK(g.classification == PairClass::parallel);
    CHECK(g.varphi == doctest::Approx(std::numbers::pi / 2));
    CHECK(g.vartheta < 1e-12);
    CHECK(g.commutator() == doctest::Approx(1.0));
    CHECK(std::string(to_string(g.classification)) == "parallel");

    // Swapping the roles flips the sign.
    CHECK(two_operator_geometry(s.fz, s.fy, phi0).commutator() == doctest::Approx(-1.0));
    // An eigenstate gives no oscillator for F_x.
    CHECK(two_operator_geometry(s.fx, s.fy, phi0).classification == PairClass::degenerate);
}

TEST_CASE("orthogonal and general pairs")
{
    const SpinOperatorSet s = build_spin_operators(SpinQuantum(4));
    const Vector phi0 = coherent_x_state(SpinQuantum(4));
    // F_y^2 - F_z^2 couples |0> to |2> only.
    const TwoOperatorGeometry orth = two_operator_geometry(s.fy, s.v, phi0);
    CHECK(orth.classification == PairClass::orthogonal);
    CHECK(std::abs(orth.commutator()) < 1e-14);

    const Matrix mix = s.fy + s.v;
    const TwoOperatorGeometry gen = two_operator_geometry(s.fz, mix, phi0);
    CHECK(gen.classification == PairClass::general);
    CHECK(std::cos(gen.vartheta) == doctest::Approx(std::abs(gen.overlap) / (gen.norm_a * gen.norm_b)));
}

TEST_CASE("commutator never exceeds one")
{
    std::mt19937_64 rng(11);
    const SpinOperatorSet s = build_spin_operators(SpinQuantum(6));
    for (int trial = 0; trial < 100; ++trial) {
        const TwoOperatorGeometry g = two_operator_geometry(s.fy, s.fz, random_state(7, rng));
        CHECK(std::abs(g.commutator()) <= 1.0 + 1e-12);
        CHECK(g.commutator() == doctest::Approx(std::sin(g.varphi) * std::cos(g.vartheta)));
    }
}

TEST_CASE("linearization selection rule for F_z in the x frame")
{
    const SpinOperatorSet s = build_spin_operators(SpinQuantum(8));
    const LinearizationCoefficients c = linearize(s.fz, ReferenceFrame::identity(9));
    CHECK(std::abs(c.o00) < 1e-14);
    CHECK(std::abs(c.o_alpha0(0) - complex(0.0, std::sqrt(2.0))) < 1e-14);
    for (int a = 1; a < 8; ++a)
        CHECK(std::abs(c.o_alpha0(a)) < 1e-14);
    CHECK(c.linear_norm() == doctest::Approx(std::sqrt(2.0)));

    const ReferenceFrame rotated = rotate_frame(s.t, 0.3, ReferenceFrame::identity(9));
    const Matrix m = frame_matrix(s.fz, rotated);
    CHECK((m - m.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
    CHECK_THROWS_AS(frame_matrix(s.fz, ReferenceFrame::identity(3)), InvalidArgument);
}
