#include <doctest.h>

#include <cmath>

#include <unsupported/Eigen/MatrixFunctions>

#include "golden.hpp"
#include "mlhp/errors.hpp"
#include "mlhp/protocols.hpp"

using namespace mlhp;

namespace {

// Brute-force chi0^2 by a dense matrix exponential.
double chi0_dense(const SpinOperatorSet& s, double k)
{
    const Matrix u = (Matrix(complex(0.0, -k) * s.t)).exp();
    const Vector phi = u.col(0);
    return 2.0 * mean_and_variance(s.fz, phi).variance / s.spin.value();
}

} // namespace

TEST_CASE("parameter validation")
{
    ProtocolParams p;
    CHECK_NOTHROW(p.validate());
    p.grid = 1;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = {};
    p.kappa_tilde = -1.0;
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = {};
    p.spin = SpinQuantum(0);
    CHECK_THROWS_AS(p.validate(), InvalidArgument);
    p = {};
    p.k_max = 2.0;
    p.grid = 5;
    CHECK(p.k_at(4) == 2.0);
    CHECK(p.k_at(2) == 1.0);
}

TEST_CASE("twisting evolution matches the dense exponential")
{
    const TwistingEvolution tw(SpinQuantum(8));
    for (double k : {0.0, 0.05, 0.3, 0.9}) {
        CAPTURE(k);
        const SqueezingRow row = squeezing_parameters(tw.ops(), tw.reference(k), 1e6);
        CHECK(row.chi_sq == doctest::Approx(chi0_dense(tw.ops(), k)).epsilon(1e-11));
        CHECK(row.valid == (expectation(tw.ops().fx, tw.reference(k)) > 0.0));
    }
    const nlohmann::json golden = load_golden();
    const SqueezingRow row = squeezing_parameters(tw.ops(), tw.reference(0.05), 1e6);
    CHECK(std::abs(row.chi_sq - golden["chi0_at_0.05"].get<double>()) < 1e-12);
}

TEST_CASE("small-K slope of chi0^2 is -2(2F-1)")
{
    for (int twice : {2, 4, 8}) {
        const TwistingEvolution tw{SpinQuantum(twice)};
        const double f = 0.5 * twice;
        const double h = 1e-5;
        const double slope = (squeezing_parameters(tw.ops(), tw.reference(h), 1.0).chi_sq - 1.0) / h;
        CHECK(slope == doctest::Approx(-2.0 * (2.0 * f - 1.0)).epsilon(1e-3));
    }
}

TEST_CASE("squeezing parameters are N-independent and coherent values are 1")
{
    const TwistingEvolution tw(SpinQuantum(6));
    const Vector phi = tw.reference(0.2);
    const SqueezingRow a = squeezing_parameters(tw.ops(), phi, 10.0);
    const SqueezingRow b = squeezing_parameters(tw.ops(), phi, 1e9);
    CHECK(a.chi_sq == doctest::Approx(b.chi_sq).epsilon(1e-14));
    CHECK(a.xi_sq == doctest::Approx(b.xi_sq).epsilon(1e-14));
    const SqueezingRow c = squeezing_parameters(tw.ops(), coherent_x_state(SpinQuantum(6)), 5.0);
    CHECK(c.chi_sq == doctest::Approx(1.0));
    CHECK(c.zeta_sq == doctest::Approx(1.0));
    CHECK(c.xi_sq == doctest::Approx(1.0));
    // Polarization along -x leaves zeta and xi undefined.
    const SqueezingRow flipped = squeezing_parameters(tw.ops(), basis_state(7, 6), 5.0);
    CHECK_FALSE(flipped.valid);
    CHECK(std::isnan(flipped.zeta_sq));
}

TEST_CASE("spin-1/2 cannot squeeze internally")
{
    ProtocolParams p;
    p.spin = SpinQuantum(1);
    p.grid = 7;
    for (const SqueezingRow& r : internal_curve(p))
        CHECK(r.chi_sq == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("chi1 closed form and Gaussian pipeline")
{
    CHECK(chi1_closed_form(1.0, 2.0) == doctest::Approx(0.2));
    CHECK(chi1_closed_form(0.5, 0.0) == doctest::Approx(0.5));
    for (double c0 : {0.2, 1.0, 3.0})
        for (double kt : {0.0, 0.7, 2.0})
            CHECK(chi1_gaussian(c0, kt) == doctest::Approx(chi1_closed_form(c0, kt)).epsilon(1e-13));
}

TEST_CASE("chi2 first principles equals the closed form")
{
    const TwistingEvolution tw(SpinQuantum(8));
    for (double k : {0.0, 0.1, 0.3, 0.8})
        CHECK(chi2_first_principles(tw, k, 2.0) == doctest::Approx(chi2_closed_form(tw, k, 2.0)).epsilon(1e-12));
    CHECK(chi2_closed_form(tw, 0.3, 2.0) ==
          doctest::Approx(load_golden()["chi2_at_0.3_kt2"].get<double>()).epsilon(1e-11));
}

TEST_CASE("chi3 against the quadrature oracle")
{
    const nlohmann::json golden = load_golden();
    const TwistingEvolution tw(SpinQuantum(8));
    ProtocolParams p;
    const Chi3Result r1 = chi3(tw, 1.0, p);
    CHECK(std::abs(r1.chi_sq - golden["chi3_K1_kt2"].get<double>()) < 1e-9);
    CHECK(r1.halving_change < 1e-8);
    CHECK(std::abs(chi3(tw, 0.3, p).chi_sq - golden["chi3_K0.3_kt2"].get<double>()) < 1e-9);
    // gamma stays symmetric positive definite and below the identity.
    Eigen::SelfAdjointEigenSolver<RealMatrix> eig(r1.gamma);
    CHECK(eig.eigenvalues().minCoeff() > 0.0);
    CHECK(eig.eigenvalues().maxCoeff() <= 1.0 + 1e-12);
}

TEST_CASE("chi3 without measurement is chi0")
{
    const TwistingEvolution tw(SpinQuantum(8));
    ProtocolParams p;
    p.kappa_tilde = 0.0;
    CHECK(chi3(tw, 0.4, p).chi_sq ==
          doctest::Approx(squeezing_parameters(tw.ops(), tw.reference(0.4), 1.0).chi_sq).epsilon(1e-12));
}

TEST_CASE("gamma flow trajectory")
{
    const TwistingEvolution tw(SpinQuantum(4));
    std::vector<RealMatrix> traj;
    const RealMatrix g = integrate_gamma_flow(tw, 0.5, 2.0, 20, &traj);
    CHECK(traj.size() == 21);
    CHECK((traj.front() - RealMatrix::Identity(4, 4)).norm() == 0.0);
    CHECK((traj.back() - g).norm() == 0.0);
}

TEST_CASE("segment chain converges to the flow")
{
    const TwistingEvolution tw(SpinQuantum(8));
    ProtocolParams p;
    const double ode = chi3(tw, 1.0, p).chi_sq;
    const double e100 = std::abs(chi3_segment_chain(tw, 1.0, 2.0, 100) - ode);
    const double e1000 = std::abs(chi3_segment_chain(tw, 1.0, 2.0, 1000) - ode);
    CHECK(e1000 < e100 / 50.0);
}

TEST_CASE("chi0 minimum matches the golden value")
{
    const nlohmann::json golden = load_golden();
    const Chi0Minimum m = find_chi0_minimum(ProtocolParams{});
    CHECK(std::abs(m.chi_sq - golden["chi0_min"].get<double>()) < 1e-12);
    CHECK(std::abs(m.k - golden["chi0_argmin"].get<double>()) < 1e-6);
}

TEST_CASE("reference states")
{
    const SpinQuantum spin(8);
    const SpinOperatorSet s = build_spin_operators(spin);
    const Vector coh = intelligent_state(spin, 1.0);
    CHECK(std::abs(std::abs(coh(0)) - 1.0) < 1e-10);

    const Vector sq = intelligent_state(spin, 0.5, 0.2);
    CHECK(sq.norm() == doctest::Approx(1.0));
    const double vy = mean_and_variance(s.fy, sq).variance;
    const double vz = mean_and_variance(s.fz, sq).variance;
    const double fx = expectation(s.fx, sq);
    const double t = expectation(s.t, sq);
    CHECK(4.0 * vy * vz == doctest::Approx(fx * fx + t * t).epsilon(1e-10));
    CHECK(std::abs(t) > 0.1);

    CHECK_THROWS_AS(intelligent_state(SpinQuantum(3), 0.5), InvalidArgument);
    CHECK_THROWS_AS(intelligent_state(spin, -1.0), InvalidArgument);

    const Vector tw = twisted_state(spin, 0.1, 0.0);
    CHECK(std::abs(expectation(s.fz, tw)) < 1e-12);
}
