#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "mlhp/errors.hpp"
#include "mlhp/exact_oracle.hpp"
#include "mlhp/memory.hpp"
#include "mlhp/protocols.hpp"

namespace mlhp::cli {

namespace {

struct SharedOptions
{
    double f = 4.0;
    double k_max = 1.0;
    int grid = 400;
    double kappa_tilde = 2.0;
    int ode_steps = 2000;
    std::string out;
    std::string format = "csv";
    std::uint64_t seed = 20240611;
};

struct Table
{
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string number(double x)
{
    return fmt::format("{:.17g}", x);
}

void add_shared(CLI::App* cmd, SharedOptions& s)
{
    cmd->add_option("--F", s.f, "Single-atom spin F (0.5, 1, 1.5, ...)")->capture_default_str();
    cmd->add_option("--Kmax", s.k_max, "Largest integrated twisting strength K")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--grid", s.grid, "Number of grid points")->check(CLI::Range(2, 1000000))->capture_default_str();
    cmd->add_option("--kappa-tilde", s.kappa_tilde, "Measurement coupling")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--ode-steps", s.ode_steps, "RK4 steps for the covariance flow")
        ->check(CLI::Range(10, 100000000))
        ->capture_default_str();
    cmd->add_option("--out", s.out, "Output file (default: standard output)");
    cmd->add_option("--format", s.format, "Output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    cmd->add_option("--seed", s.seed, "Random seed")->capture_default_str();
}

ProtocolParams params_from(const SharedOptions& s)
{
    ProtocolParams p;
    p.spin = SpinQuantum::from_value(s.f);
    p.k_max = s.k_max;
    p.grid = s.grid;
    p.kappa_tilde = s.kappa_tilde;
    p.ode_steps = s.ode_steps;
    p.validate();
    return p;
}

void write_table(std::ostream& os, const Table& t, const std::string& format)
{
    if (format == "json") {
        nlohmann::json j;
        j["columns"] = t.columns;
        j["rows"] = nlohmann::json::array();
        for (const auto& row : t.rows)
            j["rows"].push_back(row);
        os << j.dump() << '\n';
        return;
    }
    for (std::size_t c = 0; c < t.columns.size(); ++c)
        os << (c ? "," : "") << t.columns[c];
    os << '\n';
    for (const auto& row : t.rows) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "," : "") << number(row[c]);
        os << '\n';
    }
}

void emit(std::ostream& out, const SharedOptions& s, const std::function<void(std::ostream&)>& body)
{
    if (s.out.empty()) {
        body(out);
        return;
    }
    std::ofstream file(s.out, std::ios::binary);
    if (!file)
        throw InvalidArgument("cannot open output file '" + s.out + "'");
    body(file);
    if (!file)
        throw NumericError("failed writing '" + s.out + "'");
}

Table internal_table(const ProtocolParams& p)
{
    Table t{{"K", "chi2", "zeta2", "xi2", "valid"}, {}};
    for (const SqueezingRow& r : internal_curve(p))
        t.rows.push_back({r.k, r.chi_sq, r.zeta_sq, r.xi_sq, r.valid ? 1.0 : 0.0});
    return t;
}

Table qnd_table(const ProtocolParams& p, double k)
{
    const TwistingEvolution twist(p.spin);
    const double chi0_sq = squeezing_parameters(twist.ops(), twist.reference(k), p.n_atoms).chi_sq;
    Table t{{"kappa_tilde", "chi2"}, {}};
    for (int i = 0; i < p.grid; ++i) {
        const double kt = p.kappa_tilde * i / (p.grid - 1);
        const double value = chi1_gaussian(chi0_sq, kt);
        if (std::abs(value - chi1_closed_form(chi0_sq, kt)) > 1e-10)
            throw NumericError("QND pipeline disagrees with the closed form");
        t.rows.push_back({kt, value});
    }
    return t;
}

Table combine_table(const ProtocolParams& p, const std::string& mode, bool all)
{
    if (!all) {
        std::vector<CurvePoint> curve;
        if (mode == "seq1")
            curve = chi1_curve(p);
        else if (mode == "seq2")
            curve = chi2_curve(p);
        else
            curve = chi3_curve(p);
        Table t{{"K", "chi2"}, {}};
        for (const auto& c : curve)
            t.rows.push_back({c.k, c.value});
        return t;
    }
    const auto c0 = internal_curve(p);
    const auto c1 = chi1_curve(p);
    const auto c2 = chi2_curve(p);
    const auto c3 = chi3_curve(p);
    Table t{{"K", "chi0", "chi1", "chi2", "chi3"}, {}};
    for (std::size_t i = 0; i < c0.size(); ++i)
        t.rows.push_back({c0[i].k, c0[i].chi_sq, c1[i].value, c2[i].value, c3[i].value});
    return t;
}

struct MemoryOptions
{
    std::string state = "intelligent";
    double k = 0.1;
    double squeeze = 0.5;
    double theta = 0.3;
    double kappa_prime = 1.0;
    std::vector<double> amplitudes;
};

Vector memory_reference(SpinQuantum spin, const MemoryOptions& m)
{
    if (m.state == "coherent")
        return coherent_x_state(spin);
    if (m.state == "twisted")
        return twisted_state(spin, m.k, m.theta);
    if (m.state == "intelligent")
        return intelligent_state(spin, m.squeeze, m.theta);
    if (m.amplitudes.size() != 2 * static_cast<std::size_t>(spin.dim()))
        throw InvalidArgument(fmt::format("--amplitudes needs 2(2F+1) = {} numbers (re, im pairs)",
                                          2 * spin.dim()));
    Vector phi(spin.dim());
    for (int a = 0; a < spin.dim(); ++a)
        phi(a) = complex(m.amplitudes[2 * a], m.amplitudes[2 * a + 1]);
    if (!(phi.norm() > 0.0))
        throw InvalidArgument("amplitude vector is zero");
    return phi / phi.norm();
}

void write_memory(std::ostream& os, const MemoryNoiseReport& r, const std::string& format)
{
    if (format == "json") {
        nlohmann::json j;
        j["kappa"] = r.kappa;
        j["kappa_prime"] = r.kappa_prime;
        j["varphi"] = r.varphi;
        j["vartheta"] = r.vartheta;
        j["eta2_write"] = r.eta_sq_write;
        j["eta2_read"] = r.eta_sq_read;
        j["lower_bound"] = r.lower_bound;
        j["saturated"] = r.saturated;
        os << j.dump(2) << '\n';
        return;
    }
    os << "kappa,kappa_prime,varphi,vartheta,eta2_write,eta2_read,lower_bound,saturated\n";
    os << number(r.kappa) << ',' << number(r.kappa_prime) << ',' << number(r.varphi) << ','
       << number(r.vartheta) << ',' << number(r.eta_sq_write) << ',' << number(r.eta_sq_read) << ','
       << number(r.lower_bound) << ',' << (r.saturated ? "true" : "false") << '\n';
}

void write_checks(std::ostream& os, const std::vector<CheckResult>& checks, const std::string& format)
{
    if (format == "json") {
        nlohmann::json j = nlohmann::json::array();
        for (const auto& c : checks)
            j.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
        os << j.dump(2) << '\n';
        return;
    }
    for (const auto& c : checks)
        os << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
}

Vector random_state(int dim, std::mt19937_64& rng)
{
    std::normal_distribution<double> g;
    Vector v(dim);
    for (int a = 0; a < dim; ++a)
        v(a) = complex(g(rng), g(rng));
    return v / v.norm();
}

} // namespace

std::vector<CheckResult> run_validation(const ValidationConfig& cfg)
{
    std::vector<CheckResult> checks;
    const SpinQuantum spin = SpinQuantum::from_value(cfg.f);
    const int d = spin.dim();
    std::mt19937_64 rng(cfg.seed);

    auto space = std::make_shared<const SymmetricSpace>(cfg.n_atoms, d);
    checks.push_back({"oracle_dimension", space->size() == symmetric_dimension(cfg.n_atoms, d),
                      fmt::format("N = {}, d = {}, oracle dims = {}", cfg.n_atoms, d, space->size())});

    {
        std::uniform_int_distribution<int> pick(0, d - 1);
        double worst = 0.0;
        for (int trial = 0; trial < 50; ++trial) {
            const int a = pick(rng), g = pick(rng), b = pick(rng);
            const Matrix sag = space->sigma(a, g);
            const Matrix sgb = space->sigma(g, b);
            Matrix expected = space->sigma(a, b);
            if (a == b)
                expected -= space->sigma(g, g);
            worst = std::max(worst, (sag * sgb - sgb * sag - expected).cwiseAbs().maxCoeff());
        }
        checks.push_back({"sigma_commutator", worst <= 1e-10, fmt::format("max |error| = {:.3g}", worst)});
    }

    {
        const SpinOperatorSet ops = build_spin_operators(spin);
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            const Vector phi = random_state(d, rng);
            const ReferenceFrame frame = ReferenceFrame::completing(phi);
            const Moments exact = collective_operator_moments(ops.fz, product_state(phi, frame, space), frame);
            const double single = cfg.n_atoms * mean_and_variance(ops.fz, phi).variance;
            const double hp = 2.0 * cfg.n_atoms * linearize(ops.fz, frame).o_alpha0.squaredNorm() * 0.5;
            worst = std::max({worst, std::abs(exact.variance - single), std::abs(exact.variance - hp)});
        }
        checks.push_back({"hp_product_exactness", worst <= 1e-10,
                          fmt::format("max |Var_exact - Var_HP| = {:.3g}", worst)});
    }

    const TwistingEvolution twist(spin);
    {
        double re = 0.0, even = 0.0, sum_rule = 0.0;
        for (int i = 0; i < 50; ++i) {
            const double k = cfg.k_max * i / 49.0;
            const Vector j = twist.jz_column(k);
            for (int a = 1; a < d; ++a) {
                re = std::max(re, std::abs(j(a - 1).real()));
                if (a % 2 == 0)
                    even = std::max(even, std::abs(j(a - 1).imag()));
            }
            const double chi0_sq = squeezing_parameters(twist.ops(), twist.reference(k), 1.0).chi_sq;
            sum_rule = std::max(sum_rule, std::abs(2.0 * j.imag().squaredNorm() / spin.value() - chi0_sq));
        }
        checks.push_back({"selection_rules", re < 1e-10 && even < 1e-10 && sum_rule < 1e-10,
                          fmt::format("max |Re J| = {:.3g}, max |Im J_even| = {:.3g}, sum rule {:.3g}", re,
                                      even, sum_rule)});
    }

    ProtocolParams p;
    p.spin = spin;
    p.kappa_tilde = cfg.kappa_tilde;
    p.ode_steps = cfg.ode_steps;
    p.ode_prefactor_scale = cfg.ode_prefactor_scale;
    {
        const double target = 1.0 / (1.0 + cfg.kappa_tilde * cfg.kappa_tilde);
        const double c1 = chi1_closed_form(1.0, cfg.kappa_tilde);
        const double c2 = chi2_closed_form(twist, 0.0, cfg.kappa_tilde);
        const double c3 = chi3(twist, 0.0, p).chi_sq;
        const double dev = std::max({std::abs(c1 - target), std::abs(c2 - target), std::abs(c3 - target)});
        checks.push_back({"k0_consistency", dev <= 1e-8,
                          fmt::format("chi1^2 = {}, chi2^2 = {}, chi3^2 = {}, expected {}", number(c1),
                                      number(c2), number(c3), number(target))});
    }
    {
        const double ode = chi3(twist, 1.0, p).chi_sq;
        const double chain = chi3_segment_chain(twist, 1.0, cfg.kappa_tilde, cfg.segments);
        checks.push_back({"segment_chain", std::abs(ode - chain) <= 1e-6,
                          fmt::format("ODE {} vs {} segments {} (diff {:.3g})", number(ode), cfg.segments,
                                      number(chain), std::abs(ode - chain))});
    }
    return checks;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Multilevel Holstein-Primakoff squeezing and memory simulations", "mlhp_cli"};
    app.set_config("--config", "", "Key-value configuration file (flags override it)");
    app.require_subcommand(1);

    SharedOptions shared;

    auto* internal = app.add_subcommand("internal", "Internal squeezing curve chi2, zeta2, xi2 versus K");
    add_shared(internal, shared);
    double n_atoms = 1e6;
    internal->add_option("--N", n_atoms, "Atom number (squeezing parameters are N-independent)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();

    auto* qnd = app.add_subcommand("qnd", "QND squeezing versus coupling 0..kappa_tilde after twisting K");
    add_shared(qnd, shared);
    double qnd_k = 0.0;
    qnd->add_option("--K", qnd_k, "Twisting strength before the measurement")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();

    auto* combine = app.add_subcommand("combine", "Internal squeezing combined with QND measurement");
    add_shared(combine, shared);
    std::string mode = "simul";
    bool all = false;
    combine->add_option("--mode", mode, "seq1: twist then measure, seq2: measure then twist, simul: both")
        ->check(CLI::IsMember({"seq1", "seq2", "simul"}))
        ->capture_default_str();
    combine->add_flag("--all", all, "Write K,chi0,chi1,chi2,chi3");

    auto* memory = app.add_subcommand("memory", "Write and read-out noise of the QND memory");
    add_shared(memory, shared);
    MemoryOptions mem;
    memory->add_option("--state", mem.state, "Reference state")
        ->check(CLI::IsMember({"coherent", "twisted", "intelligent", "amplitudes"}))
        ->capture_default_str();
    memory->add_option("--K", mem.k, "Twisting strength of the twisted reference")->capture_default_str();
    memory->add_option("--squeeze", mem.squeeze, "F_z/F_y squeezing ratio of the intelligent reference")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    memory->add_option("--theta", mem.theta, "Rotation about x applied to the reference")->capture_default_str();
    memory->add_option("--kappa-prime", mem.kappa_prime, "Read-out coupling")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    memory->add_option("--amplitudes", mem.amplitudes, "re,im pairs in the F_x basis (m_x = F first)")
        ->delimiter(',');

    auto* validate = app.add_subcommand("validate", "Exact-oracle and consistency checks");
    add_shared(validate, shared);
    ValidationConfig vcfg;
    validate->add_option("--N", vcfg.n_atoms, "Oracle atom number")->check(CLI::Range(1, 64))->capture_default_str();
    validate->add_option("--segments", vcfg.segments, "Light segments in the chain check")
        ->check(CLI::Range(1, 10000000))
        ->capture_default_str();
    validate->add_option("--debug-ode-prefactor", vcfg.ode_prefactor_scale,
                         "Multiply the covariance-flow rate (mutation test)")
        ->capture_default_str();

    // Memory reports read most naturally as JSON.
    memory->preparse_callback([&](std::size_t) { shared.format = "json"; });

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, err, err);
        return exit_config_error;
    }

    try {
        if (internal->parsed()) {
            ProtocolParams p = params_from(shared);
            p.n_atoms = n_atoms;
            const Table t = internal_table(p);
            emit(out, shared, [&](std::ostream& os) { write_table(os, t, shared.format); });
        } else if (qnd->parsed()) {
            const Table t = qnd_table(params_from(shared), qnd_k);
            emit(out, shared, [&](std::ostream& os) { write_table(os, t, shared.format); });
        } else if (combine->parsed()) {
            const Table t = combine_table(params_from(shared), mode, all);
            emit(out, shared, [&](std::ostream& os) { write_table(os, t, shared.format); });
        } else if (memory->parsed()) {
            if (!(shared.kappa_tilde > 0.0))
                throw InvalidArgument("--kappa-tilde must be positive for the memory");
            const SpinQuantum spin = SpinQuantum::from_value(shared.f);
            const Vector phi0 = memory_reference(spin, mem);
            MemoryNoiseReport r;
            try {
                r = memory_read_noise(spin, phi0, shared.kappa_tilde, mem.kappa_prime);
            } catch (const DegenerateGeometry&) {
                const MemoryNoiseReport w = memory_write_noise(spin, phi0, shared.kappa_tilde);
                err << "eta2_write = " << number(w.eta_sq_write) << '\n';
                throw;
            }
            emit(out, shared, [&](std::ostream& os) { write_memory(os, r, shared.format); });
        } else if (validate->parsed()) {
            vcfg.f = shared.f;
            vcfg.kappa_tilde = shared.kappa_tilde;
            vcfg.k_max = shared.k_max;
            vcfg.ode_steps = shared.ode_steps;
            vcfg.seed = shared.seed;
            const auto checks = run_validation(vcfg);
            emit(out, shared, [&](std::ostream& os) { write_checks(os, checks, shared.format); });
            const bool ok = std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.passed; });
            return ok ? exit_ok : exit_validation_failure;
        }
    } catch (const DegenerateGeometry& e) {
        err << "degenerate geometry: " << e.what() << '\n';
        return exit_degenerate_geometry;
    } catch (const InvalidArgument& e) {
        err << "invalid configuration: " << e.what() << '\n';
        return exit_config_error;
    } catch (const CapExceeded& e) {
        err << "oracle size cap exceeded: " << e.what() << '\n';
        return exit_config_error;
    } catch (const Error& e) {
        err << "numeric failure: " << e.what() << '\n';
        return exit_numeric_error;
    } catch (const std::exception& e) {
        err << "numeric failure: " << e.what() << '\n';
        return exit_numeric_error;
    }
    return exit_ok;
}

} // namespace mlhp::cli
