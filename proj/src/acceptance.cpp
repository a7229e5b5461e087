#include "latwave/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

#include "latwave/diffcalc.hpp"
#include "latwave/dispersion.hpp"
#include "latwave/kg_lattice.hpp"
#include "latwave/kinematics.hpp"
#include "latwave/lorentz_int.hpp"
#include "latwave/waves.hpp"

namespace latwave::acceptance {
namespace {

using kinematics::Vec3;

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", x);
    return buf;
}

class Rng {
public:
    Rng(std::uint64_t seed, int id) : engine_(seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(id))) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    std::int64_t integer(std::int64_t lo, std::int64_t hi)
    {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(engine_);
    }
    Complex complex() { return {uniform(-1.0, 1.0), uniform(-1.0, 1.0)}; }
    std::vector<Complex> slice(std::size_t n)
    {
        std::vector<Complex> v(n);
        for (auto& z : v) z = complex();
        return v;
    }

private:
    std::mt19937_64 engine_;
};

// measured <= bound
Check at_most(std::string what, double measured, double bound)
{
    return {std::move(what), sci(measured), "<= " + sci(bound), measured <= bound};
}

Check at_least(std::string what, double measured, double bound)
{
    return {std::move(what), sci(measured), "> " + sci(bound), measured > bound};
}

Check holds(std::string what, bool ok, std::string detail = {})
{
    return {std::move(what), detail.empty() ? (ok ? "yes" : "no") : std::move(detail), "yes", ok};
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]);
        const double ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Check slope_near(std::string what, double slope, double target, double tol)
{
    char bound[48];
    std::snprintf(bound, sizeof bound, "%g +/- %g", target, tol);
    char measured[32];
    std::snprintf(measured, sizeof measured, "%.4f", slope);
    return {std::move(what), measured, bound, std::abs(slope - target) <= tol};
}

CriterionResult transform_equivalence(Rng& rng)
{
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double c = rng.uniform(0.5, 2.0);
        const double hbar = rng.uniform(0.5, 2.0);
        const auto s = kinematics::make_particle(rng.uniform(0.01, 3.0), {rng.uniform(-5.0, 5.0), 0, 0}, c);
        const Vec3 v{rng.uniform(-0.9, 0.9) * c, 0, 0};
        const auto part = kinematics::transform_particle(s, v, c);
        const auto wave = kinematics::transform_wave(s.E / hbar, {s.p[0] / hbar, 0, 0}, v, c);
        const double scale = part.E / hbar;
        worst = std::max({worst, std::abs(wave.w - part.E / hbar) / scale,
                          std::abs(wave.k[0] - part.p[0] / hbar) / (scale / c)});
    }
    return {1, "transform-equivalence", {at_most("max relative |(w',k') - (E',p')/hbar|", worst, 1e-12)}};
}

CriterionResult discrete_mass_shell(Rng& rng)
{
    using kinematics::Rational;
    double worst = 0.0;
    bool exact = true;
    int accepted = 0;
    while (accepted < 1000) {
        const std::int64_t tn = rng.integer(1, 8), td = rng.integer(1, 8);
        const std::int64_t en = rng.integer(1, 8), ed = rng.integer(1, 8);
        const std::int64_t cn = rng.integer(1, 8), cd = rng.integer(1, 8);
        GridSpec g;
        g.tau = static_cast<double>(tn) / static_cast<double>(td);
        g.eps = static_cast<double>(en) / static_cast<double>(ed);
        g.c = static_cast<double>(cn) / static_cast<double>(cd);
        const kinematics::LatticeStep step{rng.integer(1, 50),
                                           {rng.integer(-50, 50), rng.integer(-50, 50), rng.integer(-50, 50)}};
        const kinematics::RationalGrid rg{Rational(tn, td), Rational(en, ed), Rational(cn, cd)};
        Rational dx2 = 0;
        for (auto d : step.dj) dx2 += Rational(d * d) * rg.eps * rg.eps;
        const Rational cdt = rg.c * Rational(step.dn) * rg.tau;
        if (!(cdt * cdt > dx2)) continue;  // not timelike
        ++accepted;

        const double m0 = rng.uniform(0.1, 3.0);
        const auto s = kinematics::discrete_energy_momentum(m0, step, g);
        worst = std::max(worst, std::abs(kinematics::mass_shell_defect(s, g.c)));
        exact = exact && kinematics::exact_momentum_velocity(Rational(m0), step, rg)
                             == kinematics::exact_step_velocity(step, rg);
    }
    return {2,
            "discrete-mass-shell",
            {at_most("max |E^2 - p^2 c^2 - m0^2 c^4| / (m0^2 c^4)", worst, 1e-12),
             holds("p c^2 / E == dx/dt in rational arithmetic", exact)}};
}

CriterionResult product_identity(Rng& rng)
{
    using namespace diffcalc;
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const auto n = static_cast<std::size_t>(rng.integer(2, 64));
        const Boundary b = trial % 2 == 0 ? Boundary::shrinking : Boundary::periodic;
        const SampledSequence f{rng.slice(n), b};
        const SampledSequence g{rng.slice(n), b};
        const auto lhs = forward_diff(multiply(f, g));
        const auto r1 = multiply(forward_diff(f), forward_avg(g));
        const auto r2 = multiply(forward_avg(f), forward_diff(g));
        for (std::size_t i = 0; i < lhs.values.size(); ++i) {
            worst = std::max(worst, std::abs(lhs.values[i] - (r1.values[i] + r2.values[i])));
        }
    }
    return {3, "product-identity", {at_most("max elementwise |D(fg) - (Df Ag + Af Dg)|", worst, 1e-12)}};
}

CriterionResult total_difference(Rng& rng)
{
    double total = 0.0;
    double velocity = 0.0;
    double invariant = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double c = rng.uniform(0.5, 2.0);
        const double m0 = rng.uniform(0.1, 2.0);
        auto momentum = [&] { return Vec3{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)}; };
        const auto s = kinematics::make_particle(m0, momentum(), c);
        const auto t = kinematics::make_particle(m0, momentum(), c);
        const auto r = kinematics::total_difference_mass_shell(s, t, c);
        total = std::max(total, std::abs(r.residual_total));
        velocity = std::max(velocity, std::abs(r.residual_velocity));
        invariant = std::max(invariant, std::abs(r.invariant));
    }
    return {4,
            "total-difference",
            {at_most("max |(2E dE + dE^2)/c^2 - 2 p.dp - dp^2|", total, 1e-10),
             at_most("max |dE^2/c^2 - dp^2|", invariant, 1e-10),
             at_most("max |dE - u_avg . dp|", velocity, 1e-10)}};
}

CriterionResult beat_velocities(Rng& rng)
{
    CriterionResult r{5, "beat-velocities", {}};

    const auto example = waves::beat_velocities({4, 6, 3, 5});
    const double phase_err = std::abs(example.phase.value() - 0.78125) / 0.78125;
    const double group_err = std::abs(example.group - 0.625) / 0.625;
    // the printed quotients in binary floating point: a few ulp from the exact fractions
    bool formula = phase_err <= 1e-15 && group_err <= 1e-15;
    for (int trial = 0; trial < 1000 && formula; ++trial) {
        const waves::BeatSpec b{rng.uniform(1, 10), rng.uniform(1, 10), rng.uniform(1, 10), rng.uniform(1, 10)};
        const auto v = waves::beat_velocities(b);
        const double phase = (1.0 / b.T + 1.0 / b.T2) / (1.0 / b.lambda + 1.0 / b.lambda2);
        const double group = (1.0 / b.T - 1.0 / b.T2) / (1.0 / b.lambda - 1.0 / b.lambda2);
        formula = v.phase.value() == phase && v.group == group;
    }
    r.checks.push_back(holds("v_phase, v_group equal the sum and difference quotients", formula,
                             "(4,6,3,5): " + sci(example.phase.value()) + ", " + sci(example.group)));

    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
        const double c = rng.uniform(0.5, 2.0);
        const double mass = rng.uniform(0.1, 2.0);  // m0 c^2 / hbar
        const double k1 = rng.uniform(0.1, 3.0);
        const double k2 = k1 + rng.uniform(0.01, 1.0);
        const double w1 = std::sqrt(c * c * k1 * k1 + mass * mass);
        const double w2 = std::sqrt(c * c * k2 * k2 + mass * mass);
        const auto v = waves::beat_velocities({2 * kPi / w1, 2 * kPi / w2, 2 * kPi / k1, 2 * kPi / k2});
        worst = std::max(worst, std::abs(v.phase.value() * v.group / (c * c) - 1.0));
    }
    r.checks.push_back(at_most("max relative |v_phase v_group - c^2| on the mass shell", worst, 1e-10));

    const waves::BeatSpec b{40, 60, 30, 50};
    GridSpec g;
    g.Nt = 256;
    g.Nx = 1024;
    g.boundary = Boundary::shrinking;
    const double target = waves::beat_velocities(b).group;
    const double measured = waves::measure_group_velocity(waves::beat_field(b, g), b);
    r.checks.push_back(at_most("relative envelope-tracking error, 256x1024", std::abs(measured - target) / target,
                               0.02));
    return r;
}

CriterionResult plane_wave_certification(const Options& opt)
{
    using dispersion::DispersionForm;
    using dispersion::TanCoefficient;
    GridSpec g;
    const TanCoefficient tan = opt.as_printed_tan ? TanCoefficient::as_printed : TanCoefficient::symmetric;

    double cayley = 0.0;
    double exponential = 0.0;
    int modes = 0;
    for (std::int64_t N = 3; N <= 12; ++N) {
        std::vector<ExtendedIndex> Ms{ExtendedIndex::infinity()};
        for (std::int64_t M = N; M <= 24; ++M) Ms.emplace_back(M);
        for (const auto& M : Ms) {
            const double mc = dispersion::mass_for_mode(DispersionForm::cayley, N, M, g);
            cayley = std::max(cayley, kg::plane_wave_residual({waves::WaveForm::cayley, N, M}, {mc, g}, 32));
            double me = 0.0;
            try {
                me = dispersion::mass_for_mode(DispersionForm::exponential, N, M, g, tan);
            } catch (const DomainError&) {
                continue;  // spacelike under this coefficient
            }
            exponential = std::max(exponential,
                                   kg::plane_wave_residual({waves::WaveForm::exponential, N, M}, {me, g}, 32));
            ++modes;
        }
    }

    const double printed_m0 = dispersion::mass_for_mode(DispersionForm::exponential, 4, ExtendedIndex::infinity(),
                                                        g, TanCoefficient::as_printed);
    const double printed =
        kg::plane_wave_residual({waves::WaveForm::exponential, 4, ExtendedIndex::infinity()}, {printed_m0, g}, 32);

    return {6,
            "plane-wave-certification",
            {at_most("max cayley residual, linear relation, 32x32", cayley, 1e-12),
             at_most(std::string("max exponential residual, ") + (opt.as_printed_tan ? "typeset" : "symmetric")
                         + " tan relation, 32x32 (" + std::to_string(modes) + " modes)",
                     exponential, 1e-12),
             at_least("typeset tan coefficient, N=4 rest mode residual", printed, 1e-3)}};
}

CriterionResult mass_spectrum()
{
    double formula = 0.0;
    bool halving = true;
    for (const GridSpec& g : {GridSpec{}, GridSpec{0.5, 1.5, 3.0, 0.7}, GridSpec{2.0, 1.0, 0.25, 1.3}}) {
        for (std::int64_t N = 1; N <= 1000; ++N) {
            const double m = dispersion::mass_from_rest_period(N, g);
            const double expected = 2.0 * kPi * g.hbar / (g.c * g.c * static_cast<double>(N) * g.tau);
            formula = std::max(formula, std::abs(m - expected) / expected);
            halving = halving && m / dispersion::mass_from_rest_period(2 * N, g) == 2.0;
        }
    }
    const auto q = dispersion::quantization_check({1, {0, 0, 0}}, 2 * kPi, GridSpec{}, 1e-12);
    const bool rest = q.N_real.is_finite() && q.N_real.value() == 1.0 && q.N == std::optional<std::int64_t>(1);
    return {7,
            "discrete-mass-spectrum",
            {at_most("max relative |m0(N) - 2 pi hbar / (c^2 N tau)|", formula, 1e-15),
             holds("m0(N) / m0(2N) == 2 exactly", halving),
             holds("rest step, m0 = 2 pi: N_real == 1 and N == 1", rest,
                   q.N_real.is_finite() ? q.N_real.to_string() : "inf")}};
}

CriterionResult lorentz_group(const Options& opt)
{
    using namespace lorentz;
    CriterionResult r{8, "integral-lorentz-group", {}};

    bool generators = true;
    for (Letter l : {Letter::S1, Letter::S2, Letter::S3}) generators = generators && preserves_metric(generator(l).matrix());
    const IntMatrix4 s4 = opt.as_printed_s4 ? printed_s4() : generator(Letter::S4).matrix();
    generators = generators && preserves_metric(s4);
    r.checks.push_back(holds(std::string("S1, S2, S3, S4 (") + (opt.as_printed_s4 ? "typeset" : "corrected")
                                 + ") satisfy L^T eta L = eta",
                             generators));

    const IntMatrix4 gram = minkowski_gram(printed_s4());
    const bool documented = !preserves_metric(printed_s4()) && gram(0, 3) == 2;
    r.checks.push_back(holds("typeset S4 fails with Gram (0,3) = 2", documented,
                             "Gram (0,3) = " + gram(0, 3).str()));

    const auto ball = enumerate_ball(6);
    bool metric = true;
    bool inverses = true;
    bool round_trip = true;
    for (const auto& L : ball) {
        metric = metric && preserves_metric(L.matrix());
        inverses = inverses && std::binary_search(ball.begin(), ball.end(), L.inverse());
        round_trip = round_trip && eval_word(factorize(L)) == L;
    }
    const std::string size = std::to_string(ball.size()) + " elements";
    r.checks.push_back(holds("ball(6) metric-clean", metric, size));
    r.checks.push_back(holds("ball(6) closed under inverses", inverses));
    r.checks.push_back(holds("ball(6) eval_word(factorize(L)) == L", round_trip));
    return r;
}

CriterionResult evolution_fidelity(Rng& rng)
{
    GridSpec g;
    g.boundary = Boundary::periodic;
    using waves::WaveForm;

    struct Case {
        WaveForm form;
        std::int64_t N;
        ExtendedIndex M;
        std::size_t nx;
    };
    double deviation = 0.0;
    for (const Case& c : {Case{WaveForm::cayley, 3, ExtendedIndex(6), 24}, Case{WaveForm::cayley, 5, ExtendedIndex(11), 20},
                          Case{WaveForm::cayley, 7, ExtendedIndex::infinity(), 16},
                          Case{WaveForm::exponential, 8, ExtendedIndex(16), 32},
                          Case{WaveForm::exponential, 5, ExtendedIndex(8), 32},
                          Case{WaveForm::exponential, 4, ExtendedIndex::infinity(), 12}}) {
        const auto form = c.form == WaveForm::cayley ? dispersion::DispersionForm::cayley
                                                     : dispersion::DispersionForm::exponential;
        const double m0 = dispersion::mass_for_mode(form, c.N, c.M, g);
        const FieldSlab exact = waves::sample({c.form, c.N, c.M}, g, 18, c.nx);
        kg::EvolveOptions opts;
        if (c.form == WaveForm::cayley) opts.bloch_phase = -static_cast<double>(c.nx) * waves::cayley_space_phase(c.M);
        const std::vector<Complex> a(exact.row(0).begin(), exact.row(0).end());
        const std::vector<Complex> b(exact.row(1).begin(), exact.row(1).end());
        deviation = std::max(deviation, max_abs_difference(kg::evolve(a, b, 16, {m0, g}, opts), exact));
    }

    const kg::KGParams p{0.9, g};
    double linear = 0.0;
    bool equivariant = true;
    for (int trial = 0; trial < 20; ++trial) {
        const auto nx = static_cast<std::size_t>(rng.integer(3, 40));
        const auto a0 = rng.slice(nx), a1 = rng.slice(nx), b0 = rng.slice(nx), b1 = rng.slice(nx);
        const Complex alpha = rng.complex();
        const Complex beta = rng.complex();
        std::vector<Complex> c0(nx), c1(nx);
        for (std::size_t j = 0; j < nx; ++j) {
            c0[j] = alpha * a0[j] + beta * b0[j];
            c1[j] = alpha * a1[j] + beta * b1[j];
        }
        const FieldSlab ea = kg::evolve(a0, a1, 16, p);
        const FieldSlab eb = kg::evolve(b0, b1, 16, p);
        const FieldSlab ec = kg::evolve(c0, c1, 16, p);
        for (std::size_t n = 0; n < ec.nt(); ++n) {
            for (std::size_t j = 0; j < nx; ++j) {
                linear = std::max(linear, std::abs(ec(n, j) - (alpha * ea(n, j) + beta * eb(n, j))));
            }
        }

        const auto shift = static_cast<std::size_t>(rng.integer(1, static_cast<std::int64_t>(nx) - 1));
        std::vector<Complex> s0(nx), s1(nx);
        for (std::size_t j = 0; j < nx; ++j) {
            s0[(j + shift) % nx] = a0[j];
            s1[(j + shift) % nx] = a1[j];
        }
        const FieldSlab es = kg::evolve(s0, s1, 16, p);
        for (std::size_t n = 0; n < es.nt(); ++n) {
            for (std::size_t j = 0; j < nx; ++j) equivariant = equivariant && es(n, (j + shift) % nx) == ea(n, j);
        }
    }
    return {9,
            "evolution-fidelity",
            {at_most("max deviation from exact cayley/exponential solutions, 16 steps", deviation, 1e-10),
             at_most("max linearity defect", linear, 1e-11),
             holds("shifted initial data give the bitwise-shifted slab", equivariant)}};
}

CriterionResult continuum_limits()
{
    std::vector<double> ns;
    std::vector<double> errs;
    for (std::int64_t N : {50, 100, 200, 400}) {
        ns.push_back(static_cast<double>(N));
        errs.push_back(waves::continuum_limit_error(waves::WaveForm::cayley, N, ExtendedIndex(2 * N), N, N));
    }
    const double cayley = log_log_slope(ns, errs);

    GridSpec g;
    std::vector<double> scales;
    std::vector<double> gaps;
    for (std::int64_t s : {4, 8, 16, 32}) {
        const std::int64_t N = 3 * s;
        const ExtendedIndex M(5 * s);
        const double w = 2 * kPi / (static_cast<double>(N) * g.tau);
        const double k = 2 * kPi / (static_cast<double>(5 * s) * g.eps);
        const double gap = dispersion::dispersion_residual(dispersion::DispersionForm::exponential, N, M, 0.4, g)
                           - dispersion::dispersion_residual(dispersion::DispersionForm::continuum, N, M, 0.4, g);
        scales.push_back(static_cast<double>(s));
        gaps.push_back(std::abs(gap) / (w * w / (g.c * g.c) + k * k));
    }
    const double exponential = log_log_slope(scales, gaps);
    return {10,
            "continuum-limits",
            {slope_near("cayley phase error vs N (n = N, j = N, M = 2N)", cayley, -2.0, 0.1),
             slope_near("tan relation minus continuum relation vs scale s", exponential, -2.0, 0.1)}};
}

}  // namespace

bool CriterionResult::passed() const
{
    return !checks.empty() && std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.passed; });
}

CriterionResult run_criterion(int id, const Options& options)
{
    Rng rng(options.seed, id);
    switch (id) {
        case 1: return transform_equivalence(rng);
        case 2: return discrete_mass_shell(rng);
        case 3: return product_identity(rng);
        case 4: return total_difference(rng);
        case 5: return beat_velocities(rng);
        case 6: return plane_wave_certification(options);
        case 7: return mass_spectrum();
        case 8: return lorentz_group(options);
        case 9: return evolution_fidelity(rng);
        case 10: return continuum_limits();
        default: break;
    }
    throw std::out_of_range("acceptance criterion id must be 1.." + std::to_string(kCriterionCount));
}

std::vector<CriterionResult> run_all(const Options& options)
{
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id) out.push_back(run_criterion(id, options));
    return out;
}

std::string format_line(const CriterionResult& r)
{
    char head[64];
    std::snprintf(head, sizeof head, "%s %2d  %-26s", r.passed() ? "PASS" : "FAIL", r.id, r.name.c_str());
    std::string line = head;
    for (std::size_t i = 0; i < r.checks.size(); ++i) {
        const Check& c = r.checks[i];
        line += i == 0 ? "  " : "; ";
        line += (c.passed ? "" : "[x] ") + c.what + ": " + c.measured + " (" + c.bound + ")";
    }
    return line;
}

}  // namespace latwave::acceptance
