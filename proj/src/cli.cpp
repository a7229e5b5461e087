#include "latwave/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "latwave/acceptance.hpp"
#include "latwave/dispersion.hpp"
#include "latwave/io.hpp"
#include "latwave/kg_lattice.hpp"
#include "latwave/kinematics.hpp"
#include "latwave/lorentz_int.hpp"
#include "latwave/waves.hpp"

namespace latwave::cli {
namespace {

using nlohmann::json;

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Kind {
    number,
    integer,
    index,           // integer or "inf"
    choice,          // one of Param::choices
    flag,            // boolean
    vec3,            // three numbers
    ivec3,           // three integers
    matrix,          // 16 integers, or null
    word,            // letter names, or null
    optional_number, // number or null
    optional_path,   // string or null
};

struct Param {
    std::string key;
    Kind kind;
    json fallback;
    std::string help;
    std::vector<std::string> choices{};
};

struct Context {
    json params;
    GridSpec grid;
    std::string format;
    io::Provenance provenance;
    std::ostream& log;
};

struct Experiment {
    std::string name;
    std::string summary;
    std::vector<std::string> formats;  // the first is the default
    std::vector<Param> params;
    std::string columns;               // CSV column documentation for --help
    std::function<std::string(const json& params)> relation;
    std::function<int(const Context&, std::ostream& data)> run;
};

constexpr double kVerifyTolerance = 1e-10;

std::string flag_name(const std::string& key)
{
    std::string s = key;
    std::replace(s.begin(), s.end(), '_', '-');
    return "--" + s;
}

// ---- parameter typing ---------------------------------------------------

bool is_integer_list(const json& v, std::size_t n)
{
    return v.is_array() && v.size() == n &&
           std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number_integer(); });
}

bool is_number_list(const json& v, std::size_t n)
{
    return v.is_array() && v.size() == n &&
           std::all_of(v.begin(), v.end(), [](const json& e) { return e.is_number(); });
}

void check_type(const Param& p, const json& v)
{
    bool ok = false;
    switch (p.kind) {
    case Kind::number: ok = v.is_number(); break;
    case Kind::integer: ok = v.is_number_integer(); break;
    case Kind::index: ok = v.is_number_integer() || (v.is_string() && v.get<std::string>() == "inf"); break;
    case Kind::choice:
        ok = v.is_string() &&
             std::find(p.choices.begin(), p.choices.end(), v.get<std::string>()) != p.choices.end();
        break;
    case Kind::flag: ok = v.is_boolean(); break;
    case Kind::vec3: ok = is_number_list(v, 3); break;
    case Kind::ivec3: ok = is_integer_list(v, 3); break;
    case Kind::matrix: ok = v.is_null() || is_integer_list(v, 16); break;
    case Kind::word:
        ok = v.is_null() || (v.is_array() && std::all_of(v.begin(), v.end(), [](const json& e) {
                                 return e.is_string();
                             }));
        if (ok && !v.is_null()) {
            try {
                io::word_from_json(v);
            } catch (const io::FormatError& e) {
                throw ConfigError("parameter '" + p.key + "': " + e.what());
            }
        }
        break;
    case Kind::optional_number: ok = v.is_null() || v.is_number(); break;
    case Kind::optional_path: ok = v.is_null() || v.is_string(); break;
    }
    if (!ok) throw ConfigError("parameter '" + p.key + "' has the wrong type or value: " + v.dump());
}

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) out.push_back(item);
    if (s.back() == ',') out.emplace_back();
    return out;
}

json parse_integer(const std::string& s)
{
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (s.empty() || pos != s.size()) throw ConfigError("expected an integer, got '" + s + "'");
    return static_cast<std::int64_t>(v);
}

json parse_number(const std::string& s)
{
    try {
        return io::parse_double(s);
    } catch (const io::FormatError& e) {
        throw ConfigError(e.what());
    }
}

json list_of(const std::string& s, std::size_t n, json (*parse)(const std::string&), const std::string& key)
{
    const auto items = split_list(s);
    if (items.size() != n) {
        throw ConfigError(flag_name(key) + " expects " + std::to_string(n) + " comma-separated values");
    }
    json arr = json::array();
    for (const auto& item : items) arr.push_back(parse(item));
    return arr;
}

// Real-valued entries are stored as doubles, so 2 and 2.0 hash alike.
json canonical(const Param& p, const json& v)
{
    if (v.is_null()) return v;
    switch (p.kind) {
    case Kind::number:
    case Kind::optional_number: return v.get<double>();
    case Kind::vec3: return json{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    default: return v;
    }
}

// Converts a flag string to the JSON value a config file would hold.
json from_flag(const Param& p, const std::string& s)
{
    switch (p.kind) {
    case Kind::number:
    case Kind::optional_number: return parse_number(s);
    case Kind::integer: return parse_integer(s);
    case Kind::index: return s == "inf" ? json("inf") : parse_integer(s);
    case Kind::choice:
    case Kind::optional_path: return s;
    case Kind::flag: return true;
    case Kind::vec3: return list_of(s, 3, parse_number, p.key);
    case Kind::ivec3: return list_of(s, 3, parse_integer, p.key);
    case Kind::matrix: return list_of(s, 16, parse_integer, p.key);
    case Kind::word: {
        json arr = json::array();
        for (const auto& item : split_list(s)) arr.push_back(item);
        return arr;
    }
    }
    return s;
}

// ---- parameter access ---------------------------------------------------

double number(const Context& ctx, const char* key) { return ctx.params.at(key).get<double>(); }

std::int64_t integer(const Context& ctx, const char* key) { return ctx.params.at(key).get<std::int64_t>(); }

std::size_t extent(const Context& ctx, const char* key, std::size_t minimum)
{
    const std::int64_t v = integer(ctx, key);
    if (v < static_cast<std::int64_t>(minimum)) {
        throw DomainError(std::string(key) + " must be >= " + std::to_string(minimum));
    }
    return static_cast<std::size_t>(v);
}

ExtendedIndex index(const Context& ctx, const char* key)
{
    const json& v = ctx.params.at(key);
    if (v.is_string()) return ExtendedIndex::infinity();
    return ExtendedIndex(v.get<std::int64_t>());
}

std::string text(const Context& ctx, const char* key) { return ctx.params.at(key).get<std::string>(); }

kinematics::Vec3 vec3(const Context& ctx, const char* key)
{
    const json& v = ctx.params.at(key);
    return {v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
}

json json_number(double x)
{
    if (std::isfinite(x)) return x;
    return io::format_double(x);
}

json json_index(const ExtendedIndex& M)
{
    if (M.is_infinite()) return "inf";
    return M.value();
}

waves::WaveForm wave_form(const std::string& s)
{
    return s == "cayley" ? waves::WaveForm::cayley : waves::WaveForm::exponential;
}

dispersion::DispersionForm dispersion_form(const std::string& s)
{
    if (s == "cayley") return dispersion::DispersionForm::cayley;
    if (s == "exponential") return dispersion::DispersionForm::exponential;
    return dispersion::DispersionForm::continuum;
}

dispersion::TanCoefficient tan_coefficient(const Context& ctx)
{
    return text(ctx, "tan_coefficient") == "as-printed" ? dispersion::TanCoefficient::as_printed
                                                        : dispersion::TanCoefficient::symmetric;
}

// m0 as given, or the mass that puts (N, M) on the lattice mass shell.
double mode_mass(const Context& ctx, const waves::WaveSpec& spec, dispersion::TanCoefficient coefficient)
{
    const json& v = ctx.params.at("m0");
    if (!v.is_null()) return v.get<double>();
    const auto form = spec.form == waves::WaveForm::cayley ? dispersion::DispersionForm::cayley
                                                           : dispersion::DispersionForm::exponential;
    return dispersion::mass_for_mode(form, spec.N, spec.M, ctx.grid, coefficient);
}

waves::WaveSpec wave_spec(const Context& ctx)
{
    waves::WaveSpec spec{wave_form(text(ctx, "form")), integer(ctx, "N"), index(ctx, "M")};
    spec.validate();
    return spec;
}

// Phase picked up by the wave across nx sites, so evolution can continue a
// mode whose wavelength does not divide the ring.
double wrap_phase(const waves::WaveSpec& spec, std::size_t nx)
{
    if (spec.M.is_infinite()) return 0.0;
    if (spec.form == waves::WaveForm::cayley) {
        return -static_cast<double>(nx) * waves::cayley_space_phase(spec.M);
    }
    const std::int64_t M = spec.M.value();
    const std::int64_t r = static_cast<std::int64_t>(nx % static_cast<std::size_t>(M));
    if (r == 0) return 0.0;
    return -2.0 * kPi * static_cast<double>(r) / static_cast<double>(M);
}

void csv_header(const Context& ctx, std::ostream& data) { io::write_provenance(data, ctx.provenance); }

// ---- experiments --------------------------------------------------------

int run_dispersion_scan(const Context& ctx, std::ostream& data)
{
    const auto sols = dispersion::solve_modes(number(ctx, "m0"), dispersion_form(text(ctx, "form")),
                                              integer(ctx, "n_max"), integer(ctx, "m_max"),
                                              number(ctx, "tol"), ctx.grid);
    if (ctx.format == "csv") {
        csv_header(ctx, data);
        io::write_solutions_csv(data, sols);
        return kExitOk;
    }
    json rows = json::array();
    for (const auto& s : sols) {
        rows.push_back({{"form", dispersion::to_string(s.form)},
                        {"N", s.N},
                        {"M", json_index(s.M)},
                        {"m0", json_number(s.m0)},
                        {"residual", json_number(s.residual)}});
    }
    data << json{{"provenance", io::provenance_json(ctx.provenance)}, {"solutions", rows}}.dump(2) << '\n';
    return kExitOk;
}

int run_lorentz_enumerate(const Context& ctx, std::ostream& data)
{
    const std::int64_t len = integer(ctx, "max_word_len");
    if (len < 0 || len > lorentz::kMaxBallWordLength) {
        throw DomainError("max_word_len must lie in [0, " + std::to_string(lorentz::kMaxBallWordLength) + "]");
    }
    json mats = json::array();
    for (const auto& m : lorentz::enumerate_ball(static_cast<int>(len))) mats.push_back(io::matrix_to_json(m.matrix()));
    data << json{{"provenance", io::provenance_json(ctx.provenance)},
                 {"max_word_len", len},
                 {"count", mats.size()},
                 {"matrices", mats}}
                .dump(2)
         << '\n';
    return kExitOk;
}

int run_lorentz_factorize(const Context& ctx, std::ostream& data)
{
    const json& m = ctx.params.at("matrix");
    const json& w = ctx.params.at("word");
    if (m.is_null() == w.is_null()) throw ConfigError("lorentz-factorize needs exactly one of matrix, word");
    const lorentz::IntLorentzMatrix L =
        m.is_null() ? lorentz::eval_word(io::word_from_json(w)) : lorentz::IntLorentzMatrix(io::matrix_from_json(m));
    const lorentz::GeneratorWord word = lorentz::factorize(L);
    data << json{{"provenance", io::provenance_json(ctx.provenance)},
                 {"matrix", io::matrix_to_json(L.matrix())},
                 {"word", io::word_to_json(word)},
                 {"round_trip", lorentz::eval_word(word) == L}}
                .dump(2)
         << '\n';
    return kExitOk;
}

void write_slab(const Context& ctx, std::ostream& data, const FieldSlab& slab)
{
    if (ctx.format == "binary") {
        io::write_slab_binary(data, slab);
        return;
    }
    csv_header(ctx, data);
    io::write_slab_csv(data, slab);
}

int run_wave_sample(const Context& ctx, std::ostream& data)
{
    waves::WaveSpec spec = wave_spec(ctx);
    spec.amplitude = {number(ctx, "amplitude_re"), number(ctx, "amplitude_im")};
    write_slab(ctx, data, waves::sample(spec, ctx.grid, extent(ctx, "nt", 1), extent(ctx, "nx", 1)));
    return kExitOk;
}

int run_beat_measure(const Context& ctx, std::ostream& data)
{
    const waves::BeatSpec b{number(ctx, "T"), number(ctx, "T2"), number(ctx, "lambda"), number(ctx, "lambda2")};
    GridSpec grid = ctx.grid;
    grid.Nt = extent(ctx, "nt", 1);
    grid.Nx = extent(ctx, "nx", 1);
    grid.boundary = Boundary::shrinking;
    const auto v = waves::beat_velocities(b);
    const auto window = waves::fast_period_window(b, grid);
    const double measured = waves::measure_group_velocity(waves::beat_field(b, grid), window) * grid.eps / grid.tau;
    const double diff = std::abs(measured - v.group);
    const double rel = v.group == 0.0 ? diff : diff / std::abs(v.group);
    const double phase = v.phase.is_finite() ? v.phase.value() : INFINITY;
    if (ctx.format == "csv") {
        csv_header(ctx, data);
        data << "v_phase,v_group,v_measured,relative_error,window_time,window_space\n";
        data << io::format_double(phase) << ',' << io::format_double(v.group) << ','
             << io::format_double(measured) << ',' << io::format_double(rel) << ',' << window.time_steps << ','
             << window.space_sites << '\n';
        return kExitOk;
    }
    data << json{{"provenance", io::provenance_json(ctx.provenance)},
                 {"v_phase", json_number(phase)},
                 {"v_group", json_number(v.group)},
                 {"v_measured", json_number(measured)},
                 {"relative_error", json_number(rel)},
                 {"window_time", window.time_steps},
                 {"window_space", window.space_sites}}
                .dump(2)
         << '\n';
    return kExitOk;
}

int run_kg_residual(const Context& ctx, std::ostream& data)
{
    const waves::WaveSpec spec = wave_spec(ctx);
    const double m0 = mode_mass(ctx, spec, tan_coefficient(ctx));
    const std::size_t n = extent(ctx, "extent", 3);
    GridSpec grid = ctx.grid;
    grid.Nt = n;
    grid.Nx = n;
    grid.boundary = Boundary::shrinking;
    const double residual = kg::plane_wave_residual(spec, {m0, grid}, n);
    csv_header(ctx, data);
    data << "form,N,M,m0,extent,residual\n";
    data << text(ctx, "form") << ',' << spec.N << ',' << io::format_index(spec.M) << ',' << io::format_double(m0)
         << ',' << n << ',' << io::format_double(residual) << '\n';
    return kExitOk;
}

int run_kg_evolve(const Context& ctx, std::ostream& data)
{
    const waves::WaveSpec spec = wave_spec(ctx);
    const double m0 = mode_mass(ctx, spec, dispersion::TanCoefficient::symmetric);
    const std::size_t steps = extent(ctx, "steps", 0);
    const bool verify = ctx.params.at("verify").get<bool>();
    const json& slab_path = ctx.params.at("initial_slab");
    GridSpec grid = ctx.grid;
    grid.boundary = Boundary::periodic;

    FieldSlab initial;
    std::optional<FieldSlab> exact;
    if (!slab_path.is_null()) {
        if (verify) throw ConfigError("verify compares against the closed-form wave and cannot use initial_slab");
        std::ifstream in(slab_path.get<std::string>());
        if (!in) throw ConfigError("cannot read initial_slab '" + slab_path.get<std::string>() + "'");
        try {
            initial = io::read_slab_csv(in, grid);
        } catch (const io::FormatError& e) {
            throw ConfigError(std::string("initial_slab: ") + e.what());
        }
        if (initial.nt() < 2) throw ConfigError("initial_slab needs at least two time slices");
    } else {
        exact = waves::sample(spec, grid, steps + 2, extent(ctx, "nx", 3));
        initial = *exact;
    }
    const json& phase = ctx.params.at("bloch_phase");
    kg::EvolveOptions options;
    options.bloch_phase = phase.is_null() ? wrap_phase(spec, initial.nx()) : phase.get<double>();
    grid.Nt = steps + 2;
    grid.Nx = initial.nx();
    const FieldSlab out = kg::evolve(initial.row(0), initial.row(1), steps, {m0, grid}, options);
    write_slab(ctx, data, out);
    if (!verify) return kExitOk;
    const double dev = max_abs_difference(out, *exact);
    ctx.log << "max deviation from closed-form wave: " << io::format_double(dev) << " (tolerance "
            << io::format_double(kVerifyTolerance) << ")\n";
    return dev <= kVerifyTolerance ? kExitOk : kExitCheckFailed;
}

int run_kinematics_boost(const Context& ctx, std::ostream& data)
{
    const double c = ctx.grid.c;
    const double hbar = ctx.grid.hbar;
    const kinematics::Vec3 v = vec3(ctx, "v");
    const auto s = kinematics::make_particle(number(ctx, "m0"), vec3(ctx, "p"), c);
    const auto boosted = kinematics::transform_particle(s, v, c);
    const auto wave = kinematics::debroglie_map(s, hbar, c);
    const auto wave_b = kinematics::transform_wave(wave.w, wave.k, v, c);

    struct Row {
        const char* frame;
        const kinematics::ParticleState& s;
        double w;
        kinematics::Vec3 k;
    };
    const Row rows[] = {{"input", s, wave.w, wave.k}, {"boosted", boosted, wave_b.w, wave_b.k}};
    if (ctx.format == "csv") {
        csv_header(ctx, data);
        data << "frame,E,px,py,pz,w,kx,ky,kz,mass_shell_defect\n";
        for (const auto& r : rows) {
            data << r.frame << ',' << io::format_double(r.s.E);
            for (double x : r.s.p) data << ',' << io::format_double(x);
            data << ',' << io::format_double(r.w);
            for (double x : r.k) data << ',' << io::format_double(x);
            data << ',' << io::format_double(kinematics::mass_shell_defect(r.s, c)) << '\n';
        }
        return kExitOk;
    }
    json arr = json::array();
    for (const auto& r : rows) {
        arr.push_back({{"frame", r.frame},
                       {"E", json_number(r.s.E)},
                       {"p", {json_number(r.s.p[0]), json_number(r.s.p[1]), json_number(r.s.p[2])}},
                       {"w", json_number(r.w)},
                       {"k", {json_number(r.k[0]), json_number(r.k[1]), json_number(r.k[2])}},
                       {"mass_shell_defect", json_number(kinematics::mass_shell_defect(r.s, c))}});
    }
    data << json{{"provenance", io::provenance_json(ctx.provenance)}, {"frames", arr}}.dump(2) << '\n';
    return kExitOk;
}

int run_quantization_check(const Context& ctx, std::ostream& data)
{
    const json& dj = ctx.params.at("dj");
    const kinematics::LatticeStep step{integer(ctx, "dn"),
                                       {dj[0].get<std::int64_t>(), dj[1].get<std::int64_t>(), dj[2].get<std::int64_t>()}};
    const double m0 = number(ctx, "m0");
    const auto q = dispersion::quantization_check(step, m0, ctx.grid, number(ctx, "tol"));
    const auto s = kinematics::discrete_energy_momentum(m0, step, ctx.grid);
    const auto real = [](const ExtendedReal& x) { return x.is_finite() ? x.value() : INFINITY; };
    csv_header(ctx, data);
    data << "E,p,N_real,M_real,N,M\n";
    data << io::format_double(s.E) << ',' << io::format_double(kinematics::norm(s.p)) << ','
         << io::format_double(real(q.N_real)) << ',' << io::format_double(real(q.M_real)) << ','
         << (q.N ? std::to_string(*q.N) : std::string()) << ',' << (q.M ? io::format_index(*q.M) : std::string())
         << '\n';
    return kExitOk;
}

const std::vector<Experiment>& experiments()
{
    static const std::vector<Experiment> list = {
        {"dispersion-scan",
         "Scan (N, M) for plane waves solving the lattice dispersion relation at a given rest mass.",
         {"csv", "json"},
         {{"form", Kind::choice, "cayley", "dispersion form", {"exponential", "cayley", "continuum"}},
          {"m0", Kind::number, 0.0, "rest mass"},
          {"n_max", Kind::integer, 64, "largest period N scanned (from 2)"},
          {"m_max", Kind::integer, 64, "largest wavelength M scanned (from 2, plus infinity)"},
          {"tol", Kind::number, 1e-9, "absolute residual tolerance"}},
         "CSV columns:\n"
         "  form      dispersion form\n"
         "  N         period in time steps\n"
         "  M         wavelength in space steps, 'inf' for zero wavenumber\n"
         "  m0        rest mass the scan was run at\n"
         "  residual  signed residual of the relation at (N, M, m0)",
         [](const json& p) { return "lattice dispersion relation, " + p.at("form").get<std::string>() + " form"; },
         run_dispersion_scan},
        {"lorentz-enumerate",
         "List the integral Lorentz matrices reachable by words of bounded length in S1..S4.",
         {"json"},
         {{"max_word_len", Kind::integer, 1, "maximum word length"}},
         "JSON output only: 'matrices' holds 16-entry row-major integer arrays.",
         [](const json&) { return "integral Lorentz group generated by S1, S2, S3, S4 (L^T eta L = eta)"; },
         run_lorentz_enumerate},
        {"lorentz-factorize",
         "Factor an orthochronous integral Lorentz matrix into generators.",
         {"json"},
         {{"matrix", Kind::matrix, nullptr, "16 comma-separated integers, row-major"},
          {"word", Kind::word, nullptr, "comma-separated letters (S1..S4, P1..P3) evaluated as the input"}},
         "JSON output only: 'matrix', the factor 'word' and 'round_trip'.",
         [](const json&) { return "integral Lorentz group generated by S1, S2, S3, S4 (L^T eta L = eta)"; },
         run_lorentz_factorize},
        {"wave-sample",
         "Sample a lattice plane wave on an nt x nx slab.",
         {"csv", "binary"},
         {{"form", Kind::choice, "exponential", "wave form", {"exponential", "cayley"}},
          {"N", Kind::integer, 4, "period in time steps"},
          {"M", Kind::index, 4, "wavelength in space steps, or inf"},
          {"nt", Kind::integer, 8, "time slices"},
          {"nx", Kind::integer, 8, "space sites"},
          {"amplitude_re", Kind::number, 1.0, "amplitude, real part"},
          {"amplitude_im", Kind::number, 0.0, "amplitude, imaginary part"}},
         "CSV columns:\n"
         "  n   time index\n"
         "  j   space index\n"
         "  re  real part of psi[n][j]\n"
         "  im  imaginary part of psi[n][j]",
         [](const json& p) { return "lattice plane wave, " + p.at("form").get<std::string>() + " form"; },
         run_wave_sample},
        {"beat-measure",
         "Superpose two cosine modes and measure the envelope velocity.",
         {"csv", "json"},
         {{"T", Kind::number, 40.0, "period of the first mode"},
          {"T2", Kind::number, 60.0, "period of the second mode"},
          {"lambda", Kind::number, 30.0, "wavelength of the first mode (negative: left-moving)"},
          {"lambda2", Kind::number, 50.0, "wavelength of the second mode (negative: left-moving)"},
          {"nt", Kind::integer, 256, "time samples"},
          {"nx", Kind::integer, 1024, "space samples"}},
         "CSV columns:\n"
         "  v_phase         carrier velocity (1/T + 1/T2) / (1/lambda + 1/lambda2), 'inf' if unbounded\n"
         "  v_group         envelope velocity (1/T - 1/T2) / (1/lambda - 1/lambda2)\n"
         "  v_measured      envelope velocity tracked on the sampled field\n"
         "  relative_error  |v_measured - v_group| / |v_group| (absolute when v_group = 0)\n"
         "  window_time     smoothing window in time samples\n"
         "  window_space    smoothing window in space samples",
         [](const json&) { return "two-mode beat: phase and group velocity"; },
         run_beat_measure},
        {"kg-residual",
         "Apply the lattice Klein-Gordon operator to a plane wave and report the largest residual.",
         {"csv"},
         {{"form", Kind::choice, "cayley", "wave form", {"exponential", "cayley"}},
          {"N", Kind::integer, 3, "period in time steps"},
          {"M", Kind::index, 6, "wavelength in space steps, or inf"},
          {"m0", Kind::optional_number, nullptr, "rest mass (default: the mass of the mode)"},
          {"tan_coefficient", Kind::choice, "symmetric",
           "exponential mode mass from the symmetric or as-printed tan coefficient", {"symmetric", "as-printed"}},
          {"extent", Kind::integer, 32, "slab extent in both directions"}},
         "CSV columns:\n"
         "  form      wave form\n"
         "  N         period in time steps\n"
         "  M         wavelength in space steps, 'inf' for zero wavenumber\n"
         "  m0        rest mass used by the operator\n"
         "  extent    slab extent in both directions\n"
         "  residual  largest |L psi| over interior sites",
         [](const json&) { return "lattice Klein-Gordon operator on a plane wave"; },
         run_kg_residual},
        {"kg-evolve",
         "Evolve the lattice Klein-Gordon equation from two slices of a plane wave or a CSV slab.",
         {"csv", "binary"},
         {{"form", Kind::choice, "cayley", "wave form of the initial data", {"exponential", "cayley"}},
          {"N", Kind::integer, 3, "period in time steps"},
          {"M", Kind::index, 6, "wavelength in space steps, or inf"},
          {"m0", Kind::optional_number, nullptr, "rest mass (default: the mass of the mode)"},
          {"nx", Kind::integer, 24, "ring size"},
          {"steps", Kind::integer, 16, "time steps after the two initial slices"},
          {"bloch_phase", Kind::optional_number, nullptr,
           "phase acquired across the ring (default: that of the wave)"},
          {"initial_slab", Kind::optional_path, nullptr, "CSV slab whose first two slices start the run"},
          {"verify", Kind::flag, false, "compare with the closed-form wave; fail above 1e-10"}},
         "CSV columns:\n"
         "  n   time index\n"
         "  j   space index\n"
         "  re  real part of psi[n][j]\n"
         "  im  imaginary part of psi[n][j]",
         [](const json&) { return "implicit time stepping of the lattice Klein-Gordon equation"; },
         run_kg_evolve},
        {"kinematics-boost",
         "Boost a particle and its de Broglie wave.",
         {"csv", "json"},
         {{"m0", Kind::number, 1.0, "rest mass"},
          {"p", Kind::vec3, json{0.75, 0.0, 0.0}, "momentum px,py,pz"},
          {"v", Kind::vec3, json{0.6, 0.0, 0.0}, "boost velocity vx,vy,vz"}},
         "CSV columns:\n"
         "  frame              'input' or 'boosted'\n"
         "  E                  energy\n"
         "  px, py, pz         momentum\n"
         "  w                  de Broglie angular frequency\n"
         "  kx, ky, kz         de Broglie wave vector\n"
         "  mass_shell_defect  E^2/c^2 - p^2 - m0^2 c^2",
         [](const json&) { return "Lorentz boost of (E/c, p) and (w/c, k), w = E/hbar, k = p/hbar"; },
         run_kinematics_boost},
        {"quantization-check",
         "Read a lattice step back as a period and wavelength.",
         {"csv"},
         {{"dn", Kind::integer, 1, "time steps"},
          {"dj", Kind::ivec3, json{0, 0, 0}, "space steps jx,jy,jz"},
          {"m0", Kind::number, 2.0 * kPi, "rest mass"},
          {"tol", Kind::number, 1e-9, "distance to the nearest integer"}},
         "CSV columns:\n"
         "  E       energy of the step\n"
         "  p       momentum magnitude of the step\n"
         "  N_real  h / (tau E)\n"
         "  M_real  h / (eps p), 'inf' at rest\n"
         "  N       nearest integer to N_real when within tol, else empty\n"
         "  M       nearest integer to M_real (or 'inf') when within tol, else empty",
         [](const json&) { return "energy and momentum quantization E = h/(N tau), p = h/(M eps)"; },
         run_quantization_check},
    };
    return list;
}

const Experiment* find_experiment(const std::string& name)
{
    for (const auto& e : experiments()) {
        if (e.name == name) return &e;
    }
    return nullptr;
}

// ---- execution ----------------------------------------------------------

struct Request {
    const Experiment* experiment = nullptr;
    json params = json::object();  // user-supplied values only
    json grid = json::object();
    std::string format;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> output_path;
};

std::filesystem::path resolve_output(const std::string& path)
{
    std::filesystem::path p(path);
    const char* dir = std::getenv(kOutputDirEnv);
    if (p.is_relative() && dir != nullptr && *dir != '\0') p = std::filesystem::path(dir) / p;
    return p;
}

void write_file(const std::filesystem::path& path, const std::string& bytes)
{
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open output '" + path.string() + "'");
    f << bytes;
    if (!f) throw ConfigError("cannot write output '" + path.string() + "'");
}

int execute(const Request& req, std::ostream& out, std::ostream& err)
{
    const Experiment& e = *req.experiment;

    json params = json::object();
    for (const auto& p : e.params) {
        if (req.params.contains(p.key)) {
            check_type(p, req.params.at(p.key));
            params[p.key] = canonical(p, req.params.at(p.key));
        } else {
            params[p.key] = p.fallback;
        }
    }
    for (const auto& item : req.params.items()) {
        if (!params.contains(item.key())) {
            throw ConfigError("unknown parameter '" + item.key() + "' for " + e.name);
        }
    }

    json grid = {{"tau", 1.0}, {"eps", 1.0}, {"c", 1.0}, {"hbar", 1.0}};
    for (const auto& item : req.grid.items()) {
        if (!grid.contains(item.key())) throw ConfigError("unknown grid key '" + item.key() + "'");
        if (!item.value().is_number()) throw ConfigError("grid key '" + item.key() + "' must be a number");
        grid[item.key()] = item.value().get<double>();
    }

    const std::string format = req.format.empty() ? e.formats.front() : req.format;
    if (std::find(e.formats.begin(), e.formats.end(), format) == e.formats.end()) {
        throw ConfigError("format '" + format + "' is not available for " + e.name);
    }
    if (format == "binary" && !req.output_path) throw ConfigError("binary output needs an output path");

    GridSpec spec;
    spec.tau = grid["tau"].get<double>();
    spec.eps = grid["eps"].get<double>();
    spec.c = grid["c"].get<double>();
    spec.hbar = grid["hbar"].get<double>();
    spec.validate();

    const json canonical = {{"experiment", e.name},
                            {"format", format},
                            {"grid", grid},
                            {"params", params},
                            {"seed", req.seed ? json(*req.seed) : json(nullptr)}};
    const io::Provenance provenance{io::config_hash(canonical), e.relation(params), req.seed};

    std::ostringstream data(std::ios::out | std::ios::binary);
    std::ostream& log = req.output_path ? out : err;
    const Context ctx{params, spec, format, provenance, log};
    const int status = e.run(ctx, data);

    if (!req.output_path) {
        out << data.str();
        return status;
    }
    const auto path = resolve_output(*req.output_path);
    write_file(path, data.str());
    if (format == "binary") {
        auto sidecar = path;
        sidecar += ".provenance.json";
        write_file(sidecar, io::provenance_json(provenance).dump(2) + "\n");
    }
    return status;
}

Request request_from_config(const json& cfg)
{
    if (!cfg.is_object()) throw ConfigError("config must be a JSON object");
    static const std::vector<std::string> keys = {"experiment", "grid", "params", "output_path", "format", "seed"};
    for (const auto& item : cfg.items()) {
        if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) {
            throw ConfigError("unknown config key '" + item.key() + "'");
        }
    }
    Request req;
    if (!cfg.contains("experiment") || !cfg["experiment"].is_string()) {
        throw ConfigError("config needs a string 'experiment'");
    }
    req.experiment = find_experiment(cfg["experiment"].get<std::string>());
    if (req.experiment == nullptr) throw ConfigError("unknown experiment '" + cfg["experiment"].get<std::string>() + "'");
    if (cfg.contains("grid")) {
        if (!cfg["grid"].is_object()) throw ConfigError("'grid' must be an object");
        req.grid = cfg["grid"];
    }
    if (cfg.contains("params")) {
        if (!cfg["params"].is_object()) throw ConfigError("'params' must be an object");
        req.params = cfg["params"];
    }
    if (cfg.contains("output_path") && !cfg["output_path"].is_null()) {
        if (!cfg["output_path"].is_string()) throw ConfigError("'output_path' must be a string");
        req.output_path = cfg["output_path"].get<std::string>();
    }
    if (cfg.contains("format")) {
        if (!cfg["format"].is_string()) throw ConfigError("'format' must be a string");
        req.format = cfg["format"].get<std::string>();
    }
    if (cfg.contains("seed") && !cfg["seed"].is_null()) {
        if (!cfg["seed"].is_number_unsigned()) throw ConfigError("'seed' must be a non-negative integer");
        req.seed = cfg["seed"].get<std::uint64_t>();
    }
    return req;
}

json read_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
    }
}

// Flag storage for one experiment subcommand.
struct Bound {
    const Experiment* experiment = nullptr;
    CLI::App* app = nullptr;
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::map<std::string, std::string> grid;
    std::string format;
    std::string output;
    std::uint64_t seed = 0;
};

void add_common_options(CLI::App* app, Bound& b)
{
    for (const char* key : {"tau", "eps", "c", "hbar"}) {
        app->add_option(std::string("--") + key, b.grid[key], std::string("lattice constant ") + key + " (default 1)")
            ->type_name("FLOAT");
    }
    std::string formats;
    for (const auto& f : b.experiment->formats) formats += (formats.empty() ? "" : ", ") + f;
    app->add_option("--format", b.format, "output format: " + formats + " (default " + b.experiment->formats.front() + ")")->type_name("NAME");
    app->add_option("--output", b.output, "output file (default stdout); relative paths resolve against $" +
                                              std::string(kOutputDirEnv) + " when set")
        ->type_name("PATH");
    app->add_option("--seed", b.seed, "seed recorded in the provenance header");
}

const char* type_name(Kind kind)
{
    switch (kind) {
    case Kind::number:
    case Kind::optional_number: return "FLOAT";
    case Kind::integer: return "INT";
    case Kind::index: return "INT|inf";
    case Kind::choice: return "NAME";
    case Kind::flag: return "";
    case Kind::vec3: return "X,Y,Z";
    case Kind::ivec3: return "I,J,K";
    case Kind::matrix: return "INT x16";
    case Kind::word: return "LETTER,...";
    case Kind::optional_path: return "PATH";
    }
    return "";
}

std::string describe(const Param& p)
{
    std::string s = p.help;
    if (!p.choices.empty()) {
        s += " {";
        for (std::size_t i = 0; i < p.choices.size(); ++i) s += (i ? "|" : "") + p.choices[i];
        s += "}";
    }
    if (p.kind != Kind::flag && !p.fallback.is_null()) s += " (default " + p.fallback.dump() + ")";
    return s;
}

Request request_from_flags(const Bound& b)
{
    Request req;
    req.experiment = b.experiment;
    for (const auto& p : b.experiment->params) {
        if (b.app->count(flag_name(p.key)) == 0) continue;
        req.params[p.key] = p.kind == Kind::flag ? json(true) : from_flag(p, b.values.at(p.key));
    }
    for (const auto& [key, value] : b.grid) {
        if (b.app->count("--" + key) > 0) req.grid[key] = parse_number(value);
    }
    req.format = b.format;
    if (b.app->count("--output") > 0) req.output_path = b.output;
    if (b.app->count("--seed") > 0) req.seed = b.seed;
    return req;
}

int run_verify(const std::vector<std::string>& as_printed, std::optional<std::uint64_t> seed,
               std::optional<int> criterion, std::ostream& out)
{
    acceptance::Options opts;
    if (seed) opts.seed = *seed;
    for (const auto& s : as_printed) {
        if (s == "s4") {
            opts.as_printed_s4 = true;
        } else if (s == "tan-dispersion") {
            opts.as_printed_tan = true;
        } else {
            throw ConfigError("--as-printed accepts s4 or tan-dispersion, got '" + s + "'");
        }
    }
    std::vector<acceptance::CriterionResult> results;
    if (criterion) {
        if (*criterion < 1 || *criterion > acceptance::kCriterionCount) {
            throw ConfigError("--criterion must lie in [1, " + std::to_string(acceptance::kCriterionCount) + "]");
        }
        results.push_back(acceptance::run_criterion(*criterion, opts));
    } else {
        results = acceptance::run_all(opts);
    }
    bool all = true;
    for (const auto& r : results) {
        out << acceptance::format_line(r) << '\n';
        all = all && r.passed();
    }
    return all ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Space-time lattice wave experiments."};
    app.name(io::kToolName);
    app.set_version_flag("--version", io::kToolVersion);
    app.require_subcommand(1);

    std::vector<std::unique_ptr<Bound>> bound;
    for (const auto& e : experiments()) {
        auto b = std::make_unique<Bound>();
        b->experiment = &e;
        b->app = app.add_subcommand(e.name, e.summary);
        for (const auto& p : e.params) {
            if (p.kind == Kind::flag) {
                b->app->add_flag(flag_name(p.key), b->flags[p.key], describe(p));
            } else {
                b->app->add_option(flag_name(p.key), b->values[p.key], describe(p))->type_name(type_name(p.kind));
            }
        }
        add_common_options(b->app, *b);
        b->app->footer(e.columns);
        bound.push_back(std::move(b));
    }

    std::string config_path;
    CLI::App* run_cmd = app.add_subcommand("run", "Run an experiment described by a JSON config file.");
    run_cmd->add_option("--config", config_path, "config file")->required();
    run_cmd->footer(
        "Config keys: experiment, grid {tau, eps, c, hbar}, params {experiment flags with '_' for '-'},\n"
        "output_path, format, seed. Unknown keys are rejected.");

    std::vector<std::string> as_printed;
    std::uint64_t verify_seed = acceptance::kDefaultSeed;
    int criterion = 0;
    CLI::App* verify_cmd = app.add_subcommand("verify", "Run the acceptance suite and print one line per criterion.");
    verify_cmd->add_option("--as-printed", as_printed, "use typeset forms: s4, tan-dispersion")->delimiter(',');
    verify_cmd->add_option("--seed", verify_seed, "seed of the randomized checks");
    verify_cmd->add_option("--criterion", criterion, "run a single criterion");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInvalidConfig;
    }

    try {
        if (*run_cmd) return execute(request_from_config(read_config(config_path)), out, err);
        if (*verify_cmd) {
            return run_verify(as_printed,
                              verify_cmd->count("--seed") ? std::optional<std::uint64_t>(verify_seed) : std::nullopt,
                              verify_cmd->count("--criterion") ? std::optional<int>(criterion) : std::nullopt, out);
        }
        for (const auto& b : bound) {
            if (*b->app) return execute(request_from_flags(*b), out, err);
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const io::FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidConfig;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomainError;
    } catch (const std::filesystem::filesystem_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidConfig;
    }
    return kExitInvalidConfig;
}

}  // namespace latwave::cli
