#include "latwave/io.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace latwave::io {
namespace {

constexpr std::array<char, 4> kMagic{'K', 'G', 'L', '1'};

void put_u32(std::ostream& out, std::uint32_t v)
{
    std::array<char, 4> b{};
    for (std::size_t i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xFFU);
    out.write(b.data(), 4);
}

void put_f64(std::ostream& out, double x)
{
    const auto bits = std::bit_cast<std::uint64_t>(x);
    std::array<char, 8> b{};
    for (std::size_t i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xFFU);
    out.write(b.data(), 8);
}

template <std::size_t Bytes>
std::uint64_t get_le(std::istream& in, const char* what)
{
    std::array<unsigned char, Bytes> b{};
    if (!in.read(reinterpret_cast<char*>(b.data()), Bytes)) {
        throw FormatError(std::string("binary slab: truncated ") + what);
    }
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < Bytes; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

std::vector<std::string> split_csv(const std::string& line)
{
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::size_t parse_size(const std::string& s)
{
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(s, &pos);
    } catch (const std::exception&) {
        throw FormatError("expected a non-negative integer, got '" + s + "'");
    }
    if (pos != s.size() || s.front() == '-') throw FormatError("expected a non-negative integer, got '" + s + "'");
    return static_cast<std::size_t>(v);
}

}  // namespace

std::string format_double(double x)
{
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

double parse_double(const std::string& s)
{
    if (s.empty()) throw FormatError("expected a number, got an empty field");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    // ERANGE also flags subnormal results, which round-trip fine; only overflow is rejected.
    if (end != s.c_str() + s.size() || (errno == ERANGE && std::isinf(v))) {
        throw FormatError("expected a number, got '" + s + "'");
    }
    return v;
}

std::string format_index(const ExtendedIndex& M) { return M.to_string(); }

ExtendedIndex parse_index(const std::string& s)
{
    if (s == "inf") return ExtendedIndex::infinity();
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (const std::exception&) {
        throw FormatError("expected an integer or 'inf', got '" + s + "'");
    }
    if (pos != s.size()) throw FormatError("expected an integer or 'inf', got '" + s + "'");
    return ExtendedIndex(static_cast<std::int64_t>(v));
}

std::string config_hash(const nlohmann::json& config)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : config.dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

void write_provenance(std::ostream& out, const Provenance& p)
{
    out << "# tool: " << kToolName << '\n';
    out << "# version: " << kToolVersion << '\n';
    out << "# config-hash: " << p.config_hash << '\n';
    out << "# relation: " << p.relation << '\n';
    out << "# seed: " << (p.seed ? std::to_string(*p.seed) : std::string("none")) << '\n';
}

nlohmann::json provenance_json(const Provenance& p)
{
    nlohmann::json j;
    j["tool"] = kToolName;
    j["version"] = kToolVersion;
    j["config_hash"] = p.config_hash;
    j["relation"] = p.relation;
    j["seed"] = p.seed ? nlohmann::json(*p.seed) : nlohmann::json(nullptr);
    return j;
}

void write_slab_csv(std::ostream& out, const FieldSlab& slab)
{
    out << "n,j,re,im\n";
    for (std::size_t n = 0; n < slab.nt(); ++n) {
        for (std::size_t j = 0; j < slab.nx(); ++j) {
            const Complex z = slab(n, j);
            out << n << ',' << j << ',' << format_double(z.real()) << ',' << format_double(z.imag()) << '\n';
        }
    }
}

FieldSlab read_slab_csv(std::istream& in, const GridSpec& grid)
{
    struct Site {
        std::size_t n, j;
        Complex z;
    };
    std::vector<Site> sites;
    std::string line;
    bool header = false;
    std::size_t nt = 0;
    std::size_t nx = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header) {
            if (line != "n,j,re,im") throw FormatError("slab csv: expected header 'n,j,re,im'");
            header = true;
            continue;
        }
        const auto f = split_csv(line);
        if (f.size() != 4) throw FormatError("slab csv: expected 4 columns in '" + line + "'");
        Site s{parse_size(f[0]), parse_size(f[1]), {parse_double(f[2]), parse_double(f[3])}};
        nt = std::max(nt, s.n + 1);
        nx = std::max(nx, s.j + 1);
        sites.push_back(s);
    }
    if (!header) throw FormatError("slab csv: missing header");
    if (sites.size() != nt * nx) throw FormatError("slab csv: sites do not fill a rectangle");
    FieldSlab slab(nt, nx, grid);
    std::vector<bool> seen(nt * nx, false);
    for (const auto& s : sites) {
        if (seen[s.n * nx + s.j]) throw FormatError("slab csv: duplicate site");
        seen[s.n * nx + s.j] = true;
        slab(s.n, s.j) = s.z;
    }
    return slab;
}

void write_slab_binary(std::ostream& out, const FieldSlab& slab)
{
    constexpr auto kMax = std::numeric_limits<std::uint32_t>::max();
    if (slab.nt() > kMax || slab.nx() > kMax) throw DomainError("binary slab: extents exceed 32 bits");
    out.write(kMagic.data(), 4);
    put_u32(out, static_cast<std::uint32_t>(slab.nt()));
    put_u32(out, static_cast<std::uint32_t>(slab.nx()));
    for (const Complex& z : slab.data()) {
        put_f64(out, z.real());
        put_f64(out, z.imag());
    }
}

FieldSlab read_slab_binary(std::istream& in, const GridSpec& grid)
{
    std::array<char, 4> magic{};
    if (!in.read(magic.data(), 4) || magic != kMagic) throw FormatError("binary slab: bad magic, expected KGL1");
    const auto nt = static_cast<std::size_t>(get_le<4>(in, "header"));
    const auto nx = static_cast<std::size_t>(get_le<4>(in, "header"));
    FieldSlab slab(nt, nx, grid);
    for (Complex& z : slab.data()) {
        const double re = std::bit_cast<double>(get_le<8>(in, "payload"));
        const double im = std::bit_cast<double>(get_le<8>(in, "payload"));
        z = {re, im};
    }
    if (in.peek() != std::char_traits<char>::eof()) throw FormatError("binary slab: trailing bytes");
    return slab;
}

void write_solutions_csv(std::ostream& out, const std::vector<dispersion::DispersionSolution>& sols)
{
    out << "form,N,M,m0,residual\n";
    for (const auto& s : sols) {
        out << dispersion::to_string(s.form) << ',' << s.N << ',' << format_index(s.M) << ','
            << format_double(s.m0) << ',' << format_double(s.residual) << '\n';
    }
}

nlohmann::json matrix_to_json(const lorentz::IntMatrix4& m)
{
    const lorentz::BigInt lo = std::numeric_limits<std::int64_t>::min();
    const lorentz::BigInt hi = std::numeric_limits<std::int64_t>::max();
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& e : m.entries) {
        if (e < lo || e > hi) throw DomainError("matrix entry does not fit in a 64-bit JSON integer");
        arr.push_back(static_cast<std::int64_t>(e));
    }
    return arr;
}

lorentz::IntMatrix4 matrix_from_json(const nlohmann::json& j)
{
    if (!j.is_array() || j.size() != 16) throw FormatError("matrix: expected an array of 16 integers");
    lorentz::IntMatrix4 m;
    for (std::size_t i = 0; i < 16; ++i) {
        if (!j[i].is_number_integer()) throw FormatError("matrix: entries must be integers");
        m.entries[i] = j[i].get<std::int64_t>();
    }
    return m;
}

nlohmann::json word_to_json(const lorentz::GeneratorWord& w)
{
    nlohmann::json arr = nlohmann::json::array();
    for (auto l : w) arr.push_back(std::string(lorentz::to_string(l)));
    return arr;
}

lorentz::GeneratorWord word_from_json(const nlohmann::json& j)
{
    if (!j.is_array()) throw FormatError("word: expected an array of letter names");
    lorentz::GeneratorWord w;
    for (const auto& e : j) {
        if (!e.is_string()) throw FormatError("word: letters must be strings");
        try {
            w.push_back(lorentz::letter_from_string(e.get<std::string>()));
        } catch (const DomainError& err) {
            throw FormatError(std::string("word: ") + err.what());
        }
    }
    return w;
}

}  // namespace latwave::io
