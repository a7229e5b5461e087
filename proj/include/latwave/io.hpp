#pragma once

// Serialization of slabs, mode tables and group elements, plus the
// provenance header written at the top of every result file.
//
// Slab CSV:      n,j,re,im           one row per site, row-major
// Slab binary:   "KGL1", u32 Nt, u32 Nx (little-endian), then Nt*Nx pairs
//                of little-endian IEEE doubles (re, im), row-major
// Modes CSV:     form,N,M,m0,residual   (M = "inf" for zero wavenumber)
// Matrices:      JSON arrays of 16 integers, row-major
// Words:         JSON arrays of letter names

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "latwave/dispersion.hpp"
#include "latwave/grid.hpp"
#include "latwave/lorentz_int.hpp"

namespace latwave::io {

inline constexpr const char* kToolName = "latwave";
inline constexpr const char* kToolVersion = "0.1.0";

/// Raised on malformed input files.
class FormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shortest round-trip decimal form ("%.17g"); "inf", "-inf" and "nan" for
/// non-finite values.
std::string format_double(double x);

/// Parses what format_double writes. Throws FormatError.
double parse_double(const std::string& s);

/// M as an integer or "inf".
std::string format_index(const ExtendedIndex& M);
ExtendedIndex parse_index(const std::string& s);

struct Provenance {
    std::string config_hash;
    std::string relation;               // the relation the run exercises
    std::optional<std::uint64_t> seed;  // absent for deterministic runs
};

/// "fnv1a64:" + 16 hex digits over the compact dump of `config`. Object keys
/// are sorted by the JSON library, so the hash is canonical.
std::string config_hash(const nlohmann::json& config);

/// Lines "# key: value" for tool, version, config hash, relation and seed.
void write_provenance(std::ostream& out, const Provenance& p);

/// The same record as a JSON object.
nlohmann::json provenance_json(const Provenance& p);

void write_slab_csv(std::ostream& out, const FieldSlab& slab);

/// Skips '#' comment lines and the header row. Every site must appear
/// exactly once. The grid is attached to the result unchanged.
FieldSlab read_slab_csv(std::istream& in, const GridSpec& grid);

void write_slab_binary(std::ostream& out, const FieldSlab& slab);
FieldSlab read_slab_binary(std::istream& in, const GridSpec& grid);

void write_solutions_csv(std::ostream& out, const std::vector<dispersion::DispersionSolution>& sols);

/// Throws DomainError if an entry does not fit in a signed 64-bit integer.
nlohmann::json matrix_to_json(const lorentz::IntMatrix4& m);
/// Throws FormatError unless `j` is an array of 16 integers.
lorentz::IntMatrix4 matrix_from_json(const nlohmann::json& j);

nlohmann::json word_to_json(const lorentz::GeneratorWord& w);
lorentz::GeneratorWord word_from_json(const nlohmann::json& j);

}  // namespace latwave::io
