#ifndef TPMS_SURFACE_FIELD_HPP
#define TPMS_SURFACE_FIELD_HPP

// Implicit TPMS fields, their sampled lattices, and the shape-factor sets the
// pipeline sweeps over.

#include "tpms/fixtures.hpp"
#include "tpms/geometry.hpp"
#include "tpms/io.hpp"
#include "tpms/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tpms {

enum class Family { SchwarzP, Gyroid };

inline std::string_view to_string(Family f) { return f == Family::SchwarzP ? "schwarz" : "gyroid"; }

inline Family parse_family(std::string_view s)
{
    s = trim(s);
    if (s == "schwarz" || s == "schwarzp" || s == "SchwarzP")
        return Family::SchwarzP;
    if (s == "gyroid" || s == "Gyroid")
        return Family::Gyroid;
    throw ParseError("unknown surface family '" + std::string(s) + "'");
}

/// f(x,y,z) for one family at angular frequencies (a, b, c) and shape factor d.
struct FieldSpec {
    Family family = Family::SchwarzP;
    double a = 1.0;
    double b = 1.0;
    double c = 1.0;
    double d = 0.0;
    Box domain{};

    void validate() const
    {
        if (!(a > 0.0) || !(b > 0.0) || !(c > 0.0))
            throw std::invalid_argument("field frequencies a, b, c must be positive");
        if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c) || !std::isfinite(d))
            throw std::invalid_argument("field parameters must be finite");
        const Vec3 e = domain.extent();
        if (!(e.x > 0.0) || !(e.y > 0.0) || !(e.z > 0.0) || !is_finite(domain.lo) || !is_finite(domain.hi))
            throw std::invalid_argument("field domain must have positive finite extent on every axis");
    }

    /// Per-axis Lipschitz bound of f; |df/dx| <= a + ... for both families.
    double lipschitz() const { return a + b + c; }
};

inline double evaluate(const FieldSpec& spec, Vec3 p)
{
    const double ax = spec.a * p.x;
    const double by = spec.b * p.y;
    const double cz = spec.c * p.z;
    switch (spec.family) {
    case Family::SchwarzP:
        return std::cos(ax) + std::cos(by) + std::cos(cz) + spec.d;
    case Family::Gyroid:
        return std::sin(ax) * std::cos(by) + std::sin(by) * std::cos(cz) + std::sin(cz) * std::cos(ax) + spec.d;
    }
    return 0.0;
}

struct Dims {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::size_t nz = 0;

    std::size_t count() const { return nx * ny * nz; }
    std::size_t operator[](int axis) const { return axis == 0 ? nx : (axis == 1 ? ny : nz); }
    friend bool operator==(const Dims&, const Dims&) = default;
};

/// Scalar samples on a regular lattice, x-fastest.
struct Grid3 {
    Dims dims;
    Vec3 origin;
    Vec3 spacing;
    std::vector<double> values;

    std::size_t index(std::size_t i, std::size_t j, std::size_t k) const { return i + dims.nx * (j + dims.ny * k); }
    double at(std::size_t i, std::size_t j, std::size_t k) const { return values[index(i, j, k)]; }
    Vec3 node(std::size_t i, std::size_t j, std::size_t k) const
    {
        return {origin.x + static_cast<double>(i) * spacing.x, origin.y + static_cast<double>(j) * spacing.y,
                origin.z + static_cast<double>(k) * spacing.z};
    }
    double max_spacing() const { return std::max({spacing.x, spacing.y, spacing.z}); }

    void validate() const
    {
        if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1)
            throw std::invalid_argument("grid dims must be positive");
        if (values.size() != dims.count())
            throw std::invalid_argument("grid value count does not match dims");
        for (double v : values)
            if (!std::isfinite(v))
                throw std::invalid_argument("grid contains a non-finite value");
    }
};

/// Samples spec on an nx*ny*nz lattice spanning spec.domain, endpoints
/// included. Slabs along z may be filled on several threads; every value is
/// computed independently so the result does not depend on `jobs`.
inline Grid3 sample_grid(const FieldSpec& spec, Dims dims, unsigned jobs = 1)
{
    spec.validate();
    if (dims.nx < 2 || dims.ny < 2 || dims.nz < 2)
        throw std::invalid_argument("sample_grid: every dimension must be >= 2");

    Grid3 g;
    g.dims = dims;
    g.origin = spec.domain.lo;
    const Vec3 e = spec.domain.extent();
    g.spacing = {e.x / static_cast<double>(dims.nx - 1), e.y / static_cast<double>(dims.ny - 1),
                 e.z / static_cast<double>(dims.nz - 1)};
    g.values.resize(dims.count());
    parallel_for(dims.nz, jobs, [&](std::size_t k) {
        for (std::size_t j = 0; j < dims.ny; ++j)
            for (std::size_t i = 0; i < dims.nx; ++i)
                g.values[g.index(i, j, k)] = evaluate(spec, g.node(i, j, k));
    });
    return g;
}

/// `.grid` text format: header `nx ny nz ox oy oz sx sy sz`, then one value
/// per line in x-fastest order.
inline std::string format_grid(const Grid3& g)
{
    std::string out;
    out.reserve(g.values.size() * 24 + 128);
    out += std::to_string(g.dims.nx) + ' ' + std::to_string(g.dims.ny) + ' ' + std::to_string(g.dims.nz);
    for (double v : {g.origin.x, g.origin.y, g.origin.z, g.spacing.x, g.spacing.y, g.spacing.z}) {
        out += ' ';
        out += format_double(v);
    }
    out += '\n';
    for (double v : g.values) {
        out += format_double(v);
        out += '\n';
    }
    return out;
}

inline Grid3 parse_grid(std::string_view text)
{
    auto lines = split(text, '\n');
    while (!lines.empty() && trim(lines.back()).empty())
        lines.pop_back();
    if (lines.empty())
        throw ParseError("grid: missing header");

    std::vector<std::string_view> head;
    for (auto tok : split(trim(lines[0]), ' '))
        if (!trim(tok).empty())
            head.push_back(tok);
    if (head.size() != 9)
        throw ParseError("grid: header must have 9 fields");

    Grid3 g;
    g.dims = {parse_unsigned(head[0]), parse_unsigned(head[1]), parse_unsigned(head[2])};
    g.origin = {parse_finite(head[3]), parse_finite(head[4]), parse_finite(head[5])};
    g.spacing = {parse_finite(head[6]), parse_finite(head[7]), parse_finite(head[8])};
    if (lines.size() - 1 != g.dims.count())
        throw ParseError("grid: expected " + std::to_string(g.dims.count()) + " values, found " +
                         std::to_string(lines.size() - 1));
    g.values.reserve(g.dims.count());
    for (std::size_t i = 1; i < lines.size(); ++i)
        g.values.push_back(parse_finite(lines[i]));
    g.validate();
    return g;
}

inline void write_grid(const std::filesystem::path& path, const Grid3& g) { write_file_atomic(path, format_grid(g)); }
inline Grid3 read_grid(const std::filesystem::path& path) { return parse_grid(read_text_file(path)); }

// ---------------------------------------------------------------------------
// Shape factors

struct ReferenceFixture {};
struct Seeded {
    std::uint64_t seed = 0;
};
using ShapeFactorSource = std::variant<ReferenceFixture, Seeded>;

struct ShapeFactorSet {
    std::vector<double> values;
    ShapeFactorSource provenance;
};

/// Uniform draw on [-1, 1] from the top 53 bits of a 64-bit Mersenne Twister,
/// so the sequence is identical across standard libraries.
inline double uniform_pm1(std::mt19937_64& rng)
{
    const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
    return -1.0 + 2.0 * u;
}

inline ShapeFactorSet shape_factors(std::size_t n, const ShapeFactorSource& source)
{
    ShapeFactorSet set{{}, source};
    if (std::holds_alternative<ReferenceFixture>(source)) {
        for (const auto& row : fixtures::kPorosityTable)
            set.values.push_back(row.d);
    } else {
        if (n < 1)
            throw std::invalid_argument("shape_factors: n must be >= 1");
        std::mt19937_64 rng(std::get<Seeded>(source).seed);
        for (std::size_t i = 0; i < n; ++i)
            set.values.push_back(uniform_pm1(rng));
    }
    std::sort(set.values.begin(), set.values.end());
    return set;
}

} // namespace tpms

#endif // TPMS_SURFACE_FIELD_HPP
