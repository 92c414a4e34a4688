#ifndef TPMS_FILTERED_COMPLEX_HPP
#define TPMS_FILTERED_COMPLEX_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace tpms {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

/// Simplex of dimension 0..3 with vertices sorted ascending; unused slots
/// hold kNoVertex.
struct Simplex {
    std::array<VertexId, 4> v{kNoVertex, kNoVertex, kNoVertex, kNoVertex};
    int dim = 0;
    double value = 0.0;

    std::span<const VertexId> vertices() const { return {v.data(), static_cast<std::size_t>(dim + 1)}; }
};

/// Lexicographic on the vertex tuple; shorter tuples never tie with longer
/// ones because unused slots sort last.
inline bool filtration_less(const Simplex& a, const Simplex& b)
{
    if (a.value != b.value)
        return a.value < b.value;
    if (a.dim != b.dim)
        return a.dim < b.dim;
    return a.v < b.v;
}

class ComplexError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FilteredComplex {
    std::vector<Simplex> simplices;

    std::size_t size() const { return simplices.size(); }
    int max_dim() const
    {
        int d = -1;
        for (const auto& s : simplices)
            d = std::max(d, s.dim);
        return d;
    }
    std::size_t count(int dim) const
    {
        return static_cast<std::size_t>(
            std::count_if(simplices.begin(), simplices.end(), [dim](const Simplex& s) { return s.dim == dim; }));
    }
};

inline Simplex make_simplex(std::span<const VertexId> verts, double value)
{
    Simplex s;
    s.dim = static_cast<int>(verts.size()) - 1;
    std::copy(verts.begin(), verts.end(), s.v.begin());
    std::sort(s.v.begin(), s.v.begin() + verts.size());
    s.value = value;
    return s;
}

inline void sort_filtration(FilteredComplex& c)
{
    std::sort(c.simplices.begin(), c.simplices.end(), filtration_less);
}

namespace detail {

struct SimplexKeyHash {
    std::size_t operator()(const std::array<VertexId, 4>& k) const
    {
        std::uint64_t h = 0xcbf29ce484222325ull;
        for (VertexId x : k) {
            h ^= x;
            h *= 0x100000001b3ull;
        }
        return static_cast<std::size_t>(h ^ (h >> 29));
    }
};

using SimplexIndex = std::unordered_map<std::array<VertexId, 4>, std::uint32_t, SimplexKeyHash>;

inline std::array<VertexId, 4> facet_key(const Simplex& s, int drop)
{
    std::array<VertexId, 4> key{kNoVertex, kNoVertex, kNoVertex, kNoVertex};
    int w = 0;
    for (int i = 0; i <= s.dim; ++i)
        if (i != drop)
            key[w++] = s.v[i];
    return key;
}

} // namespace detail

/// Boundary columns of a sorted complex: for each simplex, the positions of
/// its facets in ascending order. Throws ComplexError if a facet is missing,
/// duplicated, or enters after its cofacet.
inline std::vector<std::vector<std::uint32_t>> boundary_columns(const FilteredComplex& c)
{
    detail::SimplexIndex index;
    index.reserve(c.size() * 2);
    for (std::uint32_t i = 0; i < c.size(); ++i) {
        if (!index.emplace(c.simplices[i].v, i).second)
            throw ComplexError("duplicate simplex in complex");
    }

    std::vector<std::vector<std::uint32_t>> cols(c.size());
    for (std::uint32_t i = 0; i < c.size(); ++i) {
        const Simplex& s = c.simplices[i];
        if (s.dim == 0)
            continue;
        auto& col = cols[i];
        col.reserve(static_cast<std::size_t>(s.dim + 1));
        for (int drop = 0; drop <= s.dim; ++drop) {
            const auto it = index.find(detail::facet_key(s, drop));
            if (it == index.end())
                throw ComplexError("complex is not closed under faces");
            if (it->second >= i || c.simplices[it->second].value > s.value)
                throw ComplexError("non-monotone filtration: a face enters after its cofacet");
            col.push_back(it->second);
        }
        std::sort(col.begin(), col.end());
    }
    return cols;
}

/// Full invariant check: sorted vertex tuples, finite values, total order,
/// closure, monotonicity, no duplicates.
inline void validate(const FilteredComplex& c)
{
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Simplex& s = c.simplices[i];
        if (s.dim < 0 || s.dim > 3)
            throw ComplexError("simplex dimension out of range");
        if (!std::isfinite(s.value))
            throw ComplexError("non-finite filtration value");
        for (int k = 0; k < s.dim; ++k)
            if (!(s.v[k] < s.v[k + 1]))
                throw ComplexError("simplex vertices must be strictly ascending");
        for (int k = s.dim + 1; k < 4; ++k)
            if (s.v[k] != kNoVertex)
                throw ComplexError("unused vertex slot must be empty");
        if (i > 0 && !filtration_less(c.simplices[i - 1], s))
            throw ComplexError("complex is not in filtration order");
    }
    (void)boundary_columns(c);
}

} // namespace tpms

#endif // TPMS_FILTERED_COMPLEX_HPP
