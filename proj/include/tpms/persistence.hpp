#ifndef TPMS_PERSISTENCE_HPP
#define TPMS_PERSISTENCE_HPP

#include "tpms/filtered_complex.hpp"
#include "tpms/io.hpp"

#include <algorithm>
#include <cstdint>
#include <iterator>
#include <limits>
#include <set>
#include <string>
#include <vector>

namespace tpms {

struct PersistencePair {
    int dim = 0;
    double birth = 0.0;
    double death = std::numeric_limits<double>::infinity();

    bool infinite() const { return death == std::numeric_limits<double>::infinity(); }
    double lifetime() const { return death - birth; }
    friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
};

inline bool pair_less(const PersistencePair& a, const PersistencePair& b)
{
    if (a.dim != b.dim)
        return a.dim < b.dim;
    if (a.birth != b.birth)
        return a.birth < b.birth;
    return a.death < b.death;
}

/// Pairs sorted by (dim, birth, death), so equal multisets compare equal.
struct PersistenceDiagram {
    std::vector<PersistencePair> pairs;

    std::vector<PersistencePair> in_dim(int dim) const
    {
        std::vector<PersistencePair> out;
        std::copy_if(pairs.begin(), pairs.end(), std::back_inserter(out),
                     [dim](const PersistencePair& p) { return p.dim == dim; });
        return out;
    }
    std::size_t infinite_count(int dim) const
    {
        return static_cast<std::size_t>(std::count_if(pairs.begin(), pairs.end(), [dim](const PersistencePair& p) {
            return p.dim == dim && p.infinite();
        }));
    }
    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

/// Pairing by simplex position in the filtration, zero-length pairs included.
struct IndexPairing {
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs; // (creator, destroyer)
    std::vector<std::uint32_t> essential;
};

namespace detail {

inline constexpr std::uint32_t kUnpaired = std::numeric_limits<std::uint32_t>::max();

/// target ^= other over Z/2 for sorted index lists.
inline void add_column(std::vector<std::uint32_t>& target, const std::vector<std::uint32_t>& other,
                       std::vector<std::uint32_t>& scratch)
{
    scratch.clear();
    std::set_symmetric_difference(target.begin(), target.end(), other.begin(), other.end(),
                                  std::back_inserter(scratch));
    target.swap(scratch);
}

} // namespace detail

/// Column reduction over Z/2 with clearing: dimensions are reduced from the
/// top down, and every row that becomes a pivot in dimension k + 1 marks the
/// dimension-k column of that simplex as already zero.
inline IndexPairing reduce_with_clearing(const FilteredComplex& c)
{
    auto cols = boundary_columns(c);
    const std::size_t n = c.size();
    std::vector<std::uint32_t> pivot_owner(n, detail::kUnpaired);
    std::vector<char> cleared(n, 0);
    std::vector<char> destroyer(n, 0);
    std::vector<std::vector<std::uint32_t>> by_dim(4);
    for (std::uint32_t i = 0; i < n; ++i)
        by_dim[static_cast<std::size_t>(c.simplices[i].dim)].push_back(i);

    IndexPairing out;
    std::vector<std::uint32_t> scratch;
    for (int dim = 3; dim >= 1; --dim) {
        for (std::uint32_t j : by_dim[static_cast<std::size_t>(dim)]) {
            if (cleared[j]) {
                cols[j].clear();
                continue;
            }
            auto& col = cols[j];
            while (!col.empty()) {
                const std::uint32_t owner = pivot_owner[col.back()];
                if (owner == detail::kUnpaired)
                    break;
                detail::add_column(col, cols[owner], scratch);
            }
            if (!col.empty()) {
                const std::uint32_t low = col.back();
                pivot_owner[low] = j;
                cleared[low] = 1;
                destroyer[j] = 1;
                out.pairs.emplace_back(low, j);
            }
        }
    }
    for (std::uint32_t i = 0; i < n; ++i)
        if (!cleared[i] && !destroyer[i])
            out.essential.push_back(i);
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

/// Textbook left-to-right reduction of the whole boundary matrix. Kept as an
/// independent reference for reduce_with_clearing.
inline IndexPairing naive_pairing(const FilteredComplex& c)
{
    const auto boundary = boundary_columns(c);
    const std::size_t n = c.size();
    std::vector<std::set<std::uint32_t>> cols(n);
    for (std::size_t j = 0; j < n; ++j)
        cols[j].insert(boundary[j].begin(), boundary[j].end());

    std::vector<std::uint32_t> low_to_col(n, detail::kUnpaired);
    for (std::uint32_t j = 0; j < n; ++j) {
        auto& col = cols[j];
        while (!col.empty()) {
            const std::uint32_t low = *col.rbegin();
            const std::uint32_t k = low_to_col[low];
            if (k == detail::kUnpaired)
                break;
            for (std::uint32_t r : cols[k]) {
                if (!col.erase(r))
                    col.insert(r);
            }
        }
        if (!col.empty())
            low_to_col[*col.rbegin()] = j;
    }

    IndexPairing out;
    std::vector<char> paired(n, 0);
    for (std::uint32_t j = 0; j < n; ++j)
        if (!cols[j].empty()) {
            const std::uint32_t low = *cols[j].rbegin();
            out.pairs.emplace_back(low, j);
            paired[low] = paired[j] = 1;
        }
    for (std::uint32_t i = 0; i < n; ++i)
        if (!paired[i])
            out.essential.push_back(i);
    std::sort(out.pairs.begin(), out.pairs.end());
    return out;
}

/// Diagram from a pairing; zero-length pairs are dropped.
inline PersistenceDiagram to_diagram(const FilteredComplex& c, const IndexPairing& pairing)
{
    PersistenceDiagram d;
    for (const auto& [b, e] : pairing.pairs) {
        const Simplex& sb = c.simplices[b];
        const Simplex& se = c.simplices[e];
        if (se.value > sb.value)
            d.pairs.push_back({sb.dim, sb.value, se.value});
    }
    for (std::uint32_t i : pairing.essential)
        d.pairs.push_back({c.simplices[i].dim, c.simplices[i].value, std::numeric_limits<double>::infinity()});
    std::sort(d.pairs.begin(), d.pairs.end(), pair_less);
    return d;
}

inline PersistenceDiagram compute_persistence(const FilteredComplex& c)
{
    return to_diagram(c, reduce_with_clearing(c));
}

inline PersistenceDiagram naive_reduce(const FilteredComplex& c) { return to_diagram(c, naive_pairing(c)); }

/// sum_k (-1)^k (#k-simplices)
inline long long euler_characteristic(const FilteredComplex& c)
{
    long long chi = 0;
    for (const auto& s : c.simplices)
        chi += (s.dim % 2 == 0) ? 1 : -1;
    return chi;
}

/// sum_k (-1)^k (#infinite bars in dimension k)
inline long long essential_euler(const PersistenceDiagram& d)
{
    long long chi = 0;
    for (const auto& p : d.pairs)
        if (p.infinite())
            chi += (p.dim % 2 == 0) ? 1 : -1;
    return chi;
}

/// Every simplex appears exactly once in a pair or as essential, and each
/// pair joins adjacent dimensions.
inline bool pairing_is_complete(const FilteredComplex& c, const IndexPairing& pairing)
{
    std::vector<int> seen(c.size(), 0);
    for (const auto& [b, e] : pairing.pairs) {
        if (c.simplices[e].dim != c.simplices[b].dim + 1 || b >= e)
            return false;
        ++seen[b];
        ++seen[e];
    }
    for (std::uint32_t i : pairing.essential)
        ++seen[i];
    return std::all_of(seen.begin(), seen.end(), [](int s) { return s == 1; });
}

// `diagram.csv`: header `dim,birth,death`, infinite deaths written as `inf`.

inline std::string format_diagram(const PersistenceDiagram& d)
{
    std::string out = "dim,birth,death\n";
    for (const auto& p : d.pairs)
        out += std::to_string(p.dim) + ',' + format_double(p.birth) + ',' + format_double(p.death) + '\n';
    return out;
}

inline PersistenceDiagram parse_diagram(std::string_view text)
{
    auto lines = split(text, '\n');
    if (lines.empty() || trim(lines[0]) != "dim,birth,death")
        throw ParseError("diagram: expected header 'dim,birth,death'");
    PersistenceDiagram d;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (trim(lines[i]).empty())
            continue;
        const auto cells = split(trim(lines[i]), ',');
        if (cells.size() != 3)
            throw ParseError("diagram: row " + std::to_string(i) + " must have 3 fields");
        PersistencePair p;
        p.dim = static_cast<int>(parse_unsigned(cells[0]));
        p.birth = parse_finite(cells[1]);
        p.death = parse_double(cells[2]);
        if (std::isnan(p.death) || p.death < p.birth)
            throw ParseError("diagram: row " + std::to_string(i) + " has death < birth");
        d.pairs.push_back(p);
    }
    std::sort(d.pairs.begin(), d.pairs.end(), pair_less);
    return d;
}

} // namespace tpms

#endif // TPMS_PERSISTENCE_HPP
