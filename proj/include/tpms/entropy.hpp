#ifndef TPMS_ENTROPY_HPP
#define TPMS_ENTROPY_HPP

#include "tpms/persistence.hpp"

#include <cmath>
#include <stdexcept>
#include <variant>
#include <vector>

namespace tpms {

struct DropInfinite {};
struct ClampToMaxFiltration {
    double value = 0.0;
};
using InfinitePolicy = std::variant<DropInfinite, ClampToMaxFiltration>;

struct EntropyConfig {
    int dim = 1;
    InfinitePolicy infinite_policy = DropInfinite{};
};

struct EntropyResult {
    double value = 0.0;
    std::size_t bars = 0;
    bool empty = true;
};

/// Shannon entropy (natural log) of the normalised bar lifetimes in one
/// homology dimension.
inline EntropyResult persistence_entropy(const PersistenceDiagram& diagram, const EntropyConfig& cfg)
{
    std::vector<double> lifetimes;
    for (const auto& p : diagram.pairs) {
        if (p.dim != cfg.dim)
            continue;
        double death = p.death;
        if (p.infinite()) {
            if (std::holds_alternative<DropInfinite>(cfg.infinite_policy))
                continue;
            death = std::get<ClampToMaxFiltration>(cfg.infinite_policy).value;
            if (death < p.birth)
                throw std::invalid_argument("persistence_entropy: clamp value below a birth");
        }
        const double l = death - p.birth;
        if (l > 0.0)
            lifetimes.push_back(l);
    }

    EntropyResult r;
    r.bars = lifetimes.size();
    if (lifetimes.empty())
        return r;
    r.empty = false;
    double total = 0.0;
    for (double l : lifetimes)
        total += l;
    double h = 0.0;
    for (double l : lifetimes) {
        const double p = l / total;
        h -= p * std::log(p);
    }
    r.value = h;
    return r;
}

} // namespace tpms

#endif // TPMS_ENTROPY_HPP
