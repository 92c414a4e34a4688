#ifndef TPMS_POROSITY_HPP
#define TPMS_POROSITY_HPP

#include "tpms/surface_field.hpp"

#include <stdexcept>

namespace tpms {

enum class SolidSide { Negative, Positive };

struct PorosityResult {
    double fraction_negative = 0.0;
    double fraction_positive = 0.0;
    double vp = 0.0;
    Dims resolution;
};

/// Volume fractions of {f < 0} and {f > 0} from lattice samples.
///
/// Each node carries the trapezoid weight of its cell (1/2 per axis on which
/// it is a boundary node), so a lattice spanning whole periods counts every
/// periodic image once. Nodes with f == 0 contribute half their weight to
/// each side. vp = 1 - fraction(solid_side).
inline PorosityResult voxel_porosity(const Grid3& grid, SolidSide solid_side)
{
    grid.validate();
    const auto& dm = grid.dims;
    auto weight = [](std::size_t i, std::size_t n) { return (n > 1 && (i == 0 || i + 1 == n)) ? 0.5 : 1.0; };

    // Per-(j,k) row sums keep the accumulation order fixed.
    double neg = 0.0;
    double pos = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < dm.nz; ++k)
        for (std::size_t j = 0; j < dm.ny; ++j) {
            const double wjk = weight(j, dm.ny) * weight(k, dm.nz);
            double row_neg = 0.0, row_pos = 0.0, row_total = 0.0;
            for (std::size_t i = 0; i < dm.nx; ++i) {
                const double w = weight(i, dm.nx);
                const double v = grid.at(i, j, k);
                row_total += w;
                if (v < 0.0)
                    row_neg += w;
                else if (v > 0.0)
                    row_pos += w;
                else {
                    row_neg += 0.5 * w;
                    row_pos += 0.5 * w;
                }
            }
            neg += wjk * row_neg;
            pos += wjk * row_pos;
            total += wjk * row_total;
        }

    PorosityResult r;
    r.fraction_negative = neg / total;
    r.fraction_positive = pos / total;
    r.vp = 1.0 - (solid_side == SolidSide::Negative ? r.fraction_negative : r.fraction_positive);
    r.resolution = dm;
    return r;
}

/// (vc - vs) / vc.
inline double porosity_from_volumes(double vc, double vs)
{
    if (!(vc > 0.0))
        throw std::invalid_argument("porosity_from_volumes: vc must be positive");
    if (!(vs >= 0.0) || vs > vc)
        throw std::invalid_argument("porosity_from_volumes: vs must lie in [0, vc]");
    return (vc - vs) / vc;
}

} // namespace tpms

#endif // TPMS_POROSITY_HPP
