#ifndef TPMS_PREDICATES_HPP
#define TPMS_PREDICATES_HPP

// Orientation and in-sphere tests with a floating-point filter and an exact
// rational fallback. Signs follow the classic convention:
//   orient3d(a,b,c,d) = sign det[a-d; b-d; c-d]
//   insphere(a,b,c,d,e) > 0  iff  e lies inside the sphere through a,b,c,d
//                              when orient3d(a,b,c,d) > 0.

#include "tpms/geometry.hpp"

#include <gmpxx.h>

#include <atomic>
#include <cmath>

namespace tpms::predicates {

inline constexpr double kEpsilon = 0x1p-53;
inline constexpr double kOrientBound = (7.0 + 56.0 * kEpsilon) * kEpsilon;
inline constexpr double kInsphereBound = (16.0 + 224.0 * kEpsilon) * kEpsilon;

/// Number of times the exact path ran (diagnostics only).
inline std::atomic<unsigned long long>& exact_fallbacks()
{
    static std::atomic<unsigned long long> count{0};
    return count;
}

inline int sign_of(const mpq_class& q) { return sgn(q); }

inline int orient3d_exact(Vec3 a, Vec3 b, Vec3 c, Vec3 d)
{
    const mpq_class dx(d.x), dy(d.y), dz(d.z);
    const mpq_class adx = mpq_class(a.x) - dx, ady = mpq_class(a.y) - dy, adz = mpq_class(a.z) - dz;
    const mpq_class bdx = mpq_class(b.x) - dx, bdy = mpq_class(b.y) - dy, bdz = mpq_class(b.z) - dz;
    const mpq_class cdx = mpq_class(c.x) - dx, cdy = mpq_class(c.y) - dy, cdz = mpq_class(c.z) - dz;
    const mpq_class det = adz * (bdx * cdy - cdx * bdy) + bdz * (cdx * ady - adx * cdy) + cdz * (adx * bdy - bdx * ady);
    return sign_of(det);
}

inline int orient3d(Vec3 a, Vec3 b, Vec3 c, Vec3 d)
{
    const double adx = a.x - d.x, bdx = b.x - d.x, cdx = c.x - d.x;
    const double ady = a.y - d.y, bdy = b.y - d.y, cdy = c.y - d.y;
    const double adz = a.z - d.z, bdz = b.z - d.z, cdz = c.z - d.z;

    const double bdxcdy = bdx * cdy, cdxbdy = cdx * bdy;
    const double cdxady = cdx * ady, adxcdy = adx * cdy;
    const double adxbdy = adx * bdy, bdxady = bdx * ady;

    const double det = adz * (bdxcdy - cdxbdy) + bdz * (cdxady - adxcdy) + cdz * (adxbdy - bdxady);
    const double permanent = (std::abs(bdxcdy) + std::abs(cdxbdy)) * std::abs(adz) +
                             (std::abs(cdxady) + std::abs(adxcdy)) * std::abs(bdz) +
                             (std::abs(adxbdy) + std::abs(bdxady)) * std::abs(cdz);
    const double bound = kOrientBound * permanent;
    if (det > bound)
        return 1;
    if (-det > bound)
        return -1;
    exact_fallbacks().fetch_add(1, std::memory_order_relaxed);
    return orient3d_exact(a, b, c, d);
}

inline int insphere_exact(Vec3 a, Vec3 b, Vec3 c, Vec3 d, Vec3 e)
{
    const mpq_class ex(e.x), ey(e.y), ez(e.z);
    const mpq_class aex = mpq_class(a.x) - ex, aey = mpq_class(a.y) - ey, aez = mpq_class(a.z) - ez;
    const mpq_class bex = mpq_class(b.x) - ex, bey = mpq_class(b.y) - ey, bez = mpq_class(b.z) - ez;
    const mpq_class cex = mpq_class(c.x) - ex, cey = mpq_class(c.y) - ey, cez = mpq_class(c.z) - ez;
    const mpq_class dex = mpq_class(d.x) - ex, dey = mpq_class(d.y) - ey, dez = mpq_class(d.z) - ez;

    const mpq_class ab = aex * bey - bex * aey;
    const mpq_class bc = bex * cey - cex * bey;
    const mpq_class cd = cex * dey - dex * cey;
    const mpq_class da = dex * aey - aex * dey;
    const mpq_class ac = aex * cey - cex * aey;
    const mpq_class bd = bex * dey - dex * bey;

    const mpq_class abc = aez * bc - bez * ac + cez * ab;
    const mpq_class bcd = bez * cd - cez * bd + dez * bc;
    const mpq_class cda = cez * da + dez * ac + aez * cd;
    const mpq_class dab = dez * ab + aez * bd + bez * da;

    const mpq_class alift = aex * aex + aey * aey + aez * aez;
    const mpq_class blift = bex * bex + bey * bey + bez * bez;
    const mpq_class clift = cex * cex + cey * cey + cez * cez;
    const mpq_class dlift = dex * dex + dey * dey + dez * dez;

    const mpq_class det = (dlift * abc - clift * dab) + (blift * cda - alift * bcd);
    return sign_of(det);
}

inline int insphere(Vec3 a, Vec3 b, Vec3 c, Vec3 d, Vec3 e)
{
    const double aex = a.x - e.x, aey = a.y - e.y, aez = a.z - e.z;
    const double bex = b.x - e.x, bey = b.y - e.y, bez = b.z - e.z;
    const double cex = c.x - e.x, cey = c.y - e.y, cez = c.z - e.z;
    const double dex = d.x - e.x, dey = d.y - e.y, dez = d.z - e.z;

    const double aexbey = aex * bey, bexaey = bex * aey;
    const double bexcey = bex * cey, cexbey = cex * bey;
    const double cexdey = cex * dey, dexcey = dex * cey;
    const double dexaey = dex * aey, aexdey = aex * dey;
    const double aexcey = aex * cey, cexaey = cex * aey;
    const double bexdey = bex * dey, dexbey = dex * bey;

    const double ab = aexbey - bexaey;
    const double bc = bexcey - cexbey;
    const double cd = cexdey - dexcey;
    const double da = dexaey - aexdey;
    const double ac = aexcey - cexaey;
    const double bd = bexdey - dexbey;

    const double abc = aez * bc - bez * ac + cez * ab;
    const double bcd = bez * cd - cez * bd + dez * bc;
    const double cda = cez * da + dez * ac + aez * cd;
    const double dab = dez * ab + aez * bd + bez * da;

    const double alift = aex * aex + aey * aey + aez * aez;
    const double blift = bex * bex + bey * bey + bez * bez;
    const double clift = cex * cex + cey * cey + cez * cez;
    const double dlift = dex * dex + dey * dey + dez * dez;

    const double det = (dlift * abc - clift * dab) + (blift * cda - alift * bcd);

    const double abp = std::abs(aexbey) + std::abs(bexaey);
    const double bcp = std::abs(bexcey) + std::abs(cexbey);
    const double cdp = std::abs(cexdey) + std::abs(dexcey);
    const double dap = std::abs(dexaey) + std::abs(aexdey);
    const double acp = std::abs(aexcey) + std::abs(cexaey);
    const double bdp = std::abs(bexdey) + std::abs(dexbey);
    const double permanent =
        ((cdp * std::abs(bez) + bdp * std::abs(cez) + bcp * std::abs(dez)) * alift) +
        ((dap * std::abs(cez) + acp * std::abs(dez) + cdp * std::abs(aez)) * blift) +
        ((abp * std::abs(dez) + bdp * std::abs(aez) + dap * std::abs(bez)) * clift) +
        ((bcp * std::abs(aez) + acp * std::abs(bez) + abp * std::abs(cez)) * dlift);
    const double bound = kInsphereBound * permanent;
    if (det > bound)
        return 1;
    if (-det > bound)
        return -1;
    exact_fallbacks().fetch_add(1, std::memory_order_relaxed);
    return insphere_exact(a, b, c, d, e);
}

/// True iff a, b, c lie on one line (exact).
inline bool collinear(Vec3 a, Vec3 b, Vec3 c)
{
    const mpq_class ax(a.x), ay(a.y), az(a.z);
    const mpq_class ux = mpq_class(b.x) - ax, uy = mpq_class(b.y) - ay, uz = mpq_class(b.z) - az;
    const mpq_class vx = mpq_class(c.x) - ax, vy = mpq_class(c.y) - ay, vz = mpq_class(c.z) - az;
    return sgn(uy * vz - uz * vy) == 0 && sgn(uz * vx - ux * vz) == 0 && sgn(ux * vy - uy * vx) == 0;
}

} // namespace tpms::predicates

#endif // TPMS_PREDICATES_HPP
