#ifndef TPMS_TPMS_HPP
#define TPMS_TPMS_HPP

#include "tpms/alpha.hpp"
#include "tpms/delaunay.hpp"
#include "tpms/entropy.hpp"
#include "tpms/exact_fit.hpp"
#include "tpms/filtered_complex.hpp"
#include "tpms/fixtures.hpp"
#include "tpms/persistence.hpp"
#include "tpms/point_cloud.hpp"
#include "tpms/porosity.hpp"
#include "tpms/regress.hpp"
#include "tpms/rips.hpp"
#include "tpms/surface_field.hpp"

#endif // TPMS_TPMS_HPP
