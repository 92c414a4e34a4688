#ifndef TPMS_FIXTURES_HPP
#define TPMS_FIXTURES_HPP

// Reference data for the Schwarz P / Gyroid shape-factor study,
// embedded verbatim so the regression stage can run without the geometry and
// topology stages.

#include <array>
#include <optional>
#include <string_view>

namespace tpms::fixtures {

struct PorosityRow {
    double d;
    double schwarz;
    double gyroid;
};

/// Porosity per shape factor, ascending d.
inline constexpr std::array<PorosityRow, 20> kPorosityTable{{
    {-0.985086, 0.796602, 0.806768}, {-0.834337, 0.777147, 0.831175}, {-0.602925, 0.759682, 0.859706},
    {-0.357099, 0.730533, 0.887477}, {-0.350885, 0.730399, 0.887931}, {-0.262321, 0.707480, 0.896708},
    {-0.086151, 0.681178, 0.995867}, {0.184648, 0.667845, 0.989362},  {0.429486, 0.689464, 0.989704},
    {0.446178, 0.685388, 0.992671},  {0.465395, 0.690117, 0.991798},  {0.583936, 0.671619, 0.984828},
    {0.642550, 0.664104, 0.975655},  {0.713229, 0.670550, 0.974905},  {0.721315, 0.666064, 0.980358},
    {0.778426, 0.673395, 0.975438},  {0.867778, 0.680311, 0.979937},  {0.873779, 0.671111, 0.980480},
    {0.953246, 0.686131, 0.995606},  {0.959561, 0.686817, 0.996571},
}};

struct EntropyRow {
    double d;
    double headed_schwarz; // third column as printed
    double headed_gyroid;  // fourth column as printed
};

/// 1-persistence entropy per shape factor, columns in printed order.
///
/// The printed headers are transposed with respect to the reference models
/// and RMSE tables: the quadratic Gyroid model 8.83 - 1.06 d^2 is the
/// least-squares fit of the column headed "Schwarz", and the quartic Schwarz
/// model fits the column headed "Gyroid". pe1_schwarz()/pe1_gyroid() return
/// the columns under the model-consistent assignment.
inline constexpr std::array<EntropyRow, 20> kEntropyTable{{
    {-0.985086, 7.828019, 12.817731}, {-0.834337, 8.086322, 11.421037}, {-0.602925, 8.421331, 10.059915},
    {-0.357099, 8.694553, 8.853321},  {-0.350885, 8.698730, 8.856987},  {-0.262321, 8.778409, 8.563515},
    {-0.086151, 8.893371, 8.089089},  {0.184648, 8.821489, 7.165093},   {0.429486, 8.609666, 6.492101},
    {0.446178, 8.594761, 6.458588},   {0.465395, 8.577064, 6.398883},   {0.583936, 8.452268, 6.092819},
    {0.642550, 8.380563, 5.921346},   {0.713229, 8.281657, 5.739262},   {0.721315, 8.267385, 5.713075},
    {0.778426, 8.178185, 5.532658},   {0.867778, 8.030560, 5.232656},   {0.873779, 8.022236, 5.235386},
    {0.953246, 7.872525, 5.054533},   {0.959561, 7.865700, 5.054643},
}};

constexpr double pe1_schwarz(const EntropyRow& r) { return r.headed_gyroid; }
constexpr double pe1_gyroid(const EntropyRow& r) { return r.headed_schwarz; }

struct RmseRow {
    int degree;
    double schwarz;
    double gyroid;
};

/// Mean test RMSE, polynomial model, shape factor -> PE1.
inline constexpr std::array<RmseRow, 8> kPe1PolynomialRmse{{
    {1, 0.410427, 0.418837}, {2, 0.255528, 0.025773}, {3, 0.117023, 0.055177}, {4, 0.062917, 0.029832},
    {5, 0.068506, 0.133599}, {6, 0.220459, 0.272051}, {7, 0.395311, 0.226815}, {8, 0.910539, 1.387404},
}};

/// Mean test RMSE, exponential model, shape factor -> PE1.
inline constexpr std::array<RmseRow, 8> kPe1ExponentialRmse{{
    {1, 0.242320, 0.424048}, {2, 0.305091, 0.021064}, {3, 0.074146, 0.040753}, {4, 0.112339, 0.028396},
    {5, 0.379184, 0.124916}, {6, 5.164287, 0.269900}, {7, 0.498869, 0.192177}, {8, 1.340072, 0.690750},
}};

/// Mean test RMSE, polynomial model, shape factor -> porosity.
inline constexpr std::array<RmseRow, 8> kPorosityRmse{{
    {1, 0.035765, 0.049244}, {2, 0.015448, 0.021227}, {3, 0.015445, 0.154869},  {4, 0.210800, 0.249551},
    {5, 0.079919, 0.990721}, {6, 2.419949, 2.262439}, {7, 18.010812, 6.147779}, {8, 121.490580, 74.947167},
}};

/// Reported dependence models (ascending coefficients, intercept first).
struct ReportedModel {
    std::string_view response;
    int degree;
    std::array<double, 5> coefficients;
    double rmse;
};

inline constexpr std::array<ReportedModel, 4> kReportedModels{{
    {"porosity_schwarz", 3, {0.694, -0.068, 0.05, 0.01, 0.0}, 0.015},
    {"pe1_schwarz", 4, {7.74, -2.92, 0.52, -1.06, 0.66}, 0.063},
    {"porosity_gyroid", 2, {0.953, 0.097, -0.067, 0.0, 0.0}, 0.021},
    {"pe1_gyroid", 2, {8.83, 0.0, -1.06, 0.0, 0.0}, 0.026},
}};

} // namespace tpms::fixtures

#endif // TPMS_FIXTURES_HPP
