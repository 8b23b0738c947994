#pragma once

#include <optional>

#include "mfstruct/tables.hpp"

namespace mfstruct {

enum class TailMode { FixedN, TargetError };

// Calibrated constant in the truncation certificate
//   tail = c_tail * K (1+|s|) / (log N)^(A-j-1).
// Fixed against the exactly-known families (1/zeta, its twists, zeta(2s)/zeta(s)):
// large enough that observed truncation error over 10^4 <= N <= 10^6 stays
// below the certificate (worst measured ratio 0.06), small enough that the
// derivative thresholds at genuine zeros stay below |L^(m)| even for the
// largest empirical K in the catalog.
inline constexpr double kTailCalibration = 0.25;

struct SeriesEvaluationConfig {
    double A = 4.0;              // assumed decay exponent, > 1
    double K = 1.0;              // partial-sum constant, > 0
    uint64_t truncation = 100000;
    TailMode tail_mode = TailMode::FixedN;
    double target_error = 1e-3;  // used in TargetError mode
    double c_tail = kTailCalibration;
    uint64_t hard_cap = 100000000;  // choose_truncation refuses beyond this
    int workers = 1;

    void validate() const;
};

struct LEvaluation {
    cplx s;
    int j = 0;
    cplx value;
    double tail_estimate = 0.0;
    double c_tail = kTailCalibration;
    uint64_t truncation = 0;
};

// Truncated series for L^(j)(s,f), Re(s) >= 1, j < A-1.
LEvaluation eval_L_derivative(const MultFnTable& table, int j, cplx s,
                              const SeriesEvaluationConfig& cfg);

// Smallest power of ten N with c_tail K (1+|t|) / (log N)^(A-j-1) <= target_error,
// floored at 100; INFEASIBLE beyond cfg.hard_cap.
uint64_t choose_truncation(const SeriesEvaluationConfig& cfg, int j, double t, double target_error);

struct GammaEntry {
    double gamma = 0.0;
    int multiplicity = 0;
    std::vector<double> derivative_magnitudes;  // |L^(0..D)| at 1+i gamma
};

struct GammaMultiset {
    std::vector<GammaEntry> entries;  // sorted by gamma
    int D = 0;
    double T = 0.0;

    int total() const {
        int t = 0;
        for (const auto& e : entries) t += e.multiplicity;
        return t;
    }
};

struct GridPoint {
    double gamma = 0.0;
    double absL = 0.0;
    double tail = 0.0;
};

struct RefinedZero {
    double gamma = 0.0;
    int multiplicity = 0;
    std::vector<double> derivative_magnitudes;
    double absL = 0.0;
    bool merged = false;  // absorbed a neighbor closer than the merge radius
};

struct ZeroScanReport {
    std::vector<GridPoint> grid;
    std::vector<size_t> candidates;  // indices into grid
    std::vector<RefinedZero> refined;
    double zero_threshold_floor = 0.0;        // 1e-3 * median grid |L|
    std::vector<double> derivative_medians;   // median |L^(j)| over the grid, j = 0..D
    double ordinate_tolerance = 0.0;
    double grid_step = 0.0;
};

// |L(1+i gamma)| over gamma in [-T, T]; local minima under the zero threshold
// are refined by golden-section minimization and classified by multiplicity.
ZeroScanReport scan_zeros(const MultFnTable& table, int D, double T,
                          const SeriesEvaluationConfig& cfg, double grid_step = 1e-2);

// Smallest j in [0, D] with |L^(j)(1+i gamma)| above its threshold.
// Thresholds take the grid medians when supplied (scan path) and otherwise
// are computed from a coarse subgrid around gamma.
int multiplicity_at(const MultFnTable& table, double gamma, int D,
                    const SeriesEvaluationConfig& cfg);
int multiplicity_at(const MultFnTable& table, double gamma, int D,
                    const SeriesEvaluationConfig& cfg, const std::vector<double>& derivative_medians,
                    std::vector<double>* magnitudes_out);

// Zeros with multiplicity from a scan; MULTIPLICITY_OVERFLOW when the total
// exceeds D.
GammaMultiset build_gamma_multiset(const MultFnTable& table, int D, double T,
                                   const SeriesEvaluationConfig& cfg, double grid_step = 1e-2);

// sum_{p <= x} (m + Re(f(p) p^{-i gamma})) / p over sieved primes.
double log_density_sum(const MultFnTable& table, double gamma, int m, uint64_t x);

// G_j(s) = (-1)^j L^(j)(s) / L(s), Re(s) > 1.
cplx eval_G(const MultFnTable& table, int j, cplx s, const SeriesEvaluationConfig& cfg);

// Dirichlet coefficients of G_j by power-series division on tables:
// g_j * f = coefficients of (-1)^j L^(j), i.e. f(n) (log n)^j.
std::vector<cplx> g_coefficients(const MultFnTable& table, int j, uint64_t N);

// Shared engine: L^(j)(sigma + i t_r) for t_r = t0 + r dt, r = 0..count-1,
// all orders j = 0..jmax in one pass over the table.
std::vector<std::vector<cplx>> eval_L_grid(const MultFnTable& table, double sigma, double t0,
                                           double dt, size_t count, int jmax, uint64_t truncation,
                                           int workers = 1);

// Same engine over an explicit coefficient list (n, a_n).
std::vector<cplx> grid_dirichlet_sum(const std::vector<std::pair<uint64_t, cplx>>& coeffs,
                                     double sigma, double t0, double dt, size_t count);

// n^{-s} with conjugate-exact phases: cos(t ln n) - i sin(t ln n).
cplx n_to_minus_s(uint64_t n, double sigma, double t);

}  // namespace mfstruct
