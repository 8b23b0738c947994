#pragma once

#include <cmath>

#include "mfstruct/analytic.hpp"
#include "mfstruct/mf_core.hpp"

namespace mfstruct {

// ---- compensated prime sums and the theorem harness -------------------------

// psi(x) = sum_{p <= x} (f(p) + sum_{gamma in Gamma, |gamma| <= T} p^{i gamma}) log p
cplx compensated_prime_sum(const MultFnTable& table, const GammaMultiset& gamma, double T,
                           uint64_t x);
std::vector<std::pair<uint64_t, cplx>> compensated_prime_sums(const MultFnTable& table,
                                                              const GammaMultiset& gamma, double T,
                                                              const std::vector<uint64_t>& checkpoints);

struct TheoremCheckpoint {
    uint64_t x = 0;
    cplx psi;
    double normalized = 0.0;  // |psi| sqrt(log x) / x
};

struct VerificationReport {
    std::string label;
    int D = 0;
    double A = 0.0;
    double K = 0.0;
    GammaMultiset gamma;
    std::vector<TheoremCheckpoint> points;
    std::vector<PartialSumPoint> hypothesis_points;  // |S(x)| (log x)^A / x
    double fitted_C = 0.0;  // least-squares envelope |psi| ~ C x / sqrt(log x)
    bool psi_all_zero = false;
    bool hypothesis_pass = false;
    bool decay_pass = false;
    bool pass = false;
    std::string note;
};

// Decay verdict: the normalized psi sequence's max over the top half of
// checkpoints must not exceed its max over the bottom half (or psi == 0).
// The same envelope rule, with the (log x)^A weight, gates the small-partial-
// sums hypothesis first.
VerificationReport theorem_report(const MultFnTable& table, int D, double A, double K,
                                  const GammaMultiset& gamma, double T,
                                  const std::vector<uint64_t>& checkpoints);

// ---- A_N enumeration --------------------------------------------------------

struct ANQuery {
    std::vector<double> gammas;  // pairwise distinct ordinates
    int N = 1;                   // power parameter
    double x = 0.0;              // target
    double relation_tolerance = 1e-9;
    double enumeration_cap = 1e8;  // on (k+1)^{2N}
};

struct ANResult {
    uint64_t value = 0;  // A_N(x); exact when relations are unambiguous
    uint64_t an0 = 0;    // A_N(0)
    std::vector<uint64_t> an_gamma;  // A_N(gamma_j) per ordinate
    double normalized_an0 = 0.0;     // A_N(0) / ((k+1)^{2N} N^{-k/2})
    double min_gamma_ratio = 0.0;    // min_j A_N(gamma_j) / A_N(0)
};

// Exact enumeration over pairs of exponent vectors (compositions of N into
// k+1 parts), accumulating products of multinomial coefficients.
ANResult a_n_value(const ANQuery& q);

struct MultiplicityInequalityResult {
    double lambda_N = 0.0;  // (1/loglog x) Re sum f(p)/p |1 + p^{i g_1} + ...|^{2N}
    double lower_bound = 0.0;  // -D A_N(0)
    double slack = 0.0;
    double sum_m_an_gamma = 0.0;  // sum_l m_l A_N(gamma_l)
    double d_an0 = 0.0;           // D A_N(0)
    bool lambda_ok = false;       // lambda_N >= lower_bound - slack
    bool inequality_ok = false;   // sum_m_an_gamma <= D A_N(0)
};

MultiplicityInequalityResult multiplicity_inequality_check(
    const MultFnTable& table, const std::vector<std::pair<double, int>>& gamma_with_mult, int Npow,
    uint64_t x, double slack_factor = 0.15);

// ---- hyperbola cross-check --------------------------------------------------

struct HyperbolaResult {
    cplx direct;
    cplx hyperbola;
    double difference = 0.0;
};

// sum_{n<=x} (f * tau_{Gamma~})(n) via the convolution sieve vs the
// two-piece hyperbola split with parameter z.
HyperbolaResult hyperbola_f_gamma_sums(const MultFnTable& table, const RealMultiset& gamma_tilde,
                                       uint64_t x, double z);

// ---- special case G = tau_D * g ----------------------------------------------

struct SpecialCaseResult {
    uint64_t x_used = 0;          // range for the convolution checks
    double lambda_min_real = 0.0;  // min Re Lambda_{G * conj G}
    double lambda_max_imag = 0.0;  // max |Im Lambda_{G * conj G}|
    double gg_partial_sum = 0.0;   // Re sum_{n <= x_used} (G * conj G)(n)
    double deviation_sum = 0.0;    // sum_{p <= x} |f(p) + D p^{i gamma}| log p
    double normalized_deviation = 0.0;  // * (log x)^{(A-1-D)/2} / x
};

SpecialCaseResult special_case_check(const MultFnTable& table, double gamma, int D, uint64_t x,
                                     double A);

// ---- smoothed Perron identity -------------------------------------------------

struct PerronConfig {
    double x = 1000.0;
    double T = 1000.0;
    int kernel_power = 10;  // fixed by the identity
    double step = 0.02;     // quadrature step on the vertical line
    double t_max = 0.0;     // 0: auto = max(4 T0, 200) extended to meet the tail target

    double T0() const { return std::sqrt(T); }
    double c() const { return 1.0 + 1.0 / std::log(x); }
};

struct PerronResult {
    cplx lhs;          // line integral at the fine step
    cplx lhs_coarse;   // same at double step, for the consistency probe
    cplx rhs_main;     // sum_{n <= x} Lambda_F(n) log n
    cplx smoothing_correction;  // kernel weights on (x, x e^{10/T0}]
    cplx prime_form;            // sum_{p <= x} (f(p) + sum p^{i gamma}) (log p)^2
    cplx prime_power_residual;  // rhs_main - prime_form
    double discrepancy = 0.0;   // |lhs - rhs_main - smoothing_correction|
    double budget = 0.0;        // 10 x log x / T0 + quadrature_budget
    double quadrature_budget = 0.0;
    double tail_bound = 0.0;   // omitted |t| > t_max majorant
    double richardson = 0.0;   // |lhs - lhs_coarse|
    double t_max = 0.0;
    double step = 0.0;
};

PerronResult perron_check(const MultFnTable& table, const RealMultiset& gamma_tilde,
                          const PerronConfig& cfg);

// P[U_1 + ... + U_n > v] for iid U(0,1); the exact weight of the Perron kernel.
double irwin_hall_survival(double v, int n);

// ---- short-interval Lambda_j sums ---------------------------------------------

struct BTSample {
    uint64_t x = 0;
    uint64_t y = 0;
    double sum = 0.0;
    double ratio = 0.0;  // sum / (y (log x)^{j-1})
};

struct BTResult {
    int j = 0;
    std::vector<BTSample> samples;
    double max_ratio = 0.0;
};

BTResult brun_titchmarsh_check(int j, const std::vector<std::pair<uint64_t, uint64_t>>& samples);

// ---- mean value of G_j ---------------------------------------------------------

struct MeanValueResult {
    double integral = 0.0;
    double bound = 0.0;  // X (log X)^{2j} + (sigma-1)^{-(2j-1)}
    double ratio = 0.0;
    std::vector<std::pair<double, double>> curve;  // (X', integral over [-X', X'])
};

MeanValueResult mean_value_G(const MultFnTable& table, int j, double sigma, double X, double step,
                             const SeriesEvaluationConfig& cfg);

}  // namespace mfstruct
