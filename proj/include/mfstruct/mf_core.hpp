#pragma once

#include <optional>

#include "mfstruct/tables.hpp"

namespace mfstruct {

struct SieveOptions {
    int workers = 1;
    bool check_bounds = true;
    double bound_tolerance = 1e-9;  // relative slack on |f(p^k)| <= tau_D(p^k)
};

// Fill f(1..N) multiplicatively from prime-power values. Segmented by
// smallest prime factor; segments are independent and may run on workers.
MultFnTable sieve_from_spec(const PrimePowerSpec& spec, uint64_t N, const SieveOptions& opt = {});

// Solve f(p^k) k log p = sum_{j<=k} Lambda_f(p^j) f(p^{k-j}) on prime powers,
// then extend multiplicatively.
MultFnTable f_from_lambda(const LambdaTable& lambda, const SieveOptions& opt = {});

// Inverse recurrence: Lambda_f(p^k) = f(p^k) k log p - sum_{j<k} Lambda_f(p^j) f(p^{k-j}).
LambdaTable lambda_from_f(const MultFnTable& table);

MultFnTable dirichlet_convolve(const MultFnTable& a, const MultFnTable& b);

// g with a * g = eps; defined by Lambda_g = -Lambda_a.
MultFnTable dirichlet_inverse(const MultFnTable& a);

// Generalized divisor function tau_A: the |A|-fold convolution of n -> n^{i alpha}.
MultFnTable tau_multiset(const RealMultiset& A, uint64_t N);

// tau_D = all-zeros case, computed exactly from factorizations.
MultFnTable tau_d_table(int D, uint64_t N);

// Identity of Dirichlet convolution.
MultFnTable eps_table(uint64_t N);

// Lambda_j(1..N): coefficients of (-1)^j zeta^(j)/zeta. Computed by the
// Moebius-inversion divisor pass restricted to the exact support
// omega(n) <= j, so off-support entries are exactly zero.
std::vector<double> generalized_von_mangoldt(int j, uint64_t N);

struct PartialSumPoint {
    uint64_t x = 0;
    cplx sum;
    double normalized = 0.0;  // |S(x)| (log x)^A / x when A was supplied
};

std::vector<PartialSumPoint> partial_sums(const MultFnTable& table,
                                          const std::vector<uint64_t>& checkpoints,
                                          std::optional<double> A = std::nullopt);

struct MembershipReport {
    std::string label;
    int D = 1;
    uint64_t N = 0;
    double max_lambda_ratio = 0.0;  // max |Lambda_f(p^k)| / log p
    uint64_t worst_prime_power = 0;
    bool lambda_ok = true;
    double max_f_ratio = 0.0;  // max |f(n)| / tau_D(n)
    uint64_t worst_n = 0;
    bool f_ok = true;
    bool member = true;
};

// Checks |Lambda_f| <= D Lambda over prime powers <= N and |f| <= tau_D over
// n <= N. Violations are report content, not errors.
MembershipReport check_class_membership(const PrimePowerSpec& spec, uint64_t N, int D);

// tau_D(p^k) = C(k+D-1, D-1)
double tau_d_prime_power(int D, int k);

}  // namespace mfstruct
