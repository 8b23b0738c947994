#pragma once

// Test-side oracles, independent of the library's sieving/convolution paths:
// everything here works from trial-division factorizations or direct divisor
// enumeration.

#include <cmath>
#include <cstdint>
#include <vector>

#include "mfstruct/tables.hpp"

namespace oracle {

using mfstruct::cplx;

inline std::vector<std::pair<uint64_t, int>> factorize(uint64_t n) {
    std::vector<std::pair<uint64_t, int>> f;
    for (uint64_t p = 2; p * p <= n; ++p) {
        if (n % p) continue;
        int k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        f.emplace_back(p, k);
    }
    if (n > 1) f.emplace_back(n, 1);
    return f;
}

inline int mobius(uint64_t n) {
    int sign = 1;
    for (auto [p, k] : factorize(n)) {
        if (k > 1) return 0;
        sign = -sign;
    }
    return sign;
}

inline int omega(uint64_t n) { return static_cast<int>(factorize(n).size()); }

inline int big_omega(uint64_t n) {
    int t = 0;
    for (auto [p, k] : factorize(n)) t += k;
    return t;
}

inline int liouville(uint64_t n) { return big_omega(n) % 2 == 0 ? 1 : -1; }

inline std::vector<uint64_t> divisors(uint64_t n) {
    std::vector<uint64_t> d;
    for (uint64_t i = 1; i * i <= n; ++i) {
        if (n % i) continue;
        d.push_back(i);
        if (i != n / i) d.push_back(n / i);
    }
    return d;
}

// m-th divisor function by recursion tau_m = tau_{m-1} * 1
inline uint64_t tau_m(uint64_t n, int m) {
    if (m == 1) return 1;
    uint64_t s = 0;
    for (uint64_t d : divisors(n)) s += tau_m(d, m - 1);
    return s;
}

inline cplx convolve_at(const std::vector<cplx>& a, const std::vector<cplx>& b, uint64_t n) {
    cplx s(0, 0);
    for (uint64_t d : divisors(n)) s += a[d] * b[n / d];
    return s;
}

// Lambda(n): log p at prime powers
inline double von_mangoldt(uint64_t n) {
    const auto f = factorize(n);
    if (f.size() != 1) return 0.0;
    return std::log(static_cast<double>(f[0].first));
}

// Lambda_{j+1} = Lambda_j log + Lambda * Lambda_j, starting at Lambda_1.
// Independent route for the generalized von Mangoldt tables.
inline std::vector<std::vector<double>> lambda_recurrence_tables(int jmax, uint64_t N) {
    std::vector<std::vector<double>> out(jmax + 1, std::vector<double>(N + 1, 0.0));
    if (N >= 1) out[0][1] = 1.0;
    std::vector<double> lambda(N + 1, 0.0);
    for (uint64_t n = 1; n <= N; ++n) lambda[n] = von_mangoldt(n);
    if (jmax >= 1) out[1] = lambda;
    for (int j = 1; j < jmax; ++j) {
        for (uint64_t n = 1; n <= N; ++n) {
            double v = out[j][n] * std::log(static_cast<double>(n));
            for (uint64_t d : divisors(n)) v += lambda[d] * out[j][n / d];
            out[j + 1][n] = v;
        }
    }
    return out;
}

inline uint64_t binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    uint64_t r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

}  // namespace oracle
