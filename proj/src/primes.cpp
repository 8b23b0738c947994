#include "mfstruct/primes.hpp"

#include <cmath>

namespace mfstruct {

std::vector<uint32_t> primes_up_to(uint64_t n) {
    std::vector<uint32_t> primes;
    if (n < 2) return primes;
    std::vector<uint8_t> composite(n + 1, 0);
    for (uint64_t i = 2; i * i <= n; ++i) {
        if (composite[i]) continue;
        for (uint64_t j = i * i; j <= n; j += i) composite[j] = 1;
    }
    primes.reserve(static_cast<size_t>(n > 16 ? 1.2 * n / std::log(double(n)) : 8));
    for (uint64_t i = 2; i <= n; ++i)
        if (!composite[i]) primes.push_back(static_cast<uint32_t>(i));
    return primes;
}

std::vector<int8_t> mobius_table(uint64_t n) {
    std::vector<int8_t> mu(n + 1, 1);
    if (n == 0) return mu;
    mu[0] = 0;
    std::vector<uint8_t> done(n + 1, 0);
    for (uint64_t p = 2; p <= n; ++p) {
        if (done[p]) continue;
        // p is prime
        for (uint64_t m = p; m <= n; m += p) {
            done[m] = 1;
            mu[m] = static_cast<int8_t>(-mu[m]);
        }
        for (uint64_t q = p * p; q <= n; q += p * p) mu[q] = 0;
    }
    return mu;
}

std::vector<uint8_t> omega_table(uint64_t n) {
    std::vector<uint8_t> w(n + 1, 0);
    std::vector<uint8_t> done(n + 1, 0);
    for (uint64_t p = 2; p <= n; ++p) {
        if (done[p]) continue;
        for (uint64_t m = p; m <= n; m += p) {
            done[m] = 1;
            ++w[m];
        }
    }
    return w;
}

uint64_t isqrt_u64(uint64_t n) {
    if (n == 0) return 0;
    uint64_t r = static_cast<uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

namespace {

uint64_t mulmod_u64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((__uint128_t)a * b % m);
}

uint64_t powmod_u64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

}  // namespace

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    // Sinclair's base set: deterministic for all 64-bit inputs
    for (uint64_t a : {2ull, 325ull, 9375ull, 28178ull, 450775ull, 9780504ull, 1795265022ull}) {
        uint64_t x = powmod_u64(a % n, d, n);
        if (x == 0 || x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int r = 1; r < s; ++r) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) {
                witness = false;
                break;
            }
        }
        if (witness) return false;
    }
    return true;
}

}  // namespace mfstruct
