#pragma once

#include <cstdint>
#include <vector>

namespace mfstruct {

// Primes <= n in increasing order.
std::vector<uint32_t> primes_up_to(uint64_t n);

// Moebius function table, index 1..n (entry 0 unused).
std::vector<int8_t> mobius_table(uint64_t n);

// Number of distinct prime factors, index 1..n (entry 0 unused).
std::vector<uint8_t> omega_table(uint64_t n);

uint64_t isqrt_u64(uint64_t n);

// Deterministic primality for 64-bit inputs (Miller-Rabin with fixed bases).
bool is_prime_u64(uint64_t n);

}  // namespace mfstruct
