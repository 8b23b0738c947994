#pragma once

#include <optional>

#include "mfstruct/analytic.hpp"
#include "mfstruct/tables.hpp"

namespace mfstruct {

// One function from the test corpus. known_gamma and known_A, when present,
// are the oracle values the harness compares its constructed objects against.
struct CatalogEntry {
    std::string name;
    PrimePowerSpec spec;
    int D = 1;
    std::optional<std::vector<std::pair<double, int>>> known_gamma;
    std::optional<double> known_A;
    bool expect_small_sums = false;  // whether the decay hypothesis should hold
};

// Base names plus a small expression syntax:
//   moebius * twist(2.0)      Dirichlet convolution
//   inv(tau2)                 Dirichlet inverse
// Base entries: moebius, liouville, one, eps, tau2..tau4 (or tau(m)),
// twist(gamma) = moebius times n^{i gamma}, kronecker(d).
CatalogEntry resolve_catalog(const std::string& expr);

std::vector<std::string> catalog_names();

// Kronecker symbol (d | n), n >= 0.
int kronecker_symbol(long long d, uint64_t n);

GammaMultiset known_gamma_multiset(const CatalogEntry& entry, int D, double T);

}  // namespace mfstruct
