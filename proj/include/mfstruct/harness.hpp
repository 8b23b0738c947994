#pragma once

#include <optional>

#include "mfstruct/catalog.hpp"
#include "mfstruct/config.hpp"
#include "mfstruct/io.hpp"
#include "mfstruct/verify.hpp"

namespace mfstruct {

// Empirical K: max over checkpoints of |S(x)| (log x)^A / x.
double estimate_K(const MultFnTable& table, double A, const std::vector<uint64_t>& checkpoints);

struct HarnessOutcome {
    bool ok = false;
    std::string note;
    MembershipReport membership;
    std::optional<MultFnTable> table;
    std::optional<ZeroScanReport> scan;
    std::optional<GammaMultiset> constructed_gamma;
    std::optional<GammaMultiset> gamma_used;  // oracle ordinates when the catalog knows them
    std::optional<VerificationReport> report;
    double K_used = 0.0;
    SeriesEvaluationConfig cfg;
};

// The end-to-end theorem harness for one catalog entry:
// membership gate -> sieve -> hypothesis gate -> zero scan -> compensated sums.
// When the entry carries oracle ordinates, the constructed multiset must match
// them within 1e-3 and the exact ordinates are used for the prime sums.
HarnessOutcome run_verification(const CatalogEntry& entry, int D, const RunConfig& rc);

// Resolve the cache directory: config value, overridden by MFSTRUCT_CACHE.
std::string effective_cache_dir(const RunConfig& rc);

// Sieve through the cache when a cache directory is configured.
MultFnTable sieve_entry(const CatalogEntry& entry, uint64_t N, const RunConfig& rc);

// ---- report serialization (exact column layouts) ----

void write_scan_csv(const std::filesystem::path& path, const ZeroScanReport& rep);
void write_gamma_csv(const std::filesystem::path& path, const GammaMultiset& gm, int D);
void write_verification_csv(const std::filesystem::path& path, const VerificationReport& rep);
void write_verification_svg(const std::filesystem::path& path, const VerificationReport& rep);
void write_perron_csv(const std::filesystem::path& path, const PerronResult& res);
void write_mean_value_csv(const std::filesystem::path& path, const MeanValueResult& res, int j,
                          double sigma, double X);
void write_bt_csv(const std::filesystem::path& path, const BTResult& res);

}  // namespace mfstruct
