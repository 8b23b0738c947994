#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "mfstruct/errors.hpp"

namespace mfstruct {

using cplx = std::complex<double>;

enum class SpecMode { FValues, LambdaValues };

// A multiplicative function given by its values on prime powers.
// In FValues mode the evaluator returns f(p^k); in LambdaValues mode it
// returns Lambda_f(p^k). The evaluator must be pure: same (p, k) in, same
// value out, and safe to call from several threads.
struct PrimePowerSpec {
    std::string label;
    int D = 1;
    SpecMode mode = SpecMode::FValues;
    std::function<cplx(uint64_t p, int k)> eval;
};

enum class TableSource { Sieved, Convolved, Inverted, Builtin };

// Dense table of f(1..N). Immutable after construction; the universal
// currency between modules.
class MultFnTable {
  public:
    MultFnTable(uint64_t N, int D, std::string label, TableSource source, std::vector<cplx> values)
        : N_(N), D_(D), label_(std::move(label)), source_(source), v_(std::move(values)) {
        if (v_.size() != N_ + 1) raise(errc::range, "table storage size must be N+1");
        if (N_ < 1) raise(errc::range, "table requires N >= 1");
    }

    uint64_t N() const { return N_; }
    int D() const { return D_; }
    const std::string& label() const { return label_; }
    TableSource source() const { return source_; }

    // 1-based access, n in [1, N]
    const cplx& operator[](uint64_t n) const { return v_[n]; }
    const std::vector<cplx>& raw() const { return v_; }

  private:
    uint64_t N_;
    int D_;
    std::string label_;
    TableSource source_;
    std::vector<cplx> v_;  // v_[0] unused
};

// Lambda_f values at prime powers p^k <= N, stored sorted by n = p^k.
struct LambdaEntry {
    uint64_t n = 0;  // p^k
    uint64_t p = 0;
    int k = 0;
    cplx value;
};

class LambdaTable {
  public:
    LambdaTable(uint64_t N, int D, std::vector<LambdaEntry> entries)
        : N_(N), D_(D), entries_(std::move(entries)) {}

    uint64_t N() const { return N_; }
    int D() const { return D_; }
    const std::vector<LambdaEntry>& entries() const { return entries_; }

    // Lambda_f(n); zero off prime powers.
    cplx at(uint64_t n) const;

  private:
    uint64_t N_;
    int D_;
    std::vector<LambdaEntry> entries_;
};

// Sorted multiset of real numbers with multiplicities (the paper-side
// objects A and Gamma-tilde both take this shape).
class RealMultiset {
  public:
    RealMultiset() = default;
    explicit RealMultiset(std::vector<std::pair<double, int>> entries);

    static RealMultiset repeated(double alpha, int multiplicity);

    const std::vector<std::pair<double, int>>& entries() const { return entries_; }
    int total() const;
    bool empty() const { return entries_.empty(); }

    // Flat list with each value repeated per its multiplicity.
    std::vector<double> expanded() const;

  private:
    std::vector<std::pair<double, int>> entries_;
};

}  // namespace mfstruct
