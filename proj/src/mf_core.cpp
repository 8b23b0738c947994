#include "mfstruct/mf_core.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

#include "mfstruct/parallel.hpp"
#include "mfstruct/primes.hpp"

namespace mfstruct {

namespace {

constexpr uint64_t kSegmentSize = 1u << 18;

bool finite(const cplx& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

cplx call_evaluator(const PrimePowerSpec& spec, uint64_t p, int k) {
    cplx v;
    try {
        v = spec.eval(p, k);
    } catch (const Error&) {
        throw;
    } catch (const std::exception& e) {
        raise(errc::evaluator_domain,
              spec.label + " evaluator failed at p=" + std::to_string(p) + " k=" + std::to_string(k) +
                  " (" + e.what() + ")");
    }
    if (!finite(v))
        raise(errc::evaluator_domain, spec.label + " evaluator returned non-finite value at p=" +
                                          std::to_string(p) + " k=" + std::to_string(k));
    return v;
}

}  // namespace

cplx LambdaTable::at(uint64_t n) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), n,
                               [](const LambdaEntry& e, uint64_t x) { return e.n < x; });
    if (it != entries_.end() && it->n == n) return it->value;
    return cplx(0.0, 0.0);
}

RealMultiset::RealMultiset(std::vector<std::pair<double, int>> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end());
    for (size_t i = 0; i < entries_.size(); ++i) {
        if (entries_[i].second < 1) raise(errc::range, "multiset multiplicities must be >= 1");
        if (i > 0 && !(entries_[i - 1].first < entries_[i].first))
            raise(errc::range, "multiset entries must be strictly increasing");
    }
}

RealMultiset RealMultiset::repeated(double alpha, int multiplicity) {
    return RealMultiset({{alpha, multiplicity}});
}

int RealMultiset::total() const {
    int t = 0;
    for (const auto& [a, m] : entries_) t += m;
    return t;
}

std::vector<double> RealMultiset::expanded() const {
    std::vector<double> out;
    for (const auto& [a, m] : entries_)
        for (int i = 0; i < m; ++i) out.push_back(a);
    return out;
}

double tau_d_prime_power(int D, int k) {
    // C(k + D - 1, D - 1)
    double r = 1.0;
    for (int i = 1; i <= D - 1; ++i) r = r * (k + i) / i;
    return r;
}

MultFnTable sieve_from_spec(const PrimePowerSpec& spec, uint64_t N, const SieveOptions& opt) {
    if (spec.mode != SpecMode::FValues)
        raise(errc::evaluator_domain, "sieve_from_spec requires an F_VALUES spec");
    if (N < 1) raise(errc::range, "sieve requires N >= 1");
    if (!spec.eval) raise(errc::evaluator_domain, "spec has no evaluator");

    std::vector<cplx> v(N + 1, cplx(0.0, 0.0));
    v[1] = cplx(1.0, 0.0);

    const uint64_t root = isqrt_u64(N);
    const auto primes = primes_up_to(root);

    // f(p^k) for p <= sqrt(N), checked against the tau_D bound up front
    std::vector<std::vector<cplx>> fpk(primes.size());
    for (size_t i = 0; i < primes.size(); ++i) {
        const uint64_t p = primes[i];
        std::vector<cplx> vals;
        uint64_t pk = p;
        int k = 1;
        while (pk <= N) {
            const cplx f = call_evaluator(spec, p, k);
            if (opt.check_bounds) {
                const double bound = tau_d_prime_power(spec.D, k) * (1.0 + opt.bound_tolerance);
                if (std::abs(f) > bound)
                    raise(errc::bound_violation,
                          spec.label + ": |f(" + std::to_string(p) + "^" + std::to_string(k) +
                              ")| = " + std::to_string(std::abs(f)) + " exceeds tau_" +
                              std::to_string(spec.D) + " bound");
            }
            vals.push_back(f);
            if (pk > N / p) break;
            pk *= p;
            ++k;
        }
        fpk[i] = std::move(vals);
    }

    const double large_bound = static_cast<double>(spec.D) * (1.0 + opt.bound_tolerance);

    parallel_chunks(2, N + 1, kSegmentSize, opt.workers, [&](uint64_t lo, uint64_t hi) {
        const size_t len = static_cast<size_t>(hi - lo);
        std::vector<uint64_t> rem(len);
        std::vector<cplx> val(len, cplx(1.0, 0.0));
        for (size_t i = 0; i < len; ++i) rem[i] = lo + i;
        for (size_t pi = 0; pi < primes.size(); ++pi) {
            const uint64_t p = primes[pi];
            if (p * p >= hi) break;
            uint64_t m = ((lo + p - 1) / p) * p;
            for (; m < hi; m += p) {
                uint64_t& r = rem[m - lo];
                int k = 0;
                while (r % p == 0) {
                    r /= p;
                    ++k;
                }
                val[m - lo] *= fpk[pi][k - 1];
            }
        }
        for (size_t i = 0; i < len; ++i) {
            if (rem[i] > 1) {
                // leftover factor is a single prime > sqrt(N)
                const cplx f = call_evaluator(spec, rem[i], 1);
                if (opt.check_bounds && std::abs(f) > large_bound)
                    raise(errc::bound_violation, spec.label + ": |f(" + std::to_string(rem[i]) +
                                                     ")| exceeds the prime bound D");
                val[i] *= f;
            }
            v[lo + i] = val[i];
        }
    });

    return MultFnTable(N, spec.D, spec.label, TableSource::Sieved, std::move(v));
}

namespace {

// f(p^k) from Lambda_f(p^1..p^k) via f(p^k) k log p = sum_j Lambda(p^j) f(p^{k-j}).
std::vector<cplx> f_prime_powers_from_lambda(uint64_t p, const std::vector<cplx>& lam) {
    const double lp = std::log(static_cast<double>(p));
    std::vector<cplx> f(lam.size() + 1);
    f[0] = 1.0;
    for (size_t k = 1; k <= lam.size(); ++k) {
        cplx acc(0.0, 0.0);
        for (size_t j = 1; j <= k; ++j) acc += lam[j - 1] * f[k - j];
        f[k] = acc / (static_cast<double>(k) * lp);
    }
    f.erase(f.begin());
    return f;
}

}  // namespace

MultFnTable f_from_lambda(const LambdaTable& lambda, const SieveOptions& opt) {
    // group entries by prime
    std::map<uint64_t, std::vector<cplx>> per_prime;
    for (const auto& e : lambda.entries()) {
        auto& vec = per_prime[e.p];
        if (static_cast<int>(vec.size()) < e.k) vec.resize(e.k, cplx(0.0, 0.0));
        vec[e.k - 1] = e.value;
    }
    std::map<uint64_t, std::vector<cplx>> fvals;
    for (auto& [p, lam] : per_prime) fvals[p] = f_prime_powers_from_lambda(p, lam);

    // mutable captures shared across sieve workers: read-only after this point
    auto lookup = std::make_shared<std::map<uint64_t, std::vector<cplx>>>(std::move(fvals));
    PrimePowerSpec spec;
    spec.label = "f_from_lambda";
    spec.D = lambda.D();
    spec.mode = SpecMode::FValues;
    spec.eval = [lookup](uint64_t p, int k) -> cplx {
        auto it = lookup->find(p);
        if (it == lookup->end() || static_cast<int>(it->second.size()) < k)
            raise(errc::evaluator_domain, "lambda table lacks entry for p=" + std::to_string(p) +
                                              " k=" + std::to_string(k));
        return it->second[k - 1];
    };
    return sieve_from_spec(spec, lambda.N(), opt);
}

LambdaTable lambda_from_f(const MultFnTable& table) {
    const uint64_t N = table.N();
    if (std::abs(table[1] - cplx(1.0, 0.0)) > 1e-12)
        raise(errc::range, "lambda_from_f requires values[1] = 1");
    std::vector<LambdaEntry> entries;
    for (uint64_t p : primes_up_to(N)) {
        const double lp = std::log(static_cast<double>(p));
        std::vector<cplx> lam;
        std::vector<cplx> f;  // f(p^0..p^K)
        f.push_back(cplx(1.0, 0.0));
        uint64_t pk = p;
        int k = 1;
        while (pk <= N) {
            f.push_back(table[pk]);
            cplx acc = f[k] * (static_cast<double>(k) * lp);
            for (int j = 1; j < k; ++j) acc -= lam[j - 1] * f[k - j];
            lam.push_back(acc);
            entries.push_back({pk, p, k, acc});
            if (pk > N / p) break;
            pk *= p;
            ++k;
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const LambdaEntry& a, const LambdaEntry& b) { return a.n < b.n; });
    return LambdaTable(N, table.D(), std::move(entries));
}

MultFnTable dirichlet_convolve(const MultFnTable& a, const MultFnTable& b) {
    if (a.N() != b.N())
        raise(errc::range_mismatch, "convolution requires equal ranges (" + std::to_string(a.N()) +
                                        " vs " + std::to_string(b.N()) + ")");
    const uint64_t N = a.N();
    std::vector<cplx> out(N + 1, cplx(0.0, 0.0));
    for (uint64_t i = 1; i <= N; ++i) {
        const cplx ai = a[i];
        if (ai == cplx(0.0, 0.0)) continue;
        const uint64_t lim = N / i;
        for (uint64_t j = 1; j <= lim; ++j) out[i * j] += ai * b[j];
    }
    return MultFnTable(N, a.D() + b.D(), a.label() + " * " + b.label(), TableSource::Convolved,
                       std::move(out));
}

MultFnTable dirichlet_inverse(const MultFnTable& a) {
    if (std::abs(a[1] - cplx(1.0, 0.0)) > 1e-12)
        raise(errc::range, "dirichlet_inverse requires values[1] = 1");
    const uint64_t N = a.N();
    std::vector<cplx> g(N + 1, cplx(0.0, 0.0));
    std::vector<cplx> acc(N + 1, cplx(0.0, 0.0));
    g[1] = cplx(1.0, 0.0);
    for (uint64_t n = 1; n <= N; ++n) {
        if (n > 1) g[n] = acc[n];
        const cplx gn = g[n];
        if (gn == cplx(0.0, 0.0)) continue;
        const uint64_t lim = N / n;
        for (uint64_t k = 2; k <= lim; ++k) acc[n * k] -= gn * a[k];
    }
    return MultFnTable(N, a.D(), "inv(" + a.label() + ")", TableSource::Inverted, std::move(g));
}

MultFnTable eps_table(uint64_t N) {
    std::vector<cplx> v(N + 1, cplx(0.0, 0.0));
    v[1] = cplx(1.0, 0.0);
    return MultFnTable(N, 1, "eps", TableSource::Builtin, std::move(v));
}

MultFnTable tau_multiset(const RealMultiset& A, uint64_t N) {
    if (A.total() < 1) raise(errc::range, "tau_multiset requires a non-empty multiset");
    const auto alphas = A.expanded();
    auto factor = [N](double alpha) {
        std::vector<cplx> v(N + 1);
        v[0] = cplx(0.0, 0.0);
        if (alpha == 0.0) {
            std::fill(v.begin() + 1, v.end(), cplx(1.0, 0.0));
        } else {
            for (uint64_t n = 1; n <= N; ++n) {
                const double t = alpha * std::log(static_cast<double>(n));
                v[n] = cplx(std::cos(t), std::sin(t));
            }
        }
        return MultFnTable(N, 1, "n^{i" + std::to_string(alpha) + "}", TableSource::Builtin,
                           std::move(v));
    };
    MultFnTable result = factor(alphas[0]);
    for (size_t i = 1; i < alphas.size(); ++i) result = dirichlet_convolve(result, factor(alphas[i]));
    return MultFnTable(N, A.total(), "tau_A", result.source(), std::vector<cplx>(result.raw()));
}

MultFnTable tau_d_table(int D, uint64_t N) {
    PrimePowerSpec spec;
    spec.label = "tau_" + std::to_string(D);
    spec.D = D;
    spec.mode = SpecMode::FValues;
    spec.eval = [D](uint64_t, int k) { return cplx(tau_d_prime_power(D, k), 0.0); };
    return sieve_from_spec(spec, N);
}

std::vector<double> generalized_von_mangoldt(int j, uint64_t N) {
    if (j < 0) raise(errc::range, "generalized_von_mangoldt requires j >= 0");
    std::vector<double> out(N + 1, 0.0);
    if (j == 0) {
        if (N >= 1) out[1] = 1.0;
        return out;
    }
    const auto mu = mobius_table(N);
    const auto omega = omega_table(N);
    std::vector<double> lgj(N + 1, 0.0);
    for (uint64_t q = 1; q <= N; ++q) {
        const double lg = std::log(static_cast<double>(q));
        double r = lg;
        for (int i = 1; i < j; ++i) r *= lg;
        lgj[q] = r;  // log^j q
    }
    for (uint64_t d = 1; d <= N; ++d) {
        if (mu[d] == 0) continue;
        const double sgn = mu[d];
        const uint64_t lim = N / d;
        double* o = out.data();
        for (uint64_t q = 1; q <= lim; ++q) o[d * q] += sgn * lgj[q];
    }
    // Lambda_j is supported on omega(n) <= j; zeroing the complement removes
    // the cancellation residue there and makes the support exact.
    for (uint64_t n = 1; n <= N; ++n)
        if (omega[n] > j) out[n] = 0.0;
    return out;
}

std::vector<PartialSumPoint> partial_sums(const MultFnTable& table,
                                          const std::vector<uint64_t>& checkpoints,
                                          std::optional<double> A) {
    for (size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] < 1 || checkpoints[i] > table.N())
            raise(errc::checkpoint_range, "checkpoint " + std::to_string(checkpoints[i]) +
                                              " outside [1, " + std::to_string(table.N()) + "]");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
            raise(errc::checkpoint_range, "checkpoints must be strictly increasing");
    }
    std::vector<PartialSumPoint> out;
    out.reserve(checkpoints.size());
    cplx s(0.0, 0.0);
    uint64_t n = 1;
    for (uint64_t x : checkpoints) {
        for (; n <= x; ++n) s += table[n];
        PartialSumPoint pt;
        pt.x = x;
        pt.sum = s;
        if (A) {
            const double lx = std::log(static_cast<double>(x));
            pt.normalized = std::abs(s) * std::pow(lx, *A) / static_cast<double>(x);
        }
        out.push_back(pt);
    }
    return out;
}

MembershipReport check_class_membership(const PrimePowerSpec& spec, uint64_t N, int D) {
    MembershipReport rep;
    rep.label = spec.label;
    rep.D = D;
    rep.N = N;
    const double slack = 1e-9;

    // Lambda ratios over prime powers <= N
    for (uint64_t p : primes_up_to(N)) {
        const double lp = std::log(static_cast<double>(p));
        std::vector<cplx> lam;
        std::vector<cplx> f{cplx(1.0, 0.0)};
        uint64_t pk = p;
        int k = 1;
        while (pk <= N) {
            cplx lam_k;
            if (spec.mode == SpecMode::LambdaValues) {
                lam_k = call_evaluator(spec, p, k);
            } else {
                f.push_back(call_evaluator(spec, p, k));
                cplx acc = f[k] * (static_cast<double>(k) * lp);
                for (int i = 1; i < k; ++i) acc -= lam[i - 1] * f[k - i];
                lam_k = acc;
            }
            lam.push_back(lam_k);
            const double ratio = std::abs(lam_k) / lp;
            if (ratio > rep.max_lambda_ratio) {
                rep.max_lambda_ratio = ratio;
                rep.worst_prime_power = pk;
            }
            if (pk > N / p) break;
            pk *= p;
            ++k;
        }
    }
    rep.lambda_ok = rep.max_lambda_ratio <= D * (1.0 + slack);

    // |f(n)| / tau_D(n) over n <= N
    MultFnTable f_table = [&] {
        if (spec.mode == SpecMode::FValues) {
            SieveOptions opt;
            opt.check_bounds = false;  // violations are report content here
            return sieve_from_spec(spec, N, opt);
        }
        std::vector<LambdaEntry> entries;
        for (uint64_t p : primes_up_to(N)) {
            uint64_t pk = p;
            int k = 1;
            while (pk <= N) {
                entries.push_back({pk, p, k, call_evaluator(spec, p, k)});
                if (pk > N / p) break;
                pk *= p;
                ++k;
            }
        }
        std::sort(entries.begin(), entries.end(),
                  [](const LambdaEntry& a, const LambdaEntry& b) { return a.n < b.n; });
        return f_from_lambda(LambdaTable(N, spec.D, std::move(entries)));
    }();
    const MultFnTable tau = tau_d_table(D, N);
    for (uint64_t n = 1; n <= N; ++n) {
        const double ratio = std::abs(f_table[n]) / tau[n].real();
        if (ratio > rep.max_f_ratio) {
            rep.max_f_ratio = ratio;
            rep.worst_n = n;
        }
    }
    rep.f_ok = rep.max_f_ratio <= 1.0 + slack;
    rep.member = rep.lambda_ok && rep.f_ok;
    return rep;
}

}  // namespace mfstruct
