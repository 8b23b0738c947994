#include "mfstruct/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "mfstruct/parallel.hpp"
#include "mfstruct/primes.hpp"

namespace mfstruct {

namespace {

constexpr double kOrdinateTol = 1e-6;
constexpr double kZeroThresholdRel = 1e-3;   // vs median grid |L|
constexpr double kDerivThresholdRel = 1e-2;  // vs median grid |L^(j)|
constexpr double kTailMultiplier = 5.0;
constexpr double kDenominatorFloor = 1e-6;
constexpr uint64_t kEvalChunk = 1u << 16;

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + mid, v.end());
    return v[mid];
}

double pow_int(double x, int j) {
    double r = 1.0;
    for (int i = 0; i < j; ++i) r *= x;
    return r;
}

}  // namespace

void SeriesEvaluationConfig::validate() const {
    if (!(A > 1.0)) raise(errc::range, "series config requires A > 1");
    if (!(K > 0.0)) raise(errc::range, "series config requires K > 0");
    if (truncation < 100) raise(errc::range, "series config requires N_trunc >= 100");
    if (!(c_tail > 0.0)) raise(errc::range, "series config requires c_tail > 0");
}

cplx n_to_minus_s(uint64_t n, double sigma, double t) {
    const double ln = std::log(static_cast<double>(n));
    const double r = std::exp(-sigma * ln);
    const double a = t * ln;
    return cplx(r * std::cos(a), -r * std::sin(a));
}

namespace {

double tail_bound(const SeriesEvaluationConfig& cfg, int j, double abs_s, uint64_t trunc) {
    return cfg.c_tail * cfg.K * (1.0 + abs_s) /
           std::pow(std::log(static_cast<double>(trunc)), cfg.A - j - 1.0);
}

uint64_t resolve_truncation(const MultFnTable& table, const SeriesEvaluationConfig& cfg, int j,
                            double t) {
    uint64_t trunc = cfg.truncation;
    if (cfg.tail_mode == TailMode::TargetError)
        trunc = choose_truncation(cfg, j, t, cfg.target_error);
    if (trunc > table.N())
        raise(errc::truncation_exceeds_table, "truncation " + std::to_string(trunc) +
                                                  " exceeds table range " + std::to_string(table.N()));
    return trunc;
}

}  // namespace

LEvaluation eval_L_derivative(const MultFnTable& table, int j, cplx s,
                              const SeriesEvaluationConfig& cfg) {
    cfg.validate();
    if (j < 0) raise(errc::range, "derivative order must be >= 0");
    if (s.real() < 1.0 - 1e-12)
        raise(errc::range, "eval_L_derivative requires Re(s) >= 1");
    if (static_cast<double>(j) >= cfg.A - 1.0)
        raise(errc::derivative_order,
              "order j=" + std::to_string(j) + " needs A > j+1 (A=" + std::to_string(cfg.A) + ")");
    const uint64_t trunc = resolve_truncation(table, cfg, j, s.imag());

    const double sigma = s.real();
    const double t = s.imag();
    // fixed-size blocks summed in index order: byte-stable for reruns
    cplx total(0.0, 0.0);
    for (uint64_t lo = 1; lo <= trunc; lo += kEvalChunk) {
        const uint64_t hi = std::min<uint64_t>(trunc, lo + kEvalChunk - 1);
        cplx block(0.0, 0.0);
        for (uint64_t n = lo; n <= hi; ++n) {
            const cplx f = table[n];
            if (f == cplx(0.0, 0.0)) continue;
            const double ln = std::log(static_cast<double>(n));
            block += f * pow_int(-ln, j) * n_to_minus_s(n, sigma, t);
        }
        total += block;
    }

    LEvaluation ev;
    ev.s = s;
    ev.j = j;
    ev.value = total;
    ev.truncation = trunc;
    ev.c_tail = cfg.c_tail;
    ev.tail_estimate = tail_bound(cfg, j, std::abs(s), trunc);
    return ev;
}

uint64_t choose_truncation(const SeriesEvaluationConfig& cfg, int j, double t, double target_error) {
    cfg.validate();
    if (!(target_error > 0.0)) raise(errc::range, "target_error must be > 0");
    if (static_cast<double>(j) >= cfg.A - 1.0)
        raise(errc::derivative_order,
              "order j=" + std::to_string(j) + " needs A > j+1 (A=" + std::to_string(cfg.A) + ")");
    const double r = cfg.c_tail * cfg.K * (1.0 + std::abs(t)) / target_error;
    const double logN = std::pow(r, 1.0 / (cfg.A - j - 1.0));
    const double digits = logN / std::log(10.0);
    uint64_t N = 100;
    if (digits > 2.0) {
        const double p = std::ceil(digits - 1e-12);
        if (p > 18 || std::pow(10.0, p) > static_cast<double>(cfg.hard_cap))
            raise(errc::infeasible, "required truncation exceeds hard cap");
        N = 1;
        for (int i = 0; i < static_cast<int>(p); ++i) N *= 10;
    }
    return std::max<uint64_t>(N, 100);
}

std::vector<std::vector<cplx>> eval_L_grid(const MultFnTable& table, double sigma, double t0,
                                           double dt, size_t count, int jmax, uint64_t truncation,
                                           int workers) {
    if (truncation > table.N())
        raise(errc::truncation_exceeds_table, "grid truncation exceeds table range");
    if (count == 0 || jmax < 0) raise(errc::range, "bad grid shape");

    const size_t nblocks = static_cast<size_t>((truncation + kEvalChunk - 1) / kEvalChunk);
    std::vector<std::vector<std::vector<cplx>>> partial(
        nblocks, std::vector<std::vector<cplx>>(jmax + 1, std::vector<cplx>(count, cplx(0, 0))));

    parallel_chunks(1, truncation + 1, kEvalChunk, workers, [&](uint64_t lo, uint64_t hi) {
        auto& acc = partial[(lo - 1) / kEvalChunk];
        std::vector<double> cj(jmax + 1);
        for (uint64_t n = lo; n < hi; ++n) {
            const cplx f = table[n];
            if (f == cplx(0.0, 0.0)) continue;
            const double ln = std::log(static_cast<double>(n));
            cj[0] = 1.0;
            for (int j = 1; j <= jmax; ++j) cj[j] = cj[j - 1] * (-ln);
            const cplx base = f * std::exp(-sigma * ln);
            cplx z = base * cplx(std::cos(t0 * ln), -std::sin(t0 * ln));
            const cplx w(std::cos(dt * ln), -std::sin(dt * ln));
            size_t r = 0;
            if (count >= 8) {
                // four independent rotation chains to break the serial latency
                const cplx w2 = w * w;
                const cplx w4 = w2 * w2;
                cplx z0 = z, z1 = z * w, z2 = z * w2, z3 = z1 * w2;
                for (; r + 4 <= count; r += 4) {
                    for (int j = 0; j <= jmax; ++j) {
                        cplx* a = acc[j].data() + r;
                        a[0] += cj[j] * z0;
                        a[1] += cj[j] * z1;
                        a[2] += cj[j] * z2;
                        a[3] += cj[j] * z3;
                    }
                    z0 *= w4;
                    z1 *= w4;
                    z2 *= w4;
                    z3 *= w4;
                }
                z = z0;
            }
            for (; r < count; ++r) {
                for (int j = 0; j <= jmax; ++j) acc[j][r] += cj[j] * z;
                z *= w;
            }
        }
    });

    std::vector<std::vector<cplx>> out(jmax + 1, std::vector<cplx>(count, cplx(0, 0)));
    for (size_t b = 0; b < nblocks; ++b)
        for (int j = 0; j <= jmax; ++j)
            for (size_t r = 0; r < count; ++r) out[j][r] += partial[b][j][r];
    return out;
}

std::vector<cplx> grid_dirichlet_sum(const std::vector<std::pair<uint64_t, cplx>>& coeffs,
                                     double sigma, double t0, double dt, size_t count) {
    std::vector<cplx> out(count, cplx(0, 0));
    for (const auto& [n, a] : coeffs) {
        const double ln = std::log(static_cast<double>(n));
        const cplx base = a * std::exp(-sigma * ln);
        cplx z = base * cplx(std::cos(t0 * ln), -std::sin(t0 * ln));
        const cplx w(std::cos(dt * ln), -std::sin(dt * ln));
        size_t r = 0;
        if (count >= 8) {
            const cplx w2 = w * w;
            const cplx w4 = w2 * w2;
            cplx z0 = z, z1 = z * w, z2 = z * w2, z3 = z1 * w2;
            for (; r + 4 <= count; r += 4) {
                out[r] += z0;
                out[r + 1] += z1;
                out[r + 2] += z2;
                out[r + 3] += z3;
                z0 *= w4;
                z1 *= w4;
                z2 *= w4;
                z3 *= w4;
            }
            z = z0;
        }
        for (; r < count; ++r) {
            out[r] += z;
            z *= w;
        }
    }
    return out;
}

namespace {

double golden_section_min(const std::function<double(double)>& h, double a, double b, double tol) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a);
    double d = a + gr * (b - a);
    double fc = h(c), fd = h(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = h(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = h(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

int multiplicity_at(const MultFnTable& table, double gamma, int D,
                    const SeriesEvaluationConfig& cfg, const std::vector<double>& derivative_medians,
                    std::vector<double>* magnitudes_out) {
    if (!(cfg.A > D + 1))
        raise(errc::derivative_order, "multiplicity up to D=" + std::to_string(D) +
                                          " requires A > D+1 (A=" + std::to_string(cfg.A) + ")");
    std::vector<double> mags;
    for (int j = 0; j <= D; ++j) {
        const LEvaluation ev = eval_L_derivative(table, j, cplx(1.0, gamma), cfg);
        const double mag = std::abs(ev.value);
        mags.push_back(mag);
        const double med = j < static_cast<int>(derivative_medians.size()) ? derivative_medians[j] : 0.0;
        const double thr = std::max(kTailMultiplier * ev.tail_estimate, kDerivThresholdRel * med);
        if (mag > thr) {
            if (magnitudes_out) {
                // record the rest of the derivative magnitudes for the report
                for (int jj = j + 1; jj <= D; ++jj)
                    mags.push_back(std::abs(eval_L_derivative(table, jj, cplx(1.0, gamma), cfg).value));
                *magnitudes_out = mags;
            }
            return j;
        }
    }
    if (magnitudes_out) *magnitudes_out = mags;
    raise(errc::nonzero_not_found,
          "all derivatives up to D=" + std::to_string(D) + " vanish at gamma=" + std::to_string(gamma) +
              "; f outside F(D;A) or thresholds mis-set");
}

int multiplicity_at(const MultFnTable& table, double gamma, int D,
                    const SeriesEvaluationConfig& cfg) {
    // coarse medians over a window around gamma as the relative scale
    const double half = 5.0;
    const size_t pts = 101;
    const double step = 2 * half / (pts - 1);
    const uint64_t trunc = resolve_truncation(table, cfg, 0, gamma);
    const auto grids =
        eval_L_grid(table, 1.0, gamma - half, step, pts, D, trunc, cfg.workers);
    std::vector<double> medians(D + 1);
    for (int j = 0; j <= D; ++j) {
        std::vector<double> mags(pts);
        for (size_t r = 0; r < pts; ++r) mags[r] = std::abs(grids[j][r]);
        medians[j] = median(std::move(mags));
    }
    return multiplicity_at(table, gamma, D, cfg, medians, nullptr);
}

ZeroScanReport scan_zeros(const MultFnTable& table, int D, double T,
                          const SeriesEvaluationConfig& cfg, double grid_step) {
    cfg.validate();
    if (!(grid_step > 0.0)) raise(errc::range, "grid_step must be > 0");
    if (!(T >= grid_step)) raise(errc::range, "scan requires T >= grid_step");
    if (!(cfg.A > D + 1))
        raise(errc::derivative_order, "scan with multiplicities up to D=" + std::to_string(D) +
                                          " requires A > D+1");
    const uint64_t trunc = resolve_truncation(table, cfg, 0, T);

    const size_t count = static_cast<size_t>(std::llround(2.0 * T / grid_step)) + 1;
    const auto grids = eval_L_grid(table, 1.0, -T, grid_step, count, D, trunc, cfg.workers);

    ZeroScanReport rep;
    rep.grid_step = grid_step;
    rep.ordinate_tolerance = kOrdinateTol;
    rep.grid.resize(count);
    std::vector<double> abs0(count);
    for (size_t r = 0; r < count; ++r) {
        const double gamma = -T + static_cast<double>(r) * grid_step;
        abs0[r] = std::abs(grids[0][r]);
        rep.grid[r] = {gamma, abs0[r],
                       tail_bound(cfg, 0, std::abs(cplx(1.0, gamma)), trunc)};
    }
    rep.derivative_medians.resize(D + 1);
    for (int j = 0; j <= D; ++j) {
        std::vector<double> mags(count);
        for (size_t r = 0; r < count; ++r) mags[r] = std::abs(grids[j][r]);
        rep.derivative_medians[j] = median(std::move(mags));
    }
    rep.zero_threshold_floor = kZeroThresholdRel * rep.derivative_medians[0];

    auto zero_threshold = [&](size_t r) {
        return std::max(kTailMultiplier * rep.grid[r].tail, rep.zero_threshold_floor);
    };
    for (size_t r = 0; r < count; ++r) {
        const bool left_ok = (r == 0) || abs0[r] < abs0[r - 1];
        const bool right_ok = (r + 1 == count) || abs0[r] <= abs0[r + 1];
        if (left_ok && right_ok && abs0[r] < zero_threshold(r)) rep.candidates.push_back(r);
    }

    auto absL_at = [&](double gamma) {
        return std::abs(eval_L_derivative(table, 0, cplx(1.0, gamma), cfg).value);
    };
    std::vector<RefinedZero> refined;
    for (size_t r : rep.candidates) {
        const double lo = (r == 0) ? -T : rep.grid[r - 1].gamma;
        const double hi = (r + 1 == count) ? T : rep.grid[r + 1].gamma;
        RefinedZero z;
        z.gamma = golden_section_min(absL_at, lo, hi, kOrdinateTol);
        z.absL = absL_at(z.gamma);
        refined.push_back(z);
    }
    std::sort(refined.begin(), refined.end(),
              [](const RefinedZero& a, const RefinedZero& b) { return a.gamma < b.gamma; });
    // candidates closer than the merge radius collapse to the deeper minimum
    const double merge_radius = 10.0 * kOrdinateTol;
    std::vector<RefinedZero> merged;
    for (auto& z : refined) {
        if (!merged.empty() && z.gamma - merged.back().gamma < merge_radius) {
            if (z.absL < merged.back().absL) {
                z.merged = true;
                merged.back() = z;
            } else {
                merged.back().merged = true;
            }
        } else {
            merged.push_back(z);
        }
    }
    for (auto& z : merged) {
        std::vector<double> mags;
        z.multiplicity = multiplicity_at(table, z.gamma, D, cfg, rep.derivative_medians, &mags);
        z.derivative_magnitudes = std::move(mags);
    }
    rep.refined = std::move(merged);
    return rep;
}

GammaMultiset build_gamma_multiset(const MultFnTable& table, int D, double T,
                                   const SeriesEvaluationConfig& cfg, double grid_step) {
    const ZeroScanReport rep = scan_zeros(table, D, T, cfg, grid_step);
    GammaMultiset gm;
    gm.D = D;
    gm.T = T;
    for (const auto& z : rep.refined) {
        if (z.multiplicity < 1) continue;  // local dip of a nonvanishing |L|
        GammaEntry e;
        e.gamma = z.gamma;
        e.multiplicity = z.multiplicity;
        e.derivative_magnitudes = z.derivative_magnitudes;
        gm.entries.push_back(e);
    }
    std::sort(gm.entries.begin(), gm.entries.end(),
              [](const GammaEntry& a, const GammaEntry& b) { return a.gamma < b.gamma; });
    if (gm.total() > D)
        raise(errc::multiplicity_overflow, "found total multiplicity " + std::to_string(gm.total()) +
                                               " > D = " + std::to_string(D) +
                                               "; f violates the class bound");
    return gm;
}

double log_density_sum(const MultFnTable& table, double gamma, int m, uint64_t x) {
    if (x > table.N()) raise(errc::range, "x exceeds table range");
    double sum = 0.0;
    for (uint64_t p : primes_up_to(x)) {
        const double lp = std::log(static_cast<double>(p));
        const cplx phase(std::cos(gamma * lp), -std::sin(gamma * lp));  // p^{-i gamma}
        const cplx fp = table[p];
        sum += (static_cast<double>(m) + (fp * phase).real()) / static_cast<double>(p);
    }
    return sum;
}

cplx eval_G(const MultFnTable& table, int j, cplx s, const SeriesEvaluationConfig& cfg) {
    if (j < 1) raise(errc::range, "eval_G requires j >= 1");
    if (!(s.real() > 1.0)) raise(errc::range, "eval_G requires Re(s) > 1");
    const LEvaluation denom = eval_L_derivative(table, 0, s, cfg);
    if (std::abs(denom.value) < kDenominatorFloor)
        raise(errc::denominator_small, "|L(s)| = " + std::to_string(std::abs(denom.value)) +
                                           " below threshold at Re(s) = " + std::to_string(s.real()));
    const LEvaluation numer = eval_L_derivative(table, j, s, cfg);
    const double sign = (j % 2 == 0) ? 1.0 : -1.0;
    return sign * numer.value / denom.value;
}

std::vector<cplx> g_coefficients(const MultFnTable& table, int j, uint64_t N) {
    if (N > table.N()) raise(errc::range, "g_coefficients range exceeds table");
    if (std::abs(table[1] - cplx(1.0, 0.0)) > 1e-12)
        raise(errc::range, "g_coefficients requires values[1] = 1");
    // solve g * f = b with b(n) = f(n) (log n)^j, the coefficients of (-1)^j L^(j)
    std::vector<cplx> g(N + 1, cplx(0, 0));
    std::vector<cplx> acc(N + 1, cplx(0, 0));
    for (uint64_t n = 1; n <= N; ++n)
        acc[n] = table[n] * pow_int(std::log(static_cast<double>(n)), j);
    for (uint64_t n = 1; n <= N; ++n) {
        g[n] = acc[n];
        if (g[n] == cplx(0.0, 0.0)) continue;
        const uint64_t lim = N / n;
        for (uint64_t k = 2; k <= lim; ++k) acc[n * k] -= g[n] * table[k];
    }
    return g;
}

}  // namespace mfstruct
