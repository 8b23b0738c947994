#include "mfstruct/verify.hpp"

#include <algorithm>
#include <cmath>

#include "mfstruct/primes.hpp"

namespace mfstruct {

namespace {

// max over the top half vs max over the bottom half of a sequence
bool envelope_decays(const std::vector<double>& v) {
    if (v.size() < 2) return true;
    const size_t half = v.size() / 2;
    double lo_max = 0.0, hi_max = 0.0;
    for (size_t i = 0; i < half; ++i) lo_max = std::max(lo_max, v[i]);
    for (size_t i = v.size() - half; i < v.size(); ++i) hi_max = std::max(hi_max, v[i]);
    return hi_max <= lo_max;
}

}  // namespace

std::vector<std::pair<uint64_t, cplx>> compensated_prime_sums(
    const MultFnTable& table, const GammaMultiset& gamma, double T,
    const std::vector<uint64_t>& checkpoints) {
    for (size_t i = 0; i < checkpoints.size(); ++i) {
        if (checkpoints[i] > table.N())
            raise(errc::range, "checkpoint exceeds table range");
        if (i > 0 && checkpoints[i] <= checkpoints[i - 1])
            raise(errc::range, "checkpoints must be strictly increasing");
    }
    if (checkpoints.empty()) return {};
    std::vector<double> active;  // ordinates with |gamma| <= T, with multiplicity
    for (const auto& e : gamma.entries)
        if (std::abs(e.gamma) <= T)
            for (int i = 0; i < e.multiplicity; ++i) active.push_back(e.gamma);

    std::vector<std::pair<uint64_t, cplx>> out;
    const auto primes = primes_up_to(checkpoints.back());
    cplx psi(0.0, 0.0);
    size_t pi = 0;
    for (uint64_t x : checkpoints) {
        for (; pi < primes.size() && primes[pi] <= x; ++pi) {
            const uint64_t p = primes[pi];
            const double lp = std::log(static_cast<double>(p));
            cplx term = table[p];
            for (double g : active) term += cplx(std::cos(g * lp), std::sin(g * lp));
            psi += term * lp;
        }
        out.emplace_back(x, psi);
    }
    return out;
}

cplx compensated_prime_sum(const MultFnTable& table, const GammaMultiset& gamma, double T,
                           uint64_t x) {
    return compensated_prime_sums(table, gamma, T, {x})[0].second;
}

VerificationReport theorem_report(const MultFnTable& table, int D, double A, double K,
                                  const GammaMultiset& gamma, double T,
                                  const std::vector<uint64_t>& checkpoints) {
    VerificationReport rep;
    rep.label = table.label();
    rep.D = D;
    rep.A = A;
    rep.K = K;
    rep.gamma = gamma;
    rep.hypothesis_points = partial_sums(table, checkpoints, A);

    std::vector<double> hyp_norm;
    for (const auto& pt : rep.hypothesis_points) hyp_norm.push_back(pt.normalized);
    rep.hypothesis_pass = envelope_decays(hyp_norm);

    const auto psis = compensated_prime_sums(table, gamma, T, checkpoints);
    rep.psi_all_zero = true;
    std::vector<double> norm;
    double num = 0.0, den = 0.0;
    for (const auto& [x, psi] : psis) {
        TheoremCheckpoint cp;
        cp.x = x;
        cp.psi = psi;
        const double lx = std::log(static_cast<double>(x));
        cp.normalized = std::abs(psi) * std::sqrt(lx) / static_cast<double>(x);
        rep.points.push_back(cp);
        norm.push_back(cp.normalized);
        if (std::abs(psi) > 1e-10 * static_cast<double>(x)) rep.psi_all_zero = false;
        const double g = static_cast<double>(x) / std::sqrt(lx);
        num += std::abs(psi) * g;
        den += g * g;
    }
    rep.fitted_C = den > 0 ? num / den : 0.0;
    rep.decay_pass = rep.psi_all_zero || envelope_decays(norm);
    rep.pass = rep.hypothesis_pass && rep.decay_pass;
    if (!rep.hypothesis_pass)
        rep.note = "hypothesis violation: normalized partial sums |S(x)|(log x)^A/x non-decaying";
    else if (!rep.decay_pass)
        rep.note = "compensated prime sums do not decay against x/sqrt(log x)";
    else
        rep.note = rep.psi_all_zero ? "psi identically zero" : "decay envelope holds";
    return rep;
}

// ---- A_N --------------------------------------------------------------------

namespace {

void compositions(int total, int parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
    if (parts == 1) {
        cur.push_back(total);
        out.push_back(cur);
        cur.pop_back();
        return;
    }
    for (int head = 0; head <= total; ++head) {
        cur.push_back(head);
        compositions(total - head, parts - 1, cur, out);
        cur.pop_back();
    }
}

uint64_t multinomial(int N, const std::vector<int>& parts) {
    // N! / prod parts_i!  computed incrementally to stay in 64 bits
    uint64_t r = 1;
    int rem = N;
    for (int p : parts) {
        // r *= C(rem, p)
        uint64_t c = 1;
        for (int i = 1; i <= p; ++i) c = c * (rem - p + i) / i;
        r *= c;
        rem -= p;
    }
    return r;
}

}  // namespace

ANResult a_n_value(const ANQuery& q) {
    const int k = static_cast<int>(q.gammas.size());
    if (k < 1) raise(errc::range, "a_n_value requires at least one ordinate");
    if (q.N < 1) raise(errc::range, "a_n_value requires N >= 1");
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j)
            if (q.gammas[i] == q.gammas[j]) raise(errc::range, "ordinates must be pairwise distinct");
    if (std::pow(static_cast<double>(k + 1), 2.0 * q.N) > q.enumeration_cap)
        raise(errc::enumeration_cap,
              "(k+1)^(2N) exceeds the enumeration cap " + std::to_string(q.enumeration_cap));

    std::vector<std::vector<int>> comps;
    std::vector<int> cur;
    compositions(q.N, k + 1, cur, comps);
    std::vector<uint64_t> weight(comps.size());
    std::vector<double> phase(comps.size());   // sum_i j_i gamma_i (gamma_0 = 0)
    std::vector<double> scale(comps.size());   // sum_i j_i |gamma_i|
    for (size_t c = 0; c < comps.size(); ++c) {
        weight[c] = multinomial(q.N, comps[c]);
        double s = 0.0, sc = 0.0;
        for (int i = 0; i < k; ++i) {
            s += comps[c][i + 1] * q.gammas[i];
            sc += comps[c][i + 1] * std::abs(q.gammas[i]);
        }
        phase[c] = s;
        scale[c] = sc;
    }

    // targets: x first, then 0 and each ordinate for the Lemma 4.2 ratios
    std::vector<double> targets{q.x, 0.0};
    for (double g : q.gammas) targets.push_back(g);
    std::vector<uint64_t> sums(targets.size(), 0);

    for (size_t a = 0; a < comps.size(); ++a) {
        for (size_t b = 0; b < comps.size(); ++b) {
            const double diff = phase[a] - phase[b];
            const double sc = std::max(1.0, scale[a] + scale[b]);
            for (size_t t = 0; t < targets.size(); ++t) {
                const double delta = std::abs(diff - targets[t]);
                const double exact_eps = 32.0 * 2.220446049250313e-16 * std::max(sc, std::abs(targets[t]));
                if (delta <= exact_eps) {
                    sums[t] += weight[a] * weight[b];
                } else if (delta <= q.relation_tolerance && t == 0) {
                    raise(errc::ambiguous_relation,
                          "combination within tolerance of x but not exact (near-resonant ordinates)");
                }
            }
        }
    }

    ANResult res;
    res.value = sums[0];
    res.an0 = sums[1];
    res.an_gamma.assign(sums.begin() + 2, sums.end());
    const double kp1 = static_cast<double>(k + 1);
    res.normalized_an0 =
        static_cast<double>(res.an0) / (std::pow(kp1, 2.0 * q.N) * std::pow(q.N, -0.5 * k));
    double mn = 1e300;
    for (uint64_t a : res.an_gamma)
        mn = std::min(mn, static_cast<double>(a) / static_cast<double>(res.an0));
    res.min_gamma_ratio = res.an_gamma.empty() ? 0.0 : mn;
    return res;
}

MultiplicityInequalityResult multiplicity_inequality_check(
    const MultFnTable& table, const std::vector<std::pair<double, int>>& gamma_with_mult, int Npow,
    uint64_t x, double slack_factor) {
    if (x < 16) raise(errc::range, "multiplicity inequality requires x >= 16 (log log x > 1)");
    if (x > table.N()) raise(errc::range, "x exceeds table range");

    MultiplicityInequalityResult res;
    const double llx = std::log(std::log(static_cast<double>(x)));

    std::vector<double> gammas;
    for (const auto& [g, m] : gamma_with_mult) gammas.push_back(g);

    // lambda_N(x) by direct prime summation
    double acc = 0.0;
    for (uint64_t p : primes_up_to(x)) {
        const double lp = std::log(static_cast<double>(p));
        cplx z(1.0, 0.0);
        for (double g : gammas) z += cplx(std::cos(g * lp), std::sin(g * lp));
        const double kernel = std::pow(std::norm(z), Npow);
        acc += table[p].real() * kernel / static_cast<double>(p);
    }
    res.lambda_N = acc / llx;

    if (gammas.empty()) {
        res.lower_bound = -static_cast<double>(table.D());
        res.lambda_ok = true;
        res.inequality_ok = true;
        return res;
    }

    ANQuery q;
    q.gammas = gammas;
    q.N = Npow;
    q.x = 0.0;
    const ANResult an = a_n_value(q);
    const int D = table.D();
    res.d_an0 = static_cast<double>(D) * static_cast<double>(an.an0);
    res.lower_bound = -res.d_an0;
    res.slack = slack_factor * res.d_an0;
    res.lambda_ok = res.lambda_N >= res.lower_bound - res.slack;
    double s = 0.0;
    for (size_t i = 0; i < gamma_with_mult.size(); ++i)
        s += gamma_with_mult[i].second * static_cast<double>(an.an_gamma[i]);
    res.sum_m_an_gamma = s;
    res.inequality_ok = s <= res.d_an0 * (1.0 + 1e-12);
    return res;
}

// ---- hyperbola ----------------------------------------------------------------

HyperbolaResult hyperbola_f_gamma_sums(const MultFnTable& table, const RealMultiset& gamma_tilde,
                                       uint64_t x, double z) {
    if (x > table.N()) raise(errc::range, "x exceeds table range");
    if (!(z >= 2.0) || !(z * z <= static_cast<double>(x) * (1.0 + 1e-9)))
        raise(errc::range, "hyperbola parameter needs 2 <= z <= sqrt(x)");

    // restrict f to [1, x]
    std::vector<cplx> fv(table.raw().begin(), table.raw().begin() + x + 1);
    const MultFnTable f(x, table.D(), table.label(), table.source(), std::move(fv));
    const MultFnTable tau = gamma_tilde.empty() ? eps_table(x) : tau_multiset(gamma_tilde, x);

    HyperbolaResult res;
    {
        const MultFnTable conv = dirichlet_convolve(f, tau);
        cplx s(0.0, 0.0);
        for (uint64_t n = 1; n <= x; ++n) s += conv[n];
        res.direct = s;
    }
    // prefix sums
    std::vector<cplx> Sf(x + 1), St(x + 1);
    cplx af(0, 0), at(0, 0);
    for (uint64_t n = 1; n <= x; ++n) {
        af += f[n];
        at += tau[n];
        Sf[n] = af;
        St[n] = at;
    }
    const uint64_t A0 = static_cast<uint64_t>(static_cast<double>(x) / z);  // a <= x/z
    cplx sum1(0, 0);
    for (uint64_t a = 1; a <= A0; ++a) {
        if (f[a] == cplx(0.0, 0.0)) continue;
        sum1 += f[a] * St[x / a];
    }
    cplx sum2(0, 0);
    const uint64_t B0 = static_cast<uint64_t>(z);
    for (uint64_t b = 1; b <= B0; ++b) sum2 += tau[b] * (Sf[x / b] - Sf[A0]);
    res.hyperbola = sum1 + sum2;
    res.difference = std::abs(res.direct - res.hyperbola);
    return res;
}

// ---- special case ---------------------------------------------------------------

SpecialCaseResult special_case_check(const MultFnTable& table, double gamma, int D, uint64_t x,
                                     double A) {
    if (x > table.N()) raise(errc::range, "x exceeds table range");
    SpecialCaseResult res;
    const uint64_t xr = std::min<uint64_t>(x, 100000);
    res.x_used = xr;

    // g = f twisted by n^{-i gamma}; G = tau_D * g; then G * conj(G)
    std::vector<cplx> gv(xr + 1, cplx(0, 0));
    gv[1] = cplx(1.0, 0.0);
    for (uint64_t n = 1; n <= xr; ++n) {
        const double t = gamma * std::log(static_cast<double>(n));
        gv[n] = table[n] * cplx(std::cos(t), -std::sin(t));
    }
    const MultFnTable g(xr, table.D(), "twisted", TableSource::Builtin, std::move(gv));
    const MultFnTable G = dirichlet_convolve(tau_d_table(D, xr), g);
    std::vector<cplx> conj_v(xr + 1);
    for (uint64_t n = 0; n <= xr; ++n) conj_v[n] = std::conj(G[n]);
    const MultFnTable Gbar(xr, G.D(), "conj", TableSource::Builtin, std::move(conj_v));
    const MultFnTable GG = dirichlet_convolve(G, Gbar);

    const LambdaTable lam = lambda_from_f(GG);
    res.lambda_min_real = 0.0;
    res.lambda_max_imag = 0.0;
    for (const auto& e : lam.entries()) {
        res.lambda_min_real = std::min(res.lambda_min_real, e.value.real());
        res.lambda_max_imag = std::max(res.lambda_max_imag, std::abs(e.value.imag()));
    }
    cplx s(0, 0);
    for (uint64_t n = 1; n <= xr; ++n) s += GG[n];
    res.gg_partial_sum = s.real();

    double dev = 0.0;
    for (uint64_t p : primes_up_to(x)) {
        const double lp = std::log(static_cast<double>(p));
        const cplx comp = static_cast<double>(D) * cplx(std::cos(gamma * lp), std::sin(gamma * lp));
        dev += std::abs(table[p] + comp) * lp;
    }
    res.deviation_sum = dev;
    const double lx = std::log(static_cast<double>(x));
    res.normalized_deviation = dev * std::pow(lx, 0.5 * (A - 1.0 - D)) / static_cast<double>(x);
    return res;
}

// ---- Perron ------------------------------------------------------------------------

double irwin_hall_survival(double v, int n) {
    if (v <= 0.0) return 1.0;
    if (v >= n) return 0.0;
    double fact = 1.0;
    for (int i = 2; i <= n; ++i) fact *= i;
    double cdf = 0.0;
    double binom = 1.0;  // C(n, k)
    for (int k = 0; k <= static_cast<int>(v); ++k) {
        const double term = binom * std::pow(v - k, n);
        cdf += (k % 2 == 0) ? term : -term;
        binom = binom * (n - k) / (k + 1);
    }
    cdf /= fact;
    return std::min(1.0, std::max(0.0, 1.0 - cdf));
}

namespace {

cplx perron_kernel(cplx s, double T0, int power) {
    const cplx u = s / T0;
    const cplx k = (std::exp(u) - 1.0) / u;
    cplx r(1.0, 0.0);
    for (int i = 0; i < power; ++i) r *= k;
    return r;
}

// Simpson over the vertical line with 2M panels at step h
cplx perron_quadrature(const std::vector<std::pair<uint64_t, cplx>>& coeffs, double c, double x,
                       double T0, int power, double t_max, size_t M) {
    const size_t count = 2 * M + 1;
    const double h = t_max / static_cast<double>(M);
    const auto series = grid_dirichlet_sum(coeffs, c, -t_max, h, count);
    std::vector<cplx> integrand(count);
    const double lx = std::log(x);
    for (size_t r = 0; r < count; ++r) {
        const double t = -t_max + h * static_cast<double>(r);
        const cplx s(c, t);
        const cplx xs = std::exp(s * lx);
        integrand[r] = series[r] * xs / s * perron_kernel(s, T0, power);
    }
    cplx acc(0, 0);
    for (size_t p = 0; p < M; ++p)
        acc += integrand[2 * p] + 4.0 * integrand[2 * p + 1] + integrand[2 * p + 2];
    return acc * (h / 3.0) / (2.0 * M_PI);
}

}  // namespace

PerronResult perron_check(const MultFnTable& table, const RealMultiset& gamma_tilde,
                          const PerronConfig& cfg) {
    if (!(cfg.x >= 2.0) || !(cfg.T >= 2.0)) raise(errc::range, "perron requires x >= 2 and T >= 2");
    const double T0 = cfg.T0();
    const double c = cfg.c();
    const uint64_t x = static_cast<uint64_t>(cfg.x);
    const uint64_t support_end =
        static_cast<uint64_t>(std::floor(cfg.x * std::exp(10.0 / T0))) + 1;
    if (support_end > table.N())
        raise(errc::range, "perron needs the table sieved to x e^{10/T0} = " +
                               std::to_string(support_end));

    // f_Gamma~ = f * tau_{Gamma~}, needed only up to the kernel support
    std::vector<cplx> fv(table.raw().begin(), table.raw().begin() + support_end + 1);
    MultFnTable F(support_end, table.D(), table.label(), table.source(), std::move(fv));
    if (!gamma_tilde.empty())
        F = dirichlet_convolve(F, tau_multiset(gamma_tilde, support_end));
    const LambdaTable lam = lambda_from_f(F);

    std::vector<std::pair<uint64_t, cplx>> coeffs;  // (n, Lambda_F(n) log n)
    for (const auto& e : lam.entries())
        coeffs.emplace_back(e.n, e.value * std::log(static_cast<double>(e.n)));

    PerronResult res;
    for (const auto& [n, a] : coeffs) {
        if (n <= x)
            res.rhs_main += a;
        else
            res.smoothing_correction +=
                a * irwin_hall_survival(T0 * std::log(static_cast<double>(n) / cfg.x),
                                        cfg.kernel_power);
    }

    // prime (log p)^2 form and the prime-power residual, reported separately
    {
        std::vector<double> active = gamma_tilde.expanded();
        cplx pf(0, 0);
        for (uint64_t p : primes_up_to(x)) {
            const double lp = std::log(static_cast<double>(p));
            cplx term = table[p];
            for (double g : active) term += cplx(std::cos(g * lp), std::sin(g * lp));
            pf += term * lp * lp;
        }
        res.prime_form = pf;
        res.prime_power_residual = res.rhs_main - pf;
    }

    // omitted-tail majorant: |kernel| <= (e^{c/T0}+1) T0/|t| on sigma = c
    double B_S = 0.0;
    for (const auto& [n, a] : coeffs) B_S += std::abs(a) * std::pow(static_cast<double>(n), -c);
    const double K0 = std::exp(c / T0) + 1.0;
    auto tail_at = [&](double tm) {
        return B_S * std::pow(cfg.x, c) * std::pow(K0 * T0 / tm, cfg.kernel_power) /
               (cfg.kernel_power * M_PI * tm);
    };
    double t_max = std::max({4.0 * T0, 200.0, cfg.t_max});
    const double tail_target = 0.5e-6 * cfg.x;
    while (tail_at(t_max) > tail_target) {
        t_max *= 1.25;
        if (t_max > 1e7)
            raise(errc::quadrature_budget, "cannot meet the omitted-tail target below t_max = 1e7");
    }
    res.tail_bound = tail_at(t_max);
    res.t_max = t_max;

    size_t M = static_cast<size_t>(std::ceil(t_max / cfg.step));
    if (M < 8) M = 8;
    res.step = t_max / static_cast<double>(M);
    res.lhs_coarse = perron_quadrature(coeffs, c, cfg.x, T0, cfg.kernel_power, t_max, M);
    res.lhs = perron_quadrature(coeffs, c, cfg.x, T0, cfg.kernel_power, t_max, 2 * M);
    res.richardson = std::abs(res.lhs - res.lhs_coarse);

    res.discrepancy = std::abs(res.lhs - res.rhs_main - res.smoothing_correction);
    res.quadrature_budget = res.tail_bound + res.richardson;
    res.budget = 10.0 * cfg.x * std::log(cfg.x) / T0 + res.quadrature_budget;
    return res;
}

// ---- Brun-Titchmarsh -----------------------------------------------------------------

BTResult brun_titchmarsh_check(int j, const std::vector<std::pair<uint64_t, uint64_t>>& samples) {
    if (j < 1 || j > 4) raise(errc::range, "brun_titchmarsh_check supports 1 <= j <= 4");
    uint64_t maxN = 0;
    for (const auto& [x, y] : samples) {
        if (y < 1 || y > x) raise(errc::range, "samples need 1 <= y <= x");
        maxN = std::max(maxN, x + y);
    }
    const auto lj = generalized_von_mangoldt(j, maxN);
    BTResult res;
    res.j = j;
    for (const auto& [x, y] : samples) {
        BTSample s;
        s.x = x;
        s.y = y;
        double acc = 0.0;
        for (uint64_t n = x + 1; n <= x + y; ++n) acc += lj[n];
        s.sum = acc;
        const double lx = std::log(static_cast<double>(x));
        s.ratio = acc / (static_cast<double>(y) * std::pow(lx, j - 1.0));
        res.max_ratio = std::max(res.max_ratio, s.ratio);
        res.samples.push_back(s);
    }
    return res;
}

// ---- mean value -------------------------------------------------------------------------

MeanValueResult mean_value_G(const MultFnTable& table, int j, double sigma, double X, double step,
                             const SeriesEvaluationConfig& cfg) {
    if (j < 1) raise(errc::range, "mean_value_G requires j >= 1");
    if (!(sigma - 1.0 >= 1e-3)) raise(errc::range, "mean_value_G requires sigma - 1 >= 1e-3");
    if (!(X > 0.0) || X > 1000.0) raise(errc::range, "mean_value_G requires 0 < X <= 1000");
    if (static_cast<double>(j) >= cfg.A - 1.0)
        raise(errc::derivative_order, "mean_value_G order j needs A > j+1");
    const uint64_t trunc = std::min<uint64_t>(cfg.truncation, table.N());

    size_t M = static_cast<size_t>(std::ceil(X / step));
    if (M % 2) ++M;
    if (M < 4) M = 4;
    const double h = X / static_cast<double>(M);
    const size_t count = 2 * M + 1;

    const auto grids = eval_L_grid(table, sigma, -X, h, count, j, trunc, cfg.workers);
    std::vector<double> g2(count);
    for (size_t r = 0; r < count; ++r) {
        const double den = std::abs(grids[0][r]);
        if (den < 1e-6)
            raise(errc::denominator_small, "|L| below floor inside the mean-value integrand");
        const double q = std::abs(grids[j][r]) / den;
        g2[r] = q * q;
    }
    // per-panel Simpson; panels are nonnegative, so restricted sums are monotone
    std::vector<double> panel(M);
    for (size_t p = 0; p < M; ++p)
        panel[p] = h / 3.0 * (g2[2 * p] + 4.0 * g2[2 * p + 1] + g2[2 * p + 2]);

    MeanValueResult res;
    double cum = 0.0;
    const size_t mid = M / 2;
    for (size_t m = 1; m <= mid; ++m) {
        cum += panel[mid - m] + panel[mid + m - 1];
        res.curve.emplace_back(2.0 * m * h, cum);
    }
    res.integral = cum;
    const double lX = std::log(X);
    res.bound = X * std::pow(lX, 2.0 * j) + std::pow(sigma - 1.0, -(2.0 * j - 1.0));
    res.ratio = res.integral / res.bound;
    return res;
}

}  // namespace mfstruct
