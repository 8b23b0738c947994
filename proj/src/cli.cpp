#include "mfstruct/cli.hpp"

#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <filesystem>

#include "mfstruct/harness.hpp"

namespace mfstruct::cli {

namespace {

namespace fs = std::filesystem;

const char* plural(size_t n) { return n == 1 ? "" : "s"; }

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    size_t start = 0;
    while (start <= s.size()) {
        const size_t comma = s.find(',', start);
        const std::string piece = s.substr(start, comma == std::string::npos ? std::string::npos
                                                                             : comma - start);
        if (!piece.empty()) out.push_back(std::stod(piece));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

// "x:y,x:y" pairs
std::vector<std::pair<uint64_t, uint64_t>> parse_sample_list(const std::string& s) {
    std::vector<std::pair<uint64_t, uint64_t>> out;
    size_t start = 0;
    while (start <= s.size()) {
        const size_t comma = s.find(',', start);
        const std::string piece = s.substr(start, comma == std::string::npos ? std::string::npos
                                                                             : comma - start);
        if (!piece.empty()) {
            const size_t colon = piece.find(':');
            if (colon == std::string::npos)
                raise(errc::parse, "expected x:y in sample list, got '" + piece + "'");
            out.emplace_back(static_cast<uint64_t>(std::stod(piece.substr(0, colon))),
                             static_cast<uint64_t>(std::stod(piece.substr(colon + 1))));
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

// "gamma:mult,gamma:mult"
RealMultiset parse_multiset(const std::string& s) {
    std::vector<std::pair<double, int>> entries;
    size_t start = 0;
    while (start <= s.size()) {
        const size_t comma = s.find(',', start);
        const std::string piece = s.substr(start, comma == std::string::npos ? std::string::npos
                                                                             : comma - start);
        if (!piece.empty()) {
            const size_t colon = piece.find(':');
            if (colon == std::string::npos)
                entries.emplace_back(std::stod(piece), 1);
            else
                entries.emplace_back(std::stod(piece.substr(0, colon)),
                                     std::stoi(piece.substr(colon + 1)));
        }
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return RealMultiset(entries);
}

std::string gamma_to_string(const GammaMultiset& gm) {
    if (gm.entries.empty()) return "{}";
    std::string s = "{";
    for (size_t i = 0; i < gm.entries.size(); ++i) {
        if (i) s += ", ";
        char buf[64];
        std::snprintf(buf, sizeof(buf), "%.6f:%d", gm.entries[i].gamma, gm.entries[i].multiplicity);
        s += buf;
    }
    return s + "}";
}

struct CommonFlags {
    std::string fn = "moebius";
    std::string config_path;
    RunConfig rc;
    int D_override = 0;  // 0 = use the catalog's declared D
};

void add_run_flags(CLI::App* cmd, CommonFlags& cf) {
    cmd->add_option("--config", cf.config_path, "key=value config file (flags override)");
    cmd->add_option("--N", cf.rc.N, "sieve bound");
    cmd->add_option("--T", cf.rc.T, "scan half-width");
    cmd->add_option("--A", cf.rc.A, "assumed decay exponent");
    cmd->add_option("--K", cf.rc.K, "partial-sum constant (0 = estimate from checkpoints)");
    cmd->add_option("--grid-step", cf.rc.grid_step, "zero-scan grid step");
    cmd->add_option("--out", cf.rc.output_dir, "output directory for CSV/SVG");
    cmd->add_option("--cache-dir", cf.rc.cache_dir, "sieve cache directory (MFSTRUCT_CACHE overrides)");
    cmd->add_option("--workers", cf.rc.workers, "worker thread count");
    cmd->add_option(
        "--checkpoints",
        [&cf](const std::vector<std::string>& vals) {
            cf.rc.checkpoints.clear();
            for (double v : parse_double_list(vals.back()))
                cf.rc.checkpoints.push_back(static_cast<uint64_t>(v));
            return true;
        },
        "comma-separated checkpoint list");
}

// flags given on the command line override the config file
void merge_config_file(CLI::App* cmd, CommonFlags& cf) {
    if (cf.config_path.empty()) return;
    RunConfig base = parse_config(cf.config_path);
    auto absent = [cmd](const std::string& name) {
        const CLI::Option* opt = cmd->get_option_no_throw(name);
        return opt != nullptr && opt->count() == 0;
    };
    if (absent("--N")) cf.rc.N = base.N;
    if (absent("--T")) cf.rc.T = base.T;
    if (absent("--A")) cf.rc.A = base.A;
    if (absent("--K")) cf.rc.K = base.K;
    if (absent("--grid-step")) cf.rc.grid_step = base.grid_step;
    if (absent("--out")) cf.rc.output_dir = base.output_dir;
    if (absent("--cache-dir")) cf.rc.cache_dir = base.cache_dir;
    if (absent("--workers")) cf.rc.workers = base.workers;
    if (absent("--checkpoints")) cf.rc.checkpoints = base.checkpoints;
}

SeriesEvaluationConfig series_cfg(const CommonFlags& cf, const MultFnTable& table, double K_used) {
    SeriesEvaluationConfig cfg;
    cfg.A = cf.rc.A;
    cfg.K = K_used;
    cfg.truncation = std::min<uint64_t>(table.N(), 1000000);
    cfg.workers = cf.rc.workers;
    return cfg;
}

int cmd_sieve(const CommonFlags& cf) {
    const CatalogEntry entry = resolve_catalog(cf.fn);
    const MultFnTable t = sieve_entry(entry, cf.rc.N, cf.rc);
    const auto ps = partial_sums(t, {t.N()});
    std::printf("sieved %s: N=%llu D=%d S(N)=%.10g%+.10gi\n", t.label().c_str(),
                static_cast<unsigned long long>(t.N()), t.D(), ps[0].sum.real(), ps[0].sum.imag());
    const std::string dir = effective_cache_dir(cf.rc);
    if (!dir.empty())
        std::printf("cache: %s\n", sieve_cache_path(dir, t.label(), t.N()).string().c_str());
    return 0;
}

int cmd_eval(const CommonFlags& cf, double sre, double sim, int j) {
    const CatalogEntry entry = resolve_catalog(cf.fn);
    const MultFnTable t = sieve_entry(entry, cf.rc.N, cf.rc);
    double K = cf.rc.K;
    if (K <= 0) K = estimate_K(t, cf.rc.A, cf.rc.effective_checkpoints());
    const SeriesEvaluationConfig cfg = series_cfg(cf, t, K);
    const LEvaluation ev = eval_L_derivative(t, j, cplx(sre, sim), cfg);
    std::printf("L^(%d)(%g%+gi, %s) = %.12g%+.12gi  (N_trunc=%llu, tail<=%.3g, c_tail=%g, K=%.4g)\n",
                j, sre, sim, t.label().c_str(), ev.value.real(), ev.value.imag(),
                static_cast<unsigned long long>(ev.truncation), ev.tail_estimate, ev.c_tail, K);
    return 0;
}

int cmd_find_zeros(const CommonFlags& cf) {
    const CatalogEntry entry = resolve_catalog(cf.fn);
    const int D = cf.D_override > 0 ? cf.D_override : entry.D;
    const MultFnTable t = sieve_entry(entry, cf.rc.N, cf.rc);
    double K = cf.rc.K;
    if (K <= 0) K = estimate_K(t, cf.rc.A, cf.rc.effective_checkpoints());
    const SeriesEvaluationConfig cfg = series_cfg(cf, t, K);
    const ZeroScanReport rep = scan_zeros(t, D, cf.rc.T, cfg, cf.rc.grid_step);

    const fs::path out(cf.rc.output_dir);
    write_scan_csv(out / (entry.name + "_grid.csv"), rep);
    GammaMultiset gm;
    gm.D = D;
    gm.T = cf.rc.T;
    for (const auto& z : rep.refined)
        if (z.multiplicity >= 1)
            gm.entries.push_back({z.gamma, z.multiplicity, z.derivative_magnitudes});
    write_gamma_csv(out / (entry.name + "_zeros.csv"), gm, D);
    std::printf("%s: %zu candidate%s, Gamma = %s (total %d, D = %d)\n", entry.name.c_str(),
                rep.candidates.size(), plural(rep.candidates.size()), gamma_to_string(gm).c_str(),
                gm.total(), D);
    if (gm.total() > D) {
        std::printf("MULTIPLICITY_OVERFLOW: total multiplicity exceeds D\n");
        return 1;
    }
    return 0;
}

int cmd_verify(const CommonFlags& cf) {
    const CatalogEntry entry = resolve_catalog(cf.fn);
    const int D = cf.D_override > 0 ? cf.D_override : entry.D;
    const auto t0 = std::chrono::steady_clock::now();
    const HarnessOutcome oc = run_verification(entry, D, cf.rc);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::printf("verify %s (D=%d, A=%g, N=%llu, T=%g)\n", entry.name.c_str(), D, cf.rc.A,
                static_cast<unsigned long long>(cf.rc.N), cf.rc.T);
    std::printf("  membership: max|Lambda|/log p = %.6g, max|f|/tau_D = %.6g -> %s\n",
                oc.membership.max_lambda_ratio, oc.membership.max_f_ratio,
                oc.membership.member ? "member" : "NOT a member");
    if (oc.constructed_gamma)
        std::printf("  Gamma (scan): %s\n", gamma_to_string(*oc.constructed_gamma).c_str());
    if (oc.report) {
        std::printf("  K = %.6g, fitted C1 = %.6g\n", oc.K_used, oc.report->fitted_C);
        for (const auto& pt : oc.report->points)
            std::printf("  x=%-10llu |psi|=%.6g normalized=%.6g\n",
                        static_cast<unsigned long long>(pt.x), std::abs(pt.psi), pt.normalized);
    }
    std::printf("  %s: %s\n", oc.ok ? "PASS" : "FAIL", oc.note.c_str());
    std::printf("  elapsed: %.2fs\n", secs);

    const fs::path out(cf.rc.output_dir);
    if (oc.scan) write_scan_csv(out / (entry.name + "_grid.csv"), *oc.scan);
    if (oc.gamma_used) write_gamma_csv(out / (entry.name + "_zeros.csv"), *oc.gamma_used, D);
    if (oc.report) {
        write_verification_csv(out / (entry.name + "_verification.csv"), *oc.report);
        write_verification_svg(out / (entry.name + "_decay.svg"), *oc.report);
    }
    return oc.ok ? 0 : 1;
}

int cmd_an(const std::string& gammas, int N, double x, double tol) {
    ANQuery q;
    q.gammas = parse_double_list(gammas);
    q.N = N;
    q.x = x;
    q.relation_tolerance = tol;
    const ANResult r = a_n_value(q);
    std::printf("A_%d(%g) = %llu\n", N, x, static_cast<unsigned long long>(r.value));
    std::printf("A_%d(0) = %llu, A_N(0)/((k+1)^{2N} N^{-k/2}) = %.6g, min_j A_N(gamma_j)/A_N(0) = %.6g\n",
                N, static_cast<unsigned long long>(r.an0), r.normalized_an0, r.min_gamma_ratio);
    return 0;
}

int cmd_lambda_j(const CommonFlags& cf, int j) {
    const auto lj = generalized_von_mangoldt(j, cf.rc.N);
    double max_ratio = 0.0;
    uint64_t argmax = 1;
    for (uint64_t n = 2; n <= cf.rc.N; ++n) {
        const double r = lj[n] / std::pow(std::log(static_cast<double>(n)), j);
        if (r > max_ratio) {
            max_ratio = r;
            argmax = n;
        }
    }
    const fs::path out(cf.rc.output_dir);
    CsvWriter csv({"n", "lambda_j"});
    for (uint64_t n = 1; n <= cf.rc.N; ++n) csv.row({std::to_string(n), format_double(lj[n])});
    const fs::path path = out / ("lambda_" + std::to_string(j) + ".csv");
    csv.save(path);
    std::printf("Lambda_%d up to N=%llu: empirical max Lambda_j(n)/(log n)^j = %.6g at n=%llu\n", j,
                static_cast<unsigned long long>(cf.rc.N), max_ratio,
                static_cast<unsigned long long>(argmax));
    std::printf("wrote %s\n", path.string().c_str());
    return 0;
}

int cmd_perron(const CommonFlags& cf, double x, double T, double step, const std::string& gamma_tilde) {
    const CatalogEntry entry = resolve_catalog(cf.fn);
    PerronConfig pc;
    pc.x = x;
    pc.T = T;
    pc.step = step;
    const uint64_t need =
        static_cast<uint64_t>(std::floor(x * std::exp(10.0 / pc.T0()))) + 2;
    const MultFnTable t = sieve_entry(entry, std::max(cf.rc.N, need), cf.rc);
    const RealMultiset gt = gamma_tilde.empty() ? RealMultiset() : parse_multiset(gamma_tilde);
    const PerronResult r = perron_check(t, gt, pc);
    std::printf("perron %s: x=%g T=%g T0=%.4g c=%.6f t_max=%.4g step=%.4g\n", entry.name.c_str(), x,
                T, pc.T0(), pc.c(), r.t_max, r.step);
    std::printf("  lhs           = %.10g%+.10gi\n", r.lhs.real(), r.lhs.imag());
    std::printf("  rhs+smoothing = %.10g%+.10gi\n",
                (r.rhs_main + r.smoothing_correction).real(),
                (r.rhs_main + r.smoothing_correction).imag());
    std::printf("  discrepancy   = %.6g  (budget %.6g, quadrature %.6g)\n", r.discrepancy, r.budget,
                r.quadrature_budget);
    write_perron_csv(fs::path(cf.rc.output_dir) / (entry.name + "_perron.csv"), r);
    return r.discrepancy <= r.budget ? 0 : 1;
}

int cmd_bt(const CommonFlags& cf, int j, const std::string& samples) {
    const auto list = samples.empty()
                          ? std::vector<std::pair<uint64_t, uint64_t>>{{100000, 1000},
                                                                       {1000000, 10000},
                                                                       {10000000, 100000}}
                          : parse_sample_list(samples);
    const BTResult r = brun_titchmarsh_check(j, list);
    for (const auto& s : r.samples)
        std::printf("j=%d x=%llu y=%llu sum=%.6g ratio=%.6g\n", j,
                    static_cast<unsigned long long>(s.x), static_cast<unsigned long long>(s.y),
                    s.sum, s.ratio);
    std::printf("max ratio = %.6g\n", r.max_ratio);
    write_bt_csv(fs::path(cf.rc.output_dir) / ("bt_j" + std::to_string(j) + ".csv"), r);
    return 0;
}

int cmd_mean_value(const CommonFlags& cf, int j, double sigma, double X, double step) {
    const CatalogEntry entry = resolve_catalog(cf.fn);
    const MultFnTable t = sieve_entry(entry, cf.rc.N, cf.rc);
    SeriesEvaluationConfig cfg = series_cfg(cf, t, cf.rc.K > 0 ? cf.rc.K : 1.0);
    cfg.truncation = std::min<uint64_t>(t.N(), 100000);
    const MeanValueResult r = mean_value_G(t, j, sigma, X, step, cfg);
    std::printf("mean-value %s: j=%d sigma=%g X=%g integral=%.6g bound=%.6g ratio=%.6g\n",
                entry.name.c_str(), j, sigma, X, r.integral, r.bound, r.ratio);
    write_mean_value_csv(fs::path(cf.rc.output_dir) /
                             (entry.name + "_meanvalue_j" + std::to_string(j) + ".csv"),
                         r, j, sigma, X);
    return 0;
}

int cmd_catalog(const CommonFlags& cf) {
    bool all_ok = true;
    std::printf("%-26s %-3s %-14s %s\n", "name", "D", "known Gamma", "membership at N=1e5");
    for (const std::string& name : catalog_names()) {
        const CatalogEntry e = resolve_catalog(name);
        const MembershipReport rep =
            check_class_membership(e.spec, std::min<uint64_t>(cf.rc.N, 100000), e.D);
        std::string gamma = "-";
        if (e.known_gamma) {
            gamma = "{";
            for (size_t i = 0; i < e.known_gamma->size(); ++i) {
                if (i) gamma += ",";
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%g:%d", (*e.known_gamma)[i].first,
                              (*e.known_gamma)[i].second);
                gamma += buf;
            }
            gamma += "}";
        }
        std::printf("%-26s %-3d %-14s %s (max ratios %.4g, %.4g)\n", e.name.c_str(), e.D,
                    gamma.c_str(), rep.member ? "ok" : "FAIL", rep.max_lambda_ratio,
                    rep.max_f_ratio);
        all_ok = all_ok && rep.member;
    }
    return all_ok ? 0 : 1;
}

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"multiplicative function structure toolkit"};
    app.require_subcommand(1);

    CommonFlags cf;
    double sre = 2.0, sim = 0.0, x = 1000.0, T_perron = 1000.0, step = 0.02, sigma = 1.1, X = 100.0;
    double an_x = 0.0, an_tol = 1e-9;
    int j = 1, an_N = 1;
    std::string gammas, samples, gamma_tilde;

    auto* sieve = app.add_subcommand("sieve", "sieve a catalog function and fill the cache");
    sieve->add_option("--fn", cf.fn, "catalog expression");
    add_run_flags(sieve, cf);

    auto* eval = app.add_subcommand("eval", "evaluate L^(j)(s, f) by truncated series");
    eval->add_option("--fn", cf.fn, "catalog expression");
    eval->add_option("--s-re", sre, "Re(s)");
    eval->add_option("--s-im", sim, "Im(s)");
    eval->add_option("--j", j, "derivative order");
    add_run_flags(eval, cf);

    auto* zeros = app.add_subcommand("find-zeros", "scan the 1-line for zeros of L(s, f)");
    zeros->add_option("--fn", cf.fn, "catalog expression");
    zeros->add_option("--D", cf.D_override, "divisor bound override");
    add_run_flags(zeros, cf);

    auto* verify = app.add_subcommand("verify", "run the full theorem harness on one function");
    verify->add_option("--fn", cf.fn, "catalog expression");
    verify->add_option("--D", cf.D_override, "divisor bound override");
    add_run_flags(verify, cf);

    auto* an = app.add_subcommand("an", "exact A_N(x) enumeration");
    an->add_option("--gammas", gammas, "comma-separated distinct ordinates")->required();
    an->add_option("--N", an_N, "power parameter");
    an->add_option("--x", an_x, "target value");
    an->add_option("--tol", an_tol, "relation tolerance");

    auto* lj = app.add_subcommand("lambda-j", "generalized von Mangoldt table");
    lj->add_option("--j", j, "order");
    add_run_flags(lj, cf);

    auto* perron = app.add_subcommand("perron", "smoothed Perron identity check");
    perron->add_option("--fn", cf.fn, "catalog expression");
    perron->add_option("--x", x, "sum range");
    perron->add_option("--T", T_perron, "kernel parameter (T0 = sqrt(T))");
    perron->add_option("--step", step, "quadrature step");
    perron->add_option("--gamma-tilde", gamma_tilde, "multiset gamma:mult,... (default empty)");
    add_run_flags(perron, cf);

    auto* bt = app.add_subcommand("bt-check", "short-interval Lambda_j sums");
    bt->add_option("--j", j, "order (1..4)");
    bt->add_option("--samples", samples, "x:y,x:y,... (default 1e5:1e3,1e6:1e4,1e7:1e5)");
    add_run_flags(bt, cf);

    auto* mv = app.add_subcommand("mean-value", "second moment of G_j on a vertical segment");
    mv->add_option("--fn", cf.fn, "catalog expression");
    mv->add_option("--j", j, "order");
    mv->add_option("--sigma", sigma, "real part, > 1");
    mv->add_option("--X", X, "half-width");
    mv->add_option("--step", step, "quadrature step");
    add_run_flags(mv, cf);

    auto* cat = app.add_subcommand("catalog", "list catalog entries and registration checks");
    add_run_flags(cat, cf);

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            std::puts(app.help().c_str());
            return 0;
        }
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return 2;
    }

    try {
        CLI::App* sub = app.get_subcommands().front();
        merge_config_file(sub, cf);
        cf.rc.validate();
        std::filesystem::create_directories(cf.rc.output_dir);
        if (sub == sieve) return cmd_sieve(cf);
        if (sub == eval) return cmd_eval(cf, sre, sim, j);
        if (sub == zeros) return cmd_find_zeros(cf);
        if (sub == verify) return cmd_verify(cf);
        if (sub == an) return cmd_an(gammas, an_N, an_x, an_tol);
        if (sub == lj) return cmd_lambda_j(cf, j);
        if (sub == perron) return cmd_perron(cf, x, T_perron, step, gamma_tilde);
        if (sub == bt) return cmd_bt(cf, j, samples);
        if (sub == mv) return cmd_mean_value(cf, j, sigma, X, step);
        if (sub == cat) return cmd_catalog(cf);
        std::fprintf(stderr, "usage error: unknown subcommand\n");
        return 2;
    } catch (const Error& e) {
        if (e.code() == errc::parse || e.code() == errc::unknown_key) {
            std::fprintf(stderr, "usage error: %s\n", e.what());
            return 2;
        }
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}

}  // namespace mfstruct::cli
