#include "mfstruct/harness.hpp"

#include <cmath>
#include <cstdlib>

namespace mfstruct {

double estimate_K(const MultFnTable& table, double A, const std::vector<uint64_t>& checkpoints) {
    double K = 0.0;
    for (const auto& pt : partial_sums(table, checkpoints, A))
        if (pt.x >= 3) K = std::max(K, pt.normalized);
    return K > 0 ? K : 1.0;
}

std::string effective_cache_dir(const RunConfig& rc) {
    if (const char* env = std::getenv("MFSTRUCT_CACHE")) return env;
    return rc.cache_dir;
}

MultFnTable sieve_entry(const CatalogEntry& entry, uint64_t N, const RunConfig& rc) {
    SieveOptions opt;
    opt.workers = rc.workers;
    const std::string dir = effective_cache_dir(rc);
    if (dir.empty()) return sieve_from_spec(entry.spec, N, opt);
    return cached_sieve(dir, entry.spec.label, N,
                        [&] { return sieve_from_spec(entry.spec, N, opt); });
}

namespace {

const char* plural(size_t n) { return n == 1 ? "" : "s"; }

// match constructed zeros against the catalog's oracle ordinates
std::optional<std::string> match_known(const GammaMultiset& built, const GammaMultiset& known) {
    if (built.entries.size() != known.entries.size()) {
        return "scan found " + std::to_string(built.entries.size()) + " zero" +
               std::string(plural(built.entries.size())) + ", oracle has " +
               std::to_string(known.entries.size());
    }
    for (size_t i = 0; i < known.entries.size(); ++i) {
        const auto& k = known.entries[i];
        const auto& e = built.entries[i];
        if (std::abs(e.gamma - k.gamma) >= 1e-3)
            return "zero ordinate " + std::to_string(e.gamma) + " off oracle " +
                   std::to_string(k.gamma);
        if (e.multiplicity != k.multiplicity)
            return "multiplicity " + std::to_string(e.multiplicity) + " at gamma=" +
                   std::to_string(k.gamma) + " differs from oracle " +
                   std::to_string(k.multiplicity);
    }
    return std::nullopt;
}

}  // namespace

HarnessOutcome run_verification(const CatalogEntry& entry, int D, const RunConfig& rc) {
    HarnessOutcome out;

    out.membership = check_class_membership(entry.spec, std::min<uint64_t>(rc.N, 100000), D);
    if (!out.membership.member) {
        out.note = entry.name + " is not a member of F(" + std::to_string(D) +
                   "): max |Lambda_f|/log p = " + std::to_string(out.membership.max_lambda_ratio) +
                   ", max |f|/tau_D = " + std::to_string(out.membership.max_f_ratio);
        return out;
    }

    out.table = sieve_entry(entry, rc.N, rc);
    const auto checkpoints = rc.effective_checkpoints();

    // small-partial-sums gate before any boundary analysis
    const auto hyp = partial_sums(*out.table, checkpoints, rc.A);
    {
        std::vector<double> norm;
        for (const auto& pt : hyp) norm.push_back(pt.normalized);
        const size_t half = norm.size() / 2;
        double lo = 0, hi = 0;
        for (size_t i = 0; i < half; ++i) lo = std::max(lo, norm[i]);
        for (size_t i = norm.size() - half; i < norm.size(); ++i) hi = std::max(hi, norm[i]);
        if (norm.size() >= 2 && hi > lo) {
            out.note = "hypothesis violation: |S(x)|(log x)^A/x non-decaying (" +
                       std::to_string(lo) + " -> " + std::to_string(hi) + " across checkpoints)";
            return out;
        }
    }

    out.K_used = rc.K > 0 ? rc.K : estimate_K(*out.table, rc.A, checkpoints);
    out.cfg.A = rc.A;
    out.cfg.K = out.K_used;
    out.cfg.truncation = std::min<uint64_t>(rc.N, 1000000);
    out.cfg.workers = rc.workers;

    try {
        out.scan = scan_zeros(*out.table, D, rc.T, out.cfg, rc.grid_step);
        GammaMultiset gm;
        gm.D = D;
        gm.T = rc.T;
        for (const auto& z : out.scan->refined) {
            if (z.multiplicity < 1) continue;
            GammaEntry e;
            e.gamma = z.gamma;
            e.multiplicity = z.multiplicity;
            e.derivative_magnitudes = z.derivative_magnitudes;
            gm.entries.push_back(e);
        }
        if (gm.total() > D)
            raise(errc::multiplicity_overflow,
                  "total multiplicity " + std::to_string(gm.total()) + " > D = " + std::to_string(D));
        out.constructed_gamma = gm;
    } catch (const Error& e) {
        if (e.code() == errc::multiplicity_overflow || e.code() == errc::nonzero_not_found) {
            out.note = e.what();
            return out;
        }
        throw;
    }

    if (entry.known_gamma) {
        GammaMultiset known = known_gamma_multiset(entry, D, rc.T);
        if (auto mismatch = match_known(*out.constructed_gamma, known)) {
            out.note = "zero scan disagrees with the oracle: " + *mismatch;
            return out;
        }
        // carry the scan's derivative magnitudes onto the exact ordinates
        for (size_t i = 0; i < known.entries.size(); ++i)
            known.entries[i].derivative_magnitudes =
                out.constructed_gamma->entries[i].derivative_magnitudes;
        out.gamma_used = known;
    } else {
        out.gamma_used = out.constructed_gamma;
    }

    out.report = theorem_report(*out.table, D, rc.A, out.K_used, *out.gamma_used, rc.T, checkpoints);
    out.ok = out.report->pass;
    out.note = out.report->note;
    return out;
}

// ---- serialization ----

void write_scan_csv(const std::filesystem::path& path, const ZeroScanReport& rep) {
    CsvWriter csv({"gamma", "absL", "tail"});
    for (const auto& pt : rep.grid)
        csv.row({format_double(pt.gamma), format_double(pt.absL), format_double(pt.tail)});
    csv.save(path);
}

void write_gamma_csv(const std::filesystem::path& path, const GammaMultiset& gm, int D) {
    std::vector<std::string> header{"gamma", "mult"};
    for (int j = 0; j <= D; ++j) header.push_back("d" + std::to_string(j));
    CsvWriter csv(header);
    for (const auto& e : gm.entries) {
        std::vector<std::string> row{format_double(e.gamma), std::to_string(e.multiplicity)};
        for (int j = 0; j <= D; ++j)
            row.push_back(j < static_cast<int>(e.derivative_magnitudes.size())
                              ? format_double(e.derivative_magnitudes[j])
                              : "");
        csv.row(row);
    }
    csv.save(path);
}

void write_verification_csv(const std::filesystem::path& path, const VerificationReport& rep) {
    CsvWriter csv({"x", "psi_re", "psi_im", "normalized"});
    for (const auto& pt : rep.points)
        csv.row({std::to_string(pt.x), format_double(pt.psi.real()), format_double(pt.psi.imag()),
                 format_double(pt.normalized)});
    csv.save(path);
}

void write_verification_svg(const std::filesystem::path& path, const VerificationReport& rep) {
    PlotSeries psi;
    psi.name = rep.label + " |psi| sqrt(log x)/x";
    for (const auto& pt : rep.points)
        psi.points.emplace_back(static_cast<double>(pt.x), pt.normalized);
    PlotSeries hyp;
    hyp.name = rep.label + " |S|(log x)^A/x";
    for (const auto& pt : rep.hypothesis_points)
        hyp.points.emplace_back(static_cast<double>(pt.x), pt.normalized);
    write_svg_plot(path, "compensated prime sum decay: " + rep.label, "x", "normalized",
                   {psi, hyp}, true);
}

void write_perron_csv(const std::filesystem::path& path, const PerronResult& res) {
    CsvWriter csv({"lhs_re", "lhs_im", "rhs_re", "rhs_im", "smoothing_re", "smoothing_im",
                   "prime_form_re", "prime_form_im", "prime_power_re", "prime_power_im",
                   "discrepancy", "budget", "quadrature_budget", "tail_bound", "richardson",
                   "t_max", "step"});
    csv.row({format_double(res.lhs.real()), format_double(res.lhs.imag()),
             format_double(res.rhs_main.real()), format_double(res.rhs_main.imag()),
             format_double(res.smoothing_correction.real()),
             format_double(res.smoothing_correction.imag()), format_double(res.prime_form.real()),
             format_double(res.prime_form.imag()), format_double(res.prime_power_residual.real()),
             format_double(res.prime_power_residual.imag()), format_double(res.discrepancy),
             format_double(res.budget), format_double(res.quadrature_budget),
             format_double(res.tail_bound), format_double(res.richardson),
             format_double(res.t_max), format_double(res.step)});
    csv.save(path);
}

void write_mean_value_csv(const std::filesystem::path& path, const MeanValueResult& res, int j,
                          double sigma, double X) {
    CsvWriter csv({"j", "sigma", "X", "integral", "bound", "ratio"});
    csv.row({std::to_string(j), format_double(sigma), format_double(X),
             format_double(res.integral), format_double(res.bound), format_double(res.ratio)});
    csv.save(path);
}

void write_bt_csv(const std::filesystem::path& path, const BTResult& res) {
    CsvWriter csv({"j", "x", "y", "sum", "ratio"});
    for (const auto& s : res.samples)
        csv.row({std::to_string(res.j), std::to_string(s.x), std::to_string(s.y),
                 format_double(s.sum), format_double(s.ratio)});
    csv.save(path);
}

}  // namespace mfstruct
