#include "mfstruct/catalog.hpp"

#include <cctype>
#include <cmath>
#include <map>

#include "mfstruct/mf_core.hpp"

namespace mfstruct {

int kronecker_symbol(long long d, uint64_t n) {
    if (n == 0) return (d == 1 || d == -1) ? 1 : 0;
    // split n = 2^v m with m odd; (d|2)^v then Jacobi over m
    int v = 0;
    uint64_t m = n;
    while (m % 2 == 0) {
        m /= 2;
        ++v;
    }
    int result = 1;
    if (v > 0) {
        if (d % 2 == 0) return 0;
        const int dm8 = static_cast<int>(((d % 8) + 8) % 8);
        const int d2 = (dm8 == 1 || dm8 == 7) ? 1 : -1;
        if (v % 2 == 1) result *= d2;
    }
    // Jacobi symbol (a | m), odd m >= 1, via reciprocity
    long long a = d % static_cast<long long>(m);
    if (a < 0) a += static_cast<long long>(m);
    uint64_t am = static_cast<uint64_t>(a);
    uint64_t mm = m;
    while (am != 0) {
        while (am % 2 == 0) {
            am /= 2;
            const uint64_t r = mm % 8;
            if (r == 3 || r == 5) result = -result;
        }
        std::swap(am, mm);
        if (am % 4 == 3 && mm % 4 == 3) result = -result;
        am %= mm;
    }
    if (mm != 1) return 0;  // gcd(d, m) > 1
    return result;
}

namespace {

cplx phase(double theta) { return cplx(std::cos(theta), std::sin(theta)); }

CatalogEntry make_moebius() {
    CatalogEntry e;
    e.name = "moebius";
    e.D = 1;
    e.known_gamma = {{{0.0, 1}}};
    e.known_A = 4.0;
    e.expect_small_sums = true;
    e.spec = {e.name, 1, SpecMode::FValues,
              [](uint64_t, int k) { return k == 1 ? cplx(-1.0, 0.0) : cplx(0.0, 0.0); }};
    return e;
}

CatalogEntry make_liouville() {
    CatalogEntry e;
    e.name = "liouville";
    e.D = 1;
    e.known_gamma = {{{0.0, 1}}};
    e.known_A = 4.0;
    e.expect_small_sums = true;
    e.spec = {e.name, 1, SpecMode::FValues,
              [](uint64_t, int k) { return cplx(k % 2 == 0 ? 1.0 : -1.0, 0.0); }};
    return e;
}

CatalogEntry make_one() {
    CatalogEntry e;
    e.name = "one";
    e.D = 1;
    e.expect_small_sums = false;  // S(x) = x: the control violator
    e.spec = {e.name, 1, SpecMode::FValues, [](uint64_t, int) { return cplx(1.0, 0.0); }};
    return e;
}

CatalogEntry make_eps() {
    CatalogEntry e;
    e.name = "eps";
    e.D = 1;
    e.known_gamma = std::vector<std::pair<double, int>>{};  // no zeros: L == 1
    e.known_A = 4.0;
    e.expect_small_sums = true;
    e.spec = {e.name, 1, SpecMode::FValues, [](uint64_t, int) { return cplx(0.0, 0.0); }};
    return e;
}

CatalogEntry make_tau(int m) {
    if (m < 1 || m > 4) raise(errc::parse, "tau(m) supports 1 <= m <= 4");
    CatalogEntry e;
    e.name = "tau" + std::to_string(m);
    e.D = m;
    e.expect_small_sums = false;  // S(x) ~ x (log x)^{m-1}
    e.spec = {e.name, m, SpecMode::FValues,
              [m](uint64_t, int k) { return cplx(tau_d_prime_power(m, k), 0.0); }};
    return e;
}

CatalogEntry make_twist(double gamma) {
    CatalogEntry e;
    char buf[48];
    std::snprintf(buf, sizeof(buf), "twist(%g)", gamma);
    e.name = buf;
    e.D = 1;
    e.known_gamma = {{{gamma, 1}}};
    e.known_A = 4.0;
    e.expect_small_sums = true;
    e.spec = {e.name, 1, SpecMode::FValues, [gamma](uint64_t p, int k) {
                  if (k != 1) return cplx(0.0, 0.0);
                  return -phase(gamma * std::log(static_cast<double>(p)));
              }};
    return e;
}

CatalogEntry make_kronecker(long long d) {
    if (d != -4 && d != -3 && d != 5 && d != 8)
        raise(errc::parse, "kronecker(d) supports d in {-4, -3, 5, 8}");
    CatalogEntry e;
    e.name = "kronecker(" + std::to_string(d) + ")";
    e.D = 1;
    e.known_gamma = std::vector<std::pair<double, int>>{};  // L(1, chi) != 0
    e.known_A = 4.0;
    e.expect_small_sums = true;
    e.spec = {e.name, 1, SpecMode::FValues, [d](uint64_t p, int k) {
                  const int chi = kronecker_symbol(d, p);
                  double v = 1.0;
                  for (int i = 0; i < k; ++i) v *= chi;
                  return cplx(v, 0.0);
              }};
    return e;
}

CatalogEntry convolve_entries(const CatalogEntry& a, const CatalogEntry& b) {
    CatalogEntry e;
    e.name = a.name + " * " + b.name;
    e.D = a.D + b.D;
    e.expect_small_sums = a.expect_small_sums && b.expect_small_sums;
    if (a.known_gamma && b.known_gamma && e.expect_small_sums) {
        std::map<double, int> merged;
        for (const auto& [g, m] : *a.known_gamma) merged[g] += m;
        for (const auto& [g, m] : *b.known_gamma) merged[g] += m;
        e.known_gamma = std::vector<std::pair<double, int>>(merged.begin(), merged.end());
    }
    if (a.known_A && b.known_A) e.known_A = std::min(*a.known_A, *b.known_A);
    auto ea = a.spec.eval;
    auto eb = b.spec.eval;
    e.spec = {e.name, e.D, SpecMode::FValues, [ea, eb](uint64_t p, int k) {
                  // (f*g)(p^k) = sum_{i+j=k} f(p^i) g(p^j)
                  cplx acc = eb(p, k) + ea(p, k);
                  for (int i = 1; i < k; ++i) acc += ea(p, i) * eb(p, k - i);
                  return acc;
              }};
    return e;
}

CatalogEntry invert_entry(const CatalogEntry& a) {
    CatalogEntry e;
    e.name = "inv(" + a.name + ")";
    e.D = a.D;
    e.expect_small_sums = false;  // not derivable; the harness decides
    auto ea = a.spec.eval;
    e.spec = {e.name, e.D, SpecMode::FValues, [ea](uint64_t p, int k) {
                  // Lambda_g = -Lambda_f on p^1..p^k, then rebuild g
                  const double lp = std::log(static_cast<double>(p));
                  std::vector<cplx> f(k + 1), lam(k + 1), g(k + 1);
                  f[0] = 1.0;
                  g[0] = 1.0;
                  for (int i = 1; i <= k; ++i) {
                      f[i] = ea(p, i);
                      cplx acc = f[i] * (static_cast<double>(i) * lp);
                      for (int j = 1; j < i; ++j) acc -= lam[j] * f[i - j];
                      lam[i] = acc;
                  }
                  for (int i = 1; i <= k; ++i) {
                      cplx acc(0, 0);
                      for (int j = 1; j <= i; ++j) acc += -lam[j] * g[i - j];
                      g[i] = acc / (static_cast<double>(i) * lp);
                  }
                  return g[k];
              }};
    return e;
}

// ---- expression parser: expr := factor ('*' factor)*;
//      factor := name | name '(' args ')' | 'inv' '(' expr ')'

struct Parser {
    const std::string& s;
    size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    bool eat(char c) {
        skip_ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    std::string ident() {
        skip_ws();
        size_t start = pos;
        while (pos < s.size() &&
               (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_' || s[pos] == '-'))
            ++pos;
        if (start == pos) raise(errc::parse, "expected a name at position " + std::to_string(pos));
        return s.substr(start, pos - start);
    }

    double number() {
        skip_ws();
        size_t end = pos;
        while (end < s.size() && (std::isdigit(static_cast<unsigned char>(s[end])) || s[end] == '.' ||
                                  s[end] == '-' || s[end] == '+' || s[end] == 'e' || s[end] == 'E'))
            ++end;
        if (end == pos) raise(errc::parse, "expected a number at position " + std::to_string(pos));
        try {
            size_t used = 0;
            const double v = std::stod(s.substr(pos, end - pos), &used);
            pos += used;
            return v;
        } catch (const std::exception&) {
            raise(errc::parse, "bad number at position " + std::to_string(pos));
        }
    }

    CatalogEntry factor() {
        const std::string name = ident();
        if (name == "inv" || name == "inverse") {
            if (!eat('(')) raise(errc::parse, "inv requires '('");
            CatalogEntry inner = expr();
            if (!eat(')')) raise(errc::parse, "missing ')' after inv");
            return invert_entry(inner);
        }
        if (name == "moebius" || name == "mu") return make_moebius();
        if (name == "liouville" || name == "lambda") return make_liouville();
        if (name == "one") return make_one();
        if (name == "eps" || name == "identity" || name == "delta") return make_eps();
        if (name == "tau") {
            if (!eat('(')) raise(errc::parse, "tau requires (m)");
            const double m = number();
            if (!eat(')')) raise(errc::parse, "missing ')'");
            return make_tau(static_cast<int>(m));
        }
        if (name.rfind("tau", 0) == 0 && name.size() == 4 &&
            std::isdigit(static_cast<unsigned char>(name[3])))
            return make_tau(name[3] - '0');
        if (name == "twist" || name == "moebius-twist") {
            if (!eat('(')) raise(errc::parse, "twist requires (gamma)");
            const double g = number();
            if (!eat(')')) raise(errc::parse, "missing ')'");
            return make_twist(g);
        }
        if (name == "kronecker") {
            if (!eat('(')) raise(errc::parse, "kronecker requires (d)");
            const double d = number();
            if (!eat(')')) raise(errc::parse, "missing ')'");
            return make_kronecker(static_cast<long long>(d));
        }
        raise(errc::parse, "unknown catalog name: " + name);
    }

    CatalogEntry expr() {
        CatalogEntry e = factor();
        while (true) {
            skip_ws();
            if (eat('*'))
                e = convolve_entries(e, factor());
            else
                break;
        }
        return e;
    }
};

}  // namespace

CatalogEntry resolve_catalog(const std::string& expr) {
    Parser p{expr};
    CatalogEntry e = p.expr();
    p.skip_ws();
    if (p.pos != expr.size())
        raise(errc::parse, "trailing input in catalog expression at position " + std::to_string(p.pos));
    return e;
}

std::vector<std::string> catalog_names() {
    return {"moebius",        "liouville",     "one",          "eps",
            "tau2",           "tau3",          "tau4",         "twist(2.0)",
            "kronecker(-4)",  "kronecker(-3)", "kronecker(5)", "kronecker(8)",
            "moebius * twist(2.0)"};
}

GammaMultiset known_gamma_multiset(const CatalogEntry& entry, int D, double T) {
    GammaMultiset gm;
    gm.D = D;
    gm.T = T;
    if (!entry.known_gamma) return gm;
    for (const auto& [g, m] : *entry.known_gamma) {
        if (std::abs(g) > T) continue;
        GammaEntry e;
        e.gamma = g;
        e.multiplicity = m;
        gm.entries.push_back(e);
    }
    return gm;
}

}  // namespace mfstruct
