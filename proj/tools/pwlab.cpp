#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "pwlab/verify.hpp"

using namespace pwlab;
using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kCertificateFailure = 2;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json read_json(const std::string& path, const char* what) {
    std::ifstream in(path);
    if (!in) throw InputError(std::string(what) + ": cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw InputError(std::string(what) + ": malformed JSON in '" + path + "': " + e.what());
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw InputError("output: cannot write '" + path + "'");
    out << text;
}

void write_json(const std::string& path, const json& j) { write_text(path, j.dump(2) + "\n"); }

std::string csv_row(const std::string& id, const std::string& ref, double measured, double bound, bool pass) {
    std::ostringstream os;
    os.precision(17);
    os << id << ",\"" << ref << "\"," << measured << "," << bound << "," << (pass ? "true" : "false") << "\n";
    return os.str();
}
const char* kCsvHeader = "check_id,paper_ref,measured,bound,pass\n";

SymbolPtr load_symbol(const std::string& path) {
    const json j = read_json(path, "symbol");
    try {
        return symbol_from_json(j);
    } catch (const std::exception& e) {
        throw InputError(std::string("symbol: ") + e.what());
    }
}

OperatorMatrix load_operator(const std::string& path, double band = -1.0, double p = -1.0) {
    const json j = read_json(path, "operator");
    OperatorMatrix T;
    try {
        T = operator_from_json(j);
    } catch (const std::exception& e) {
        throw InputError(std::string("operator: ") + e.what());
    }
    if (band > 0.0 && band != T.a) throw InputError("operator: field 'band' does not match --band");
    if (p > 0.0 && p != T.p) throw InputError("operator: field 'p' does not match --p");
    return T;
}

struct Common {
    double a = 1.0;
    double p = 2.0;
    int oversample = 8;
    double window = 64.0;
    std::string out;
    std::string csv;

    RunConfig config() const {
        RunConfig c;
        c.a = a;
        c.p = p;
        c.oversample = oversample;
        c.window = window;
        try {
            c.validate();
        } catch (const std::exception& e) {
            throw InputError(e.what());
        }
        return c;
    }
    Basis basis() const { return Basis::centered(a, 0.5 * window); }
};

void add_common(CLI::App* app, Common& c, bool with_p = true) {
    app->add_option("--band", c.a, "band a")->required();
    if (with_p) app->add_option("--p", c.p, "exponent p in (1, inf)");
    app->add_option("--oversample", c.oversample, "grid oversampling");
    app->add_option("--window", c.window, "grid half-length");
    app->add_option("--out", c.out, "output JSON (default stdout)");
}

json bandlimited_json(const BandlimitedFunction& f) {
    return {{"band", f.a}, {"p", f.p}, {"band_residual", f.residual}, {"function", to_json(f.f)}};
}

int cmd_project(const std::string& input, const Common& c) {
    const RunConfig cfg = c.config();
    const json j = read_json(input, "input");
    SampledFunction f;
    try {
        f = sampled_from_json(j.contains("function") ? j.at("function") : j);
    } catch (const std::exception& e) {
        throw InputError(std::string("input: ") + e.what());
    }
    const BandlimitedFunction pf = project_band(f, cfg.a, cfg.p);
    write_json(c.out, bandlimited_json(pf));
    return kOk;
}

int cmd_toeplitz(const std::string& sym, const Common& c) {
    const RunConfig cfg = c.config();
    const SymbolPtr phi = load_symbol(sym);
    const OperatorMatrix T = assemble_toeplitz(*phi, c.basis(), cfg.p);
    const NormBounds nb = matrix_pnorm(T.entries, cfg.p);
    json j;
    j["operator"] = to_json(T);
    j["norm"] = {{"lower", nb.lower}, {"upper", nb.upper}};
    write_json(c.out, j);
    if (!c.csv.empty())
        write_text(c.csv, std::string(kCsvHeader) + csv_row("toeplitz.norm_lower", "operator norm", nb.lower, NAN, true) +
                              csv_row("toeplitz.norm_upper", "operator norm", nb.upper, NAN, true));
    return kOk;
}

int cmd_split(const std::string& sym, const std::string& bumps, const Common& c) {
    const RunConfig cfg = c.config();
    const Grid g = cfg.grid();
    const SymbolPtr phi = load_symbol(sym);
    const SplitResult s = split_symbol(phi, cfg.a, g);
    json j;
    j["band"] = cfg.a;
    j["l1"] = {{"left", s.l1_left}, {"central", s.l1_central}, {"right", s.l1_right}};
    j["constant"] = s.constant();
    j["support_certificates"] = {{"left", s.cert_left}, {"central", s.cert_central}, {"right", s.cert_right}};
    j["partition_residual"] = s.partition_residual;
    j["schwartz_warning"] = s.schwartz_warning;
    j["parts"] = {{"left", to_json(s.left->sample(g))},
                  {"central", to_json(s.central->sample(g))},
                  {"right", to_json(s.right->sample(g))}};
    write_json(c.out, j);
    if (!bumps.empty()) {
        std::ostringstream os;
        os.precision(17);
        os << "x,psi_L,psi_C,psi_R\n";
        for (int k = 0; k <= 1000; ++k) {
            const double x = -5.0 + 0.01 * k;
            os << x << "," << bump(x, Part::L) << "," << bump(x, Part::C) << "," << bump(x, Part::R) << "\n";
        }
        write_text(bumps, os.str());
    }
    if (!c.csv.empty())
        write_text(c.csv, std::string(kCsvHeader) + csv_row("split.l1_left", "bump constant", s.l1_left, NAN, true) +
                              csv_row("split.l1_central", "bump constant", s.l1_central, NAN, true) +
                              csv_row("split.l1_right", "bump constant", s.l1_right, NAN, true));
    return kOk;
}

int cmd_bounded(const std::string& sym, const Common& c, std::uint64_t seed) {
    const RunConfig cfg = c.config();
    NehariOptions opt;
    opt.seed = seed;
    const BoundedSymbolResult r = bounded_symbol(load_symbol(sym), cfg.a, cfg.p, cfg.grid(), c.basis(), opt);
    write_json(c.out, to_json(r));
    if (!c.csv.empty())
        write_text(c.csv, std::string(kCsvHeader) +
                              csv_row("bounded_symbol.operator_residual", "bounded symbol", r.operator_residual,
                                      r.tolerance * r.t_phi, r.ok()) +
                              csv_row("bounded_symbol.ratio", "bounded symbol", r.ratio, NAN, true));
    return r.ok() ? kOk : kCertificateFailure;
}

int cmd_nehari(const std::string& sym, const Common& c, std::uint64_t seed) {
    const RunConfig cfg = c.config();
    NehariOptions opt;
    opt.seed = seed;
    const NehariResult r = nehari_solve(load_symbol(sym), cfg.a, cfg.p, cfg.grid(), opt);
    write_json(c.out, to_json(r));
    if (r.zero_hankel) return kOk;
    const bool ok = r.data.tail_certified() && r.aak.moment_residual <= 1e-6 && r.sup_norm <= 1.05 * r.aak.sigma0;
    return ok ? kOk : kCertificateFailure;
}

int cmd_factorize(const std::string& input, const Common& c, double margin, double spacing, bool summary) {
    const RunConfig cfg = c.config();
    const json j = read_json(input, "input");
    BandlimitedFunction h;
    try {
        h.f = sampled_from_json(j.contains("function") ? j.at("function") : j);
    } catch (const std::exception& e) {
        throw InputError(std::string("input: ") + e.what());
    }
    if (j.contains("band"))
        h.a = j.at("band").get<double>();
    else if (margin > 0.0)
        h.a = 2.0 * margin;
    else
        throw InputError("input: missing field 'band' (or pass --margin)");
    h.residual = band_residual(h.f, h.a);
    FactorizeOptions opt;
    opt.margin = margin;
    opt.spacing = spacing;
    const Factorization F = weak_factorize(h, cfg.a, cfg.p, opt);
    write_json(c.out, to_json(F, summary));
    if (!c.csv.empty())
        write_text(c.csv, std::string(kCsvHeader) +
                              csv_row("factorize.residual_sup", "weak factorization", F.residual_sup, NAN, !F.truncation_flag) +
                              csv_row("factorize.residual_l1", "weak factorization", F.residual_l1, NAN, !F.truncation_flag) +
                              csv_row("factorize.nuclear_sum", "weak factorization", F.nuclear_sum, NAN, true));
    return F.truncation_flag ? kCertificateFailure : kOk;
}

ConformalFrame frame_for(const OperatorMatrix& T, const Common& c) {
    RunConfig cfg = c.config();
    cfg.a = T.a;
    return build_frame(T.a, T.p, cfg.grid(), T.basis);
}

int cmd_commutator(const std::string& op, const Common& c, double band, double p) {
    const OperatorMatrix T = load_operator(op, band, p);
    const ConformalFrame fr = frame_for(T, c);
    const CommutatorResult r = commutator_test(T, fr);
    json j = to_json(r);
    j["defect"] = defect_residual(lambda_ops(fr), fr);
    write_json(c.out, j);
    return kOk;
}

int cmd_recover(const std::string& op, const Common& c, double band, double p) {
    const OperatorMatrix T = load_operator(op, band, p);
    const ConformalFrame fr = frame_for(T, c);
    const RecoveredSymbol r = recover_symbol(T, fr, lambda_ops(fr));
    write_json(c.out, to_json(r));
    return r.round_trip <= 1e-3 ? kOk : kCertificateFailure;
}

int cmd_verify(const Common& c, std::uint64_t seed, const std::vector<std::string>& only,
               const std::vector<std::string>& tols, const std::string& dir) {
    RunConfig cfg = c.config();
    cfg.seed = seed;
    for (const auto& t : tols) {
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw InputError("tol: expected key=value, got '" + t + "'");
        try {
            cfg.tolerances[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
        } catch (const std::exception&) {
            throw InputError("tol: value of '" + t.substr(0, eq) + "' is not a number");
        }
    }
    const auto ids = check_ids();
    for (const auto& id : only)
        if (std::find(ids.begin(), ids.end(), id) == ids.end()) throw InputError("check: unknown id '" + id + "'");
    const auto rs = run_verify(cfg, only);
    bool all = true;
    for (const auto& r : rs) {
        std::fprintf(stderr, "%s %s\n", r.pass ? "PASS" : "FAIL", r.id.c_str());
        all = all && r.pass;
    }
    const std::string base = dir.empty() ? std::string(".") : dir;
    write_json(base + "/report.json", report_json(rs, cfg));
    write_text(base + "/report.csv", report_csv(rs));
    return all ? kOk : kCertificateFailure;
}

}  // namespace

int main(int argc, char** argv) {
    configure_threads();
    CLI::App app{"Paley-Wiener Toeplitz toolkit"};
    app.require_subcommand(1);

    Common c;
    std::string input, symbol, op, bumps, dir;
    double margin = -1.0, spacing = -1.0, op_band = -1.0, op_p = -1.0;
    bool summary = false;
    std::uint64_t seed = 42;
    std::vector<std::string> only, tols;

    auto* project = app.add_subcommand("project", "band projection of a sampled function");
    project->add_option("--input", input, "sampled function JSON")->required();
    add_common(project, c);

    auto* toeplitz = app.add_subcommand("toeplitz", "Toeplitz matrix on the Nyquist basis");
    toeplitz->add_option("--symbol", symbol, "symbol JSON")->required();
    add_common(toeplitz, c);
    toeplitz->add_option("--csv", c.csv, "norm table");

    auto* split = app.add_subcommand("split", "three-part splitting");
    split->add_option("--symbol", symbol, "symbol JSON")->required();
    add_common(split, c, false);
    split->add_option("--emit-bumps", bumps, "bump samples CSV");
    split->add_option("--csv", c.csv, "constant table");

    auto* bounded = app.add_subcommand("bounded-symbol", "bounded symbol for T_phi");
    bounded->add_option("--symbol", symbol, "symbol JSON")->required();
    add_common(bounded, c);
    bounded->add_option("--seed", seed);
    bounded->add_option("--csv", c.csv, "residual table");

    auto* nehari = app.add_subcommand("nehari", "Nehari extension of a Hankel symbol");
    nehari->add_option("--symbol", symbol, "symbol JSON")->required();
    add_common(nehari, c);
    nehari->add_option("--seed", seed);

    auto* factorize = app.add_subcommand("factorize", "weak factorization of a PW^1_{2b} target");
    factorize->add_option("--input", input, "sampled function JSON with 'band'")->required();
    add_common(factorize, c);
    factorize->add_option("--margin", margin, "target half-band b < a");
    factorize->add_option("--spacing", spacing, "atom spacing");
    factorize->add_flag("--summary", summary, "omit pairs");
    factorize->add_option("--csv", c.csv, "residual table");

    auto* commutator = app.add_subcommand("commutator-test", "omega-commutator test of an operator");
    commutator->add_option("--matrix,--operator", op, "operator JSON")->required();
    commutator->add_option("--band", op_band, "expected band of the operator");
    commutator->add_option("--p", op_p, "expected exponent of the operator");
    commutator->add_option("--oversample", c.oversample);
    commutator->add_option("--window", c.window);
    commutator->add_option("--out", c.out);

    auto* recover = app.add_subcommand("recover-symbol", "symbol of a Toeplitz operator from its commutator");
    recover->add_option("--matrix,--operator", op, "operator JSON")->required();
    recover->add_option("--band", op_band, "expected band of the operator");
    recover->add_option("--p", op_p, "expected exponent of the operator");
    recover->add_option("--oversample", c.oversample);
    recover->add_option("--window", c.window);
    recover->add_option("--out", c.out);

    auto* verify = app.add_subcommand("verify", "run the acceptance checks");
    verify->add_option("--band", c.a);
    verify->add_option("--p", c.p);
    verify->add_option("--oversample", c.oversample);
    verify->add_option("--window", c.window);
    verify->add_option("--seed", seed);
    verify->add_option("--check", only, "run only these checks");
    verify->add_option("--tol", tols, "tolerance override <check>.<item>=value");
    verify->add_option("--out-dir", dir, "directory for report.json and report.csv");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    }

    try {
        if (*project) return cmd_project(input, c);
        if (*toeplitz) return cmd_toeplitz(symbol, c);
        if (*split) return cmd_split(symbol, bumps, c);
        if (*bounded) return cmd_bounded(symbol, c, seed);
        if (*nehari) return cmd_nehari(symbol, c, seed);
        if (*factorize) return cmd_factorize(input, c, margin, spacing, summary);
        if (*commutator) return cmd_commutator(op, c, op_band, op_p);
        if (*recover) return cmd_recover(op, c, op_band, op_p);
        if (*verify) return cmd_verify(c, seed, only, tols, dir);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "pwlab: %s\n", e.what());
        return kInputError;
    }
    return kInputError;
}
