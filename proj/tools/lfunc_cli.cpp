// lfunc: zeta oracle, local factors of a pair, and FE/RH/axiom verification.
//
// Exit codes: 0 pass, 1 verification failed, 2 oracle mismatch,
// 3 input error, 4 missing formal data.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "lfunc/lfunc.hpp"

using nlohmann::json;
using namespace lfunc;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitMismatch = 2;
constexpr int kExitInput = 3;
constexpr int kExitMissing = 4;

struct RunConfig {
    int q = 3;
    int dmax = 3;
    int degree_bound = 8;
    double tol = 1e-9;
    std::uint64_t seed = 42;
    std::string input;
    std::string format = "json";
    int cases = 200;
    bool negative_control = false;
    std::string kind;
};

FieldPtr field_for_q(int q) {
    require(q >= 2, ErrorKind::NotPrime, "q = " + std::to_string(q) + " is not a prime power");
    const auto ps = prime_factors(static_cast<std::uint64_t>(q));
    require(ps.size() == 1, ErrorKind::NotPrime, "q = " + std::to_string(q) + " is not a prime power");
    int f = 0;
    for (int x = q; x > 1; x /= static_cast<int>(ps[0])) ++f;
    return make_field(static_cast<int>(ps[0]), f);
}

json header(const RunConfig& cfg, const std::string& command) {
    return {{"schema", "lfunc/1"}, {"command", command}, {"seed", cfg.seed}};
}

json read_input(const std::string& path) {
    require(!path.empty(), ErrorKind::SchemaError, "--input is required");
    std::ifstream in(path);
    require(in.good(), ErrorKind::SchemaError, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        fail(ErrorKind::SchemaError, std::string("malformed JSON: ") + e.what());
    }
    if (j.is_object() && j.contains("schema"))
        require(j.at("schema") == "lfunc/1", ErrorKind::SchemaError, "unsupported schema " + j.at("schema").dump());
    return j;
}

FieldPtr field_of(const json& j, const RunConfig& cfg) {
    if (j.contains("field")) return field_from_json(j.at("field"));
    if (j.contains("q")) return field_for_q(j.at("q").get<int>());
    return field_for_q(cfg.q);
}

void emit(const json& report, const std::string& tsv, const RunConfig& cfg) {
    if (cfg.format == "tsv")
        std::cout << tsv;
    else
        std::cout << report.dump(2) << "\n";
}

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(12);
    s << x;
    return s.str();
}

int cmd_zeta(const RunConfig& cfg) {
    const FieldPtr F = field_for_q(cfg.q);
    const int D = cfg.degree_bound;
    const auto fin = zeta_euler_coeffs(F, D);
    const std::int64_t q = F->q();
    std::vector<std::int64_t> expected_fin(D + 1), full(D + 1), closed(D + 1);
    std::int64_t pw = 1, acc = 0;
    for (int d = 0; d <= D; ++d) {
        expected_fin[d] = pw;
        acc += pw; // sum_{i<=d} q^i
        closed[d] = acc;
        pw *= q;
    }
    // times the infinite-place factor 1/(1 - T)
    std::int64_t run = 0;
    for (int d = 0; d <= D; ++d) full[d] = (run += fin[d]);
    const bool pass = fin == expected_fin && full == closed;

    json r = header(cfg, "zeta");
    r["q"] = q;
    r["degree_bound"] = D;
    r["finite_part"] = fin;
    r["expected_finite_part"] = expected_fin;
    r["euler"] = full;
    r["closed_form"] = closed;
    r["pass"] = pass;
    std::string tsv = "d\tfinite_part\teuler\tclosed_form\n";
    for (int d = 0; d <= D; ++d)
        tsv += std::to_string(d) + "\t" + std::to_string(fin[d]) + "\t" + std::to_string(full[d]) + "\t" +
               std::to_string(closed[d]) + "\n";
    emit(r, tsv, cfg);
    return pass ? kExitPass : kExitMismatch;
}

int cmd_gamma(const RunConfig& cfg) {
    const json in = read_input(cfg.input);
    require(in.is_object() && in.contains("tau") && in.contains("pi"), ErrorKind::SchemaError, "pair needs tau and pi");
    const FieldPtr F = field_of(in, cfg);
    const Rep tau = rep_from_json(in.at("tau"), F);
    const Rep pi = rep_from_json(in.at("pi"), F);
    const AddChar psi = in.contains("psi") ? addchar_from_json(in.at("psi"), F) : std_psi(tau->place);

    json r = header(cfg, "gamma");
    r["psi"] = to_json(psi);
    r["gamma"] = to_json(gamma(tau, pi, psi));
    r["L"] = to_json(L_general(tau, pi));
    bool monomial = true;
    try {
        const QRat e = eps_general(tau, pi, psi);
        r["eps"] = to_json(e);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::EpsNotMonomial) throw;
        monomial = false;
        r["eps"] = nullptr;
        r["eps_error"] = e.what();
    }
    r["eps_monomial"] = monomial;
    r["pass"] = monomial;
    std::string tsv = "factor\ttpow\tnum_degree\tden_degree\n";
    for (const char* k : {"gamma", "L", "eps"})
        if (!r[k].is_null())
            tsv += std::string(k) + "\t" + r[k]["tpow"].dump() + "\t" + std::to_string(r[k]["num"].size() - 1) + "\t" +
                   std::to_string(r[k]["den"].size() - 1) + "\n";
    emit(r, tsv, cfg);
    return monomial ? kExitPass : kExitFail;
}

std::vector<GlobalPair> load_corpus(const RunConfig& cfg) {
    if (cfg.input.empty()) {
        const FieldPtr F = field_for_q(cfg.q);
        auto corpus = quadratic_pair_corpus(F, cfg.dmax);
        if (F->p() == 3 && F->f() == 1) corpus.push_back(isobaric_instance(F));
        return corpus;
    }
    const json in = read_input(cfg.input);
    const json& arr = in.is_object() && in.contains("pairs") ? in.at("pairs") : in;
    std::vector<GlobalPair> out;
    if (arr.is_array())
        for (const auto& p : arr) out.push_back(pair_from_json(p));
    else
        out.push_back(pair_from_json(arr));
    return out;
}

std::string pair_label(const GlobalPair& P) {
    auto side = [](const GlobalSide& s) {
        std::string out;
        for (const auto& c : constituents(s)) out += (out.empty() ? "" : "+") + c.describe();
        return out;
    };
    return side(P.tau) + " x " + side(P.pi);
}

int cmd_verify_fe(const RunConfig& cfg) {
    const auto corpus = load_corpus(cfg);
    json r = header(cfg, "verify");
    r["kind"] = "fe";
    r["tol"] = cfg.tol;
    double worst = 0;
    int failures = 0;
    json failed = json::array();
    std::string tsv = "case\tpair\tresidual\tpartial_residual\tform\tpass\n";
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const FeReport f = verify_fe(corpus[i], cfg.tol);
        worst = std::max({worst, f.residual, f.partial_residual});
        if (!f.pass) {
            ++failures;
            if (failed.size() < 10) failed.push_back({{"case", i}, {"pair", to_json(corpus[i])}, {"residual", f.residual}});
        }
        tsv += std::to_string(i) + "\t" + pair_label(corpus[i]) + "\t" + fmt(f.residual) + "\t" + fmt(f.partial_residual) +
               "\t" + f.form + "\t" + (f.pass ? "1" : "0") + "\n";
    }
    r["cases"] = corpus.size();
    r["failures"] = failures;
    r["residual"] = worst;
    r["failed_cases"] = failed;
    r["pass"] = failures == 0;
    emit(r, tsv, cfg);
    return failures == 0 ? kExitPass : kExitFail;
}

int cmd_verify_rh(const RunConfig& cfg) {
    std::vector<std::pair<std::string, QRat>> Ls;
    if (cfg.negative_control) {
        Ls.push_back({"negative_control", rh_negative_control(static_cast<double>(field_for_q(cfg.q)->q()))});
    } else {
        for (const auto& P : load_corpus(cfg)) Ls.push_back({pair_label(P), global_L(P)});
    }
    const double tol = cfg.tol;
    json r = header(cfg, "verify");
    r["kind"] = "rh";
    r["tol"] = tol;
    r["negative_control"] = cfg.negative_control;
    double worst = 0;
    int failures = 0;
    std::size_t nzeros = 0;
    json failed = json::array();
    std::string tsv = "re_s\tim_s\tabs_T\tdeviation\n";
    for (std::size_t i = 0; i < Ls.size(); ++i) {
        const RhReport rh = verify_rh(Ls[i].second, tol);
        worst = std::max(worst, rh.max_deviation);
        nzeros += rh.zeros.size();
        if (!rh.pass) {
            ++failures;
            if (failed.size() < 10) failed.push_back({{"case", i}, {"label", Ls[i].first}, {"deviation", rh.max_deviation}});
        }
        const std::string t = rh_tsv(rh);
        tsv += t.substr(t.find('\n') + 1);
    }
    r["cases"] = Ls.size();
    r["zeros"] = nzeros;
    r["failures"] = failures;
    r["residual"] = worst;
    r["failed_cases"] = failed;
    r["pass"] = failures == 0;
    emit(r, tsv, cfg);
    return failures == 0 ? kExitPass : kExitFail;
}

int cmd_verify_axioms(const RunConfig& cfg) {
    json r = header(cfg, "verify");
    r["kind"] = "axioms";
    r["cases_per_property"] = cfg.cases;
    json props = json::array();
    bool pass = true;
    double worst = 0;
    std::string tsv = "check\tcases\tfailures\tresidual\n";
    for (const auto& name : property_names()) {
        const PropertyResult p = run_property(name, cfg.seed, cfg.cases);
        pass = pass && p.failures == 0;
        worst = std::max(worst, p.max_residual);
        props.push_back(to_json(p));
        tsv += name + "\t" + std::to_string(p.cases) + "\t" + std::to_string(p.failures) + "\t" + fmt(p.max_residual) + "\n";
    }
    r["properties"] = props;
    r["residual"] = worst;
    r["pass"] = pass;
    emit(r, tsv, cfg);
    return pass ? kExitPass : kExitFail;
}

int exit_code_for(const Error& e) {
    switch (e.kind()) {
    case ErrorKind::MissingFormalPairing:
    case ErrorKind::MissingDualData:
    case ErrorKind::MissingLiftData: return kExitMissing;
    case ErrorKind::DidNotConverge:
    case ErrorKind::InternalError: return kExitFail;
    default: return kExitInput;
    }
}

} // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"L-functions of pairs over F_q(t): local factors and global checks"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--q", cfg.q, "field size (prime power)")->envname("LFUNC_Q")->capture_default_str();
    app.add_option("--dmax", cfg.dmax, "largest modulus degree in the built-in corpus, 0..6")
        ->envname("LFUNC_DMAX")
        ->capture_default_str();
    app.add_option("--degree-bound", cfg.degree_bound, "truncation degree D of Euler products, 1..24")
        ->envname("LFUNC_DEGREE_BOUND")
        ->capture_default_str();
    app.add_option("--tol", cfg.tol, "tolerance in (0, 1e-3]")
        ->envname("LFUNC_TOL")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "random seed")->envname("LFUNC_SEED")->capture_default_str();
    app.add_option("--format", cfg.format, "output format: json or tsv")
        ->envname("LFUNC_FORMAT")
        ->capture_default_str();
    app.add_option("--input", cfg.input, "input JSON document")->envname("LFUNC_INPUT");

    auto* zeta = app.add_subcommand("zeta", "Euler product of the zeta function against 1/((1-T)(1-qT))");
    auto* gam = app.add_subcommand("gamma", "gamma, L and epsilon of a pair of representations");
    auto* ver = app.add_subcommand("verify", "functional equation, Riemann hypothesis or axiom suite");
    ver->add_option("kind", cfg.kind, "fe, rh or axioms")->required()->check(CLI::IsMember({"fe", "rh", "axioms"}));
    ver->add_option("--cases", cfg.cases, "instances per property")->check(CLI::Range(1, 100000))->capture_default_str();
    ver->add_flag("--negative-control", cfg.negative_control, "check a synthetic L with roots off the circle");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    // checked here rather than by CLI11, which drops environment values that fail a validator
    std::string bad;
    if (!(cfg.tol > 0 && cfg.tol <= 1e-3)) bad = "tolerance must lie in (0, 1e-3]";
    else if (cfg.dmax < 0 || cfg.dmax > 6) bad = "dmax must lie in [0, 6]";
    else if (cfg.degree_bound < 1 || cfg.degree_bound > 24) bad = "degree bound must lie in [1, 24]";
    else if (cfg.format != "json" && cfg.format != "tsv") bad = "format must be json or tsv";
    if (!bad.empty()) {
        std::cerr << json{{"schema", "lfunc/1"}, {"error", "SchemaError"}, {"message", bad}}.dump() << "\n";
        return kExitInput;
    }

    try {
        if (zeta->parsed()) return cmd_zeta(cfg);
        if (gam->parsed()) return cmd_gamma(cfg);
        if (cfg.kind == "fe") return cmd_verify_fe(cfg);
        if (cfg.kind == "rh") return cmd_verify_rh(cfg);
        return cmd_verify_axioms(cfg);
    } catch (const Error& e) {
        std::cerr << json{{"schema", "lfunc/1"}, {"error", std::string(to_string(e.kind()))}, {"message", e.what()}}.dump()
                  << "\n";
        return exit_code_for(e);
    } catch (const json::exception& e) {
        std::cerr << json{{"schema", "lfunc/1"}, {"error", "SchemaError"}, {"message", e.what()}}.dump() << "\n";
        return kExitInput;
    }
}
