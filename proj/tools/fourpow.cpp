// Batch command-line front end: every operation exposed with reproducible,
// scriptable output. Exit codes: 0 success, 2 input error, 3 budget error.

#include "fourpow/detmethod.hpp"
#include "fourpow/enumerate.hpp"
#include "fourpow/experiments.hpp"
#include "fourpow/special.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace fourpow;

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

std::string fmt(long double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12Lg", v);
    return buf;
}

// "p/q", integer, or decimal string -> exact rational
BigRat parse_rat(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("empty rational");
    auto slash = text.find('/');
    if (slash != std::string::npos) {
        BigInt num(text.substr(0, slash)), den(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in " + text);
        BigRat r(num, den);
        r.canonicalize();
        return r;
    }
    auto dot = text.find('.');
    if (dot == std::string::npos) {
        BigRat r(BigInt(text), 1);
        r.canonicalize();
        return r;
    }
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    size_t frac = text.size() - dot - 1;
    BigInt den = 1;
    for (size_t i = 0; i < frac; ++i) den *= 10;
    BigRat r(BigInt(digits), den);
    r.canonicalize();
    return r;
}

std::vector<BigInt> parse_coeffs(const std::string& text) {
    std::vector<BigInt> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
        if (item.empty()) throw std::invalid_argument("empty coefficient in --coeffs");
        out.emplace_back(item);
    }
    return out;
}

// one whitespace-separated integer tuple per line; '#' comments and blank
// lines are skipped
std::vector<std::vector<std::int64_t>> read_points(const std::string& path, size_t arity) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open points file " + path);
    std::vector<std::vector<std::int64_t>> pts;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        std::vector<std::int64_t> tuple;
        std::int64_t v;
        while (is >> v) tuple.push_back(v);
        if (tuple.empty()) continue;
        if (tuple.size() != arity)
            throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected " +
                                        std::to_string(arity) + " integers");
        pts.push_back(std::move(tuple));
    }
    if (pts.empty()) throw std::invalid_argument(path + ": no points");
    return pts;
}

struct Options {
    int k = 3, l = 3, delta = 1, s = 10, threads = 1;
    int vdm_n = 3, vdm_D = 4, vdm_H = 6, trials = 200;
    std::uint64_t seed = 1;
    std::string coeffs = "1,1,1,1";
    std::string N = "1", M = "1", h = "1", a = "1", b = "1";
    std::int64_t B = 10, bound = 100, M0 = 1, scanM = 8;
    std::string region = "signed";
    double eps = 0.1, tau = 0, mem_gib = 4.0, time_s = 300.0;
    std::string nu = "2", alpha = "2", L;
    std::string X = "0.5,0.5,0.1";
    std::string points_file;
    std::string format = "plain", out, target = "count", Bs = "16,32,64,128";
    bool primitive = false, timings = false, verbose = false;
};

Region parse_region(const std::string& r) {
    if (r == "signed") return Region::Signed;
    if (r == "nonneg") return Region::NonNegative;
    throw std::invalid_argument("--region must be signed or nonneg");
}

std::uint64_t mem_bytes(double gib) {
    return static_cast<std::uint64_t>(gib * 1073741824.0);
}

void deliver(const Options& opt, const std::string& text) {
    if (opt.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(opt.out, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output path " + opt.out);
    f << text;
    if (!f) throw std::invalid_argument("write failed for " + opt.out);
}

std::string record_line(const SolutionRecord& r) {
    std::ostringstream os;
    for (size_t i = 0; i < r.x.size(); ++i) os << (i ? " " : "") << r.x[i];
    os << " " << r.cls.to_string();
    return os.str();
}

std::string summary_text(const CountSummary& cs) {
    DiagonalForm form(cs.k, cs.coeffs);
    std::ostringstream os;
    os << "form: " << form.to_string() << "\n";
    os << "N: " << cs.N.get_str() << "\n";
    os << "region: " << cs.region.to_string() << "\n";
    os << "total: " << cs.total << "\n";
    os << "special: " << cs.special << "\n";
    os << "nonspecial: " << cs.nonspecial << "\n";
    return os.str();
}

nlohmann::ordered_json summary_json(const CountSummary& cs) {
    nlohmann::ordered_json j;
    j["k"] = cs.k;
    j["coeffs"] = nlohmann::ordered_json::array();
    for (const auto& c : cs.coeffs) j["coeffs"].push_back(c.get_str());
    j["N"] = cs.N.get_str();
    j["region"] = cs.region.mode == Region::Signed ? "signed" : "nonneg";
    j["B"] = cs.region.B;
    j["total"] = cs.total;
    j["special"] = cs.special;
    j["nonspecial"] = cs.nonspecial;
    return j;
}

std::string params_text(const ParameterSelection& p) {
    std::ostringstream os;
    os << "k: " << p.k << "\n";
    os << "eps: " << fmt(p.eps) << "\n";
    os << "N: " << p.N.get_str() << "\n";
    os << "B: " << p.B << "\n";
    os << "M0: " << p.M0 << "\n";
    if (p.tau) {
        os << "tau: " << fmt(*p.tau) << "\n";
        os << "t: " << fmt(p.t) << "\n";
    }
    os << "lambda: " << fmt(p.lambda) << "\n";
    os << "alpha: " << fmt(p.alpha) << "\n";
    os << "M: " << fmt(p.M_real) << "\n";
    os << "M_rounded: " << p.M_rounded.get_str() << "\n";
    os << "delta: " << p.delta << "\n";
    os << "s: " << p.s << "\n";
    os << "nu: " << p.nu << "\n";
    os << "beta: " << fmt(p.beta) << "\n";
    if (p.delta > 1) os << "beta_prev: " << fmt(p.beta_prev) << "\n";
    os << "beta_leading_coeff: " << fmt(p.beta_leading_coeff) << "\n";
    os << "predicted_exponent: " << fmt(p.predicted_exponent) << "\n";
    if (p.exponent_pair)
        os << "exponent_pair: (" << fmt(p.exponent_pair->first) << ", "
           << fmt(p.exponent_pair->second) << ")\n";
    os << "thresholds_exact: " << (p.thresholds_exact ? "yes" : "no") << "\n";
    return os.str();
}

std::string scaling_text(const ScalingReport& rep) {
    std::ostringstream os;
    os << "instance: " << rep.instance << "\n";
    os << "theoretical_exponent: " << fmt(rep.theoretical_exponent) << "\n";
    os << "fitted_slope: " << (rep.fitted_slope ? fmt(*rep.fitted_slope) : "n/a") << "\n";
    if (rep.max_ratio) os << "max_ratio: " << fmt(*rep.max_ratio) << "\n";
    os << "complete: " << (rep.complete ? "yes" : "no") << "\n";
    os << "B total special nonspecial runtime_ms\n";
    for (const auto& r : rep.rows)
        os << r.B << " " << r.total << " " << r.special << " " << r.nonspecial << " "
           << fmt(r.runtime_ms) << "\n";
    return os.str();
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"fourpow: exact counting laboratory for diagonal forms a1 x1^k + ... + a4 x4^k = N"};
    app.require_subcommand(1);
    app.set_help_flag("--help", "print help");

    // --h is a real flag (thue), so help is --help only
    auto sub_of = [](CLI::App* parent, const std::string& name, const std::string& desc) {
        CLI::App* s = parent->add_subcommand(name, desc);
        s->set_help_flag("--help", "print help");
        return s;
    };

    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--format", opt.format, "output format: plain|json (csv/svg where noted)");
        sub->add_option("--out", opt.out, "write output to this path instead of stdout");
    };
    auto add_budget = [&](CLI::App* sub) {
        sub->add_option("--threads", opt.threads, "worker threads for the (x1,x2) scan");
        sub->add_option("--mem-gib", opt.mem_gib, "memory budget in GiB (default 4)");
    };

    // ---- eval ----
    auto* eval_cmd = sub_of(&app, "eval", "evaluate the form at integer tuples");
    eval_cmd->add_option("--k", opt.k, "degree k >= 3")->required();
    eval_cmd->add_option("--coeffs", opt.coeffs, "comma-separated coefficients (2..4)")->required();
    eval_cmd->add_option("--points", opt.points_file, "file of tuples, one per line")->required();
    add_output(eval_cmd);
    eval_cmd->callback([&] {
        DiagonalForm form(opt.k, parse_coeffs(opt.coeffs));
        auto pts = read_points(opt.points_file, static_cast<size_t>(form.arity()));
        std::ostringstream os;
        os << "form: " << form.to_string() << "\n";
        for (const auto& p : pts) {
            for (size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << p[i];
            os << " -> " << evaluate(form, p).get_str() << "\n";
        }
        deliver(opt, os.str());
    });

    // ---- enumerate ----
    auto* enum_cmd = sub_of(&app, "enumerate", "list all solutions in the box");
    enum_cmd->add_option("--k", opt.k, "degree k >= 3")->required();
    enum_cmd->add_option("--coeffs", opt.coeffs, "4 coefficients")->required();
    enum_cmd->add_option("--N", opt.N, "target value")->required();
    enum_cmd->add_option("--B", opt.B, "box radius")->required();
    enum_cmd->add_option("--region", opt.region, "signed|nonneg");
    add_budget(enum_cmd);
    add_output(enum_cmd);
    enum_cmd->callback([&] {
        DiagonalForm form(opt.k, parse_coeffs(opt.coeffs));
        EnumerateOptions eo{opt.threads, mem_bytes(opt.mem_gib)};
        auto recs = enumerate_solutions(form, BigInt(opt.N), {opt.B, parse_region(opt.region)}, eo);
        if (opt.format == "json") {
            nlohmann::ordered_json j;
            j["form"] = form.to_string();
            j["N"] = opt.N;
            j["B"] = opt.B;
            j["region"] = opt.region;
            j["count"] = recs.size();
            j["solutions"] = nlohmann::ordered_json::array();
            for (const auto& r : recs) {
                nlohmann::ordered_json e;
                e["x"] = r.x;
                e["class"] = r.cls.to_string();
                j["solutions"].push_back(e);
            }
            deliver(opt, j.dump(2) + "\n");
        } else {
            std::ostringstream os;
            os << "form: " << form.to_string() << "\n";
            os << "N: " << BigInt(opt.N).get_str() << "\n";
            os << "region: " << SearchRegion{opt.B, parse_region(opt.region)}.to_string() << "\n";
            os << "count: " << recs.size() << "\n";
            for (const auto& r : recs) os << record_line(r) << "\n";
            deliver(opt, os.str());
        }
    });

    // ---- count ----
    auto* count_cmd = sub_of(&app, "count", "count solutions without listing them");
    count_cmd->add_option("--k", opt.k, "degree k >= 3")->required();
    count_cmd->add_option("--coeffs", opt.coeffs, "4 coefficients")->required();
    count_cmd->add_option("--N", opt.N, "target value")->required();
    count_cmd->add_option("--B", opt.B, "box radius")->required();
    count_cmd->add_option("--region", opt.region, "signed|nonneg");
    add_budget(count_cmd);
    add_output(count_cmd);
    count_cmd->callback([&] {
        DiagonalForm form(opt.k, parse_coeffs(opt.coeffs));
        EnumerateOptions eo{opt.threads, mem_bytes(opt.mem_gib)};
        auto cs = count_representations(form, BigInt(opt.N), {opt.B, parse_region(opt.region)}, eo);
        if (opt.format == "json")
            deliver(opt, summary_json(cs).dump(2) + "\n");
        else
            deliver(opt, summary_text(cs));
    });

    // ---- classify ----
    auto* cls_cmd = sub_of(&app, "classify", "classify solution tuples and test line membership");
    cls_cmd->add_option("--k", opt.k)->required();
    cls_cmd->add_option("--coeffs", opt.coeffs, "4 coefficients")->required();
    cls_cmd->add_option("--N", opt.N)->required();
    cls_cmd->add_option("--points", opt.points_file)->required();
    add_output(cls_cmd);
    cls_cmd->callback([&] {
        DiagonalForm form(opt.k, parse_coeffs(opt.coeffs));
        BigInt N(opt.N);
        auto pts = read_points(opt.points_file, 4);
        std::ostringstream os;
        os << "form: " << form.to_string() << "\n";
        os << "N: " << N.get_str() << "\n";
        for (const auto& p : pts) {
            auto cls = classify(form, N, p);
            bool line = on_standard_line(form, N, p);
            for (size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << p[i];
            os << " -> " << cls.to_string() << " line=" << (line ? "true" : "false") << "\n";
        }
        deliver(opt, os.str());
    });

    // ---- thue ----
    auto* thue_cmd = sub_of(&app, "thue", "bounded search for a x^k + b y^k = h");
    thue_cmd->add_option("--a", opt.a, "coefficient of x^k")->required();
    thue_cmd->add_option("--b", opt.b, "coefficient of y^k")->required();
    thue_cmd->add_option("--k", opt.k, "degree k >= 3")->required();
    thue_cmd->add_option("--h", opt.h, "target value (nonzero)")->required();
    thue_cmd->add_option("--bound", opt.bound, "search box |x|,|y| <= bound")->required();
    add_output(thue_cmd);
    thue_cmd->callback([&] {
        auto res = solve_thue(BigInt(opt.a), BigInt(opt.b), opt.k, BigInt(opt.h), opt.bound);
        std::ostringstream os;
        os << "equation: " << BigInt(opt.a).get_str() << "*x^" << opt.k << " + "
           << BigInt(opt.b).get_str() << "*y^" << opt.k << " = " << BigInt(opt.h).get_str()
           << "\n";
        os << "bound: " << res.search_bound << "\n";
        os << "solutions: " << res.solutions.size() << "\n";
        for (auto [x, y] : res.solutions) os << x << " " << y << "\n";
        os << "note: bounded search; completeness beyond the bound is not certified\n";
        deliver(opt, os.str());
    });

    // ---- zeros ----
    auto* zero_cmd = sub_of(&app, "zeros", "count nonzero solutions of a ternary zero form");
    zero_cmd->add_option("--k", opt.k)->required();
    zero_cmd->add_option("--coeffs", opt.coeffs, "3 coefficients")->required();
    zero_cmd->add_option("--B", opt.B)->required();
    zero_cmd->add_flag("--primitive", opt.primitive, "count only gcd-1 triples");
    add_output(zero_cmd);
    zero_cmd->callback([&] {
        DiagonalForm form(opt.k, parse_coeffs(opt.coeffs));
        std::uint64_t c = count_zero_form(form, opt.B, opt.primitive);
        std::ostringstream os;
        os << "form: " << form.to_string() << "\n";
        os << "B: " << opt.B << "\n";
        os << "primitive: " << (opt.primitive ? "yes" : "no") << "\n";
        os << "count: " << c << "\n";
        deliver(opt, os.str());
    });

    // ---- moebius-check ----
    auto* moeb_cmd = sub_of(&app, "moebius-check",
                                        "verify total(B) = sum_d primitive(floor(B/d))");
    moeb_cmd->add_option("--k", opt.k)->required();
    moeb_cmd->add_option("--coeffs", opt.coeffs, "3 coefficients")->required();
    moeb_cmd->add_option("--B", opt.B)->required();
    add_output(moeb_cmd);
    moeb_cmd->callback([&] {
        DiagonalForm form(opt.k, parse_coeffs(opt.coeffs));
        bool holds = moebius_identity_check(form, opt.B);
        std::uint64_t total = count_zero_form(form, opt.B, false);
        std::ostringstream os;
        os << "form: " << form.to_string() << "\n";
        os << "B: " << opt.B << "\n";
        os << "total: " << total << "\n";
        os << "identity: " << (holds ? "holds" : "FAILS") << "\n";
        deliver(opt, os.str());
    });

    // ---- rk / rkl / r0 ----
    auto* rk_cmd = sub_of(&app, "rk", "R_k(N): nonnegative representations by four k-th powers");
    rk_cmd->add_option("--N", opt.N)->required();
    rk_cmd->add_option("--k", opt.k)->required();
    add_budget(rk_cmd);
    add_output(rk_cmd);
    rk_cmd->callback([&] {
        BigInt N(opt.N);
        EnumerateOptions eo{opt.threads, mem_bytes(opt.mem_gib)};
        std::uint64_t c = count_Rk(N, opt.k, eo);
        std::ostringstream os;
        os << "N: " << N.get_str() << "\n";
        os << "k: " << opt.k << "\n";
        os << "B: " << kth_root_floor(N, opt.k).get_str() << "\n";
        os << "Rk: " << c << "\n";
        deliver(opt, os.str());
    });

    auto* rkl_cmd = sub_of(&app, "rkl", "R_{k,l}(N): three k-th powers and an l-th power");
    rkl_cmd->add_option("--N", opt.N)->required();
    rkl_cmd->add_option("--k", opt.k)->required();
    rkl_cmd->add_option("--l", opt.l)->required();
    add_output(rkl_cmd);
    rkl_cmd->callback([&] {
        BigInt N(opt.N);
        std::uint64_t c = count_Rkl(N, opt.k, opt.l);
        std::ostringstream os;
        os << "N: " << N.get_str() << "\n";
        os << "k: " << opt.k << "\n";
        os << "l: " << opt.l << "\n";
        os << "Rkl: " << c << "\n";
        deliver(opt, os.str());
    });

    auto* r0_cmd = sub_of(&app, "r0", "r_0(M,B): ternary solutions with every a_i x_i^k != M");
    r0_cmd->add_option("--k", opt.k)->required();
    r0_cmd->add_option("--coeffs", opt.coeffs, "3 coefficients")->required();
    r0_cmd->add_option("--M", opt.M)->required();
    r0_cmd->add_option("--B", opt.B)->required();
    add_output(r0_cmd);
    r0_cmd->callback([&] {
        DiagonalForm form(opt.k, parse_coeffs(opt.coeffs));
        auto split = count_ternary_split(form, BigInt(opt.M), opt.B);
        std::ostringstream os;
        os << "form: " << form.to_string() << "\n";
        os << "M: " << BigInt(opt.M).get_str() << "\n";
        os << "B: " << opt.B << "\n";
        os << "total: " << split.total << "\n";
        os << "excluded: " << split.excluded << "\n";
        os << "r0: " << split.r0() << "\n";
        deliver(opt, os.str());
    });

    // ---- detmethod ----
    auto* det = sub_of(&app, "detmethod", "determinant-method machinery");
    det->require_subcommand(1);

    auto* exp_cmd = sub_of(det, "exponent", "eps-free exponent of the main estimate");
    exp_cmd->add_option("--k", opt.k)->required();
    add_output(exp_cmd);
    exp_cmd->callback([&] {
        double e = exponent_main(opt.k);
        std::ostringstream os;
        os << "k: " << opt.k << "\n";
        os << "exponent_main: " << fmt(e) << "\n";
        os << "nontrivial (< 2): " << (e < 2.0 ? "yes" : "no") << "\n";
        os << "linear count regime (<= 1): " << (e <= 1.0 ? "yes" : "no") << "\n";
        deliver(opt, os.str());
    });

    auto* par_cmd = sub_of(det, "params", "select lambda, alpha, M, delta, beta");
    par_cmd->add_option("--k", opt.k)->required();
    par_cmd->add_option("--eps", opt.eps)->required();
    par_cmd->add_option("--N", opt.N);
    par_cmd->add_option("--B", opt.B)->required();
    par_cmd->add_option("--m0", opt.M0);
    par_cmd->add_option("--tau", opt.tau, "enable the growing-N variant (4/3 < tau < k)");
    add_output(par_cmd);
    par_cmd->callback([&] {
        ParameterSelection p =
            par_cmd->count("--tau")
                ? select_parameters_bigN(opt.k, opt.tau, opt.eps, BigInt(opt.N), opt.B, opt.M0)
                : select_parameters(opt.k, opt.eps, BigInt(opt.N), opt.B, opt.M0);
        deliver(opt, params_text(p));
    });

    auto* tet_cmd = sub_of(det, "tetra", "exact tetrahedron count, weighted sum, bounds");
    tet_cmd->add_option("--nu", opt.nu, "threshold (rational: p/q or decimal)")->required();
    tet_cmd->add_option("--alpha", opt.alpha, "xi weight (rational: p/q or decimal)")->required();
    add_output(tet_cmd);
    tet_cmd->callback([&] {
        auto st = tetra_stats(parse_rat(opt.nu), parse_rat(opt.alpha));
        std::ostringstream os;
        os << "nu: " << st.nu.get_str() << "\n";
        os << "alpha: " << st.alpha.get_str() << "\n";
        os << "count: " << st.count.get_str() << "\n";
        os << "count_at_nu: " << st.count_at_nu.get_str() << "\n";
        os << "fsum: " << st.fsum.get_str() << "\n";
        os << "lower: " << st.lower.get_str() << "\n";
        os << "upper: " << st.upper.get_str() << "\n";
        deliver(opt, os.str());
    });

    auto* ord_cmd = sub_of(det, "order", "first s monomials by nonincreasing size");
    ord_cmd->add_option("--X", opt.X, "comma triple of sizes X1,X2,X3 in (0,1]")->required();
    ord_cmd->add_option("--s", opt.s)->required();
    add_output(ord_cmd);
    ord_cmd->callback([&] {
        auto xs = opt.X;
        std::replace(xs.begin(), xs.end(), ',', ' ');
        std::istringstream is(xs);
        double X1, X2, X3;
        if (!(is >> X1 >> X2 >> X3)) throw std::invalid_argument("--X needs three numbers");
        auto mons = monomial_order(X1, X2, X3, opt.s);
        std::ostringstream os;
        os << "X: " << fmt(X1) << " " << fmt(X2) << " " << fmt(X3) << "\n";
        os << "s: " << opt.s << "\n";
        for (const auto& m : mons)
            os << m.n1 << " " << m.n2 << " " << m.n3 << " " << fmt(m.size) << "\n";
        deliver(opt, os.str());
    });

    auto* null_cmd = sub_of(det, "nullspace", "auxiliary form vanishing at given points");
    null_cmd->add_option("--points", opt.points_file)->required();
    null_cmd->add_option("--delta", opt.delta)->required();
    add_output(null_cmd);
    null_cmd->callback([&] {
        auto raw = read_points(opt.points_file, 4);
        std::vector<std::array<std::int64_t, 4>> pts;
        for (const auto& p : raw) pts.push_back({p[0], p[1], p[2], p[3]});
        auto form = auxiliary_form(pts, opt.delta);
        bool vanishes = true;
        for (const auto& p : raw)
            if (form.evaluate(p) != 0) vanishes = false;
        std::ostringstream os;
        os << "delta: " << form.delta << "\n";
        os << "monomials: " << form.exponents.size() << "\n";
        os << "points: " << pts.size() << "\n";
        for (size_t i = 0; i < form.coeffs.size(); ++i) {
            if (form.coeffs[i] == 0) continue;
            const auto& e = form.exponents[i];
            os << e[0] << " " << e[1] << " " << e[2] << " " << e[3] << " : "
               << form.coeffs[i].get_str() << "\n";
        }
        os << "vanishes at all points: " << (vanishes ? "yes" : "no") << "\n";
        deliver(opt, os.str());
    });

    auto* good_cmd = sub_of(det, "goodcubes", "Lipschitz superset scan of good cubes");
    good_cmd->add_option("--k", opt.k)->required();
    good_cmd->add_option("--coeffs", opt.coeffs, "4 coefficients")->required();
    good_cmd->add_option("--M", opt.scanM)->required();
    good_cmd->add_option("--m0", opt.M0);
    good_cmd->add_option("--L", opt.L, "Lipschitz constant (rational); default k*sum|a_i|");
    good_cmd->add_option("--mem-gib", opt.mem_gib);
    add_output(good_cmd);
    good_cmd->callback([&] {
        DiagonalForm form(opt.k, parse_coeffs(opt.coeffs));
        BigRat L = opt.L.empty() ? default_gradient_bound(form) : parse_rat(opt.L);
        auto rep = good_cube_scan(form, opt.scanM, opt.M0, L, false, mem_bytes(opt.mem_gib));
        std::ostringstream os;
        os << "form: " << form.to_string() << "\n";
        os << "M: " << rep.M << "\n";
        os << "M0: " << rep.M0 << "\n";
        os << "L: " << L.get_str() << "\n";
        os << "total_cubes: " << rep.total_cubes.get_str() << "\n";
        os << "threshold: " << rep.threshold.get_str() << "\n";
        os << "flagged: " << rep.flagged << "\n";
        os << "flagged_over_M2: " << fmt(rep.flagged_over_M2) << "\n";
        os << "min_max_gradient: " << rep.min_max_gradient.get_str() << "\n";
        deliver(opt, os.str());
    });

    auto* vdm_cmd = sub_of(det, "vdm-check",
                                        "determinant bound on random rational configurations");
    vdm_cmd->add_option("--n", opt.vdm_n, "variables (<= 3 typical)");
    vdm_cmd->add_option("--D", opt.vdm_D, "max degree");
    vdm_cmd->add_option("--H", opt.vdm_H, "matrix size cap");
    vdm_cmd->add_option("--trials", opt.trials);
    vdm_cmd->add_option("--seed", opt.seed);
    add_output(vdm_cmd);
    vdm_cmd->callback([&] {
        std::mt19937_64 gen(opt.seed);
        int ok = 0, fail = 0;
        double max_ratio = 0;
        for (int t = 0; t < opt.trials; ++t) {
            int n = 1 + static_cast<int>(gen() % static_cast<unsigned>(opt.vdm_n));
            int D = static_cast<int>(gen() % static_cast<unsigned>(opt.vdm_D + 1));
            int H = 1 + static_cast<int>(gen() % static_cast<unsigned>(opt.vdm_H));
            std::vector<BigRat> X;
            for (int i = 0; i < n; ++i) {
                long den = 1 + static_cast<long>(gen() % 8);
                long num = 1 + static_cast<long>(gen() % static_cast<unsigned long>(den));
                BigRat x(num, den);
                x.canonicalize();
                X.push_back(x);
            }
            std::vector<RatPoly> fs(static_cast<size_t>(H));
            for (auto& f : fs) {
                int terms = 1 + static_cast<int>(gen() % 4);
                for (int tt = 0; tt < terms; ++tt) {
                    std::vector<int> e(static_cast<size_t>(n));
                    int rem = D;
                    for (int v = 0; v < n; ++v) {
                        e[static_cast<size_t>(v)] =
                            static_cast<int>(gen() % static_cast<unsigned>(rem + 1));
                        rem -= e[static_cast<size_t>(v)];
                    }
                    long num = static_cast<long>(gen() % 17) - 8;
                    long den = 1 + static_cast<long>(gen() % 8);
                    BigRat c(num, den);
                    c.canonicalize();
                    f.terms.push_back({e, c});
                }
            }
            std::vector<std::vector<BigRat>> pts(static_cast<size_t>(H));
            for (auto& p : pts)
                for (int i = 0; i < n; ++i) {
                    long den = 1 + static_cast<long>(gen() % 8);
                    long num = static_cast<long>(gen() % static_cast<unsigned long>(2 * den + 1)) - den;
                    BigRat frac(num, den);
                    frac.canonicalize();
                    p.push_back(X[static_cast<size_t>(i)] * frac);
                }
            auto chk = vandermonde_bound_check(fs, pts, X);
            if (chk.ok)
                ++ok;
            else
                ++fail;
            if (chk.bound > 0) {
                BigRat ratio = abs(chk.det) / chk.bound;
                max_ratio = std::max(max_ratio, ratio.get_d());
            }
        }
        std::ostringstream os;
        os << "trials: " << opt.trials << "\n";
        os << "ok: " << ok << "\n";
        os << "violations: " << fail << "\n";
        os << "max_det_over_bound: " << fmt(max_ratio) << "\n";
        deliver(opt, os.str());
        if (fail > 0) throw std::runtime_error("determinant bound violated");
    });

    // ---- scaling ----
    auto* scale_cmd = sub_of(&app, "scaling", "dyadic ladder study with slope fit");
    scale_cmd->add_option("--target", opt.target, "count|r0|rk");
    scale_cmd->add_option("--k", opt.k)->required();
    scale_cmd->add_option("--coeffs", opt.coeffs, "4 (count) or 3 (r0) coefficients");
    scale_cmd->add_option("--N", opt.N, "N for count, M for r0; unused for rk");
    scale_cmd->add_option("--Bs", opt.Bs, "comma ladder of B (or N for rk)");
    scale_cmd->add_option("--region", opt.region, "signed|nonneg");
    scale_cmd->add_flag("--timings", opt.timings, "measure per-row runtimes (non-reproducible)");
    scale_cmd->add_flag("--verbose", opt.verbose, "log one line per ladder step to stderr");
    scale_cmd->add_option("--time-s", opt.time_s, "time budget in seconds (default 300)");
    add_budget(scale_cmd);
    add_output(scale_cmd);
    scale_cmd->callback([&] {
        ScalingConfig cfg;
        if (opt.target == "count")
            cfg.kind = StudyKind::Count4;
        else if (opt.target == "r0")
            cfg.kind = StudyKind::R0Ternary;
        else if (opt.target == "rk")
            cfg.kind = StudyKind::RkSweep;
        else
            throw std::invalid_argument("--target must be count, r0 or rk");
        cfg.k = opt.k;
        cfg.coeffs = parse_coeffs(opt.coeffs);
        cfg.N = BigInt(opt.N);
        cfg.region = parse_region(opt.region);
        cfg.threads = opt.threads;
        cfg.measure_time = opt.timings;
        cfg.mem_budget_bytes = mem_bytes(opt.mem_gib);
        cfg.time_budget_s = opt.time_s;
        if (opt.verbose)
            cfg.on_row = [](const ScalingRow& r) {
                std::cerr << "ladder step B=" << r.B << " total=" << r.total << "\n";
            };
        std::string ladder = opt.Bs;
        std::replace(ladder.begin(), ladder.end(), ',', ' ');
        std::istringstream is(ladder);
        std::int64_t v;
        while (is >> v) cfg.ladder.push_back(v);
        auto rep = scaling_study(cfg);
        if (opt.format == "csv")
            deliver(opt, to_csv(rep));
        else if (opt.format == "json")
            deliver(opt, to_json_string(rep));
        else if (opt.format == "svg")
            deliver(opt, to_svg(rep));
        else
            deliver(opt, scaling_text(rep));
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const BudgetError& e) {
        std::cerr << "budget error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
