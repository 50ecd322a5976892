// Copyright 2025-present the fresnelio project
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line driver. Every experiment writes an RFC-4180 CSV (one row per
// trace point, a leading comment line naming the experiment) plus a JSON
// summary with the values and pass/fail assertions. Reruns byte-reproduce
// the outputs: fixed reduction orders, no wall-clock content.

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "fresnelio/fresnel.hpp"
#include "fresnelio/projective.hpp"
#include "fresnelio/schrodinger.hpp"

using namespace fresnelio;
using nlohmann::json;

namespace {

// ---- output helpers --------------------------------------------------------

struct CsvWriter {
    std::ostringstream body;

    explicit CsvWriter(const std::string& comment) { body << "# " << comment << "\r\n"; }
    void row(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i) body << ",";
            body << fields[i];
        }
        body << "\r\n";
    }
};

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(15);
    o << v;
    return o.str();
}

struct Summary {
    json doc;
    bool ok = true;

    explicit Summary(const std::string& experiment) { doc["experiment"] = experiment; }
    void value(const std::string& key, cplx v) {
        doc["values"][key] = {{"re", v.real()}, {"im", v.imag()}, {"abs", std::abs(v)}};
    }
    void value(const std::string& key, double v) { doc["values"][key] = v; }
    void assertion(const std::string& name, bool pass, double got, double bound) {
        doc["assertions"].push_back(
            {{"name", name}, {"pass", pass}, {"got", got}, {"bound", bound}});
        if (!pass) ok = false;
    }
};

int emit(const std::string& out_dir, const std::string& name, const CsvWriter& csv,
         Summary& summary) {
    namespace fs = std::filesystem;
    fs::create_directories(out_dir);
    {
        std::ofstream f(fs::path(out_dir) / (name + ".csv"), std::ios::binary);
        f << csv.body.str();
    }
    summary.doc["pass"] = summary.ok;
    {
        std::ofstream f(fs::path(out_dir) / (name + "_summary.json"));
        f << summary.doc.dump(2) << "\n";
    }
    if (!summary.ok) {
        std::cerr << name << ": assertion failed\n" << summary.doc.dump(2) << "\n";
        return 1;
    }
    std::cout << name << ": ok\n";
    return 0;
}

// ---- input parsing ----------------------------------------------------------

FunctionObject parse_function(const std::string& spec, const Params& params) {
    (void)params;
    if (spec == "constant1") return FunctionObject::constant(1, cplx{1.0, 0.0});
    if (spec == "cos-norm" || spec == "ex3-5") return FunctionObject::cos_norm(1);
    if (spec == "chirp-minus") return FunctionObject::chirp(1, -1);
    if (spec == "gauss") return FunctionObject::complex_gaussian({cplx{1.0, 0.0}});
    if (spec == "gauss-eps") return FunctionObject::complex_gaussian({cplx{0.01, 1.0}});
    if (spec == "tones3") {
        DiscreteMeasure mu;
        mu.dim = 1;
        mu.atoms = {{{1.0}, cplx{0.5, 0.0}}, {{-2.0}, cplx{0.25, 0.0}}, {{3.0}, cplx{0.0, 0.25}}};
        return FunctionObject::fourier_measure(mu);
    }
    if (spec == "planewave-combo")
        return FunctionObject::affine_combo(
            {{cplx{1.0, 0.0}, FunctionObject::plane_wave({1.0})},
             {cplx{0.5, 0.0}, FunctionObject::plane_wave({-2.0})}});
    if (!spec.empty() && spec.front() == '{') return function_from_json(json::parse(spec));
    std::ifstream f(spec);
    if (!f) throw std::invalid_argument("cannot read function spec: " + spec);
    json j;
    f >> j;
    return function_from_json(j);
}

Window parse_window(const std::string& spec, int dim, double hbar) {
    if (spec == "unit" || spec.empty()) return unit_window(dim, hbar);
    json j = spec.front() == '{' ? json::parse(spec) : [&] {
        std::ifstream f(spec);
        if (!f) throw std::invalid_argument("cannot read window spec: " + spec);
        json jj;
        f >> jj;
        return jj;
    }();
    const std::string type = j.at("type").get<std::string>();
    if (type == "unit") return unit_window(dim, hbar);
    if (type == "gaussian") return to_window(GaussianWindow(j.at("q").get<vec>(), hbar));
    if (type == "chirped") return chirped_window(dim, j.at("alpha").get<double>(), hbar);
    throw std::invalid_argument("unknown window type: " + type);
}

vec parse_list(const std::string& s) {
    vec out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
    if (out.empty()) throw std::invalid_argument("empty list");
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_list(s)) out.push_back(static_cast<int>(v));
    return out;
}

// ---- experiments --------------------------------------------------------------

struct CommonOpts {
    std::string out = "out";
    double hbar = 1.0;
    double tol = 1e-3;
    unsigned long long seed = 12345;
};

int run_fresnel(const CommonOpts& c, const std::string& fspec, const std::string& method,
                const std::string& mollifier) {
    const Params P{c.hbar};
    const FunctionObject f = parse_function(fspec, P);
    CsvWriter csv("fresnel: regularized quadratic-phase integral, one row per trace point");
    csv.row({"method", "level", "re", "im", "abs", "error_estimate", "status"});
    Summary summary("fresnel");

    std::vector<std::pair<std::string, cplx>> values;
    const bool all = method == "all";
    if (all || method == "direct") {
        RegularizerSchedule sched = RegularizerSchedule::defaults(
            mollifier == "sech" ? Mollifier::sech : Mollifier::gaussian);
        const FresnelResult r = fresnel_direct(f, sched, P);
        for (const auto& [eps, v] : r.trace)
            csv.row({"direct", fmt(eps), fmt(v.real()), fmt(v.imag()), fmt(std::abs(v)),
                     fmt(r.error_estimate), r.status == FresnelStatus::ok ? "ok" : "non_convergent"});
        summary.value("direct", r.value);
        summary.assertion("direct convergent", r.status == FresnelStatus::ok, 0.0, 0.0);
        if (r.status == FresnelStatus::ok) values.emplace_back("direct", r.value);
    }
    if (all || method == "phase") {
        const Window g = unit_window(f.dim(), c.hbar);
        const FresnelResult r = fresnel_phase_space(f, g, g, P);
        for (const auto& [lvl, v] : r.trace)
            csv.row({"phase_space", fmt(lvl), fmt(v.real()), fmt(v.imag()), fmt(std::abs(v)),
                     fmt(r.error_estimate), "ok"});
        summary.value("phase_space", r.value);
        values.emplace_back("phase_space", r.value);
    }
    if (all || method == "parseval") {
        try {
            const AtomSum atoms = atomize(f, P);
            DiscreteMeasure mu;
            mu.dim = f.dim();
            bool pure = true;
            for (const auto& t : atoms.terms) {
                vec p;
                for (const auto& ax : t.axes) {
                    if (ax.z != cplx{0.0, 0.0} || ax.b.real() != 0.0) pure = false;
                    p.push_back(ax.b.imag() / c.hbar);
                }
                mu.atoms.push_back({std::move(p), t.weight});
            }
            if (pure) {
                const cplx v = fresnel_parseval_measure(mu, P);
                csv.row({"parseval", "0", fmt(v.real()), fmt(v.imag()), fmt(std::abs(v)), "0",
                         "ok"});
                summary.value("parseval", v);
                values.emplace_back("parseval", v);
            }
        } catch (const not_closed_form&) {
        }
    }
    for (std::size_t i = 0; i + 1 < values.size(); ++i)
        for (std::size_t j = i + 1; j < values.size(); ++j) {
            const double diff = std::abs(values[i].second - values[j].second);
            const double scale = 1.0 + std::abs(values[j].second);
            summary.assertion("agreement " + values[i].first + "/" + values[j].first,
                              diff < c.tol * scale, diff, c.tol * scale);
        }
    return emit(c.out, "fresnel", csv, summary);
}

int run_stft(const CommonOpts& c, const std::string& fspec, const std::string& wspec, double x,
             double xi, double R, double h) {
    const Params P{c.hbar};
    const FunctionObject f = parse_function(fspec, P);
    const Window g = parse_window(wspec, f.dim(), c.hbar);
    CsvWriter csv("stft: windowed transform samples");
    csv.row({"x", "xi", "re", "im", "abs", "method"});
    Summary summary("stft");
    const vec xv(f.dim(), x), xiv(f.dim(), xi);
    const cplx closed = stft_closed(f, g, xv, xiv, P);
    csv.row({fmt(x), fmt(xi), fmt(closed.real()), fmt(closed.imag()), fmt(std::abs(closed)),
             "closed_form"});
    summary.value("closed", closed);
    const GridSpec grid{R, h, f.dim()};
    const cplx numeric = stft_numeric(f, g, xv, xiv, grid, P);
    csv.row({fmt(x), fmt(xi), fmt(numeric.real()), fmt(numeric.imag()), fmt(std::abs(numeric)),
             "quadrature"});
    summary.value("numeric", numeric);
    summary.assertion("closed vs quadrature", std::abs(closed - numeric) < 1e-6,
                      std::abs(closed - numeric), 1e-6);
    return emit(c.out, "stft", csv, summary);
}

int run_norm(const CommonOpts& c, const std::string& fspec, const std::string& wspec,
             const std::string& which) {
    const Params P{c.hbar};
    const FunctionObject f = parse_function(fspec, P);
    const Window g = parse_window(wspec, f.dim(), c.hbar);
    CsvWriter csv("norm: mixed phase-space norms");
    csv.row({"which", "value", "quality"});
    Summary summary("norm");
    const auto qual = [](NormQuality q) {
        return q == NormQuality::exact ? "exact"
               : q == NormQuality::upper_bound ? "upper_bound" : "grid_lower_bound";
    };
    try {
        if (which == "minfty1" || which == "both") {
            const NormResult r = norm_M_infty_1(f, g, P);
            csv.row({"minfty1", fmt(r.value), qual(r.quality)});
            summary.value("minfty1", r.value);
        }
        if (which == "m1infty" || which == "both") {
            const NormResult r = norm_M_1_infty(f, g, P);
            csv.row({"m1infty", fmt(r.value), qual(r.quality)});
            summary.value("m1infty", r.value);
        }
    } catch (const divergent_error& e) {
        csv.row({which, "inf", "divergent"});
        summary.doc["values"]["divergent"] = true;
        summary.doc["values"]["envelope_level"] = e.envelope_level;
    }
    return emit(c.out, "norm", csv, summary);
}

int run_norm_ln(const CommonOpts& c, const std::string& qlist) {
    const vec q = parse_list(qlist);
    CsvWriter csv("norm-ln: exact functional norm with witness sandwich");
    csv.row({"kind", "parameter", "value"});
    Summary summary("norm-ln");
    const double formula = op_norm_Ln(q);
    summary.value("formula", formula);
    csv.row({"formula", "0", fmt(formula)});
    double worst_gap = 0.0;
    for (int j = 0; j <= 14; ++j) {
        const double par = std::pow(2.0, -j);
        const auto [upper, lower] = op_norm_witnesses(q, par, par);
        csv.row({"upper", fmt(par), fmt(upper)});
        csv.row({"lower", fmt(par), fmt(lower)});
        summary.assertion("sandwich at 2^-" + std::to_string(j),
                          lower <= formula * (1 + 1e-12) && formula <= upper * (1 + 1e-12),
                          lower, upper);
        worst_gap = upper - lower;
    }
    summary.value("final_gap", worst_gap);
    summary.assertion("gap closes", worst_gap < 1e-2 * formula, worst_gap, 1e-2 * formula);
    return emit(c.out, "norm-ln", csv, summary);
}

int run_schrodinger(const CommonOpts& c, double t, const std::string& qlist) {
    const vec q = parse_list(qlist);
    CsvWriter csv("schrodinger: sharp sup-norm bound of the free propagator");
    csv.row({"t", "q", "formula", "eps", "witness", "ratio"});
    Summary summary("schrodinger");
    const double formula = sharp_norm_formula(t, q);
    summary.value("formula", formula);
    std::string qstr = fmt(q[0]);
    for (std::size_t i = 1; i < q.size(); ++i) qstr += ";" + fmt(q[i]);
    double last = 0.0;
    for (int j = 0; j <= 12; ++j) {
        const double eps = std::pow(2.0, -j);
        const double w = sharp_norm_witness(t, q, eps);
        csv.row({fmt(t), qstr, fmt(formula), fmt(eps), fmt(w), fmt(w / formula)});
        summary.assertion("witness below formula at 2^-" + std::to_string(j),
                          w <= formula * (1 + 1e-12), w, formula);
        last = w;
    }
    summary.value("witness_last", last);
    const Params P{c.hbar};
    const auto f = FunctionObject::complex_gaussian({cplx{1.0, 0.0}});
    const SampledField u0 = sample(f, 16.0, 4096, P);
    const SampledField ut = evolve_free_fft(u0, t, P);
    summary.assertion("discrete unitarity", std::abs(ut.l2_norm() - u0.l2_norm()) < 1e-8,
                      std::abs(ut.l2_norm() - u0.l2_norm()), 1e-8);
    return emit(c.out, "schrodinger", csv, summary);
}

int run_cylinder(const CommonOpts& c, const std::string& fspec, int base_dim, int extend_to,
                 int restrict_to) {
    const Params P{c.hbar};
    const FunctionObject base = parse_function(fspec, P);
    if (base.dim() != base_dim) throw std::invalid_argument("base dim mismatch");
    WindowSequence w;
    w.q = [](int j) { return std::pow(2.0, -j); };
    w.tail = TailCertificate::geometric(1.0, 0.5);
    const CylinderFunction f{base_dim, base};
    CsvWriter csv("cylinder: extension and restriction diagnostics");
    csv.row({"op", "value_re", "value_im", "abs"});
    Summary summary("cylinder");
    const double n0 = norm_infinite(f, w, P).value;
    csv.row({"norm", fmt(n0), "0", fmt(n0)});
    const cplx l0 = L_min(f, P);
    csv.row({"functional", fmt(l0.real()), fmt(l0.imag()), fmt(std::abs(l0))});
    summary.value("norm", n0);
    summary.value("functional", l0);
    if (extend_to > base_dim) {
        const CylinderFunction fe = extend(f, extend_to);
        const double ne = norm_infinite(fe, w, P).value;
        const cplx le = L_min(fe, P);
        csv.row({"norm_extended", fmt(ne), "0", fmt(ne)});
        csv.row({"functional_extended", fmt(le.real()), fmt(le.imag()), fmt(std::abs(le))});
        summary.assertion("norm extension invariance", std::abs(ne - n0) < 1e-10 * (1 + n0),
                          std::abs(ne - n0), 1e-10);
        summary.assertion("functional extension invariance", std::abs(le - l0) < 1e-10,
                          std::abs(le - l0), 1e-10);
    }
    if (restrict_to >= 1 && restrict_to < base_dim) {
        const CylinderFunction fr{restrict_to, restrict_cylinder(f, restrict_to, P)};
        const double nr = norm_infinite(fr, w, P).value;
        csv.row({"norm_restricted", fmt(nr), "0", fmt(nr)});
        summary.assertion("trace contraction", nr <= n0 * (1 + 1e-10), nr, n0);
    }
    return emit(c.out, "cylinder", csv, summary);
}

int run_ltopo(const CommonOpts& c, const std::string& preset) {
    const Params P{c.hbar};
    WindowSequence w;
    w.q = [](int j) { return std::pow(2.0, -j); };
    w.tail = TailCertificate::geometric(1.0, 0.5);
    CylinderSequence seq;
    if (preset == "ex5-1") {
        // tone products: the plane-wave factor contributes the phase
        // e^{-i hbar k^2/2} (quadratic in the frequency), cross-checked in the
        // tests against the direct regularized integral
        seq.family = CylinderSequence::Family::product_family;
        seq.a = [](int j) { return std::pow(2.0, -j); };
        seq.factor1d = [](int j) {
            return FunctionObject::plane_wave({1.0 + 1.0 / j}, false);
        };
        seq.a_tail = TailCertificate::geometric(1.0, 0.5);
    } else if (preset == "ex6-1") {
        seq.family = CylinderSequence::Family::plane_wave;
        seq.coef = [](int j) { return std::pow(2.0, -j); };
    } else if (preset == "ex6-2") {
        seq.family = CylinderSequence::Family::gaussian;
        seq.coef = [](int j) { return 1.0 / (j * j); };
    } else {
        throw std::invalid_argument("unknown preset: " + preset);
    }
    const int cutoff = preset == "ex6-2" ? 2 : 16;
    const int n_max = preset == "ex6-2" ? 8 : 64;
    const LTopoResult r = L_topological(seq, w, P, c.tol, cutoff, n_max);
    CsvWriter csv("ltopo: cylinder-sequence functional with its tested pairs");
    csv.row({"m", "n", "distance", "certified_lower", "passed"});
    Summary summary("ltopo");
    for (const auto& p : r.certificate)
        csv.row({std::to_string(p.m), std::to_string(p.n), fmt(p.distance), fmt(p.lower),
                 p.passed ? "1" : "0"});
    summary.doc["values"]["cauchy_ok"] = r.cauchy_ok;
    if (r.cauchy_ok) {
        summary.value("limit", r.value);
        summary.assertion("accepted", true, 0, 0);
    } else {
        summary.value("violation_distance", r.violation.distance);
        summary.value("violation_lower", r.violation.lower);
        const bool expected_reject = preset != "ex5-1";
        summary.assertion("rejection expected", expected_reject, r.violation.distance, c.tol);
    }
    return emit(c.out, "ltopo", csv, summary);
}

int run_lprime(const CommonOpts& c, const std::string& preset, const std::string& config) {
    const Params P{c.hbar};
    SequenceFunction f;
    if (!config.empty()) {
        std::ifstream in(config);
        if (!in) throw std::invalid_argument("cannot read config: " + config);
        json j;
        in >> j;
        f = sequence_function_from_json(j);
    } else if (preset == "planewave-k-geometric") {
        f.kind = SequenceFunction::Kind::plane_wave_l2;
        f.coef = [](int j) { return std::pow(2.0, -j); };
        f.tail = TailCertificate::geometric(1.0, 0.5);
    } else if (preset == "gaussian-r-geometric") {
        f.kind = SequenceFunction::Kind::gaussian_l1;
        f.coef = [](int j) { return std::pow(2.0, -j); };
        f.tail = TailCertificate::geometric(1.0, 0.5);
    } else if (preset == "composite-3atom" || preset == "sec6-1") {
        f.kind = SequenceFunction::Kind::composite_1d;
        f.coef = [](int j) { return std::pow(2.0, -j); };
        f.tail = TailCertificate::geometric(1.0, 0.5);
        DiscreteMeasure mu;
        mu.dim = 1;
        mu.atoms = {{{1.0}, cplx{0.5, 0.0}}, {{-2.0}, cplx{0.25, 0.0}}, {{3.0}, cplx{0.0, 0.25}}};
        f.h = FunctionObject::fourier_measure(mu);
    } else {
        throw std::invalid_argument("unknown preset: " + preset);
    }
    WindowSequence w;
    w.q = [](int j) { return std::pow(2.0, -j); };
    w.tail = TailCertificate::geometric(1.0, 0.5);
    const auto r = L_prime(f, w, P, default_doubling_schedule(), 1e-9);
    CsvWriter csv("lprime: sequential functional trace over doubling levels");
    csv.row({"n", "re", "im", "abs"});
    Summary summary("lprime");
    for (const auto& [n, v] : r.trace)
        csv.row({fmt(n), fmt(v.real()), fmt(v.imag()), fmt(std::abs(v))});
    summary.value("limit", r.value);
    summary.assertion("settled", r.status == FresnelStatus::ok, 0, 0);
    return emit(c.out, "lprime", csv, summary);
}

int run_appendix_a(const CommonOpts& c, int n, const std::string& klist, double x, double xi,
                   double eps) {
    const Params P{c.hbar};
    const vec k = parse_list(klist);
    const auto r = windowed_tone_kernel_identity(n, k, x, xi, eps, P);
    CsvWriter csv("appendix-a: windowed-tone kernel identity, both sides");
    csv.row({"side", "re", "im", "abs"});
    Summary summary("appendix-a");
    csv.row({"direct", fmt(r.lhs.real()), fmt(r.lhs.imag()), fmt(std::abs(r.lhs))});
    csv.row({"kernel", fmt(r.rhs.real()), fmt(r.rhs.imag()), fmt(std::abs(r.rhs))});
    summary.value("direct", r.lhs);
    summary.value("kernel", r.rhs);
    const double diff = std::abs(r.lhs - r.rhs);
    summary.assertion("sides agree", diff < 1e-4, diff, 1e-4);
    return emit(c.out, "appendix-a", csv, summary);
}

int run_appendix_b(const CommonOpts& c, int m, const std::string& nlist) {
    const Params P{c.hbar};
    CsvWriter csv("appendix-b: dominating envelope tail bound and level stability");
    csv.row({"kind", "key", "value", "bound", "ok"});
    Summary summary("appendix-b");
    for (double x : {0.0, 1.0, 10.0, 100.0}) {
        const double integral = phi_xi_integral_numeric(2, 1.0, x, 4000.0, 0.02);
        const double ratio = integral / std::sqrt(1.0 + x * x);
        const bool ok = ratio <= kPhiTailRatioBound;
        csv.row({"phi_tail", fmt(x), fmt(ratio), fmt(kPhiTailRatioBound), ok ? "1" : "0"});
        summary.assertion("phi tail at x=" + fmt(x), ok, ratio, kPhiTailRatioBound);
    }
    const auto kgen = [](int j) { return std::pow(2.0, -j); };
    const Window g = to_window(GaussianWindow({2.0}, c.hbar));
    const auto rep = dominator_check(kgen, TailCertificate::geometric(1.0, 0.5),
                                     parse_int_list(nlist), m, g, P, c.seed);
    for (const auto& [n, ratio] : rep.max_ratio) {
        csv.row({"dominator", std::to_string(n), fmt(ratio), "", "1"});
        summary.assertion("stability at n=" + std::to_string(n),
                          std::abs(ratio - rep.max_ratio.front().second) <=
                              0.05 * rep.max_ratio.front().second,
                          ratio, rep.max_ratio.front().second);
    }
    summary.value("B", rep.B);
    summary.assertion("no growth beyond 5%", !rep.grows_beyond_5pct, 0, 0);
    return emit(c.out, "appendix-b", csv, summary);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fresnelio: quadratic-phase integrals through phase-space analysis"};
    app.require_subcommand(0, 1);  // a subcommand, or --config alone

    CommonOpts c;
    app.add_option("--out", c.out, "output directory");
    app.add_option("--hbar", c.hbar, "scale parameter");
    app.add_option("--tol", c.tol, "agreement tolerance");
    app.add_option("--seed", c.seed, "seed for sampled points");
    std::string config_path;
    app.add_option("--config", config_path, "JSON experiment config");

    std::string fspec = "constant1", wspec = "unit", method = "all", mollifier = "gaussian";
    std::string which = "both", qlist = "1", preset = "ex5-1", klist = "1", nlist = "1,2,4,8";
    std::string seq_config;
    double x = 0.0, xi = 0.0, R = 12.0, h = 0.01, t = 1.0, eps = 0.1;
    int n = 1, base_dim = 1, extend_to = 0, restrict_to = 0, m = 2;

    auto* sc_fresnel = app.add_subcommand("fresnel", "regularized integral by all routes");
    sc_fresnel->add_option("--f", fspec, "function spec or preset");
    sc_fresnel->add_option("--method", method, "all|direct|phase|parseval");
    sc_fresnel->add_option("--mollifier", mollifier, "gaussian|sech");

    auto* sc_stft = app.add_subcommand("stft", "windowed transform sample");
    sc_stft->add_option("--f", fspec);
    sc_stft->add_option("--window", wspec);
    sc_stft->add_option("--x", x);
    sc_stft->add_option("--xi", xi);
    sc_stft->add_option("--R", R);
    sc_stft->add_option("--step", h);

    auto* sc_norm = app.add_subcommand("norm", "mixed norms");
    sc_norm->add_option("--f", fspec);
    sc_norm->add_option("--window", wspec);
    sc_norm->add_option("--which", which, "minfty1|m1infty|both");

    auto* sc_nl = app.add_subcommand("norm-ln", "exact functional norm sandwich");
    sc_nl->add_option("--q", qlist, "comma-separated window eigenvalues");
    std::string wsched = "default";
    sc_nl->add_option("--witness-schedule", wsched);

    auto* sc_sch = app.add_subcommand("schrodinger", "sharp propagator bound");
    sc_sch->add_option("--t", t);
    sc_sch->add_option("--q", qlist);

    auto* sc_cyl = app.add_subcommand("cylinder", "extension/restriction diagnostics");
    sc_cyl->add_option("--base", fspec);
    sc_cyl->add_option("--base-dim", base_dim);
    sc_cyl->add_option("--extend-to", extend_to);
    sc_cyl->add_option("--restrict-to", restrict_to);

    auto* sc_lt = app.add_subcommand("ltopo", "cylinder-sequence functional");
    sc_lt->add_option("--preset", preset, "ex5-1|ex6-1|ex6-2");

    auto* sc_lp = app.add_subcommand("lprime", "sequential functional");
    std::string lpreset = "planewave-k-geometric";
    sc_lp->add_option("--preset", lpreset,
                      "planewave-k-geometric|gaussian-r-geometric|composite-3atom|sec6-1");
    sc_lp->add_option("--sequence", seq_config, "sequence-function JSON file");

    auto* sc_aa = app.add_subcommand("appendix-a", "windowed-tone kernel identity");
    sc_aa->add_option("--n", n);
    sc_aa->add_option("--k", klist);
    sc_aa->add_option("--x", x);
    sc_aa->add_option("--xi", xi);
    sc_aa->add_option("--eps", eps);

    auto* sc_ab = app.add_subcommand("appendix-b", "dominating envelope checks");
    sc_ab->add_option("--m", m);
    sc_ab->add_option("--n-list", nlist);

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::invalid_argument("cannot read config: " + config_path);
            json j;
            in >> j;
            for (const auto& [key, val] : j.items()) {
                if (key == "experiment" || key == "f" || key == "method" || key == "mollifier" ||
                    key == "out" || key == "hbar" || key == "tol" || key == "seed")
                    continue;
                throw std::invalid_argument("unknown config field: " + key);
            }
            c.out = j.value("out", c.out);
            c.hbar = j.value("hbar", c.hbar);
            c.tol = j.value("tol", c.tol);
            c.seed = j.value("seed", c.seed);
            const std::string exp = j.at("experiment").get<std::string>();
            if (exp == "fresnel")
                return run_fresnel(c, j.contains("f") ? j["f"].dump() : fspec,
                                   j.value("method", "all"), j.value("mollifier", "gaussian"));
            throw std::invalid_argument("config experiment not supported: " + exp);
        }
        if (sc_fresnel->parsed()) return run_fresnel(c, fspec, method, mollifier);
        if (sc_stft->parsed()) return run_stft(c, fspec, wspec, x, xi, R, h);
        if (sc_norm->parsed()) return run_norm(c, fspec, wspec, which);
        if (sc_nl->parsed()) return run_norm_ln(c, qlist);
        if (sc_sch->parsed()) return run_schrodinger(c, t, qlist);
        if (sc_cyl->parsed()) return run_cylinder(c, fspec, base_dim, extend_to, restrict_to);
        if (sc_lt->parsed()) return run_ltopo(c, preset);
        if (sc_lp->parsed()) return run_lprime(c, lpreset, seq_config);
        if (sc_aa->parsed()) return run_appendix_a(c, n, klist, x, xi, eps);
        if (sc_ab->parsed()) return run_appendix_b(c, m, nlist);
        std::cerr << app.help();
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid config: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
