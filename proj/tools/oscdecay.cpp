// oscdecay: hypothesis checks, Fourier decay fits, singular integrals,
// Knapp/delta-box scaling experiments, and exponent tables for
// quasi-homogeneous surface measures, driven by JSON surface files.

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "oscdecay/convolution.hpp"
#include "oscdecay/ellipticity.hpp"
#include "oscdecay/fourier.hpp"
#include "oscdecay/io.hpp"
#include "oscdecay/parallel.hpp"
#include "oscdecay/restriction.hpp"
#include "oscdecay/rng.hpp"
#include "oscdecay/version.hpp"

namespace {

using ojson = nlohmann::ordered_json;
using namespace oscdecay;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kHypothesis = 2;
constexpr int kTolerance = 3;
constexpr int kBudget = 4;

struct Global {
    std::string surface = "example5";
    std::string out;
    std::uint64_t seed = 12345;
    int jobs = 0;
    double tol = 0.0;  // 0 selects the per-command default
    bool force = false;
};

double tol_or(const Global& g, double dflt) {
    return g.tol > 0.0 ? g.tol : dflt;
}

std::string fmt(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Numeric tokens accept plain decimals and power notation like 2^-3.
double parse_number_token(const std::string& tok) {
    const auto caret = tok.find('^');
    if (caret == std::string::npos) return io::parse_rational(tok);
    const double base = io::parse_rational(tok.substr(0, caret));
    const double expo = io::parse_rational(tok.substr(caret + 1));
    return std::pow(base, expo);
}

// List syntax: "v" one value; "a:b:n" n geometric points from a to b;
// "B^p:B^q" the dyadic-style sweep B^p, B^(p+-1), ..., B^q.
std::vector<double> parse_value_list(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char ch : text) {
        if (ch == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    parts.push_back(cur);

    if (parts.size() == 1) return {parse_number_token(parts[0])};
    if (parts.size() == 2) {
        const auto c1 = parts[0].find('^'), c2 = parts[1].find('^');
        if (c1 == std::string::npos || c2 == std::string::npos ||
            parts[0].substr(0, c1) != parts[1].substr(0, c2))
            throw std::invalid_argument(
                "range '" + text + "': two-part ranges need a shared base, "
                "e.g. 2^-3:2^-10");
        const double base = io::parse_rational(parts[0].substr(0, c1));
        const double e1 = io::parse_rational(parts[0].substr(c1 + 1));
        const double e2 = io::parse_rational(parts[1].substr(c2 + 1));
        const double step = e2 >= e1 ? 1.0 : -1.0;
        std::vector<double> out;
        for (double e = e1;; e += step) {
            out.push_back(std::pow(base, e));
            if (std::abs(e - e2) < 0.5) break;
            if (out.size() > 4096)
                throw std::invalid_argument("range '" + text + "' too long");
        }
        return out;
    }
    if (parts.size() == 3) {
        const double a = parse_number_token(parts[0]);
        const double b = parse_number_token(parts[1]);
        const long n = std::strtol(parts[2].c_str(), nullptr, 10);
        if (n < 1 || n > 1000000)
            throw std::invalid_argument("range '" + text + "': bad count");
        if (n == 1) return {a};
        if (!(a > 0.0 && b > 0.0))
            throw std::invalid_argument(
                "range '" + text + "': geometric ranges need positive ends");
        std::vector<double> out(n);
        for (long i = 0; i < n; ++i)
            out[i] = a * std::pow(b / a, static_cast<double>(i) /
                                             static_cast<double>(n - 1));
        return out;
    }
    throw std::invalid_argument("cannot parse list '" + text + "'");
}

Point2 parse_pair(const std::string& text) {
    const auto comma = text.find(',');
    if (comma == std::string::npos)
        throw std::invalid_argument("expected 'x,y' pair, got '" + text + "'");
    return {parse_number_token(text.substr(0, comma)),
            parse_number_token(text.substr(comma + 1))};
}

ojson meta_block(const Global& g, const std::string& command,
                 const io::SurfaceSpec& spec, ojson tolerances) {
    ojson m;
    m["command"] = command;
    m["version"] = version_string;
    m["surface"] = spec.name;
    m["surface_hash"] = spec.hash;
    m["seed"] = g.seed;
    m["tolerances"] = std::move(tolerances);
    return m;
}

void emit(const Global& g, const std::string& name, const ojson& body,
          const std::string& csv = "") {
    const std::string dumped = body.dump(2);
    std::cout << dumped << "\n";
    if (g.out.empty()) return;
    std::filesystem::create_directories(g.out);
    std::ofstream(g.out + "/" + name + ".json") << dumped << "\n";
    if (!csv.empty()) std::ofstream(g.out + "/" + name + ".csv") << csv;
}

// Analysis commands refuse to run on a surface that fails H1-H4 unless
// --force is given; partial diagnostics still go to stderr.
int gate(const Global& g, const io::SurfaceSpec& spec) {
    if (g.force) return kOk;
    try {
        const auto rep =
            ellipticity::run_hypothesis_suite(spec.phi, spec.w, spec.r);
        if (rep.all_pass) return kOk;
        std::cerr << "hypothesis gate failed for '" << spec.name
                  << "' (H2 " << (rep.h2.pass() ? "ok" : "FAIL") << ", H3 "
                  << (rep.sigma_scan.h3_holds() ? "ok" : "FAIL") << ", H4 "
                  << (rep.h4 && rep.h4->pass ? "ok" : "FAIL")
                  << "); rerun with --force to override\n";
    } catch (const std::exception& e) {
        std::cerr << "hypothesis gate failed for '" << spec.name
                  << "': " << e.what() << "; rerun with --force to override\n";
    }
    return kHypothesis;
}

ojson fit_json(const ScalingFit& fit) {
    return ojson{{"slope", fit.slope},
                 {"intercept", fit.intercept},
                 {"r_squared", fit.r_squared},
                 {"points", fit.points.size()}};
}

// ---------------------------------------------------------------- check

int cmd_check(const Global& g) {
    const auto spec = io::load_surface(g.surface);
    ojson body;
    body["meta"] = meta_block(g, "check", spec, ojson::object());

    ellipticity::EllipticityReport rep;
    std::string fit_failure;
    try {
        rep = ellipticity::run_hypothesis_suite(spec.phi, spec.w, spec.r);
    } catch (const DegenerateFitError& e) {
        fit_failure = e.what();
        body["degenerate_fit"] = fit_json(e.fit);
    }

    body["h1_structural"] = rep.h1_structural;
    body["h2"] = {{"monomials_ok", rep.h2.monomials_ok},
                  {"spot_checks_ok", rep.h2.spot_checks_ok},
                  {"weight_inequality_ok", rep.h2.weight_inequality_ok},
                  {"max_spot_rel_error", rep.h2.max_spot_rel_error},
                  {"pass", rep.h2.pass()}};
    body["h3"] = {{"candidates", rep.sigma_scan.candidates},
                  {"pass", rep.sigma_scan.h3_holds()}};
    if (rep.sigma_scan.h3_holds()) {
        body["sigma"] = rep.sigma;
        if (rep.n1) body["n1"] = *rep.n1;
        if (rep.n2) body["n2"] = *rep.n2;
        body["D_estimate"] = rep.D_estimate;
        body["D_tilde_estimate"] = rep.D_tilde_estimate;
    }
    if (rep.h4)
        body["h4"] = {{"bound", rep.h4->bound},
                      {"margin", rep.h4->margin},
                      {"pass", rep.h4->pass}};
    if (!fit_failure.empty()) body["error"] = fit_failure;
    body["all_pass"] = rep.all_pass;

    emit(g, "check", body);
    return rep.all_pass ? kOk : kHypothesis;
}

// ---------------------------------------------------------------- euler

int cmd_euler(const Global& g, int zeta_n, int s_n) {
    const auto spec = io::load_surface(g.surface);
    const int rc = gate(g, spec);
    if (rc != kOk) return rc;
    const double tol = tol_or(g, 1e-9);

    std::vector<std::pair<Point2, double>> samples;
    samples.reserve(static_cast<std::size_t>(zeta_n) * s_n);
    for (int j = 0; j < zeta_n; ++j) {
        const double th = 2.0 * M_PI * j / zeta_n;
        for (int i = 0; i < s_n; ++i) {
            const double s =
                spec.r.c + (spec.r.d - spec.r.c) * (i + 0.5) / s_n;
            samples.push_back({{std::cos(th), std::sin(th)}, s});
        }
    }
    const double res =
        ellipticity::verify_euler_identity(spec.phi, spec.w, samples);

    ojson body;
    body["meta"] = meta_block(g, "euler", spec, {{"max_rel_residual", tol}});
    body["grid"] = {{"zeta_n", zeta_n}, {"s_n", s_n}};
    body["max_rel_residual"] = res;
    body["pass"] = res <= tol;
    emit(g, "euler", body);
    return res <= tol ? kOk : kTolerance;
}

// ------------------------------------------------------------- classify

int cmd_classify(const Global& g, int grid_n) {
    const auto spec = io::load_surface(g.surface);
    const int rc = gate(g, spec);
    if (rc != kOk) return rc;

    std::ostringstream csv;
    csv << "s,class,lambda1,lambda2,min_abs_q\n";
    int nonelliptic = 0;
    std::vector<double> bad;
    for (int i = 0; i < grid_n; ++i) {
        const double s = spec.r.c + (spec.r.d - spec.r.c) * (i + 0.5) / grid_n;
        const auto cl =
            ellipticity::classify_point(spec.phi, spec.w, {1.0, s});
        const bool ne = cl.cls == ellipticity::PointClass::nonelliptic;
        if (ne) {
            ++nonelliptic;
            bad.push_back(s);
        }
        csv << fmt(s) << "," << (ne ? "nonelliptic" : "elliptic") << ","
            << fmt(cl.eigen.lambda1) << "," << fmt(cl.eigen.lambda2) << ","
            << fmt(cl.min_abs_q) << "\n";
    }

    ojson body;
    body["meta"] = meta_block(g, "classify", spec, ojson::object());
    body["grid_n"] = grid_n;
    body["nonelliptic_count"] = nonelliptic;
    body["nonelliptic_s"] = bad;
    emit(g, "classify", body, csv.str());
    return kOk;
}

// ---------------------------------------------------------------- decay

int cmd_decay(const Global& g, int dirs, const std::string& radii_text,
              std::vector<std::string> xi_texts, double r2_min) {
    const auto spec = io::load_surface(g.surface);
    const int rc = gate(g, spec);
    if (rc != kOk) return rc;
    const double tol = tol_or(g, 0.05);

    const std::vector<double> radii = parse_value_list(radii_text);
    std::vector<Point2> xi_primes;
    if (xi_texts.empty())
        xi_primes = {{0.0, 0.0}, {2.0, 0.0}, {0.0, 2.0}, {1.5, -1.5}};
    else
        for (const auto& t : xi_texts) xi_primes.push_back(parse_pair(t));

    const auto rep = fourier::decay_fit(spec.phi, spec.w, spec.r,
                                        fourier::default_directions(dirs),
                                        xi_primes, radii, {}, g.jobs);

    std::ostringstream csv;
    csv << "dir_x,dir_y,xi1,xi2,R,re,im,abs,err,excluded\n";
    ojson entries = ojson::array();
    for (const auto& e : rep.entries) {
        entries.push_back({{"direction", {e.direction[0], e.direction[1]}},
                           {"xi_prime", {e.xi_prime[0], e.xi_prime[1]}},
                           {"slope", e.fit.slope},
                           {"r_squared", e.fit.r_squared},
                           {"excluded", e.excluded_count}});
        for (const auto& s : e.samples)
            csv << fmt(e.direction[0]) << "," << fmt(e.direction[1]) << ","
                << fmt(e.xi_prime[0]) << "," << fmt(e.xi_prime[1]) << ","
                << fmt(s.R) << "," << fmt(s.value.real()) << ","
                << fmt(s.value.imag()) << "," << fmt(std::abs(s.value)) << ","
                << fmt(s.err) << "," << (s.excluded ? 1 : 0) << "\n";
    }

    ojson body;
    body["meta"] = meta_block(g, "decay", spec,
                              {{"slope_tol", tol}, {"r2_min", r2_min}});
    body["target_slope"] = rep.target_slope;
    body["worst_slope"] = rep.worst_slope;
    body["min_r_squared"] = rep.min_r_squared;
    body["c_emp"] = rep.c_emp;
    body["budget_exceeded"] = rep.status == fourier::QuadStatus::budget_exceeded;
    body["entries"] = entries;
    emit(g, "decay", body, csv.str());

    if (rep.status == fourier::QuadStatus::budget_exceeded) return kBudget;
    const bool ok =
        rep.worst_slope <= rep.target_slope + tol && rep.min_r_squared >= r2_min;
    return ok ? kOk : kTolerance;
}

// ------------------------------------------------------------------ vdc

int cmd_vdc(const Global& g, const std::string& a3_text, double half_width,
            int grid_n, double fake_exponent) {
    const auto spec = io::load_surface(g.surface);
    const int rc = gate(g, spec);
    if (rc != kOk) return rc;

    const auto scan =
        fourier::vdc_constant_scan(spec.w, parse_value_list(a3_text),
                                   half_width, grid_n, fake_exponent, {},
                                   g.jobs);

    std::ostringstream csv;
    csv << "A3,a,b,normalized\n";
    for (const auto& s : scan.samples)
        csv << fmt(s.A3) << "," << fmt(s.a) << "," << fmt(s.b) << ","
            << fmt(s.normalized) << "\n";

    ojson decades = ojson::array();
    for (const auto& dsup : scan.decade_sups)
        decades.push_back({{"decade", dsup.decade}, {"sup", dsup.sup}});

    ojson body;
    body["meta"] = meta_block(g, "vdc", spec, ojson::object());
    body["exponent"] = scan.exponent;
    body["overall_sup"] = scan.overall_sup;
    body["decade_sups"] = decades;
    body["growth_flagged"] = scan.growth_flagged;
    emit(g, "vdc", body, csv.str());
    return scan.growth_flagged ? kTolerance : kOk;
}

// ------------------------------------------------------------- singular

int cmd_singular(const Global& g, int angles, int grid_n) {
    const auto spec = io::load_surface(g.surface);
    const int rc = gate(g, spec);
    if (rc != kOk) return rc;

    const auto res = fourier::singular_integral_sup(spec.phi, spec.w, spec.r,
                                                    angles, grid_n, g.jobs);

    ojson body;
    body["meta"] = meta_block(g, "singular", spec,
                              {{"refinement_band", {0.95, 1.05}}});
    body["zeta_angles"] = res.zeta_angles;
    body["grid_n"] = res.grid_n;
    body["sup_value"] = res.sup_value;
    body["argmax_angle"] = res.argmax_angle;
    body["refinement_ratio"] = res.refinement_ratio;
    body["divergence_suspected"] = res.divergence_suspected;
    emit(g, "singular", body);

    const bool ok = !res.divergence_suspected &&
                    res.refinement_ratio >= 0.95 && res.refinement_ratio <= 1.05;
    return ok ? kOk : kTolerance;
}

// ---------------------------------------------------------------- knapp

int cmd_knapp(const Global& g, double q, const std::string& eps_text) {
    const auto spec = io::load_surface(g.surface);
    const int rc = gate(g, spec);
    if (rc != kOk) return rc;
    const double tol = tol_or(g, 0.05);

    const std::vector<double> eps = parse_value_list(eps_text);
    restriction::KnappFit kf;
    bool failed = false;
    std::string error;
    try {
        kf = restriction::knapp_exponent_fit(spec.phi, spec.w, spec.r, q, eps,
                                             {}, g.jobs);
    } catch (const DegenerateFitError& e) {
        failed = true;
        error = e.what();
        kf.fit = e.fit;
        kf.q = q;
        kf.predicted_slope =
            -(spec.w.alpha_sum() + 2.0 * spec.w.m) + spec.w.alpha_sum() / q;
        kf.eps_list = eps;
    }

    std::ostringstream csv;
    csv << "eps,norm\n";
    for (const auto& [le, ln] : kf.fit.points)
        csv << fmt(std::exp(le)) << "," << fmt(std::exp(ln)) << "\n";

    ojson body;
    body["meta"] = meta_block(g, "knapp", spec, {{"slope_tol", tol}});
    body["q"] = q;
    body["predicted_slope"] = kf.predicted_slope;
    body["fitted_slope"] = kf.fit.slope;
    body["r2"] = kf.fit.r_squared;
    body["eps_list"] = kf.eps_list;
    body["eta"] = kf.eta;
    body["s_band"] = {kf.s_band.first, kf.s_band.second};
    if (failed) body["error"] = error;
    emit(g, "knapp", body, csv.str());

    if (failed || std::abs(kf.fit.slope - kf.predicted_slope) > tol)
        return kTolerance;
    return kOk;
}

// ------------------------------------------------------------ exponents

int cmd_exponents(const Global& g) {
    const auto spec = io::load_surface(g.surface);
    const int rc = gate(g, spec);
    if (rc != kOk) return rc;

    const auto table = restriction::critical_exponents(spec.w);
    ojson quad = ojson::array();
    for (const auto& v : table.quadrilateral) quad.push_back({v[0], v[1]});

    ojson body;
    body["meta"] = meta_block(g, "exponents", spec, ojson::object());
    body["restriction_threshold"] = table.restriction_threshold;
    body["quadrilateral"] = quad;
    body["knapp_slope_factor"] = table.knapp_slope_factor;
    // At the threshold the Knapp necessary line passes through 1/q = 1/2.
    body["knapp_line_at_threshold"] =
        table.knapp_slope_factor * (1.0 - table.restriction_threshold);
    emit(g, "exponents", body);
    return kOk;
}

// -------------------------------------------------------------- typeset

int cmd_typeset(const Global& g) {
    const auto spec = io::load_surface(g.surface);
    const int rc = gate(g, spec);
    if (rc != kOk) return rc;

    const auto v = convolution::typeset_vertex(spec.w);
    const double line_gap =
        v.inv_q -
        (v.inv_p - spec.w.alpha_sum() / (spec.w.alpha_sum() + 2.0 * spec.w.m));

    ojson body;
    body["meta"] = meta_block(g, "typeset", spec, ojson::object());
    body["inv_p"] = v.inv_p;
    body["inv_q"] = v.inv_q;
    body["necessary_line_gap"] = line_gap;
    emit(g, "typeset", body);
    return kOk;
}

// ------------------------------------------------------------- convolve

int cmd_convolve(const Global& g, std::vector<double> qs,
                 const std::string& delta_text, int samples, bool probe,
                 double probe_p, double probe_q, const std::string& family,
                 int probe_n) {
    const auto spec = io::load_surface(g.surface);
    const int rc = gate(g, spec);
    if (rc != kOk) return rc;
    const double tol = tol_or(g, 0.1);

    if (probe) {
        const auto fam = family == "gaussian" ? convolution::TestFamily::gaussian
                                              : convolution::TestFamily::box;
        const auto res = convolution::operator_norm_probe(
            spec.phi, spec.w, spec.r, probe_p, probe_q, fam, probe_n, {},
            g.jobs);
        std::ostringstream csv;
        csv << "p,q,family_param,ratio\n";
        for (const auto& s : res.samples)
            csv << fmt(res.p) << "," << fmt(res.q) << "," << fmt(s.param)
                << "," << fmt(s.ratio) << "\n";
        ojson body;
        body["meta"] = meta_block(g, "convolve", spec, ojson::object());
        body["probe"] = {{"p", res.p},
                         {"q", res.q},
                         {"family", family},
                         {"sup_ratio", res.sup_ratio},
                         {"arg_param", res.arg_param},
                         {"growth_suspected", res.growth_suspected}};
        emit(g, "convolve", body, csv.str());
        return kOk;
    }

    const std::vector<double> deltas = parse_value_list(delta_text);
    ojson fits = ojson::array();
    std::ostringstream csv;
    csv << "q,delta,norm,f_norm,a_measure\n";
    bool tol_ok = true;

    for (double q : qs) {
        convolution::BoxFit bf;
        bool failed = false;
        std::string error;
        try {
            bf = convolution::box_lower_bound_fit(spec.phi, spec.w, spec.r, q,
                                                  deltas, {}, g.jobs);
        } catch (const DegenerateFitError& e) {
            failed = true;
            error = e.what();
            bf.fit = e.fit;
            bf.q = q;
            bf.predicted_slope =
                spec.w.alpha_sum() + (spec.w.alpha_sum() + 2.0 * spec.w.m) / q;
        }
        for (std::size_t i = 0; i < bf.norms.size(); ++i)
            csv << fmt(q) << "," << fmt(deltas[i]) << "," << fmt(bf.norms[i])
                << "," << fmt(bf.f_norms[i]) << "," << fmt(bf.a_measures[i])
                << "\n";
        ojson jf;
        jf["q"] = q;
        jf["predicted"] = bf.predicted_slope;
        jf["fitted"] = bf.fit.slope;
        jf["r2"] = bf.fit.r_squared;
        jf["M"] = bf.M;
        if (failed) jf["error"] = error;
        fits.push_back(jf);
        if (failed || std::abs(bf.fit.slope - bf.predicted_slope) > tol)
            tol_ok = false;
    }

    // Pointwise lower bound mu * f_delta >= delta^{a1+a2} |Q| at seeded
    // sample points of A_delta.
    int checked = 0, violations = 0;
    double min_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t di = 0; di < deltas.size(); ++di) {
        const convolution::DeltaBox box(spec.phi, spec.w, spec.r, deltas[di]);
        const double bound = std::pow(deltas[di], spec.w.alpha_sum()) *
                             convolution::patch_measure(spec.w, box);
        Rng rng(mix_seed(g.seed, di));
        for (int k = 0; k < samples; ++k) {
            const double tau = rng.uniform(0.5, 1.0);
            const double s = rng.uniform(box.s_band.first, box.s_band.second);
            const double z1 = rng.uniform(-1.0, 1.0);
            const double z2 = rng.uniform(-1.0, 1.0);
            const auto x =
                convolution::a_delta_sample(spec.phi, spec.w, box, tau, s, z1, z2);
            const double v =
                convolution::convolve_mu_box(spec.phi, spec.w, spec.r, box, x);
            ++checked;
            min_ratio = std::min(min_ratio, v / bound);
            if (v < bound) ++violations;
        }
    }

    ojson body;
    body["meta"] = meta_block(g, "convolve", spec, {{"slope_tol", tol}});
    body["delta_list"] = deltas;
    body["fits"] = fits;
    body["pointwise"] = {{"samples_per_delta", samples},
                         {"checked", checked},
                         {"violations", violations},
                         {"min_ratio", min_ratio}};
    emit(g, "convolve", body, csv.str());
    return (tol_ok && violations == 0) ? kOk : kTolerance;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Decay, restriction, and convolution experiments for "
                 "quasi-homogeneous surface measures"};
    app.require_subcommand(1);
    app.fallthrough();

    Global g;
    app.add_option("--surface", g.surface,
                   "Surface JSON file, or the built-in name 'example5'")
        ->capture_default_str();
    app.add_option("--out", g.out, "Directory for JSON/CSV reports");
    app.add_option("--seed", g.seed, "Seed for randomized sampling")
        ->capture_default_str();
    app.add_option("--jobs", g.jobs, "Worker count (0 = auto)")
        ->capture_default_str();
    app.add_option("--tol", g.tol, "Override the command's fit tolerance");
    app.add_flag("--force", g.force, "Skip the hypothesis gate");

    std::function<int()> runner;

    app.add_subcommand("check", "Verify hypotheses H1-H4")->callback([&] {
        runner = [&g] { return cmd_check(g); };
    });

    {
        auto* c = app.add_subcommand("euler",
                                     "Hessian-determinant identity residual");
        auto zn = std::make_shared<int>(16);
        auto sn = std::make_shared<int>(64);
        c->add_option("--zeta-n", *zn, "Angle count")->capture_default_str();
        c->add_option("--s-n", *sn, "Section grid size")->capture_default_str();
        c->callback([&, zn, sn] {
            runner = [&g, zn, sn] { return cmd_euler(g, *zn, *sn); };
        });
    }

    {
        auto* c = app.add_subcommand("classify",
                                     "Classify section points as (non)elliptic");
        auto n = std::make_shared<int>(256);
        c->add_option("--grid", *n, "Section grid size")->capture_default_str();
        c->callback([&, n] { runner = [&g, n] { return cmd_classify(g, *n); }; });
    }

    {
        auto* c = app.add_subcommand("decay", "Fit |mu^| decay against radius");
        auto dirs = std::make_shared<int>(8);
        auto radii = std::make_shared<std::string>("1e2:1e5:8");
        auto xis = std::make_shared<std::vector<std::string>>();
        auto r2 = std::make_shared<double>(0.98);
        c->add_option("--dirs", *dirs, "Number of xi'' directions")
            ->capture_default_str();
        c->add_option("--radii", *radii, "Radius list (geometric a:b:n)")
            ->capture_default_str();
        c->add_option("--xi-prime", *xis,
                      "xi' samples as x,y (repeatable; default 4 built-ins)");
        c->add_option("--r2-min", *r2, "Minimum fit R^2")->capture_default_str();
        c->callback([&, dirs, radii, xis, r2] {
            runner = [&g, dirs, radii, xis, r2] {
                return cmd_decay(g, *dirs, *radii, *xis, *r2);
            };
        });
    }

    {
        auto* c = app.add_subcommand("vdc",
                                     "Scan the normalized oscillatory bound");
        auto a3 = std::make_shared<std::string>("1e2:1e5:13");
        auto hw = std::make_shared<double>(3.0);
        auto gn = std::make_shared<int>(7);
        auto fake = std::make_shared<double>(-1.0);
        c->add_option("--a3", *a3, "A3 list (geometric a:b:n)")
            ->capture_default_str();
        c->add_option("--grid-half-width", *hw, "Co-scaled (a,b) grid half-width")
            ->capture_default_str();
        c->add_option("--grid-n", *gn, "Co-scaled grid points per axis")
            ->capture_default_str();
        c->add_option("--fake-exponent", *fake,
                      "Replace the theoretical exponent (negative control)");
        c->callback([&, a3, hw, gn, fake] {
            runner = [&g, a3, hw, gn, fake] {
                return cmd_vdc(g, *a3, *hw, *gn, *fake);
            };
        });
    }

    {
        auto* c = app.add_subcommand("singular",
                                     "sup over zeta of int |G|^{-1/gamma}");
        auto ang = std::make_shared<int>(360);
        auto gn = std::make_shared<int>(2048);
        c->add_option("--angles", *ang, "Zeta angle count (>= 360)")
            ->capture_default_str();
        c->add_option("--grid", *gn, "Scan grid size")->capture_default_str();
        c->callback([&, ang, gn] {
            runner = [&g, ang, gn] { return cmd_singular(g, *ang, *gn); };
        });
    }

    {
        auto* c = app.add_subcommand("knapp", "Knapp cap epsilon-scaling fit");
        auto q = std::make_shared<double>(2.0);
        auto eps = std::make_shared<std::string>("2^-3:2^-10");
        c->add_option("--q", *q, "Restriction exponent q")->capture_default_str();
        c->add_option("--eps", *eps, "Epsilon list (2^-a:2^-b or a:b:n)")
            ->capture_default_str();
        c->callback([&, q, eps] {
            runner = [&g, q, eps] { return cmd_knapp(g, *q, *eps); };
        });
    }

    app.add_subcommand("exponents", "Sharp restriction exponent table")
        ->callback([&] { runner = [&g] { return cmd_exponents(g); }; });

    app.add_subcommand("typeset", "Type-set vertex of the convolution operator")
        ->callback([&] { runner = [&g] { return cmd_typeset(g); }; });

    {
        auto* c = app.add_subcommand(
            "convolve", "delta-box lower bounds and operator-norm probes");
        auto qs = std::make_shared<std::vector<double>>(std::vector<double>{1.0, 2.0});
        auto deltas = std::make_shared<std::string>("2^-1:2^-8");
        auto samples = std::make_shared<int>(100);
        auto probe = std::make_shared<bool>(false);
        auto pp = std::make_shared<double>(9.0 / 5.0);
        auto pq = std::make_shared<double>(9.0 / 4.0);
        auto fam = std::make_shared<std::string>("box");
        auto pn = std::make_shared<int>(6);
        c->add_option("--q", *qs, "Norm exponents to fit")->capture_default_str();
        c->add_option("--deltas", *deltas, "Delta list (2^-a:2^-b or a:b:n)")
            ->capture_default_str();
        c->add_option("--samples", *samples, "Pointwise checks per delta")
            ->capture_default_str();
        c->add_flag("--probe", *probe, "Run the operator-norm probe instead");
        c->add_option("--probe-p", *pp, "Probe source exponent p")
            ->capture_default_str();
        c->add_option("--probe-q", *pq, "Probe target exponent q")
            ->capture_default_str();
        c->add_option("--probe-family", *fam, "box or gaussian")
            ->capture_default_str();
        c->add_option("--probe-n", *pn, "Probe family size")
            ->capture_default_str();
        c->callback([&, qs, deltas, samples, probe, pp, pq, fam, pn] {
            runner = [&g, qs, deltas, samples, probe, pp, pq, fam, pn] {
                return cmd_convolve(g, *qs, *deltas, *samples, *probe, *pp, *pq,
                                    *fam, *pn);
            };
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    set_default_jobs(g.jobs);
    try {
        return runner ? runner() : kUsage;
    } catch (const DegenerateFitError& e) {
        std::cerr << "fit failure: " << e.what() << " (slope "
                  << fmt(e.fit.slope) << ", r2 " << fmt(e.fit.r_squared)
                  << ")\n";
        return kTolerance;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    }
}
