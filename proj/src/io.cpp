#include "oscdecay/io.hpp"

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace oscdecay::io {

namespace {

using nlohmann::json;

std::string shortest_repr(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double real_field(const json& j, const std::string& field) {
    if (!j.contains(field))
        throw std::runtime_error("surface file: missing field '" + field + "'");
    const json& v = j.at(field);
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        try {
            return parse_rational(v.get<std::string>());
        } catch (const std::exception& e) {
            throw std::runtime_error("surface file: field '" + field +
                                     "': " + e.what());
        }
    }
    throw std::runtime_error("surface file: field '" + field +
                             "' must be a number or \"p/q\" string");
}

std::vector<Monomial> monomial_array(const json& j, const std::string& field) {
    if (!j.contains(field) || !j.at(field).is_array())
        throw std::runtime_error("surface file: '" + field +
                                 "' must be an array of monomials");
    std::vector<Monomial> out;
    for (const json& term : j.at(field)) {
        Monomial mono;
        if (!term.contains("i") || !term.contains("j"))
            throw std::runtime_error("surface file: monomial in '" + field +
                                     "' lacks i/j exponents");
        mono.i = term.at("i").get<int>();
        mono.j = term.at("j").get<int>();
        mono.coeff = real_field(term, "coeff");
        out.push_back(mono);
    }
    return out;
}

} // namespace

double parse_rational(const std::string& text) {
    const auto slash = text.find('/');
    try {
        if (slash == std::string::npos) {
            std::size_t used = 0;
            const double v = std::stod(text, &used);
            if (used != text.size())
                throw std::invalid_argument("trailing characters");
            return v;
        }
        std::size_t pu = 0, qu = 0;
        const std::string ps = text.substr(0, slash);
        const std::string qs = text.substr(slash + 1);
        const double p = std::stod(ps, &pu);
        const double q = std::stod(qs, &qu);
        if (pu != ps.size() || qu != qs.size())
            throw std::invalid_argument("trailing characters");
        if (q == 0.0) throw std::invalid_argument("zero denominator");
        return p / q;
    } catch (const std::exception&) {
        throw std::invalid_argument("cannot parse rational '" + text + "'");
    }
}

SurfaceSpec load_surface(const std::string& path_or_name) {
    if (path_or_name == "example5") return example5();

    std::ifstream in(path_or_name);
    if (!in)
        throw std::runtime_error("cannot open surface file '" + path_or_name +
                                 "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error("surface file '" + path_or_name +
                                 "': " + e.what());
    }

    const Weights w(real_field(j, "alpha1"), real_field(j, "alpha2"),
                    real_field(j, "m"));
    if (!j.contains("region"))
        throw std::runtime_error("surface file: missing field 'region'");
    const json& reg = j.at("region");
    const SectorRegion r(real_field(reg, "c"), real_field(reg, "d"));
    SurfaceMap phi{BivariatePolynomial(monomial_array(j, "phi1")),
                   BivariatePolynomial(monomial_array(j, "phi2"))};

    SurfaceSpec spec{std::move(phi), w, r,
                     std::filesystem::path(path_or_name).stem().string(), ""};
    spec.hash = fnv1a_hex(canonical_form(spec));
    return spec;
}

SurfaceSpec example5() {
    SurfaceMap phi{
        BivariatePolynomial({{12, 0, -1.0 / 33.0}, {0, 6, 1.0 / 30.0}}),
        BivariatePolynomial(
            {{12, 0, -1.0 / 44.0}, {0, 6, 1.0 / 30.0}, {6, 3, 1.0 / 18.0}})};
    const Weights w(0.5, 1.0, 6.0);
    const SectorRegion r(97.0 / 99.0, 1.0);
    SurfaceSpec spec{std::move(phi), w, r, "example5", ""};
    spec.hash = fnv1a_hex(canonical_form(spec));
    return spec;
}

std::string canonical_form(const SurfaceSpec& spec) {
    std::ostringstream os;
    os << "alpha1=" << shortest_repr(spec.w.alpha1)
       << ";alpha2=" << shortest_repr(spec.w.alpha2)
       << ";m=" << shortest_repr(spec.w.m);
    auto poly = [&](const char* key, const BivariatePolynomial& p) {
        os << ";" << key << "=";
        bool first = true;
        for (const Monomial& t : p.terms()) {
            if (!first) os << "|";
            first = false;
            os << t.i << "," << t.j << "," << shortest_repr(t.coeff);
        }
    };
    poly("phi1", spec.phi.phi1);
    poly("phi2", spec.phi.phi2);
    os << ";region=" << shortest_repr(spec.r.c) << ","
       << shortest_repr(spec.r.d);
    return os.str();
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char b : bytes) {
        h ^= b;
        h *= 0x100000001b3ull;
    }
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[i] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

} // namespace oscdecay::io
