#include "config.hpp"

#include "curvbill/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <set>

namespace curvbill::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ValidationError(field + ": " + what);
}

double number(const json& v, const std::string& field) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const std::string& s = v.get_ref<const std::string&>();
        double out = 0.0;
        const char* begin = s.data();
        const char* end = s.data() + s.size();
        if (begin != end && *begin == '+') ++begin;
        const auto [ptr, ec] = std::from_chars(begin, end, out);
        if (ec != std::errc() || ptr != end) fail(field, "'" + s + "' is not a decimal number");
        return out;
    }
    fail(field, "expected a number or decimal string");
}

double finite(const json& v, const std::string& field) {
    const double x = number(v, field);
    if (!std::isfinite(x)) fail(field, "must be finite");
    return x;
}

int integer(const json& v, const std::string& field, int lo, int hi = std::numeric_limits<int>::max()) {
    const double x = number(v, field);
    if (!(x == std::floor(x)) || x < lo || x > hi)
        fail(field, "expected an integer in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return static_cast<int>(x);
}

double positive(const json& v, const std::string& field) {
    const double x = finite(v, field);
    if (!(x > 0.0)) fail(field, "must be positive");
    return x;
}

const json* member(const json& obj, const char* key) {
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

void check_keys(const json& obj, const std::string& field, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) fail(field, "expected an object");
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& [k, _] : obj.items())
        if (!keys.count(k)) fail(field.empty() ? k : field + "." + k, "unknown field");
}

SurfacePoint parse_center(const json& v, Curvature tag) {
    try {
        if (v.is_array()) {
            if (v.size() != 3) fail("curve.center", "expected [x, y, z]");
            const Vec3 p(finite(v[0], "curve.center[0]"), finite(v[1], "curve.center[1]"),
                         finite(v[2], "curve.center[2]"));
            return SurfacePoint(p, tag);
        }
        check_keys(v, "curve.center", {"rho", "theta"});
        const json* rho = member(v, "rho");
        const json* theta = member(v, "theta");
        const double r = rho ? finite(*rho, "curve.center.rho") : 0.0;
        if (r < 0.0) fail("curve.center.rho", "must be non-negative");
        return SurfacePoint::from_polar(tag, r, theta ? finite(*theta, "curve.center.theta") : 0.0);
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        if (msg.rfind("curve.center", 0) == 0) throw;
        fail("curve.center", msg);
    }
}

void parse_curve(const json& c, ExperimentConfig& cfg) {
    check_keys(c, "curve", {"K", "c0", "harmonics", "center", "resolution"});
    const json* K = member(c, "K");
    if (!K) fail("curve.K", "missing");
    const int k = integer(*K, "curve.K", -1, 1);
    const Curvature tag = curvature_from_int(k);

    const json* c0 = member(c, "c0");
    if (!c0) fail("curve.c0", "missing");
    const double radius = finite(*c0, "curve.c0");
    if (!(radius > 0.0)) fail("curve.c0", "radius must be positive");

    CurveSpec spec = CurveSpec::circle(tag, radius);
    if (const json* ctr = member(c, "center")) spec.center = parse_center(*ctr, tag);
    if (const json* hs = member(c, "harmonics")) {
        if (!hs->is_array()) fail("curve.harmonics", "expected a list of [m, a, b]");
        for (std::size_t i = 0; i < hs->size(); ++i) {
            const std::string f = "curve.harmonics[" + std::to_string(i) + "]";
            const json& h = (*hs)[i];
            if (!h.is_array() || h.size() != 3) fail(f, "expected [m, a, b]");
            spec.harmonics.push_back({integer(h[0], f + ".m", 1, 4096), finite(h[1], f + ".a"), finite(h[2], f + ".b")});
        }
    }
    if (const json* r = member(c, "resolution")) cfg.resolution = integer(*r, "curve.resolution", 16, 1 << 20);
    try {
        spec.validate();
    } catch (const ValidationError& e) {
        const std::string msg = e.what();
        if (msg.rfind("curve.", 0) == 0) throw;
        fail("curve", msg);
    }
    cfg.curve = std::move(spec);
}

}  // namespace

ExperimentConfig parse_config(const json& j) {
    check_keys(j, "", {"curve", "orbit", "conjugate", "cocycle", "mirror", "grid", "tolerances", "seed", "threads", "out"});
    ExperimentConfig cfg;
    const json* curve = member(j, "curve");
    if (!curve) fail("curve", "missing");
    parse_curve(*curve, cfg);

    if (const json* o = member(j, "orbit")) {
        check_keys(*o, "orbit", {"x0", "Phi0", "bounces"});
        if (const json* v = member(*o, "x0")) cfg.orbit.x0 = finite(*v, "orbit.x0");
        if (const json* v = member(*o, "Phi0")) {
            cfg.orbit.Phi0 = finite(*v, "orbit.Phi0");
            if (!(std::abs(cfg.orbit.Phi0) < 1.0)) fail("orbit.Phi0", "must lie in (-1, 1)");
        }
        if (const json* v = member(*o, "bounces")) cfg.orbit.bounces = integer(*v, "orbit.bounces", 1, 10000000);
    }
    if (const json* o = member(j, "conjugate")) {
        check_keys(*o, "conjugate", {"mode", "orbits", "nx", "nPhi", "bounces", "phi_max"});
        if (const json* v = member(*o, "mode")) {
            if (!v->is_string() || (*v != "random" && *v != "grid")) fail("conjugate.mode", "expected \"random\" or \"grid\"");
            cfg.conjugate.mode = v->get<std::string>();
        }
        if (const json* v = member(*o, "orbits")) cfg.conjugate.orbits = integer(*v, "conjugate.orbits", 1);
        if (const json* v = member(*o, "nx")) cfg.conjugate.nx = integer(*v, "conjugate.nx", 1);
        if (const json* v = member(*o, "nPhi")) cfg.conjugate.nPhi = integer(*v, "conjugate.nPhi", 1);
        if (const json* v = member(*o, "bounces")) cfg.conjugate.bounces = integer(*v, "conjugate.bounces", 2, 100000);
        if (const json* v = member(*o, "phi_max")) {
            cfg.conjugate.phi_max = positive(*v, "conjugate.phi_max");
            if (!(cfg.conjugate.phi_max < 1.0 - kGrazingEps)) fail("conjugate.phi_max", "must be below 1 - 1e-6");
        }
    }
    if (const json* o = member(j, "cocycle")) {
        check_keys(*o, "cocycle", {"points", "max_window"});
        if (const json* v = member(*o, "points")) cfg.cocycle.points = integer(*v, "cocycle.points", 1, 1000000);
        if (const json* v = member(*o, "max_window")) cfg.cocycle.max_window = integer(*v, "cocycle.max_window", 4, 1 << 22);
    }
    if (const json* o = member(j, "mirror")) {
        check_keys(*o, "mirror", {"bounces", "max_window"});
        if (const json* v = member(*o, "bounces")) cfg.mirror.bounces = integer(*v, "mirror.bounces", 2, 1000000);
        if (const json* v = member(*o, "max_window")) cfg.mirror.max_window = integer(*v, "mirror.max_window", 4, 1 << 22);
    }
    if (const json* o = member(j, "grid")) {
        check_keys(*o, "grid", {"nx", "nphi"});
        if (const json* v = member(*o, "nx")) cfg.grid.nx = integer(*v, "grid.nx", 16, 1 << 20);
        if (const json* v = member(*o, "nphi")) cfg.grid.nphi = integer(*v, "grid.nphi", 16, 1 << 16);
    }
    if (const json* o = member(j, "tolerances")) {
        check_keys(*o, "tolerances", {"santalo_rel", "mirror"});
        if (const json* v = member(*o, "santalo_rel")) cfg.tolerances.santalo_rel = positive(*v, "tolerances.santalo_rel");
        if (const json* v = member(*o, "mirror")) cfg.tolerances.mirror = positive(*v, "tolerances.mirror");
    }
    if (const json* v = member(j, "seed")) {
        if (v->is_number_unsigned()) cfg.seed = v->get<std::uint64_t>();
        else if (v->is_string()) {
            const std::string& s = v->get_ref<const std::string&>();
            const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), cfg.seed);
            if (ec != std::errc() || ptr != s.data() + s.size()) fail("seed", "expected an unsigned 64-bit integer");
        } else fail("seed", "expected an unsigned 64-bit integer");
    }
    if (const json* v = member(j, "threads")) cfg.threads = integer(*v, "threads", 1, 1024);
    if (const json* v = member(j, "out")) {
        if (!v->is_string() || v->get<std::string>().empty()) fail("out", "expected a directory path");
        cfg.out = v->get<std::string>();
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("config: cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ValidationError(std::string("config: malformed JSON: ") + e.what());
    }
    return parse_config(j);
}

nlohmann::ordered_json to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    const Vec3& ctr = cfg.curve.center.coords();
    j["curve"]["K"] = sign(cfg.curve.tag);
    j["curve"]["c0"] = cfg.curve.c0;
    j["curve"]["center"] = {ctr.x(), ctr.y(), ctr.z()};
    j["curve"]["harmonics"] = nlohmann::ordered_json::array();
    for (const Harmonic& h : cfg.curve.harmonics) j["curve"]["harmonics"].push_back({h.m, h.a, h.b});
    j["curve"]["resolution"] = cfg.resolution;
    j["orbit"] = {{"x0", cfg.orbit.x0}, {"Phi0", cfg.orbit.Phi0}, {"bounces", cfg.orbit.bounces}};
    j["conjugate"] = {{"mode", cfg.conjugate.mode}, {"orbits", cfg.conjugate.orbits}, {"nx", cfg.conjugate.nx},
                      {"nPhi", cfg.conjugate.nPhi}, {"bounces", cfg.conjugate.bounces},
                      {"phi_max", cfg.conjugate.phi_max}};
    j["cocycle"] = {{"points", cfg.cocycle.points}, {"max_window", cfg.cocycle.max_window}};
    j["mirror"] = {{"bounces", cfg.mirror.bounces}, {"max_window", cfg.mirror.max_window}};
    j["grid"] = {{"nx", cfg.grid.nx}, {"nphi", cfg.grid.nphi}};
    j["tolerances"] = {{"santalo_rel", cfg.tolerances.santalo_rel}, {"mirror", cfg.tolerances.mirror}};
    j["seed"] = cfg.seed;
    return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : to_json(cfg).dump()) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace curvbill::cli
