#include "commands.hpp"

#include "curvbill/errors.hpp"
#include "curvbill/mirror.hpp"
#include "curvbill/variational.hpp"
#include "suite.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <thread>

namespace curvbill::cli {

namespace {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::string g17(double v) {
    if (std::isnan(v)) return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class Csv {
public:
    Csv(const fs::path& path, const std::string& header) : out_(path, std::ios::binary) {
        if (!out_) throw ValidationError("out: cannot write " + path.string());
        out_ << header << '\n';
    }

    template <typename... Ts>
    void row(const Ts&... cells) {
        bool first = true;
        ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
        out_ << '\n';
    }

private:
    static std::string cell(double v) { return g17(v); }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(const std::string& v) { return v; }
    static std::string cell(const char* v) { return v; }

    std::ofstream out_;
};

void write_json(const fs::path& path, const ojson& j) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("out: cannot write " + path.string());
    out << j.dump(2) << '\n';
}

// Runs fn(i) for i in [0, n) on `threads` workers; results go to slots owned
// by i, so output order never depends on scheduling.
void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    const int workers = std::clamp(threads, 1, std::max(1, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int i = w; i < n; i += workers) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

ojson report_header(const std::string& sub, const ExperimentConfig& cfg) {
    ojson j;
    j["tool"] = "curvbill";
    j["version"] = kVersion;
    j["subcommand"] = sub;
    j["config_hash"] = config_hash(cfg);
    j["config"] = to_json(cfg);
    return j;
}

int cmd_curve(const ExperimentConfig& cfg, const BoundaryCurve& c, std::ostream& log) {
    Csv csv(fs::path(cfg.out) / "curve.csv", "i,theta,s,k,speed,X,Y,Z");
    const auto& samples = c.samples();
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const CurveSample& s = samples[i];
        csv.row(static_cast<int>(i), s.theta, s.s, s.k, s.speed, s.point.x(), s.point.y(), s.point.z());
    }
    const BoundaryCurve fine = build_curve(cfg.curve, 2 * c.resolution());
    ojson r = report_header("curve", cfg);
    r["perimeter"] = c.perimeter();
    r["area"] = c.area();
    r["min_k"] = c.min_curvature();
    r["max_k"] = c.max_curvature();
    r["gauss_bonnet_residual"] = gauss_bonnet_residual(c);
    r["isoperimetric_deficit"] = isoperimetric_deficit(c);
    r["deltas"] = {{"perimeter", fine.perimeter() - c.perimeter()},
                   {"area", fine.area() - c.area()},
                   {"gauss_bonnet_residual", gauss_bonnet_residual(fine) - gauss_bonnet_residual(c)}};
    write_json(fs::path(cfg.out) / "report.json", r);
    log << "curve: P = " << g17(c.perimeter()) << ", A = " << g17(c.area()) << ", k in [" << c.min_curvature()
        << ", " << c.max_curvature() << "], Gauss-Bonnet residual " << gauss_bonnet_residual(c) << '\n';
    return 0;
}

int cmd_orbit(const ExperimentConfig& cfg, const BoundaryCurve& c, std::ostream& log) {
    const Configuration orb = orbit(c, {cfg.orbit.x0, cfg.orbit.Phi0}, cfg.orbit.bounces);
    Csv csv(fs::path(cfg.out) / "orbit.csv", "n,x,Phi,L,phi,psi,L11,L12,L22");
    for (std::size_t n = 0; n < orb.chords.size(); ++n) {
        const ChordData& ch = orb.chords[n];
        csv.row(static_cast<int>(n), orb.points[n].x, orb.points[n].Phi, ch.L, ch.phi, ch.psi, ch.L11, ch.L12, ch.L22);
    }
    ojson r = report_header("orbit", cfg);
    r["bounces"] = orb.bounces();
    r["final"] = {{"x", orb.points.back().x}, {"Phi", orb.points.back().Phi}};
    r["reflection_law_residual"] = reflection_law_residual(orb);
    r["euler_lagrange_residual"] = euler_lagrange_residual(orb);
    r["deltas"] = ojson::object();
    write_json(fs::path(cfg.out) / "report.json", r);
    log << "orbit: " << orb.bounces() << " bounces, Euler-Lagrange residual " << euler_lagrange_residual(orb) << '\n';
    return 0;
}

int cmd_conjugate(const ExperimentConfig& cfg, const BoundaryCurve& c, std::ostream& log) {
    const ConjugateParams& p = cfg.conjugate;
    std::vector<PhasePoint> starts;
    if (p.mode == "grid") {
        for (int i = 0; i < p.nx; ++i)
            for (int j = 0; j < p.nPhi; ++j)
                starts.push_back({c.perimeter() * i / p.nx, p.nPhi == 1 ? 0.0 : -p.phi_max + 2.0 * p.phi_max * j / (p.nPhi - 1)});
    } else {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> ux(0.0, c.perimeter());
        std::uniform_real_distribution<double> uP(-p.phi_max, p.phi_max);
        for (int i = 0; i < p.orbits; ++i) {
            const double x = ux(rng);
            starts.push_back({x, uP(rng)});
        }
    }

    struct Row {
        std::optional<ConjugatePair> pair;
        Definiteness kind;
    };
    std::vector<Row> rows(starts.size());
    parallel_for(static_cast<int>(starts.size()), cfg.threads, [&](int i) {
        const Configuration orb = orbit(c, starts[i], p.bounces);
        const JacobiSegment seg = jacobi_coefficients(orb, 0, p.bounces);
        rows[i] = {conjugate_point_test(seg), second_variation_definiteness(seg).kind};
    });

    Csv csv(fs::path(cfg.out) / "conjugate.csv", "orbit_id,x0,Phi0,window,verdict,i,k,definiteness");
    int found = 0;
    int mismatches = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const Row& r = rows[i];
        if (r.pair) ++found;
        if (r.pair.has_value() == (r.kind == Definiteness::NegativeDefinite)) ++mismatches;
        csv.row(static_cast<int>(i), starts[i].x, starts[i].Phi, p.bounces, r.pair ? "conjugate" : "none",
                r.pair ? std::to_string(r.pair->i) : std::string(), r.pair ? std::to_string(r.pair->k) : std::string(),
                to_string(r.kind));
    }
    ojson r = report_header("conjugate", cfg);
    r["orbits"] = rows.size();
    r["conjugate_verdicts"] = found;
    r["definiteness_mismatches"] = mismatches;
    r["deltas"] = ojson::object();
    write_json(fs::path(cfg.out) / "report.json", r);
    log << "conjugate: " << found << " of " << rows.size() << " orbits with conjugate points, " << mismatches
        << " definiteness mismatches\n";
    return 0;
}

int cmd_cocycle(const ExperimentConfig& cfg, const BoundaryCurve& c, std::ostream& log) {
    const int n = cfg.cocycle.points;
    const int W = cfg.cocycle.max_window;
    const Configuration orb = orbit(c, {cfg.orbit.x0, cfg.orbit.Phi0}, n + W);
    std::vector<CocycleEstimate> est(static_cast<std::size_t>(n));
    parallel_for(n, cfg.threads, [&](int i) { est[i] = hopf_cocycle(orb, i, W); });

    Csv csv(fs::path(cfg.out) / "cocycle.csv", "n,x,Phi,nu1,window,status,slope");
    int converged = 0;
    ojson hist = ojson::array();
    for (int i = 0; i < n; ++i) {
        const CocycleEstimate& e = est[i];
        const ChordData& ch = orb.chords[i];
        const double slope = e.converged ? -(ch.L11 + ch.L12 * e.nu1) : std::nan("");
        converged += e.converged ? 1 : 0;
        csv.row(i, orb.points[i].x, orb.points[i].Phi, e.nu1, e.window, to_string(e.status), slope);
        ojson h = ojson::array();
        for (const auto& [N, v] : e.history) h.push_back({N, v});
        hist.push_back(h);
    }
    ojson r = report_header("cocycle", cfg);
    r["points"] = n;
    r["converged"] = converged;
    r["history"] = hist;
    ojson deltas = ojson::array();
    for (const CocycleEstimate& e : est) {
        const auto& h = e.history;
        deltas.push_back(h.size() >= 2 ? h.back().second - h[h.size() - 2].second : std::nan(""));
    }
    r["deltas"] = {{"nu1_last_doubling", deltas}};
    write_json(fs::path(cfg.out) / "report.json", r);
    log << "cocycle: " << converged << " of " << n << " estimates converged\n";
    return 0;
}

int cmd_mirror(const ExperimentConfig& cfg, const BoundaryCurve& c, std::ostream& log) {
    const int n = cfg.mirror.bounces;
    const int W = cfg.mirror.max_window;
    Configuration orb = orbit(c, {cfg.orbit.x0, cfg.orbit.Phi0}, n + W);
    std::vector<std::optional<double>> nu(static_cast<std::size_t>(n));
    std::vector<CocycleEstimate> est(static_cast<std::size_t>(n));
    parallel_for(n, cfg.threads, [&](int i) { est[i] = hopf_cocycle(orb, i, W); });
    for (int i = 0; i < n; ++i)
        if (est[i].converged) nu[i] = est[i].nu1;
    orb.chords.resize(static_cast<std::size_t>(n));
    orb.points.resize(static_cast<std::size_t>(n) + 1);
    const std::vector<MirrorSample> res = mirror_residual(c, orb, nu);

    Csv csv(fs::path(cfg.out) / "mirror.csv", "bounce,a,L,residual");
    double worst = 0.0;
    int defined = 0;
    for (const MirrorSample& s : res) {
        csv.row(s.bounce, s.a, s.L, s.residual ? *s.residual : std::nan(""));
        if (s.residual) {
            worst = std::max(worst, std::abs(*s.residual));
            ++defined;
        }
    }
    ojson r = report_header("mirror", cfg);
    r["bounces"] = n;
    r["defined_residuals"] = defined;
    r["max_abs_residual"] = worst;
    r["within_tolerance"] = defined > 0 && worst <= cfg.tolerances.mirror;
    r["deltas"] = ojson::object();
    write_json(fs::path(cfg.out) / "report.json", r);
    log << "mirror: " << defined << " residuals, max |residual| " << worst << '\n';
    return 0;
}

int cmd_santalo(const ExperimentConfig& cfg, const BoundaryCurve& c, std::ostream& log) {
    const double lhs = phase_average_length(c, cfg.grid, cfg.threads);
    const double fine = phase_average_length(c, cfg.grid.doubled(), cfg.threads);
    const double rhs = kTwoPi * c.area();
    ojson r = report_header("santalo", cfg);
    r["lhs"] = lhs;
    r["rhs"] = rhs;
    r["relative_residual"] = (lhs - rhs) / rhs;
    r["within_tolerance"] = std::abs(lhs - rhs) <= cfg.tolerances.santalo_rel * rhs;
    r["deltas"] = {{"lhs_grid_doubling", fine - lhs}};
    write_json(fs::path(cfg.out) / "report.json", r);
    log << "santalo: integral of L dmu = " << g17(lhs) << ", 2 pi A = " << g17(rhs) << ", relative residual "
        << (lhs - rhs) / rhs << '\n';
    return 0;
}

int cmd_audit(const ExperimentConfig& cfg, const BoundaryCurve& c, std::ostream& log) {
    const AuditReport a = rigidity_audit(c, cfg.grid, cfg.threads);
    ojson r = report_header("audit", cfg);
    r["tag"] = to_string(a.tag);
    r["verdict"] = to_string(a.verdict);
    r["diagnostic"] = a.diagnostic;
    r["P"] = a.P;
    r["A"] = a.A;
    r["min_k"] = a.min_k;
    r["max_k"] = a.max_k;
    r["santalo_lhs"] = a.santalo_lhs;
    r["santalo_rhs"] = a.santalo_rhs;
    r["santalo_rel"] = a.santalo_rel;
    auto num = [](double v) { return std::isnan(v) ? ojson(nullptr) : ojson(v); };
    r["rigidity_I"] = num(a.rigidity_I);
    r["rigidity_gap"] = num(a.rigidity_gap);
    r["iso_deficit"] = a.iso_deficit;
    r["gb_residual"] = a.gb_residual;
    r["horocycle_ok"] = a.horocycle_ok;
    r["area_bound"] = num(a.area_bound);
    r["area_bound_slack"] = num(a.area_bound_slack);
    r["cauchy_schwarz_slack"] = num(a.cauchy_schwarz_slack);
    r["deltas"] = {{"santalo_lhs", a.santalo_delta}, {"rigidity_I", num(a.rigidity_delta)},
                   {"area", a.area_delta}, {"perimeter", a.perimeter_delta}};
    write_json(fs::path(cfg.out) / "audit.json", r);

    Csv csv(fs::path(cfg.out) / "audit.csv",
            "config_hash,K,verdict,P,A,santalo_lhs,santalo_rhs,rigidity_I,iso_deficit,gb_residual,horocycle_ok");
    csv.row(config_hash(cfg), sign(a.tag), to_string(a.verdict), a.P, a.A, a.santalo_lhs, a.santalo_rhs, a.rigidity_I,
            a.iso_deficit, a.gb_residual, a.horocycle_ok ? "true" : "false");
    log << "audit: " << to_string(a.verdict);
    if (!std::isnan(a.rigidity_gap)) log << ", I - 2 pi = " << a.rigidity_gap;
    if (!a.diagnostic.empty()) log << " (" << a.diagnostic << ")";
    log << '\n';
    return 0;
}

int cmd_selftest(const ExperimentConfig& cfg, std::ostream& log) {
    acceptance::Options opts;
    opts.seed = cfg.seed;
    opts.threads = cfg.threads;
    const auto results = acceptance::run_all(opts, log);
    ojson r = report_header("selftest", cfg);
    ojson list = ojson::array();
    int failed = 0;
    for (const auto& c : results) {
        failed += c.pass ? 0 : 1;
        list.push_back({{"id", c.id}, {"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    r["criteria"] = list;
    r["deltas"] = ojson::object();
    write_json(fs::path(cfg.out) / "selftest.json", r);
    log << (results.size() - failed) << "/" << results.size() << " criteria passed\n";
    return failed == 0 ? 0 : 1;
}

}  // namespace

int run(const std::string& sub, const ExperimentConfig& cfg, std::ostream& log) {
    static const char* known[] = {"curve", "orbit", "conjugate", "cocycle", "mirror", "santalo", "audit", "selftest"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) { return sub == k; }) == std::end(known))
        throw ValidationError("unknown subcommand '" + sub + "'");

    std::error_code ec;
    fs::create_directories(cfg.out, ec);
    if (ec) throw ValidationError("out: cannot create directory '" + cfg.out + "': " + ec.message());

    if (sub == "selftest") return cmd_selftest(cfg, log);

    const BoundaryCurve c = build_curve(cfg.curve, cfg.resolution);
    if (sub == "curve") return cmd_curve(cfg, c, log);
    if (sub == "orbit") return cmd_orbit(cfg, c, log);
    if (sub == "conjugate") return cmd_conjugate(cfg, c, log);
    if (sub == "cocycle") return cmd_cocycle(cfg, c, log);
    if (sub == "mirror") return cmd_mirror(cfg, c, log);
    if (sub == "santalo") return cmd_santalo(cfg, c, log);
    return cmd_audit(cfg, c, log);
}

}  // namespace curvbill::cli
