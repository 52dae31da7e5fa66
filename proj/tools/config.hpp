#pragma once

// Experiment configuration read from a JSON file. Numbers may be given as JSON
// numbers or as decimal strings ("0.8"); strings are parsed at full precision.
//
//   {
//     "curve": {"K": 1, "c0": "0.8", "harmonics": [[2, "0.1", "0"]],
//               "center": {"rho": 0, "theta": 0}, "resolution": 2048},
//     "orbit": {"x0": 0.3, "Phi0": 0.4, "bounces": 100},
//     "conjugate": {"mode": "random", "orbits": 200, "bounces": 50, "phi_max": 0.95},
//     "cocycle": {"points": 16, "max_window": 256},
//     "mirror": {"bounces": 40, "max_window": 256},
//     "grid": {"nx": 256, "nphi": 64},
//     "tolerances": {"santalo_rel": 1e-3, "mirror": 1e-6},
//     "seed": 1, "threads": 1, "out": "out"
//   }

#include "curvbill/integralgeom.hpp"

#include <json.hpp>

#include <cstdint>
#include <string>

namespace curvbill::cli {

struct OrbitParams {
    double x0 = 0.0;
    double Phi0 = 0.0;
    int bounces = 100;
};

struct ConjugateParams {
    std::string mode = "random";  // "random" or "grid"
    int orbits = 200;             // random mode
    int nx = 20;                  // grid mode
    int nPhi = 10;
    int bounces = 50;
    double phi_max = 0.95;
};

struct CocycleParams {
    int points = 16;
    int max_window = 256;
};

struct MirrorParams {
    int bounces = 40;
    int max_window = 256;
};

struct Tolerances {
    double santalo_rel = 1e-3;
    double mirror = 1e-6;
};

struct ExperimentConfig {
    CurveSpec curve = CurveSpec::circle(Curvature::Sphere, 0.7);
    int resolution = BoundaryCurve::kDefaultResolution;
    OrbitParams orbit;
    ConjugateParams conjugate;
    CocycleParams cocycle;
    MirrorParams mirror;
    PhaseGrid grid;
    Tolerances tolerances;
    std::uint64_t seed = 1;
    int threads = 1;
    std::string out = "out";
};

/// Throws ValidationError with the offending field path in the message.
ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::string& path);

/// Canonical JSON of the effective configuration (after command-line overrides).
nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

/// 64-bit FNV-1a of the canonical JSON, as 16 hex digits.
std::string config_hash(const ExperimentConfig& cfg);

}  // namespace curvbill::cli
