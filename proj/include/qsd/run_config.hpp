#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsd/entropy.hpp"
#include "qsd/reduction.hpp"
#include "qsd/sde_system.hpp"

namespace qsd {

struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Everything a run needs, filled from CLI flags (and an optional config
// file). Outputs are deterministic functions of this struct.
struct RunConfig {
    std::string model = "raising-lowering";  // raising-lowering | weighted:<g> | pure-z[:<g>] | pure-theta
    std::string frame;                       // xyz | xz | z | theta; default chosen from the model
    double dt = 1e-3;
    long long steps = 10000;
    uint64_t seed = 1;
    int n_traj = 1;
    std::vector<double> init;  // sized to the integration frame; defaults per frame
    std::string out = "out.csv";
    int stride = 1;
    int workers = 1;
    double f0 = 2.0;  // constraint level for the xz frame reconstruction
    bool entropy = false;
};

enum class ModelKind { raising_lowering, weighted, pure_z, pure_theta };

struct ModelSpec {
    ModelKind kind;
    double gamma = 0;
};
ModelSpec parse_model(const std::string& s);  // throws ConfigError

// A configured model, ready to integrate: the system, the optional reduction
// bookkeeping, the output projection (e.g. the z column of a 3-d run) and the
// entropy method valid in this frame.
struct BuiltModel {
    SdeSystem system;
    std::optional<ReductionMap> map;
    std::vector<std::string> columns;                // output coordinate names
    std::function<VecN(const VecN&)> output;         // state -> output coords
    VecN init;                                       // validated initial point
    bool entropy_available = false;
    EntropyMethod entropy_method = EntropyMethod::general;
    const EntropyClosures* closures = nullptr;
};

BuiltModel build_model(const RunConfig& cfg);  // throws ConfigError

}  // namespace qsd
