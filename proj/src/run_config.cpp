#include "qsd/run_config.hpp"

#include <cmath>

#include "qsd/lindblad.hpp"

namespace qsd {

ModelSpec parse_model(const std::string& s) {
    auto parse_gamma = [&](size_t colon) {
        try {
            size_t used = 0;
            const double g = std::stod(s.substr(colon + 1), &used);
            if (used != s.size() - colon - 1) throw std::invalid_argument("trailing");
            return g;
        } catch (const std::exception&) {
            throw ConfigError("model '" + s + "': expected a number after ':'");
        }
    };

    if (s == "raising-lowering") return {ModelKind::raising_lowering, 0.0};
    if (s == "pure-theta") return {ModelKind::pure_theta, 0.0};
    if (s == "pure-z") return {ModelKind::pure_z, 0.0};
    if (s.rfind("pure-z:", 0) == 0) return {ModelKind::pure_z, parse_gamma(6)};
    if (s.rfind("weighted:", 0) == 0) return {ModelKind::weighted, parse_gamma(8)};
    throw ConfigError("unknown model '" + s +
                      "' (expected raising-lowering, weighted:<gamma>, pure-z[:<gamma>], "
                      "pure-theta)");
}

namespace {

std::string default_frame(ModelKind kind) {
    switch (kind) {
        case ModelKind::raising_lowering:
        case ModelKind::weighted:
            return "xyz";
        case ModelKind::pure_z:
            return "z";
        case ModelKind::pure_theta:
            return "theta";
    }
    return "xyz";
}

VecN default_init(const std::string& frame) {
    if (frame == "xyz") return {0.5, 0.5, 0.5};
    if (frame == "xz") return {0.5, 0.5};
    if (frame == "z") return {0.5};
    return {std::acos(0.5)};  // theta
}

VecN to_vec(const std::vector<double>& v) {
    VecN out = VecN::zeros(static_cast<int>(v.size()));
    for (size_t i = 0; i < v.size(); ++i) out[i] = v[i];
    return out;
}

}  // namespace

BuiltModel build_model(const RunConfig& cfg) {
    const ModelSpec spec = parse_model(cfg.model);
    const std::string frame = cfg.frame.empty() ? default_frame(spec.kind) : cfg.frame;

    if (cfg.dt <= 0) throw ConfigError("dt must be > 0");
    if (cfg.steps < 1) throw ConfigError("steps must be >= 1");
    if (cfg.stride < 1) throw ConfigError("stride must be >= 1");
    if (cfg.n_traj < 1) throw ConfigError("ntraj must be >= 1");
    if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
    if ((spec.kind == ModelKind::weighted || spec.kind == ModelKind::pure_z) &&
        std::abs(spec.gamma) >= 2.0)
        throw ConfigError("|gamma| must be < 2");

    BuiltModel built;

    const bool three_d =
        spec.kind == ModelKind::raising_lowering || spec.kind == ModelKind::weighted;

    if (frame == "xyz" || (frame == "z" && three_d)) {
        if (!three_d) throw ConfigError("frame '" + frame + "' needs a 3-d model");
        built.system = spec.kind == ModelKind::weighted
                           ? build_bloch_sde(weighted_thermal_ops(spec.gamma))
                           : build_bloch_sde(raising_lowering_ops());
        if (frame == "xyz") {
            built.columns = {"x", "y", "z"};
            built.output = [](const VecN& x) { return x; };
        } else {
            built.columns = {"z"};
            built.output = [](const VecN& x) { return VecN{x[2]}; };
        }
        built.entropy_available = false;  // the 3-d diffusion matrix is singular
    } else if (frame == "xz") {
        if (spec.kind != ModelKind::raising_lowering)
            throw ConfigError("frame 'xz' is the reduced raising-lowering model");
        if (cfg.f0 <= 0) throw ConfigError("f0 must be > 0");
        Reduced red = reduce_bloch_xz(cfg.f0);
        built.system = std::move(red.system);
        built.map = std::move(red.map);
        built.columns = {"x", "z"};
        built.output = [](const VecN& x) { return x; };
        built.entropy_available = true;
        built.entropy_method = EntropyMethod::general;
        built.closures = &bloch_xz_entropy_closures();
    } else if (frame == "z") {
        if (spec.kind != ModelKind::pure_z)
            throw ConfigError("frame 'z' needs the pure-z model (or a 3-d model)");
        built.system = pure_state_sde(spec.gamma);
        built.columns = {"z"};
        built.output = [](const VecN& x) { return x; };
        built.entropy_available = spec.gamma == 0.0;  // closed form is the gamma=0 one
        built.entropy_method = EntropyMethod::closed_z;
    } else if (frame == "theta") {
        if (spec.kind != ModelKind::pure_theta)
            throw ConfigError("frame 'theta' needs the pure-theta model");
        built.system = theta_sde();
        built.columns = {"theta"};
        built.output = [](const VecN& x) { return x; };
        built.entropy_available = true;
        built.entropy_method = EntropyMethod::closed_theta;
    } else {
        throw ConfigError("unknown frame '" + frame + "' (expected xyz, xz, z, theta)");
    }

    built.init = cfg.init.empty() ? default_init(frame == "z" && three_d ? "xyz" : frame)
                                  : to_vec(cfg.init);
    if (built.init.n != built.system.dim)
        throw ConfigError("init needs " + std::to_string(built.system.dim) +
                          " coordinates for this model/frame");
    if (built.system.in_domain && !built.system.in_domain(built.init))
        throw ConfigError("init is outside the model domain");

    if (cfg.entropy && !built.entropy_available)
        throw ConfigError(
            "entropy is not defined in this frame (use xz for the 3-d model, z or theta "
            "for the pure-state ones)");
    return built;
}

}  // namespace qsd
