#pragma once

#include <functional>
#include <stdexcept>

#include "qsd/integrate.hpp"
#include "qsd/reduction.hpp"
#include "qsd/sde_system.hpp"

namespace qsd {

// |z| > 1 - kSingularGuard counts as a singular encounter for the z-frame
// entropy forms. The theta frame has no such band.
inline constexpr double kSingularGuard = 1e-6;

struct SingularRegionError : std::runtime_error {
    SingularRegionError(const std::string& msg, const VecN& state)
        : std::runtime_error(msg), state(state) {}
    VecN state;
};

struct SingularDiffusionError : std::runtime_error {
    SingularDiffusionError(const std::string& msg, const VecN& state)
        : std::runtime_error(msg), state(state) {}
    VecN state;
};

// Cumulative stochastic entropy production along one trajectory, k_B = 1.
// tot = sys + env by construction whenever both parts are available.
struct EntropyLedger {
    double env = 0;
    double sys = 0;
    bool has_sys = false;
    int flagged = 0;
    double tot() const { return env + (has_sys ? sys : 0.0); }
};

// Environmental entropy increment machinery for a 1-d diffusion with even
// parity, dx = A dt + B dW, D = B^2/2:
//   d(ds_env) = [(A - D')/D] dx + [A' - A D'/D - D'' + D'^2/D] dt.
// Substituting dx = A dt + B dW gives the expanded drift/noise coefficients.
struct Closed1D {
    std::function<double(double)> A, dA, D, dD, d2D;
    double lo = 0, hi = 0;
    double guard = 0;  // half-width of the singular band at the boundaries

    double coef_dx(double x) const;
    double coef_dt(double x) const;
    double drift(double x) const;       // expanded dt coefficient
    double noise_coef(double x) const;  // expanded dW coefficient

    // Increment-form evaluation; throws SingularRegionError inside the guard
    // band next to the domain ends.
    double increment(double x, double dx, double dt) const;
};

// dz = -2z dt + sqrt(2(1-z^4)) dW; singular entropy coefficients at z = +-1.
Closed1D entropy_z();
// dtheta = (1/2) sin 2theta dt + sqrt(2(1+cos^2 theta)) dW; no singularities.
Closed1D entropy_theta();

double ds_env_z(double z, double dz, double dt);
double ds_env_theta(double theta, double dtheta, double dt);

// Analytic derivative closures for the general formula. The derivatives must
// be the effective ones along the reduced manifold (for models whose reduced
// fields do not depend on spectators these are the plain partials). Closures
// assume even parity.
struct EntropyClosures {
    std::function<MatNM(const VecN&)> dA;             // (i,k) = dA_i/dx_k
    std::function<MatNM(const VecN&, int)> dD;        // k -> dD/dx_k
    std::function<MatNM(const VecN&, int, int)> d2D;  // (k,l) -> d2D/dx_k dx_l
};

// Polynomial derivatives of the reduced (x,z) model.
const EntropyClosures& bloch_xz_entropy_closures();

// Environmental entropy production increment for an M-dimensional system with
// invertible diffusion matrix, including the time-reversal parity split of the
// drift. With a ReductionMap, fields evaluate through the spectator
// reconstruction, so finite differences automatically produce the modified
// derivatives that follow the constraint surface.
class GeneralEntropy {
public:
    explicit GeneralEntropy(const SdeSystem& sys, const ReductionMap* map = nullptr,
                            const EntropyClosures* closures = nullptr, double fd_step = 1e-6);

    // Increment-form evaluation at pre-step state x with realized coordinate
    // increment dx. Throws SingularDiffusionError when D is not invertible.
    double increment(const VecN& x, const VecN& dx, double dt) const;

private:
    const SdeSystem* sys_;
    const ReductionMap* map_;
    const EntropyClosures* closures_;
    double h_;        // first-derivative step
    double h2_;       // second-derivative step (larger: second differences lose
                      // two powers of h to roundoff)
    bool all_even_;

    MatNM d_at(const VecN& x) const;
    VecN drift_at(const VecN& x) const;
};

enum class EntropyMethod { general, closed_z, closed_theta };

// Per-step environmental increment as a plain function; singular encounters
// escape as exceptions and are translated into flagged steps by the callers.
using EnvIncrementFn = std::function<double(const VecN&, const VecN&, double)>;

EnvIncrementFn make_env_increment(EntropyMethod method, const SdeSystem* sys = nullptr,
                                  const ReductionMap* map = nullptr,
                                  const EntropyClosures* closures = nullptr);

// Fills the cumulative ds_env column of a full-resolution trajectory.
// Singular-region steps are skipped and counted in traj.flagged_steps.
void attach_entropy(Trajectory& traj, const EnvIncrementFn& inc);
void attach_entropy(Trajectory& traj, EntropyMethod method, const SdeSystem* sys = nullptr,
                    const ReductionMap* map = nullptr, const EntropyClosures* closures = nullptr);

}  // namespace qsd
