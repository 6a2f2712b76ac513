#include "catenoid/vortex_system.hpp"

#include "catenoid/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace catenoid {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Pair term with indices for the error; pair_velocity uses -1.
VortexVelocity pair_term(const Catenoid& geom, SurfacePoint p, SurfacePoint q, double gamma_q, int i, int j) {
    const double f = geom.pair_kernel(p, q);
    if (f < kCollisionEpsilon) {
        throw CoincidentVortices(i, j, f);
    }
    const double a = geom.throat_radius();
    const double h = geom.metric_factor(p.v);
    const double w = gamma_q / (kFourPi * a * h * h * f);
    return {-w * std::sinh((p.v - q.v) / a) / a, w * std::sin(p.u - q.u)};
}

void check_vortices(std::span<const Vortex> vortices) {
    if (vortices.empty()) {
        throw InvalidArgument("vortex system needs at least one vortex");
    }
    for (std::size_t i = 0; i < vortices.size(); ++i) {
        const Vortex& w = vortices[i];
        if (!std::isfinite(w.u) || !std::isfinite(w.v) || !std::isfinite(w.gamma)) {
            std::ostringstream os;
            os << "vortex " << i << " has a non-finite field";
            throw InvalidArgument(os.str());
        }
        if (w.gamma == 0.0) {
            std::ostringstream os;
            os << "vortex " << i << " has zero circulation";
            throw InvalidArgument(os.str());
        }
    }
}

std::vector<double> flatten(std::span<const Vortex> vortices) {
    std::vector<double> y;
    y.reserve(2 * vortices.size());
    for (const auto& w : vortices) {
        y.push_back(w.u);
        y.push_back(w.v);
    }
    return y;
}

std::vector<double> gammas_of(std::span<const Vortex> vortices) {
    std::vector<double> g;
    g.reserve(vortices.size());
    for (const auto& w : vortices) g.push_back(w.gamma);
    return g;
}

}  // namespace

VortexVelocity pair_velocity(const Catenoid& geom, SurfacePoint target, SurfacePoint source, double gamma_source) {
    return pair_term(geom, target, source, gamma_source, -1, -1);
}

VortexVelocity self_velocity(const Catenoid& geom, double v, double gamma) {
    const double a = geom.throat_radius();
    const double h = geom.metric_factor(v);
    return {gamma * std::tanh(v / a) / (kFourPi * a * a * h * h), 0.0};
}

VortexSystem::VortexSystem(Catenoid geom, std::vector<Vortex> vortices) : geom_(geom) {
    check_vortices(vortices);
    gammas_ = gammas_of(vortices);
    initial_ = flatten(vortices);
}

std::vector<Vortex> VortexSystem::vortices(std::span<const double> y) const {
    std::vector<Vortex> out(size());
    for (std::size_t i = 0; i < size(); ++i) {
        out[i] = {y[2 * i], y[2 * i + 1], gammas_[i]};
    }
    return out;
}

void VortexSystem::rhs(std::span<const double> y, std::span<double> dydt) const {
    const std::size_t n = size();
    for (std::size_t i = 0; i < n; ++i) {
        const VortexVelocity s = self_velocity(geom_, y[2 * i + 1], gammas_[i]);
        dydt[2 * i] = s.u_dot;
        dydt[2 * i + 1] = s.v_dot;
    }
    for (std::size_t i = 0; i < n; ++i) {
        const SurfacePoint p{y[2 * i], y[2 * i + 1]};
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const VortexVelocity w = pair_term(geom_, p, {y[2 * j], y[2 * j + 1]}, gammas_[j], static_cast<int>(i),
                                               static_cast<int>(j));
            dydt[2 * i] += w.u_dot;
            dydt[2 * i + 1] += w.v_dot;
        }
    }
}

double VortexSystem::hamiltonian(std::span<const double> y) const {
    const std::size_t n = size();
    double pairs = 0.0;
    double self = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const SurfacePoint p{y[2 * i], y[2 * i + 1]};
        for (std::size_t j = i + 1; j < n; ++j) {
            const SurfacePoint q{y[2 * j], y[2 * j + 1]};
            const double f = geom_.pair_kernel(p, q);
            if (f < kCollisionEpsilon) {
                throw CoincidentVortices(static_cast<int>(i), static_cast<int>(j), f);
            }
            pairs += gammas_[i] * gammas_[j] * std::log(f);
        }
        self += gammas_[i] * gammas_[i] * std::log(geom_.metric_factor(p.v));
    }
    return (pairs - self) / kFourPi;
}

double VortexSystem::momentum_map(std::span<const double> y) const {
    double j = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        j += gammas_[i] * geom_.momentum_potential(y[2 * i + 1]);
    }
    return j;
}

Diagnostics VortexSystem::diagnostics() const {
    Diagnostics d;
    d.names = {"H", "J"};
    d.evaluate = [this](double, std::span<const double> y) {
        return std::vector<double>{hamiltonian(y), momentum_map(y)};
    };
    return d;
}

RhsFunction VortexSystem::rhs_function() const {
    return [this](double, std::span<const double> y, std::span<double> dydt) { rhs(y, dydt); };
}

TrajectoryRecord VortexSystem::integrate(double t_final, const IntegratorConfig& config) const {
    return catenoid::integrate(rhs_function(), initial_, 0.0, t_final, config, diagnostics());
}

double hamiltonian(const Catenoid& geom, std::span<const Vortex> vortices) {
    const VortexSystem sys(geom, {vortices.begin(), vortices.end()});
    return sys.hamiltonian(sys.initial_state());
}

double momentum_map(const Catenoid& geom, std::span<const Vortex> vortices) {
    double j = 0.0;
    for (const auto& w : vortices) j += w.gamma * geom.momentum_potential(w.v);
    return j;
}

std::vector<VortexVelocity> rhs(const Catenoid& geom, std::span<const Vortex> vortices) {
    const VortexSystem sys(geom, {vortices.begin(), vortices.end()});
    std::vector<double> dydt(2 * sys.size());
    sys.rhs(sys.initial_state(), dydt);
    std::vector<VortexVelocity> out(sys.size());
    for (std::size_t i = 0; i < sys.size(); ++i) out[i] = {dydt[2 * i], dydt[2 * i + 1]};
    return out;
}

VortexDiagnostics diagnostics(const Catenoid& geom, std::span<const Vortex> vortices, double t) {
    return {t, hamiltonian(geom, vortices), momentum_map(geom, vortices)};
}

double hamiltonian_consistency_check(const Catenoid& geom, std::span<const Vortex> vortices, double h_step) {
    if (!(h_step > 0.0)) {
        throw InvalidArgument("hamiltonian_consistency_check: h_step must be positive");
    }
    const VortexSystem sys(geom, {vortices.begin(), vortices.end()});
    std::vector<double> y = sys.initial_state();
    std::vector<double> dydt(y.size());
    sys.rhs(y, dydt);
    double residual = 0.0;
    for (std::size_t i = 0; i < sys.size(); ++i) {
        auto derivative = [&](std::size_t k) {
            const double saved = y[k];
            y[k] = saved + h_step;
            const double plus = sys.hamiltonian(y);
            y[k] = saved - h_step;
            const double minus = sys.hamiltonian(y);
            y[k] = saved;
            return (plus - minus) / (2.0 * h_step);
        };
        const double weight = vortices[i].gamma * geom.area_weight(vortices[i].v);
        const double v_dot = derivative(2 * i) / weight;
        const double u_dot = -derivative(2 * i + 1) / weight;
        residual = std::max({residual, std::abs(v_dot - dydt[2 * i + 1]), std::abs(u_dot - dydt[2 * i])});
    }
    return residual;
}

double momentum_map_rate(const Catenoid& geom, std::span<const Vortex> vortices) {
    const auto vel = rhs(geom, vortices);
    double sum = 0.0;
    for (std::size_t i = 0; i < vortices.size(); ++i) {
        sum += vortices[i].gamma * geom.area_weight(vortices[i].v) * vel[i].v_dot;
    }
    return sum;
}

}  // namespace catenoid
