#include "catenoid/dipole_model.hpp"

#include "catenoid/errors.hpp"
#include "catenoid/geodesics.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace catenoid {

namespace {

constexpr double kPi = std::numbers::pi;

double sech(double x) { return 1.0 / std::cosh(x); }

// Offsets of the placed pair in units where both are angles:
// c = u_+ - u_-, d = (v_+ - v_-) / a.
struct Offsets {
    double c;
    double d;
    double gap;  // cos c - cosh d, always negative
};

Offsets offsets(const Catenoid& geom, const DipoleState& s) {
    const double a = geom.throat_radius();
    const double w = s.ell * sech(s.v / a) / a;
    Offsets o{w * std::cos(s.alpha), w * std::sin(s.alpha), 0.0};
    const double sc = std::sin(0.5 * o.c);
    const double sd = std::sinh(0.5 * o.d);
    o.gap = -2.0 * (sc * sc + sd * sd);
    return o;
}

VortexVelocity add(VortexVelocity x, VortexVelocity y) { return {x.u_dot + y.u_dot, x.v_dot + y.v_dot}; }

}  // namespace

const char* to_string(PropulsionMode m) noexcept {
    return m == PropulsionMode::Full ? "full" : "truncated";
}

std::string validate_dipole(const Catenoid& geom, const DipoleState& d) {
    std::ostringstream os;
    if (!std::isfinite(d.u) || !std::isfinite(d.v) || !std::isfinite(d.alpha) || !std::isfinite(d.ell) ||
        !std::isfinite(d.mu)) {
        throw InvalidArgument("dipole has a non-finite field");
    }
    if (!(d.ell > 0.0)) {
        os << "dipole separation must be positive, got " << d.ell;
        throw InvalidArgument(os.str());
    }
    if (d.mu == 0.0) {
        throw InvalidArgument("dipole strength must be nonzero");
    }
    const double ratio = d.ell / geom.throat_radius();
    if (ratio > kDipoleMaxRatio) {
        os << "dipole separation ell/a = " << ratio << " exceeds " << kDipoleMaxRatio;
        throw InvalidArgument(os.str());
    }
    if (ratio > kDipoleWarnRatio) {
        os << "dipole separation ell/a = " << ratio << " is above " << kDipoleWarnRatio
           << "; the first-order placement is inaccurate";
    }
    return os.str();
}

PlacedPair place_vortices(const Catenoid& geom, const DipoleState& d) {
    const double a = geom.throat_radius();
    const double h = geom.metric_factor(d.v);
    const double du = 0.5 * d.ell * std::cos(d.alpha) / (a * h);
    const double dv = 0.5 * d.ell * std::sin(d.alpha) / h;
    return {{d.u + du, d.v + dv}, {d.u - du, d.v - dv}, d.mu, -d.mu};
}

std::pair<VortexVelocity, VortexVelocity> pair_velocities(const Catenoid& geom, const DipoleState& d) {
    const PlacedPair p = place_vortices(geom, d);
    const VortexVelocity plus =
        add(pair_velocity(geom, p.plus, p.minus, p.gamma_minus), self_velocity(geom, p.plus.v, p.gamma_plus));
    const VortexVelocity minus =
        add(pair_velocity(geom, p.minus, p.plus, p.gamma_plus), self_velocity(geom, p.minus.v, p.gamma_minus));
    return {plus, minus};
}

CenterVelocity self_propulsion_full(const Catenoid& geom, const DipoleState& s) {
    const double a = geom.throat_radius();
    const Offsets o = offsets(geom, s);
    if (-o.gap < kCollisionEpsilon) {
        throw CoincidentVortices(0, 1, -o.gap);
    }
    const double v_plus = s.v + 0.5 * a * o.d;
    const double v_minus = s.v - 0.5 * a * o.d;
    const double sp2 = sech(v_plus / a) * sech(v_plus / a);
    const double sm2 = sech(v_minus / a) * sech(v_minus / a);
    const double shd = std::sinh(o.d);
    const double braces = sm2 * (shd + o.gap * std::tanh(v_minus / a)) + sp2 * (shd - o.gap * std::tanh(v_plus / a));
    return {-s.mu * braces / (8.0 * a * a * kPi * o.gap), s.mu * (sm2 + sp2) * std::sin(o.c) / (8.0 * a * kPi * o.gap)};
}

CenterVelocity self_propulsion_truncated(const Catenoid& geom, const DipoleState& d) {
    const double a = geom.throat_radius();
    const double k = d.mu * sech(d.v / a) / (2.0 * kPi * d.ell);
    return {k * std::sin(d.alpha) / a, -k * std::cos(d.alpha)};
}

double frame_rotation(const Catenoid& geom, const DipoleState& d, const PlacedPair& pair, VortexVelocity plus,
                      VortexVelocity minus) {
    const double a = geom.throat_radius();
    const double hp = geom.metric_factor(pair.plus.v);
    const double hm = geom.metric_factor(pair.minus.v);
    const double A = a * (hp * plus.u_dot - hm * minus.u_dot);
    const double B = hp * plus.v_dot - hm * minus.v_dot;
    return (-std::sin(d.alpha) * A + std::cos(d.alpha) * B) / d.ell;
}

double self_rotation_projected(const Catenoid& geom, const DipoleState& d) {
    const auto [plus, minus] = pair_velocities(geom, d);
    return frame_rotation(geom, d, place_vortices(geom, d), plus, minus);
}

double self_rotation_closed_form(const Catenoid& geom, const DipoleState& s) {
    const double a = geom.throat_radius();
    const Offsets o = offsets(geom, s);
    if (-o.gap < kCollisionEpsilon) {
        throw CoincidentVortices(0, 1, -o.gap);
    }
    const double v_plus = s.v + 0.5 * a * o.d;
    const double v_minus = s.v - 0.5 * a * o.d;
    const double sa = std::sin(s.alpha);
    const double x = std::cos(s.alpha) * std::sin(o.c) + sa * std::sinh(o.d);
    const double braces = sech(v_plus / a) * (x - o.gap * sa * std::tanh(v_plus / a)) -
                          sech(v_minus / a) * (x + o.gap * sa * std::tanh(v_minus / a));
    return s.mu * braces / (4.0 * a * s.ell * kPi * o.gap);
}

double self_rotation_truncated(const Catenoid& geom, const DipoleState& d) {
    const double a = geom.throat_radius();
    const double t = std::tanh(d.v / a);
    const double sh = sech(d.v / a);
    const double s = std::sin(d.alpha);
    const double c = std::cos(d.alpha);
    return -d.mu * sh * sh * sh * s * t * d.ell * (c * c - 6.0 * s * s + 6.0 * s * s * t * t) / (24.0 * a * a * a * kPi);
}

ExternalAdvection external_advection(const Catenoid& geom, std::span<const DipoleState> sys, std::size_t n) {
    if (n >= sys.size()) {
        throw InvalidArgument("external_advection: dipole index out of range");
    }
    const PlacedPair self = place_vortices(geom, sys[n]);
    ExternalAdvection out;
    for (std::size_t m = 0; m < sys.size(); ++m) {
        if (m == n) continue;
        const PlacedPair other = place_vortices(geom, sys[m]);
        const SurfacePoint sources[2] = {other.plus, other.minus};
        const double gammas[2] = {other.gamma_plus, other.gamma_minus};
        for (int r = 0; r < 2; ++r) {
            const SurfacePoint targets[2] = {self.plus, self.minus};
            for (int k = 0; k < 2; ++k) {
                VortexVelocity w;
                try {
                    w = pair_velocity(geom, targets[k], sources[r], gammas[r]);
                } catch (const CoincidentVortices& e) {
                    throw CoincidentVortices(static_cast<int>(2 * n) + k, static_cast<int>(2 * m) + r, e.kernel());
                }
                VortexVelocity& target = k == 0 ? out.plus : out.minus;
                target = add(target, w);
            }
        }
    }
    out.center = {0.5 * (out.plus.u_dot + out.minus.u_dot), 0.5 * (out.plus.v_dot + out.minus.v_dot)};
    return out;
}

namespace {

DipoleRate dipole_rate(const Catenoid& geom, std::span<const DipoleState> sys, std::size_t n, PropulsionMode mode) {
    const DipoleState& d = sys[n];
    const PlacedPair pair = place_vortices(geom, d);
    const ExternalAdvection ext = external_advection(geom, sys, n);
    const double ext_rotation = frame_rotation(geom, d, pair, ext.plus, ext.minus);
    CenterVelocity self;
    double self_rotation = 0.0;
    if (mode == PropulsionMode::Full) {
        try {
            self = self_propulsion_full(geom, d);
        } catch (const CoincidentVortices& e) {
            throw CoincidentVortices(static_cast<int>(2 * n), static_cast<int>(2 * n) + 1, e.kernel());
        }
        self_rotation = self_rotation_projected(geom, d);
    } else {
        self = self_propulsion_truncated(geom, d);
        self_rotation = self_rotation_truncated(geom, d);
    }
    DipoleRate rate;
    rate.u_dot = self.u_dot + ext.center.u_dot;
    rate.v_dot = self.v_dot + ext.center.v_dot;
    rate.alpha_dot = self_rotation + ext_rotation + geom.transport_rotation_rate(d.v, rate.u_dot);
    return rate;
}

}  // namespace

double orientation_rate(const Catenoid& geom, std::span<const DipoleState> sys, std::size_t n, PropulsionMode mode) {
    if (n >= sys.size()) {
        throw InvalidArgument("orientation_rate: dipole index out of range");
    }
    return dipole_rate(geom, sys, n, mode).alpha_dot;
}

std::vector<DipoleRate> dipole_system_rhs(const Catenoid& geom, std::span<const DipoleState> sys,
                                          PropulsionMode mode) {
    std::vector<DipoleRate> out(sys.size());
    for (std::size_t n = 0; n < sys.size(); ++n) {
        out[n] = dipole_rate(geom, sys, n, mode);
    }
    return out;
}

std::vector<Vortex> placed_vortices(const Catenoid& geom, std::span<const DipoleState> sys) {
    std::vector<Vortex> out;
    out.reserve(2 * sys.size());
    for (const auto& d : sys) {
        const PlacedPair p = place_vortices(geom, d);
        out.push_back({p.plus.u, p.plus.v, p.gamma_plus});
        out.push_back({p.minus.u, p.minus.v, p.gamma_minus});
    }
    return out;
}

DipoleSystem::DipoleSystem(Catenoid geom, std::vector<DipoleState> dipoles, PropulsionMode mode)
    : geom_(geom), base_(std::move(dipoles)), mode_(mode) {
    if (base_.empty()) {
        throw InvalidArgument("dipole system needs at least one dipole");
    }
    for (std::size_t n = 0; n < base_.size(); ++n) {
        std::string w = validate_dipole(geom_, base_[n]);
        if (!w.empty()) {
            warnings_.push_back("dipole " + std::to_string(n) + ": " + w);
        }
    }
}

std::vector<double> DipoleSystem::initial_state() const {
    std::vector<double> y;
    y.reserve(3 * base_.size());
    for (const auto& d : base_) {
        y.push_back(d.u);
        y.push_back(d.v);
        y.push_back(d.alpha);
    }
    return y;
}

std::vector<DipoleState> DipoleSystem::dipoles(std::span<const double> y) const {
    std::vector<DipoleState> out = base_;
    for (std::size_t n = 0; n < out.size(); ++n) {
        out[n].u = y[3 * n];
        out[n].v = y[3 * n + 1];
        out[n].alpha = y[3 * n + 2];
    }
    return out;
}

void DipoleSystem::rhs(std::span<const double> y, std::span<double> dydt) const {
    const auto sys = dipoles(y);
    const auto rates = dipole_system_rhs(geom_, sys, mode_);
    for (std::size_t n = 0; n < rates.size(); ++n) {
        dydt[3 * n] = rates[n].u_dot;
        dydt[3 * n + 1] = rates[n].v_dot;
        dydt[3 * n + 2] = rates[n].alpha_dot;
    }
}

RhsFunction DipoleSystem::rhs_function() const {
    return [this](double, std::span<const double> y, std::span<double> dydt) { rhs(y, dydt); };
}

Diagnostics DipoleSystem::diagnostics() const {
    Diagnostics d;
    d.names = {"H", "J"};
    const bool single = size() == 1;
    if (single) {
        d.names.push_back("L");
        d.names.push_back("E");
    }
    d.evaluate = [this, single](double, std::span<const double> y) {
        const auto sys = dipoles(y);
        const auto vortices = placed_vortices(geom_, sys);
        std::vector<double> out{hamiltonian(geom_, vortices), momentum_map(geom_, vortices)};
        if (single) {
            const DipoleRate r = dipole_system_rhs(geom_, sys, mode_).front();
            const GeodesicState s{sys[0].u, sys[0].v, r.u_dot, r.v_dot};
            out.push_back(azimuthal_momentum(geom_, s));
            out.push_back(geodesic_energy(geom_, s));
        }
        return out;
    };
    return d;
}

TrajectoryRecord DipoleSystem::integrate(double t_final, const IntegratorConfig& config) const {
    return catenoid::integrate(rhs_function(), initial_state(), 0.0, t_final, config, diagnostics());
}

}  // namespace catenoid
