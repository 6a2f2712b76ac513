#include "catenoid/integrator.hpp"

#include "catenoid/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace catenoid {

namespace {

// Dormand-Prince 8(5,3) tableau (Hairer, Norsett & Wanner, DOP853).
namespace dop853 {
constexpr double c2 = 0.05260015195876773187856;
constexpr double c3 = 0.07890022793815159781784;
constexpr double c4 = 0.11835034190722739672676;
constexpr double c5 = 0.28164965809277260327324;
constexpr double c6 = 0.33333333333333333333333;
constexpr double c7 = 0.25000000000000000000000;
constexpr double c8 = 0.30769230769230769230769;
constexpr double c9 = 0.65128205128205128205128;
constexpr double c10 = 0.60000000000000000000000;
constexpr double c11 = 0.85714285714285714285714;
constexpr double b1 = 0.05429373411656876223805;
constexpr double b6 = 4.45031289275240888144114;
constexpr double b7 = 1.89151789931450038304282;
constexpr double b8 = -5.80120396001058478146721;
constexpr double b9 = 0.31116436695781989440892;
constexpr double b10 = -0.15216094966251607855618;
constexpr double b11 = 0.20136540080403034837478;
constexpr double b12 = 0.04471061572777259051769;
constexpr double bhh1 = 0.24409448818897637795276;
constexpr double bhh2 = 0.73384668828161185734136;
constexpr double bhh3 = 0.02205882352941176470588;
constexpr double er1 = 0.01312004499419488073250;
constexpr double er6 = -1.22515644637620444072057;
constexpr double er7 = -0.49575894965725019152141;
constexpr double er8 = 1.66437718245498653696153;
constexpr double er9 = -0.35032884874997368168865;
constexpr double er10 = 0.33417911871301747902973;
constexpr double er11 = 0.08192320648511571246571;
constexpr double er12 = -0.02235530786388629525884;
constexpr double a21 = 0.05260015195876773187856;
constexpr double a31 = 0.01972505698453789945446;
constexpr double a32 = 0.05917517095361369836338;
constexpr double a41 = 0.02958758547680684918169;
constexpr double a43 = 0.08876275643042054754507;
constexpr double a51 = 0.24136513415926668550237;
constexpr double a53 = -0.88454947932828608534486;
constexpr double a54 = 0.92483400326179200311574;
constexpr double a61 = 0.03703703703703703703704;
constexpr double a64 = 0.17082860872947387127960;
constexpr double a65 = 0.12546768756682242501669;
constexpr double a71 = 0.03710937500000000000000;
constexpr double a74 = 0.17025221101954403931498;
constexpr double a75 = 0.06021653898045596068502;
constexpr double a76 = -0.01757812500000000000000;
constexpr double a81 = 0.03709200011850479271088;
constexpr double a84 = 0.17038392571223999381021;
constexpr double a85 = 0.10726203044637328465181;
constexpr double a86 = -0.01531943774862440175279;
constexpr double a87 = 0.00827378916381402288758;
constexpr double a91 = 0.62411095871607571711443;
constexpr double a94 = -3.36089262944694129406857;
constexpr double a95 = -0.86821934684172600681819;
constexpr double a96 = 27.5920996994467083049416;
constexpr double a97 = 20.1540675504778934086187;
constexpr double a98 = -43.4898841810699588477366;
constexpr double a101 = 0.47766253643826436589043;
constexpr double a104 = -2.48811461997166764192642;
constexpr double a105 = -0.59029082683684299637145;
constexpr double a106 = 21.2300514481811942347289;
constexpr double a107 = 15.2792336328824235832597;
constexpr double a108 = -33.2882109689848629194453;
constexpr double a109 = -0.02033120170850862613582;
constexpr double a111 = -0.93714243008598732571704;
constexpr double a114 = 5.18637242884406370830024;
constexpr double a115 = 1.09143734899672957818500;
constexpr double a116 = -8.14978701074692612513997;
constexpr double a117 = -18.5200656599969598641566;
constexpr double a118 = 22.7394870993505042818970;
constexpr double a119 = 2.49360555267965238987089;
constexpr double a1110 = -3.04676447189821950038237;
constexpr double a121 = 2.27331014751653820792360;
constexpr double a124 = -10.5344954667372501984067;
constexpr double a125 = -2.00087205822486249909676;
constexpr double a126 = -17.9589318631187989172766;
constexpr double a127 = 27.9488845294199600508500;
constexpr double a128 = -2.85899827713502369474066;
constexpr double a129 = -8.87285693353062954433549;
constexpr double a1210 = 12.3605671757943030647266;
constexpr double a1211 = 0.64339274601576353035597;
}  // namespace dop853

constexpr double kSafety = 0.9;
constexpr double kMinFactor = 0.2;
constexpr double kMaxFactor = 6.0;
// PI controller exponents for an embedded pair of order 8.
constexpr double kAlpha = 0.7 / 8.0;
constexpr double kBeta = 0.4 / 8.0;

class Dop853Stepper {
public:
    Dop853Stepper(const RhsFunction& rhs, std::size_t n, double rel_tol, double abs_tol)
        : rhs_(rhs), rel_tol_(rel_tol), abs_tol_(abs_tol), tmp_(n), y_new_(n), k_() {
        for (auto& stage : k_) {
            stage.assign(n, 0.0);
        }
        f_new_.assign(n, 0.0);
    }

    std::size_t evaluations() const noexcept { return evaluations_; }

    /// Derivative at the current point; must be called once before the first attempt.
    void start(double t, std::span<const double> y) {
        eval(t, y, k_[0]);
    }

    /// Starting step guess from the derivative scale.
    double initial_step(double t, std::span<const double> y, double max_step) {
        const std::size_t n = y.size();
        double dnf = 0.0;
        double dny = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sk = abs_tol_ + rel_tol_ * std::abs(y[i]);
            dnf += (k_[0][i] / sk) * (k_[0][i] / sk);
            dny += (y[i] / sk) * (y[i] / sk);
        }
        double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
        h = std::min(h, max_step);
        for (std::size_t i = 0; i < n; ++i) {
            tmp_[i] = y[i] + h * k_[0][i];
        }
        eval(t + h, tmp_, k_[1]);
        double der2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double sk = abs_tol_ + rel_tol_ * std::abs(y[i]);
            const double d = (k_[1][i] - k_[0][i]) / sk;
            der2 += d * d;
        }
        der2 = std::sqrt(der2) / h;
        const double der12 = std::max(std::abs(der2), std::sqrt(dnf));
        const double h1 = der12 <= 1e-15 ? std::max(1e-6, 1e-3 * h) : std::pow(0.01 / der12, 1.0 / 8.0);
        return std::min({100.0 * h, h1, max_step});
    }

    /// One trial step of size h from (t, y). Returns the scaled error norm;
    /// the candidate state is left in candidate().
    double attempt(double t, std::span<const double> y, double h) {
        using namespace dop853;
        const std::size_t n = y.size();
        auto& k1 = k_[0];
        auto& k2 = k_[1];
        auto& k3 = k_[2];
        auto& k4 = k_[3];
        auto& k5 = k_[4];
        auto& k6 = k_[5];
        auto& k7 = k_[6];
        auto& k8 = k_[7];
        auto& k9 = k_[8];
        auto& k10 = k_[9];
        auto& k11 = k_[10];
        auto& k12 = k_[11];

        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * a21 * k1[i];
        eval(t + c2 * h, tmp_, k2);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
        eval(t + c3 * h, tmp_, k3);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a41 * k1[i] + a43 * k3[i]);
        eval(t + c4 * h, tmp_, k4);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a51 * k1[i] + a53 * k3[i] + a54 * k4[i]);
        eval(t + c5 * h, tmp_, k5);
        for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a61 * k1[i] + a64 * k4[i] + a65 * k5[i]);
        eval(t + c6 * h, tmp_, k6);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y[i] + h * (a71 * k1[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
        eval(t + c7 * h, tmp_, k7);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y[i] + h * (a81 * k1[i] + a84 * k4[i] + a85 * k5[i] + a86 * k6[i] + a87 * k7[i]);
        eval(t + c8 * h, tmp_, k8);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y[i] + h * (a91 * k1[i] + a94 * k4[i] + a95 * k5[i] + a96 * k6[i] + a97 * k7[i] +
                                  a98 * k8[i]);
        eval(t + c9 * h, tmp_, k9);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y[i] + h * (a101 * k1[i] + a104 * k4[i] + a105 * k5[i] + a106 * k6[i] + a107 * k7[i] +
                                  a108 * k8[i] + a109 * k9[i]);
        eval(t + c10 * h, tmp_, k10);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y[i] + h * (a111 * k1[i] + a114 * k4[i] + a115 * k5[i] + a116 * k6[i] + a117 * k7[i] +
                                  a118 * k8[i] + a119 * k9[i] + a1110 * k10[i]);
        eval(t + c11 * h, tmp_, k11);
        for (std::size_t i = 0; i < n; ++i)
            tmp_[i] = y[i] + h * (a121 * k1[i] + a124 * k4[i] + a125 * k5[i] + a126 * k6[i] + a127 * k7[i] +
                                  a128 * k8[i] + a129 * k9[i] + a1210 * k10[i] + a1211 * k11[i]);
        eval(t + h, tmp_, k12);

        double err5 = 0.0;
        double err3 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double slope = b1 * k1[i] + b6 * k6[i] + b7 * k7[i] + b8 * k8[i] + b9 * k9[i] +
                                 b10 * k10[i] + b11 * k11[i] + b12 * k12[i];
            y_new_[i] = y[i] + h * slope;
            const double sk = abs_tol_ + rel_tol_ * std::max(std::abs(y[i]), std::abs(y_new_[i]));
            const double e3 = (slope - bhh1 * k1[i] - bhh2 * k9[i] - bhh3 * k12[i]) / sk;
            const double e5 = (er1 * k1[i] + er6 * k6[i] + er7 * k7[i] + er8 * k8[i] + er9 * k9[i] +
                               er10 * k10[i] + er11 * k11[i] + er12 * k12[i]) / sk;
            err3 += e3 * e3;
            err5 += e5 * e5;
        }
        double deno = err5 + 0.01 * err3;
        if (deno <= 0.0) {
            deno = 1.0;
        }
        return std::abs(h) * err5 / std::sqrt(deno * static_cast<double>(n));
    }

    std::span<const double> candidate() const noexcept { return y_new_; }

    /// Commits the candidate: evaluates the derivative there for the next step.
    void accept(double t_new, std::vector<double>& y) {
        std::copy(y_new_.begin(), y_new_.end(), y.begin());
        eval(t_new, y, f_new_);
        std::swap(k_[0], f_new_);
    }

private:
    void eval(double t, std::span<const double> y, std::vector<double>& out) {
        ++evaluations_;
        rhs_(t, y, out);
    }

    const RhsFunction& rhs_;
    double rel_tol_;
    double abs_tol_;
    std::vector<double> tmp_;
    std::vector<double> y_new_;
    std::vector<double> f_new_;
    std::array<std::vector<double>, 12> k_;
    std::size_t evaluations_{0};
};

bool all_finite(std::span<const double> y) {
    return std::all_of(y.begin(), y.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

void IntegratorConfig::validate() const {
    auto fail = [](const std::string& what) { throw InvalidArgument("integrator config: " + what); };
    if (!(rel_tol >= 1e-15 && rel_tol <= 1e-2)) fail("rel_tol must lie in [1e-15, 1e-2]");
    if (!(abs_tol >= 1e-15 && abs_tol <= 1e-2)) fail("abs_tol must lie in [1e-15, 1e-2]");
    if (!(max_step > 0.0) || !std::isfinite(max_step)) fail("max_step must be positive");
    if (!(sample_interval > 0.0) || !std::isfinite(sample_interval)) fail("sample_interval must be positive");
    if (max_steps == 0) fail("max_steps must be positive");
}

const char* to_string(Termination t) noexcept {
    switch (t) {
        case Termination::Completed: return "Completed";
        case Termination::Collision: return "Collision";
        case Termination::StepFailure: return "StepFailure";
        case Termination::MaxSteps: return "MaxSteps";
    }
    return "Unknown";
}

std::size_t TrajectoryRecord::diagnostic_index(const std::string& name) const {
    const auto it = std::find(diagnostic_names.begin(), diagnostic_names.end(), name);
    if (it == diagnostic_names.end()) {
        throw InvalidArgument("trajectory has no diagnostic named '" + name + "'");
    }
    return static_cast<std::size_t>(it - diagnostic_names.begin());
}

double TrajectoryRecord::max_drift(const std::string& name) const {
    const std::size_t col = diagnostic_index(name);
    double drift = 0.0;
    if (diagnostics.empty()) {
        return drift;
    }
    const double ref = diagnostics.front()[col];
    for (const auto& row : diagnostics) {
        drift = std::max(drift, std::abs(row[col] - ref));
    }
    return drift;
}

TrajectoryRecord integrate(const RhsFunction& rhs, std::vector<double> y0, double t0, double t_final,
                           const IntegratorConfig& config, const Diagnostics& diagnostics) {
    config.validate();
    if (!(t_final > t0)) {
        throw InvalidArgument("integrate: t_final must exceed t0");
    }
    if (y0.empty() || !all_finite(y0)) {
        throw InvalidArgument("integrate: initial state must be non-empty and finite");
    }

    TrajectoryRecord record;
    record.diagnostic_names = diagnostics.names;
    std::vector<double> y = std::move(y0);
    double t = t0;

    auto store = [&](double time) {
        record.times.push_back(time);
        record.states.push_back(y);
        if (diagnostics.evaluate) {
            record.diagnostics.push_back(diagnostics.evaluate(time, y));
        }
    };

    // Sample k sits at t0 + k * interval; computing it by multiplication
    // avoids accumulating round-off in the grid.
    const double interval = config.sample_interval;
    const auto sample_count = static_cast<std::size_t>(std::floor((t_final - t0) / interval * (1.0 + 1e-14)));
    auto sample_time = [&](std::size_t k) { return k > sample_count ? t_final : t0 + static_cast<double>(k) * interval; };
    std::size_t next_sample = 1;
    Dop853Stepper stepper(rhs, y.size(), config.rel_tol, config.abs_tol);
    try {
        store(t);
        stepper.start(t, y);
        double h = stepper.initial_step(t, y, config.max_step);
        double previous_error = 1e-4;
        bool last_rejected = false;

        while (t < t_final) {
            if (record.accepted_steps + record.rejected_steps >= config.max_steps) {
                record.termination = Termination::MaxSteps;
                std::ostringstream os;
                os << "step budget of " << config.max_steps << " exhausted at t=" << t;
                record.message = os.str();
                break;
            }
            double target = sample_time(next_sample);
            if (target > t_final || std::abs(target - t_final) <= 1e-12 * std::max(1.0, std::abs(t_final))) {
                target = t_final;
            }
            h = std::min(h, config.max_step);
            bool lands_on_target = false;
            double step = h;
            if (t + step >= target - 1e-14 * std::max(1.0, std::abs(target))) {
                step = target - t;
                lands_on_target = true;
            }
            if (!(step > 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(t)))) {
                record.termination = Termination::StepFailure;
                std::ostringstream os;
                os << "step size underflow (h=" << step << ") at t=" << t;
                record.message = os.str();
                break;
            }

            const double err = stepper.attempt(t, y, step);
            if (!std::isfinite(err)) {
                ++record.rejected_steps;
                h = step * kMinFactor;
                last_rejected = true;
                continue;
            }
            if (err <= 1.0) {
                const double t_new = lands_on_target ? target : t + step;
                stepper.accept(t_new, y);
                t = t_new;
                ++record.accepted_steps;
                double factor = kSafety * std::pow(std::max(err, 1e-12), -kAlpha) * std::pow(previous_error, kBeta);
                factor = std::clamp(factor, kMinFactor, kMaxFactor);
                if (last_rejected) {
                    factor = std::min(factor, 1.0);
                }
                previous_error = std::max(err, 1e-4);
                // A step shortened to land on a sample says little about the
                // step the dynamics allow, so it never shrinks the proposal.
                h = lands_on_target ? std::max(h * std::min(factor, 1.0), step * factor) : step * factor;
                last_rejected = false;
                if (lands_on_target) {
                    store(t);
                    ++next_sample;
                }
            } else {
                ++record.rejected_steps;
                const double factor = std::max(kMinFactor, kSafety * std::pow(err, -1.0 / 8.0));
                h = step * factor;
                last_rejected = true;
            }
        }
    } catch (const CoincidentVortices& e) {
        record.termination = Termination::Collision;
        record.collision = CollisionInfo{e.first(), e.second(), t, e.kernel()};
        std::ostringstream os;
        os << e.what() << " near t=" << t;
        record.message = os.str();
    }
    record.rhs_evaluations = stepper.evaluations();
    return record;
}

}  // namespace catenoid
