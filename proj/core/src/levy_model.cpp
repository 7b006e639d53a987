#include "ultimum/levy_model.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "ultimum/error.hpp"

namespace ultimum {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

double drift_at_zero(const FamilyParams& params) {
    return std::visit(overloaded{
                          [](const BrownianDrift& p) { return p.mu; },
                          [](const JumpDiffusion& p) { return p.mu - p.lambda / p.eta; },
                          [](const CompoundPoissonDrift& p) { return p.mu - p.lambda / p.eta; },
                      },
                      params);
}

// Largest root of psi(z) = q for the jump diffusion. Closed form at q = 0,
// otherwise bisection on the increasing branch followed by a Newton polish.
double jump_diffusion_phi(const JumpDiffusion& p, double q) {
    const double s2 = p.sigma * p.sigma;
    const double half = p.eta / 2.0 + p.mu / s2;
    const double beta3 = -half + std::sqrt(half * half - 2.0 * (p.mu * p.eta - p.lambda) / s2);
    const double base = std::max(beta3, 0.0);
    if (q == 0.0) return base;

    auto f = [&](double z) { return laplace_exponent(p, z) - q; };
    double lo = base;
    double hi = base + 1.0;
    int doublings = 0;
    while (f(hi) <= 0.0) {
        lo = hi;
        hi = base + 2.0 * (hi - base);
        if (++doublings > 200) throw InternalError("phi: failed to bracket psi(z) = q");
    }
    while (hi - lo > 1e-12 * hi) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 0.0 ? hi : lo) = mid;
    }
    double z = 0.5 * (lo + hi);
    for (int i = 0; i < 3; ++i) {
        const double d = laplace_exponent_derivative(p, z);
        if (!(d > 0.0)) break;
        const double next = z - f(z) / d;
        if (next < lo || next > hi) break;
        z = next;
    }
    return z;
}

}  // namespace

std::string to_string(FamilyKind kind) {
    switch (kind) {
        case FamilyKind::brownian_drift: return "brownian_drift";
        case FamilyKind::jump_diffusion: return "jump_diffusion";
        case FamilyKind::compound_poisson_drift: return "compound_poisson_drift";
    }
    return "unknown";
}

void validate_parameters(const FamilyParams& params) {
    std::visit(overloaded{
                   [](const BrownianDrift& p) {
                       if (!positive_finite(p.sigma)) throw DomainError("brownian_drift: sigma must be > 0");
                       if (!std::isfinite(p.mu)) throw DomainError("brownian_drift: mu must be finite");
                   },
                   [](const JumpDiffusion& p) {
                       if (!positive_finite(p.sigma)) throw DomainError("jump_diffusion: sigma must be > 0");
                       if (!std::isfinite(p.mu)) throw DomainError("jump_diffusion: mu must be finite");
                       if (!positive_finite(p.lambda)) throw DomainError("jump_diffusion: lambda must be > 0");
                       if (!positive_finite(p.eta)) throw DomainError("jump_diffusion: eta must be > 0");
                   },
                   [](const CompoundPoissonDrift& p) {
                       if (!positive_finite(p.mu))
                           throw DomainError("compound_poisson_drift: mu must be > 0 (otherwise -X is a subordinator)");
                       if (!positive_finite(p.lambda)) throw DomainError("compound_poisson_drift: lambda must be > 0");
                       if (!positive_finite(p.eta)) throw DomainError("compound_poisson_drift: eta must be > 0");
                   },
               },
               params);
}

ProcessFamily::ProcessFamily(FamilyParams params) : params_(params), phi0_(0.0) {
    validate_parameters(params_);
    if (!drifts_to_minus_infinity(params_)) {
        std::ostringstream msg;
        msg << "drift condition ψ′(0+)<0 violated (ψ′(0+) = " << drift_at_zero(params_) << ")";
        throw DegenerateModelError(msg.str());
    }
    phi0_ = phi(params_, 0.0);
}

FamilyKind ProcessFamily::kind() const noexcept {
    return static_cast<FamilyKind>(params_.index());
}

double ProcessFamily::sigma() const noexcept {
    return std::visit(overloaded{
                          [](const BrownianDrift& p) { return p.sigma; },
                          [](const JumpDiffusion& p) { return p.sigma; },
                          [](const CompoundPoissonDrift&) { return 0.0; },
                      },
                      params_);
}

double ProcessFamily::mu() const noexcept {
    return std::visit([](const auto& p) { return p.mu; }, params_);
}

double ProcessFamily::lambda() const noexcept {
    return std::visit(overloaded{
                          [](const BrownianDrift&) { return 0.0; },
                          [](const auto& p) { return p.lambda; },
                      },
                      params_);
}

double ProcessFamily::eta() const noexcept {
    return std::visit(overloaded{
                          [](const BrownianDrift&) { return 0.0; },
                          [](const auto& p) { return p.eta; },
                      },
                      params_);
}

double laplace_exponent(const FamilyParams& params, double z) {
    if (!(z >= 0.0)) throw DomainError("laplace_exponent: z must be >= 0");
    return std::visit(overloaded{
                          [z](const BrownianDrift& p) { return 0.5 * p.sigma * p.sigma * z * z + p.mu * z; },
                          [z](const JumpDiffusion& p) {
                              return 0.5 * p.sigma * p.sigma * z * z + p.mu * z - p.lambda * z / (p.eta + z);
                          },
                          [z](const CompoundPoissonDrift& p) { return p.mu * z - p.lambda * z / (p.eta + z); },
                      },
                      params);
}

double laplace_exponent(const ProcessFamily& family, double z) {
    return laplace_exponent(family.params(), z);
}

double laplace_exponent_derivative(const FamilyParams& params, double z) {
    if (!(z >= 0.0)) throw DomainError("laplace_exponent_derivative: z must be >= 0");
    return std::visit(overloaded{
                          [z](const BrownianDrift& p) { return p.sigma * p.sigma * z + p.mu; },
                          [z](const JumpDiffusion& p) {
                              const double d = p.eta + z;
                              return p.sigma * p.sigma * z + p.mu - p.lambda * p.eta / (d * d);
                          },
                          [z](const CompoundPoissonDrift& p) {
                              const double d = p.eta + z;
                              return p.mu - p.lambda * p.eta / (d * d);
                          },
                      },
                      params);
}

double laplace_exponent_derivative(const ProcessFamily& family, double z) {
    return laplace_exponent_derivative(family.params(), z);
}

bool drifts_to_minus_infinity(const FamilyParams& params) { return drift_at_zero(params) < 0.0; }

double phi(const FamilyParams& params, double q) {
    if (!(q >= 0.0) || !std::isfinite(q)) throw DomainError("phi: q must be a finite value >= 0");
    if (q == 0.0 && !drifts_to_minus_infinity(params))
        throw DegenerateModelError("phi: degenerate drift, Phi(0) = 0 when ψ′(0+) >= 0");
    return std::visit(overloaded{
                          [q](const BrownianDrift& p) {
                              const double s2 = p.sigma * p.sigma;
                              return (-p.mu + std::sqrt(p.mu * p.mu + 2.0 * s2 * q)) / s2;
                          },
                          [q](const JumpDiffusion& p) { return jump_diffusion_phi(p, q); },
                          [q](const CompoundPoissonDrift& p) {
                              // mu z^2 + (mu eta - lambda - q) z - q eta = 0
                              const double b = p.mu * p.eta - p.lambda - q;
                              return (-b + std::sqrt(b * b + 4.0 * p.mu * q * p.eta)) / (2.0 * p.mu);
                          },
                      },
                      params);
}

double phi(const ProcessFamily& family, double q) {
    return q == 0.0 ? family.phi0() : phi(family.params(), q);
}

SupremumLaw supremum_law(const ProcessFamily& family) {
    return SupremumLaw{family.phi0(), median(family), 0.0};
}

double supremum_cdf(const ProcessFamily& family, double x) {
    if (std::isnan(x)) throw DomainError("supremum_cdf: x is NaN");
    if (x < 0.0) return 0.0;
    return -std::expm1(-family.phi0() * x);
}

double median(const ProcessFamily& family) { return std::numbers::ln2 / family.phi0(); }

double expected_theta(const ProcessFamily& family) {
    const double p0 = family.phi0();
    return 1.0 / (p0 * laplace_exponent_derivative(family, p0));
}

}  // namespace ultimum
