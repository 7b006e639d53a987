#pragma once

#include <string>
#include <variant>

namespace ultimum {

/// X_t = sigma B_t + mu t.
struct BrownianDrift {
    double sigma = 1.0;
    double mu = -0.5;
};

/// X_t = sigma B_t + mu t - sum of Exp(eta) jumps arriving at rate lambda.
struct JumpDiffusion {
    double sigma = 0.5;
    double mu = 0.5;
    double lambda = 1.0;
    double eta = 1.0;
};

/// X_t = mu t - sum of Exp(eta) jumps arriving at rate lambda (bounded variation, mu > 0).
struct CompoundPoissonDrift {
    double mu = 2.0;
    double lambda = 5.0;
    double eta = 0.2;
};

/// Raw, unvalidated parameters of one of the supported spectrally negative families.
using FamilyParams = std::variant<BrownianDrift, JumpDiffusion, CompoundPoissonDrift>;

enum class FamilyKind { brownian_drift, jump_diffusion, compound_poisson_drift };

std::string to_string(FamilyKind kind);

/// Validated process family. Construction rejects non-positive rates and any
/// parameter set with psi'(0+) >= 0, so every ProcessFamily drifts to -infinity
/// and has a finite, exponentially distributed ultimate supremum.
class ProcessFamily {
public:
    explicit ProcessFamily(FamilyParams params);

    const FamilyParams& params() const noexcept { return params_; }
    FamilyKind kind() const noexcept;

    /// Gaussian coefficient (0 for the compound Poisson family).
    double sigma() const noexcept;
    double mu() const noexcept;
    /// Jump rate (0 for Brownian drift).
    double lambda() const noexcept;
    /// Rate of the exponential jump sizes (0 for Brownian drift).
    double eta() const noexcept;

    /// True for the families with a Gaussian part (regular downwards).
    bool unbounded_variation() const noexcept { return sigma() > 0.0; }

    /// Phi(0), cached at construction.
    double phi0() const noexcept { return phi0_; }

private:
    FamilyParams params_;
    double phi0_;
};

/// Law of the ultimate supremum: Exp(phi0).
struct SupremumLaw {
    double phi0;
    double median;
    double atom_at_zero;
};

/// psi(z) for z >= 0. Throws DomainError for negative z.
double laplace_exponent(const FamilyParams& params, double z);
double laplace_exponent(const ProcessFamily& family, double z);

/// psi'(z) for z >= 0 (right derivative at 0).
double laplace_exponent_derivative(const FamilyParams& params, double z);
double laplace_exponent_derivative(const ProcessFamily& family, double z);

/// Largest nonnegative root of psi(z) = q. Throws DegenerateModelError when
/// q = 0 and psi'(0+) >= 0, DomainError for q < 0.
double phi(const FamilyParams& params, double q);
double phi(const ProcessFamily& family, double q);

/// psi'(0+) < 0, evaluated in closed form.
bool drifts_to_minus_infinity(const FamilyParams& params);

SupremumLaw supremum_law(const ProcessFamily& family);

/// P(sup_t X_t <= x).
double supremum_cdf(const ProcessFamily& family, double x);

/// ln 2 / Phi(0).
double median(const ProcessFamily& family);

/// E[theta] = Phi'(0) / Phi(0) = 1 / (Phi(0) psi'(Phi(0))).
double expected_theta(const ProcessFamily& family);

/// Validates positivity of the rate and volatility parameters. Throws DomainError.
void validate_parameters(const FamilyParams& params);

}  // namespace ultimum
