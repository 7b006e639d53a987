#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>

#include "ultimum/levy_model.hpp"

namespace ultimum {

/// Real roots of the jump-diffusion Laplace exponent other than 0.
struct JumpDiffusionRoots {
    double beta1;  ///< < -eta
    double beta3;  ///< = Phi(0) > 0
};

/// W(x) = c1 e^{beta1 x} + c2 + c3 e^{beta3 x} for the jump diffusion.
struct JumpDiffusionCoefficients {
    double beta1;
    double beta3;
    double c1;
    double c2;
    double c3;
};

JumpDiffusionRoots jump_diffusion_roots(double sigma, double mu, double lambda, double eta);

/// Closed-form scale function of a ProcessFamily. For all supported families
/// W restricted to [0, inf) is a short sum of exponentials sum_i c_i e^{r_i x},
/// normalised so that its Laplace transform is 1/psi.
class ScaleModel {
public:
    struct Term {
        double coefficient;
        double rate;
    };

    explicit ScaleModel(const ProcessFamily& family);

    const ProcessFamily& family() const noexcept { return family_; }
    double phi0() const noexcept { return family_.phi0(); }

    std::span<const Term> terms() const noexcept { return {terms_.data(), term_count_}; }

    /// Present for the jump-diffusion family only.
    const std::optional<JumpDiffusionCoefficients>& jump_diffusion() const noexcept { return jump_diffusion_; }

    /// Copy with W multiplied by factor > 0. The threshold equation is invariant under this.
    ScaleModel scaled(double factor) const;
    double scale_factor() const noexcept { return factor_; }

    /// W(0) (0 for unbounded variation, 1/mu for the compound Poisson family).
    double w_at_zero() const noexcept;
    /// W'(0+), the right limit from the closed form.
    double w_prime_at_zero() const noexcept;

private:
    ProcessFamily family_;
    std::array<Term, 3> terms_{};
    std::size_t term_count_ = 0;
    std::optional<JumpDiffusionCoefficients> jump_diffusion_;
    double factor_ = 1.0;
};

/// W(x); 0 for x < 0.
double scale_w(const ScaleModel& model, double x);

/// W'(x) for x > 0. Throws DomainError for x <= 0.
double scale_w_prime(const ScaleModel& model, double x);

/// W(x) recovered from 1/psi by a fixed-Talbot contour with `nodes` nodes.
/// The contour is shifted by Phi(0) and summed in extended precision.
double invert_laplace_scale(const ProcessFamily& family, double x, int nodes = 64);

/// Density of the potential measure of Y^y killed on leaving [0, a]:
/// u_a(y, x) = W(a - y) W'(x) / W'(a) - W(x - y), for 0 <= y < a, 0 < x < a.
double potential_density(const ScaleModel& model, double y, double x, double a);

/// Atom at zero of that potential measure: W(a - y) W(0) / W'(a).
double potential_atom(const ScaleModel& model, double y, double a);

}  // namespace ultimum
