#include "ultimum/scale.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <variant>

#include "ultimum/error.hpp"

namespace ultimum {

namespace {

using cld = std::complex<long double>;

cld laplace_exponent_complex(const FamilyParams& params, cld z) {
    if (const auto* p = std::get_if<BrownianDrift>(&params)) {
        const long double s2 = static_cast<long double>(p->sigma) * p->sigma;
        return 0.5L * s2 * z * z + static_cast<long double>(p->mu) * z;
    }
    if (const auto* p = std::get_if<JumpDiffusion>(&params)) {
        const long double s2 = static_cast<long double>(p->sigma) * p->sigma;
        return 0.5L * s2 * z * z + static_cast<long double>(p->mu) * z -
               static_cast<long double>(p->lambda) * z / (static_cast<long double>(p->eta) + z);
    }
    const auto& p = std::get<CompoundPoissonDrift>(params);
    return static_cast<long double>(p.mu) * z -
           static_cast<long double>(p.lambda) * z / (static_cast<long double>(p.eta) + z);
}

}  // namespace

JumpDiffusionRoots jump_diffusion_roots(double sigma, double mu, double lambda, double eta) {
    validate_parameters(JumpDiffusion{sigma, mu, lambda, eta});
    if (!(mu - lambda / eta < 0.0))
        throw DegenerateModelError("jump_diffusion_roots: drift condition ψ′(0+)<0 violated");
    const double s2 = sigma * sigma;
    const double half = eta / 2.0 + mu / s2;
    const double disc = std::sqrt(half * half - 2.0 * (mu * eta - lambda) / s2);
    return {-half - disc, -half + disc};
}

ScaleModel::ScaleModel(const ProcessFamily& family) : family_(family) {
    const auto& params = family_.params();
    if (const auto* p = std::get_if<BrownianDrift>(&params)) {
        // W(x) = (1 - e^{-2 mu x / sigma^2}) / mu
        terms_[0] = {1.0 / p->mu, 0.0};
        terms_[1] = {-1.0 / p->mu, family_.phi0()};
        term_count_ = 2;
    } else if (const auto* p = std::get_if<JumpDiffusion>(&params)) {
        const auto roots = jump_diffusion_roots(p->sigma, p->mu, p->lambda, p->eta);
        const double b1 = roots.beta1;
        const double b3 = roots.beta3;
        const double s2 = p->sigma * p->sigma;
        JumpDiffusionCoefficients c{b1, b3, 2.0 * (p->eta + b1) / (s2 * b1 * (b1 - b3)),
                                    2.0 * p->eta / (s2 * b1 * b3), 2.0 * (p->eta + b3) / (s2 * b3 * (b3 - b1))};
        terms_[0] = {c.c1, b1};
        terms_[1] = {c.c2, 0.0};
        terms_[2] = {c.c3, b3};
        term_count_ = 3;
        jump_diffusion_ = c;
    } else {
        const auto& cp = std::get<CompoundPoissonDrift>(params);
        const double denom = cp.lambda - cp.mu * cp.eta;
        terms_[0] = {cp.lambda / (cp.mu * denom), family_.phi0()};
        terms_[1] = {-cp.eta / denom, 0.0};
        term_count_ = 2;
    }
}

ScaleModel ScaleModel::scaled(double factor) const {
    if (!(factor > 0.0) || !std::isfinite(factor)) throw DomainError("ScaleModel::scaled: factor must be > 0");
    ScaleModel copy = *this;
    for (std::size_t i = 0; i < copy.term_count_; ++i) copy.terms_[i].coefficient *= factor;
    if (copy.jump_diffusion_) {
        copy.jump_diffusion_->c1 *= factor;
        copy.jump_diffusion_->c2 *= factor;
        copy.jump_diffusion_->c3 *= factor;
    }
    copy.factor_ *= factor;
    return copy;
}

double ScaleModel::w_at_zero() const noexcept {
    if (family_.unbounded_variation()) return 0.0;
    return factor_ / family_.mu();
}

double ScaleModel::w_prime_at_zero() const noexcept {
    double sum = 0.0;
    for (const auto& t : terms()) sum += t.coefficient * t.rate;
    return sum;
}

double scale_w(const ScaleModel& model, double x) {
    if (std::isnan(x)) throw DomainError("scale_w: x is NaN");
    if (x < 0.0) return 0.0;
    if (x == 0.0) return model.w_at_zero();
    double sum = 0.0;
    for (const auto& t : model.terms()) sum += t.coefficient * std::exp(t.rate * x);
    return sum;
}

double scale_w_prime(const ScaleModel& model, double x) {
    if (!(x > 0.0)) throw DomainError("scale_w_prime: x must be > 0");
    double sum = 0.0;
    for (const auto& t : model.terms()) sum += t.coefficient * t.rate * std::exp(t.rate * x);
    return sum;
}

double invert_laplace_scale(const ProcessFamily& family, double x, int nodes) {
    if (!(x > 0.0) || !std::isfinite(x)) throw DomainError("invert_laplace_scale: x must be > 0");
    if (nodes < 2) throw DomainError("invert_laplace_scale: need at least 2 nodes");

    // Fixed Talbot: contour s(t) = r t (cot t + i), t in (0, pi), r = 2M / (5x).
    // All poles of 1/psi(s + Phi(0)) sit on the closed left half-line.
    const long double shift = family.phi0();
    const long double t = x;
    const long double m = nodes;
    const long double r = 2.0L * m / (5.0L * t);
    const auto transform = [&](cld s) { return 1.0L / laplace_exponent_complex(family.params(), s + shift); };

    long double acc = 0.5L * std::exp(r * t) * transform(cld(r, 0.0L)).real();
    for (int k = 1; k < nodes; ++k) {
        const long double theta = k * std::numbers::pi_v<long double> / m;
        const long double cot = std::cos(theta) / std::sin(theta);
        const cld s(r * theta * cot, r * theta);
        const long double sigma = theta + (theta * cot - 1.0L) * cot;
        acc += (std::exp(t * s) * transform(s) * cld(1.0L, sigma)).real();
    }
    return static_cast<double>(std::exp(shift * t) * r / m * acc);
}

double potential_density(const ScaleModel& model, double y, double x, double a) {
    if (!(a > 0.0)) throw DomainError("potential_density: a must be > 0");
    if (!(y >= 0.0 && y < a)) throw DomainError("potential_density: y must lie in [0, a)");
    if (!(x > 0.0 && x < a)) throw DomainError("potential_density: x must lie in (0, a)");
    const double value = scale_w(model, a - y) * scale_w_prime(model, x) / scale_w_prime(model, a) -
                         scale_w(model, x - y);
    if (value >= 0.0) return value;
    if (value < -1e-9 * std::max(1.0, scale_w(model, a)))
        throw InternalError("potential_density: negative density beyond rounding");
    return 0.0;
}

double potential_atom(const ScaleModel& model, double y, double a) {
    if (!(a > 0.0)) throw DomainError("potential_atom: a must be > 0");
    if (!(y >= 0.0)) throw DomainError("potential_atom: y must be >= 0");
    if (y >= a) return 0.0;
    const double w0 = model.w_at_zero();
    if (w0 == 0.0) return 0.0;
    return scale_w(model, a - y) * w0 / scale_w_prime(model, a);
}

}  // namespace ultimum
