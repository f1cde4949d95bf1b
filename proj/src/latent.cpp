#include "polycop/latent.hpp"

#include <string>

#include "polycop/errors.hpp"
#include "polycop/normal.hpp"

namespace polycop {

Matrix LatentCovSpec::joint_cov() const {
    const int J = num_alternatives();
    Matrix s(J + 1, J + 1);
    s(0, 0) = 1.0;
    for (int j = 0; j < J; ++j) {
        s(0, j + 1) = rho_star[j];
        s(j + 1, 0) = rho_star[j];
        for (int k = 0; k < J; ++k) s(j + 1, k + 1) = (j == k) ? 1.0 : exch_corr;
    }
    return s;
}

void LatentCovSpec::validate() const {
    const int J = num_alternatives();
    if (J < 2) throw DomainError("LatentCovSpec: need at least two alternatives");
    if (!mu.empty() && static_cast<int>(mu.size()) != J)
        throw ShapeError("LatentCovSpec: mu length " + std::to_string(mu.size()) +
                         " does not match " + std::to_string(J) + " alternatives");
    cholesky(joint_cov());  // throws if not PD
}

LatentSampler::LatentSampler(const LatentCovSpec& spec) : J_(spec.num_alternatives()) {
    spec.validate();
    if (J_ + 1 > 64) throw DomainError("LatentSampler: too many alternatives");
    chol_ = cholesky(spec.joint_cov());
}

void LatentSampler::draw(const RngStream& stream, std::uint64_t index, double& eps,
                         std::vector<double>& u) const {
    draw_at(stream, index * static_cast<std::uint64_t>(J_ + 1), eps, u);
}

void LatentSampler::draw_at(const RngStream& stream, std::uint64_t first_counter, double& eps,
                            std::vector<double>& u) const {
    const int d = J_ + 1;
    u.resize(J_);
    // Independent normals, then the Cholesky transform.
    double z[64];
    for (int t = 0; t < d; ++t) z[t] = normal_draw(stream, first_counter + t);
    eps = chol_(0, 0) * z[0];
    for (int j = 0; j < J_; ++j) {
        double s = 0.0;
        for (int t = 0; t <= j + 1; ++t) s += chol_(j + 1, t) * z[t];
        u[j] = s;
    }
}

}  // namespace polycop
