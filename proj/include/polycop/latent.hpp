#pragma once

#include <cstdint>
#include <vector>

#include "polycop/matrix.hpp"
#include "polycop/rng.hpp"

namespace polycop {

// Joint distribution of the outcome error and the J latent utility errors:
// unit variances, Cov(eps, u_j) = rho_star[j], Cov(u_j, u_k) = exch_corr.
struct LatentCovSpec {
    std::vector<double> rho_star;
    double exch_corr = 0.0;
    double mu_eps = 0.0;
    std::vector<double> mu;  // per-alternative means; empty means all zero

    int num_alternatives() const { return static_cast<int>(rho_star.size()); }

    // (J+1) x (J+1) covariance, eps first.
    Matrix joint_cov() const;

    // Throws DomainError / DecompositionError when the implied covariance is
    // not positive definite or dimensions disagree.
    void validate() const;
};

// Precomputed Cholesky factor for repeated joint draws. Draws are pure
// zero-mean errors; callers add means and systematic utilities where they
// belong.
class LatentSampler {
  public:
    explicit LatentSampler(const LatentCovSpec& spec);

    int num_alternatives() const { return J_; }

    // Fills eps and u[0..J-1] for the index-th draw on the stream. Each draw
    // consumes J+1 counter slots, so draws with different indices never
    // overlap.
    void draw(const RngStream& stream, std::uint64_t index, double& eps,
              std::vector<double>& u) const;

    // Same draw, but consuming counters first_counter .. first_counter+J, for
    // callers that interleave latent draws with other variates on one stream.
    void draw_at(const RngStream& stream, std::uint64_t first_counter, double& eps,
                 std::vector<double>& u) const;

  private:
    int J_;
    Matrix chol_;
};

}  // namespace polycop
