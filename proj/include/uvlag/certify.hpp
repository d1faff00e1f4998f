#pragma once

#include "uvlag/fasttrack.hpp"
#include "uvlag/sets.hpp"
#include "uvlag/ulag.hpp"

namespace uvlag {

/// Sampled proximal-subgradient inequality for the function:
///   f(x') >= f(x) + <g, x'-x> - rho/2 ||x'-x||^2
/// over pairs (x, g in subdiff(x)) inside the attentive window around
/// (xbar, gbar) and targets x' in the eps_bar-ball. Pass iff the max
/// violation is <= 1e-9. The witness is the maximum-violation tuple
/// (deterministic scan order; structured probes are scanned first).
Certificate certify_function_prox_regularity(const Problem& problem,
                                             const VectorXd& gbar,
                                             double eps_bar, double rho,
                                             long n_samples, std::uint64_t seed);

/// Sampled normal-cone inequality for a set (unit normal generators):
///   <w, x'-x> <= rho/2 ||x'-x||^2 for x' in C near xbar.
Certificate certify_set_prox_regularity(const SetDescr& set,
                                        const VectorXd& xbar,
                                        const VectorXd& wbar, double eps,
                                        double rho, long n_samples,
                                        std::uint64_t seed);

/// Certifies the product D x E, then re-certifies the factor D at the same
/// (eps, rho); pass iff both hold.
Certificate certify_product_set(const SetDescr& D, const SetDescr& E,
                                const VectorXd& xbarD, const VectorXd& wbarD,
                                const VectorXd& xbarE, const VectorXd& wbarE,
                                double eps, double rho, long n_samples,
                                std::uint64_t seed);

/// Re-certifies the set at sampled perturbed centers (x~, v~) within beta of
/// (xbar, vbar), with the reduced radius eps_bar - beta.
Certificate certify_perturbation(const SetDescr& set, const VectorXd& xbar,
                                 const VectorXd& vbar, double eps_bar,
                                 double rho, double beta, long n_samples,
                                 std::uint64_t seed);

/// Triangle-inequality ball inclusion: z in B(y, alpha-beta), y in
/// B(ybar, beta) implies ||z - ybar|| <= alpha. Includes the tight colinear
/// probe. Requires 0 < beta < alpha.
Certificate ball_inclusion_check(const VectorXd& ybar, double alpha,
                                 double beta, long n_samples,
                                 std::uint64_t seed);

/// Monotonicity of the attentive localization of the marginal-function
/// subgradients: <s1-s0, u1-u0> + rho_hat ||u1-u0||^2 >= -1e-8 over sampled
/// pairs in the window (||u|| < r, |L(u)-L(0)| < r, ||s-gbar_u|| < r).
Certificate certify_localization_monotonicity(const Problem& problem,
                                              const UVFrame& frame,
                                              const VectorXd& gbar, double eps,
                                              double rho_hat, int n_pairs,
                                              std::uint64_t seed);

/// Empirical Lipschitz constant of the minimizer selection on a grid in the
/// attentive window: max ||v1-v2|| / ||u1-u2||. Informational certificate
/// (always passes; the constant is the payload).
Certificate estimate_W_lipschitz(const Problem& problem, const UVFrame& frame,
                                 const VectorXd& gbar, double eps, int grid_n,
                                 std::optional<double> radius = std::nullopt);

/// Regular-equals-limiting check at explicit points: the oracle must apply
/// the exact max/sum rule, and the hull's support function must match
/// one-sided difference quotients.
Certificate certify_regular_equals_limiting(const Problem& problem,
                                            const std::vector<VectorXd>& points,
                                            CertKind kind);

/// The section-5 assumption bundle on a manifold model:
/// A4 regular = limiting near xbar on M; A5 interior minimizer selection;
/// A6 V-projection attainability of boundary subgradients along M;
/// A7 regularity plus nonempty subdifferential on M.
std::vector<Certificate> check_section5_assumptions(const ManifoldModel& model,
                                                    double eps, double tau,
                                                    int grid_points = 9);

}  // namespace uvlag
