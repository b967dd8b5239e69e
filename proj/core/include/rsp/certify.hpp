#pragma once

// Scenario-approach certification: sample-complexity formulas, posterior risk
// levels from observed support cardinality, monotone inversion K(eps_bar),
// and out-of-sample violation estimation.

#include <optional>
#include <string>

#include "rsp/robust.hpp"

namespace rsp::certify {

enum class GuaranteeMode { prior_convex, posterior_convex, posterior_nonconvex, improved_nonconvex };

const char* to_string(GuaranteeMode mode);
GuaranteeMode mode_from_string(const std::string& text);

// Binds a solution to a probabilistic risk claim: with confidence 1-beta the
// violation probability is at most epsilon.
struct GuaranteeCertificate {
  GuaranteeMode mode = GuaranteeMode::posterior_convex;
  double epsilon = 0.0;
  double beta = 0.0;
  long K = 0;
  int k_or_d = 0;  // support-set cardinality (posterior) or dimension (prior)
  std::optional<long> s_bar;
};

std::string certificate_to_json_text(const GuaranteeCertificate& cert);
GuaranteeCertificate certificate_from_json_text(const std::string& text);

struct RiskEstimate {
  long violations = 0;
  long trials = 0;
  double epsilon_hat = 0.0;
  double gamma_threshold = 0.0;
};

struct Margin {
  double rel = 1e-6;
  double abs = 1e-3;  // $ or MWh
};

// P[Bin(K, eps) <= d-1], evaluated in log space with compensated summation.
double binom_tail(long K, int d, double eps);

// Smallest K with binom_tail(K, d, eps_bar) <= beta.
long prior_min_k(double eps_bar, double beta, int d);

// Inverse of the prior bound in eps: the smallest risk level certified by K
// samples at confidence beta in dimension d.
double prior_eps(int d, double beta, long K);

// Classical sufficient sample size round((2/eps_bar)(ln(1/beta) + d)); looser
// than the exact tail inversion but a common reference value.
long closed_form_k(double eps_bar, double beta, int d);

// Posterior (wait-and-judge) risk for convex problems: the unique root in
// (0,1) of (beta/(K+1)) * sum_{i=k}^{K} C(i,k)(1-e)^{i-k} = C(K,k)(1-e)^{K-k},
// 1 when k = K.
double posterior_convex_eps(int k, double beta, long K);

// Posterior risk for nonconvex problems: 1 - (beta/(K C(K,k)))^{1/(K-k)},
// 1 when k = K.
double posterior_nonconvex_eps(int k, double beta, long K);

// Sharper nonconvex bound when the support cardinality is capped by s_bar:
// 1 - (beta/(s_bar C(K,k)))^{1/(K-k)}. Requires k <= s_bar <= K.
double improved_nonconvex_eps(int k, double beta, long K, long s_bar);

// Risk level of `mode` at the given parameters; the dispatch behind
// certificate consistency checks and min_k_for.
double recompute_epsilon(GuaranteeMode mode, int k_or_d, double beta, long K,
                         std::optional<long> s_bar = std::nullopt);

// Smallest K with recompute_epsilon(...) <= eps_bar, by exponential
// bracketing and binary search; monotonicity is asserted across the final
// bracket. Throws DomainError when no K <= 1e8 works.
long min_k_for(GuaranteeMode mode, int k_or_d, double eps_bar, double beta,
               std::optional<long> s_bar = std::nullopt);

// True when recomputing epsilon from the certificate's parameters reproduces
// the stored value within tol.
bool certificate_consistent(const GuaranteeCertificate& cert, double tol = 1e-12);

GuaranteeCertificate make_certificate(GuaranteeMode mode, int k_or_d, double beta, long K,
                                      std::optional<long> s_bar = std::nullopt);

// Re-solves the second stage on every test scenario under the fixed plan and
// counts how often its value exceeds gamma_star (cost kind: beyond
// gamma*(1+rel)+abs; curtailment kind: beyond gamma*+abs).
RiskEstimate estimate_violation(const grid::NetworkCase& net, const robust::StoragePlan& plan,
                                double gamma_star, const scenarios::ScenarioSet& test,
                                robust::FormulationKind kind, const Margin& margin = {},
                                const robust::SolveSettings& settings = {});

// Loss-of-load probability: curtailment-kind violation estimate at
// gamma_star = 0.
RiskEstimate lolp(const grid::NetworkCase& net, const robust::StoragePlan& plan,
                  const scenarios::ScenarioSet& test, const Margin& margin = {},
                  const robust::SolveSettings& settings = {});

}  // namespace rsp::certify
