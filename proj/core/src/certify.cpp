#include "rsp/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <nlohmann/json.hpp>

#include "rsp/common.hpp"

namespace rsp::certify {

namespace {

constexpr long kMaxSamples = 100000000;  // search ceiling for min_k_for
constexpr double kInf = std::numeric_limits<double>::infinity();

double lchoose(long n, long k) {
  if (k < 0 || k > n) return -kInf;
  return std::lgamma(double(n) + 1.0) - std::lgamma(double(k) + 1.0) -
         std::lgamma(double(n - k) + 1.0);
}

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 1.0)) throw DomainError("beta must lie in (0,1)");
}

void check_eps_bar(double eps_bar) {
  if (!(eps_bar > 0.0 && eps_bar < 1.0)) throw DomainError("eps_bar must lie in (0,1)");
}

}  // namespace

const char* to_string(GuaranteeMode mode) {
  switch (mode) {
    case GuaranteeMode::prior_convex: return "prior_convex";
    case GuaranteeMode::posterior_convex: return "posterior_convex";
    case GuaranteeMode::posterior_nonconvex: return "posterior_nonconvex";
    case GuaranteeMode::improved_nonconvex: return "improved_nonconvex";
  }
  return "unknown";
}

GuaranteeMode mode_from_string(const std::string& text) {
  if (text == "prior_convex") return GuaranteeMode::prior_convex;
  if (text == "posterior_convex") return GuaranteeMode::posterior_convex;
  if (text == "posterior_nonconvex") return GuaranteeMode::posterior_nonconvex;
  if (text == "improved_nonconvex") return GuaranteeMode::improved_nonconvex;
  throw ParseError("unknown guarantee mode: " + text);
}

double binom_tail(long K, int d, double eps) {
  if (K < 1) throw DomainError("binom_tail: K must be >= 1");
  if (d < 1 || d > K) throw DomainError("binom_tail: d must lie in [1, K]");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("binom_tail: eps must lie in (0,1)");
  const double le = std::log(eps);
  const double l1e = std::log1p(-eps);
  double max_log = -kInf;
  std::vector<double> logs(static_cast<std::size_t>(d));
  for (int i = 0; i < d; ++i) {
    const double lt = lchoose(K, i) + double(i) * le + double(K - i) * l1e;
    logs[std::size_t(i)] = lt;
    max_log = std::max(max_log, lt);
  }
  if (max_log == -kInf) return 0.0;
  double sum = 0.0;
  double comp = 0.0;
  for (int i = 0; i < d; ++i) {
    const double term = std::exp(logs[std::size_t(i)] - max_log);
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  const double value = std::exp(max_log + std::log(sum));
  return std::clamp(value, 0.0, 1.0);
}

long prior_min_k(double eps_bar, double beta, int d) {
  check_eps_bar(eps_bar);
  check_beta(beta);
  if (d < 1) throw DomainError("prior_min_k: d must be >= 1");
  long lo = d;  // tail(d, d, eps) = P[Bin(d,eps) <= d-1] = 1 - eps^d, nearly always > beta
  if (binom_tail(lo, d, eps_bar) <= beta) return lo;
  long hi = 2 * lo;
  while (hi <= kMaxSamples && binom_tail(hi, d, eps_bar) > beta) {
    lo = hi;
    hi *= 2;
  }
  if (hi > kMaxSamples) {
    if (binom_tail(kMaxSamples, d, eps_bar) > beta)
      throw DomainError("prior_min_k: no sample size <= 1e8 satisfies the bound");
    hi = kMaxSamples;
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (binom_tail(mid, d, eps_bar) <= beta)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

double prior_eps(int d, double beta, long K) {
  check_beta(beta);
  if (d < 1) throw DomainError("prior_eps: d must be >= 1");
  if (K < d) throw DomainError("prior_eps: K must be >= d");
  // binom_tail is decreasing in eps, from 1 at eps->0 to 0 at eps->1.
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (binom_tail(K, d, mid) <= beta)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

long closed_form_k(double eps_bar, double beta, int d) {
  check_eps_bar(eps_bar);
  check_beta(beta);
  if (d < 1) throw DomainError("closed_form_k: d must be >= 1");
  return std::llround((2.0 / eps_bar) * (std::log(1.0 / beta) + double(d)));
}

namespace {

// Scaled evaluation of (beta/(K+1)) * sum_{i=k}^{K} C(i,k)(1-e)^{i-k}
//                      - C(K,k)(1-e)^{K-k}.
// The running term C(i,k)(1-e)^{i-k} follows the recurrence
// term_{i+1} = term_i * (1-e) * (i+1)/(i+1-k); both the sum and the final
// term are rescaled together, so the returned sign and the relative residual
// are unaffected by the common scale factor.
struct ConvexRootParts {
  double sum = 0.0;
  double last = 0.0;  // term at i = K, same scale as sum
};

ConvexRootParts convex_root_parts(int k, long K, double e) {
  const double q = 1.0 - e;
  double term = 1.0;
  double sum = 0.0;
  double comp = 0.0;
  for (long i = k; i <= K; ++i) {
    if (i > k) term *= q * double(i) / double(i - k);
    if (term > 1e280) {
      term *= 1e-280;
      sum *= 1e-280;
      comp *= 1e-280;
    }
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return {sum, term};
}

}  // namespace

double posterior_convex_eps(int k, double beta, long K) {
  check_beta(beta);
  if (K < 1) throw DomainError("posterior_convex_eps: K must be >= 1");
  if (k < 0 || k > K) throw DomainError("posterior_convex_eps: k must lie in [0, K]");
  if (k == K) return 1.0;
  const double scale = beta / double(K + 1);
  const auto f = [&](double e) {
    const auto parts = convex_root_parts(k, K, e);
    return scale * parts.sum - parts.last;
  };
  // f < 0 at e -> 0 (hockey-stick sum gives beta/(k+1) - 1) and f -> beta/(K+1) > 0
  // at e -> 1, with a unique sign change between.
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) >= 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

double posterior_nonconvex_eps(int k, double beta, long K) {
  check_beta(beta);
  if (K < 1) throw DomainError("posterior_nonconvex_eps: K must be >= 1");
  if (k < 0 || k > K) throw DomainError("posterior_nonconvex_eps: k must lie in [0, K]");
  if (k == K) return 1.0;
  const double expo = (std::log(beta) - std::log(double(K)) - lchoose(K, k)) / double(K - k);
  return std::clamp(1.0 - std::exp(expo), 0.0, 1.0);
}

double improved_nonconvex_eps(int k, double beta, long K, long s_bar) {
  check_beta(beta);
  if (K < 1) throw DomainError("improved_nonconvex_eps: K must be >= 1");
  if (k < 0) throw DomainError("improved_nonconvex_eps: k must be >= 0");
  if (k > s_bar) throw DomainError("improved_nonconvex_eps: k exceeds the support cap s_bar");
  if (s_bar > K) throw DomainError("improved_nonconvex_eps: s_bar must be <= K");
  if (k == K) return 1.0;
  const double expo = (std::log(beta) - std::log(double(s_bar)) - lchoose(K, k)) / double(K - k);
  return std::clamp(1.0 - std::exp(expo), 0.0, 1.0);
}

double recompute_epsilon(GuaranteeMode mode, int k_or_d, double beta, long K,
                         std::optional<long> s_bar) {
  switch (mode) {
    case GuaranteeMode::prior_convex: return prior_eps(k_or_d, beta, K);
    case GuaranteeMode::posterior_convex: return posterior_convex_eps(k_or_d, beta, K);
    case GuaranteeMode::posterior_nonconvex: return posterior_nonconvex_eps(k_or_d, beta, K);
    case GuaranteeMode::improved_nonconvex:
      if (!s_bar) throw DomainError("improved_nonconvex mode requires s_bar");
      return improved_nonconvex_eps(k_or_d, beta, K, *s_bar);
  }
  throw DomainError("unknown guarantee mode");
}

long min_k_for(GuaranteeMode mode, int k_or_d, double eps_bar, double beta,
               std::optional<long> s_bar) {
  check_eps_bar(eps_bar);
  check_beta(beta);
  if (mode == GuaranteeMode::prior_convex) return prior_min_k(eps_bar, beta, k_or_d);
  if (k_or_d < 0) throw DomainError("min_k_for: k must be >= 0");
  if (mode == GuaranteeMode::improved_nonconvex && !s_bar)
    throw DomainError("min_k_for: improved_nonconvex mode requires s_bar");
  long start = std::max<long>(k_or_d + 1, 1);
  if (mode == GuaranteeMode::improved_nonconvex) start = std::max(start, *s_bar);
  const auto eps_at = [&](long K) { return recompute_epsilon(mode, k_or_d, beta, K, s_bar); };
  long lo = start - 1;  // eps at K <= k is 1, above any admissible eps_bar
  long hi = start;
  while (hi <= kMaxSamples && eps_at(hi) > eps_bar) {
    lo = hi;
    hi *= 2;
  }
  if (hi > kMaxSamples) {
    if (eps_at(kMaxSamples) > eps_bar)
      throw DomainError("min_k_for: no sample size <= 1e8 reaches eps_bar");
    hi = kMaxSamples;
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    if (eps_at(mid) <= eps_bar)
      hi = mid;
    else
      lo = mid;
  }
  if (eps_at(hi) > eps_bar || (hi > start && eps_at(hi - 1) <= eps_bar))
    throw SolverError("min_k_for: epsilon is not monotone across the final bracket");
  return hi;
}

bool certificate_consistent(const GuaranteeCertificate& cert, double tol) {
  const double eps = recompute_epsilon(cert.mode, cert.k_or_d, cert.beta, cert.K, cert.s_bar);
  return std::abs(eps - cert.epsilon) <= tol;
}

GuaranteeCertificate make_certificate(GuaranteeMode mode, int k_or_d, double beta, long K,
                                      std::optional<long> s_bar) {
  GuaranteeCertificate cert;
  cert.mode = mode;
  cert.beta = beta;
  cert.K = K;
  cert.k_or_d = k_or_d;
  cert.s_bar = s_bar;
  cert.epsilon = recompute_epsilon(mode, k_or_d, beta, K, s_bar);
  return cert;
}

std::string certificate_to_json_text(const GuaranteeCertificate& cert) {
  nlohmann::json j;
  j["mode"] = to_string(cert.mode);
  j["epsilon"] = cert.epsilon;
  j["beta"] = cert.beta;
  j["K"] = cert.K;
  j["k_or_d"] = cert.k_or_d;
  if (cert.s_bar) j["s_bar"] = *cert.s_bar;
  return j.dump(2) + "\n";
}

GuaranteeCertificate certificate_from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("certificate JSON: ") + ex.what());
  }
  GuaranteeCertificate cert;
  try {
    cert.mode = mode_from_string(j.at("mode").get<std::string>());
    cert.epsilon = j.at("epsilon").get<double>();
    cert.beta = j.at("beta").get<double>();
    cert.K = j.at("K").get<long>();
    cert.k_or_d = j.at("k_or_d").get<int>();
    if (j.contains("s_bar")) cert.s_bar = j.at("s_bar").get<long>();
  } catch (const nlohmann::json::exception& ex) {
    throw ParseError(std::string("certificate JSON: ") + ex.what());
  }
  if (!(cert.beta > 0.0 && cert.beta < 1.0)) throw ValidationError("certificate: beta out of range");
  if (cert.K < 1) throw ValidationError("certificate: K must be >= 1");
  if (cert.k_or_d < 0) throw ValidationError("certificate: k_or_d must be >= 0");
  return cert;
}

RiskEstimate estimate_violation(const grid::NetworkCase& net, const robust::StoragePlan& plan,
                                double gamma_star, const scenarios::ScenarioSet& test,
                                robust::FormulationKind kind, const Margin& margin,
                                const robust::SolveSettings& settings) {
  if (test.size() == 0) throw DomainError("estimate_violation: empty test set");
  RiskEstimate est;
  est.trials = long(test.size());
  est.gamma_threshold = gamma_star;
  if (std::isinf(gamma_star) && gamma_star > 0.0) return est;  // nothing can exceed +inf
  const double cost_cut = gamma_star * (1.0 + margin.rel) + margin.abs;
  const double shed_cut = gamma_star + margin.abs;
  for (const auto& scenario : test.scenarios) {
    const auto outcome = robust::evaluate_operation(net, plan, scenario, kind, settings);
    const bool violated = kind.objective == robust::Objective::cost
                              ? outcome.total_cost > cost_cut
                              : outcome.total_shed > shed_cut;
    if (violated) ++est.violations;
  }
  est.epsilon_hat = double(est.violations) / double(est.trials);
  return est;
}

RiskEstimate lolp(const grid::NetworkCase& net, const robust::StoragePlan& plan,
                  const scenarios::ScenarioSet& test, const Margin& margin,
                  const robust::SolveSettings& settings) {
  const robust::FormulationKind kind{robust::Objective::curtailment, robust::Convexity::convex};
  return estimate_violation(net, plan, 0.0, test, kind, margin, settings);
}

}  // namespace rsp::certify
