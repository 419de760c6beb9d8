#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "opdyn/graph.hpp"
#include "opdyn/rng.hpp"
#include "opdyn/two_agent.hpp"

namespace opdyn {

// Two-block stochastic block model: 2n agents, the first n in block L and the
// last n in block R. Each unordered pair is linked independently with
// probability p (same block) or q (different blocks).
struct SbmConfig {
  std::size_t n = 32;
  double p = 0.25;
  double q = 0.125;
  Normalization normalization = Normalization::RowNormalized;
  double a = 1.0;  // row budget (RowNormalized) or per-edge weight (UnitWeight)
  std::uint64_t seed = 0;

  void validate() const;
};

// Pairs are visited in the order (i, j), i < j, one Bernoulli draw each.
InfluenceGraph generate_sbm(const SbmConfig& cfg, Rng& rng);
InfluenceGraph generate_sbm(const SbmConfig& cfg);  // uses Rng(cfg.seed)

// Membership in C_{delta,n}: every agent's same-block degree lies in
// [(1-delta) p n, (1+delta) p n] and its cross-block degree in
// [(1-delta) q n, (1+delta) q n]. The bands use p n and q n as written, even
// though the same-block degree is Binomial(n-1, p).
struct ConcentrationCheck {
  double delta = 0.0;
  bool in_set = false;
  double worst_same_deviation = 0.0;   // max_i |d_same(i) - p n| / (p n)
  double worst_cross_deviation = 0.0;  // max_i |d_cross(i) - q n| / (q n)
};

// Throws InvalidArgument when an agent is unlabeled or delta is outside (0, 1).
ConcentrationCheck concentration_check(const InfluenceGraph& graph, const SbmConfig& cfg,
                                       double delta);

// Per-agent degree tail bound 3 exp(-delta^2 rate n / 8).
double concentration_bound(std::size_t n, double rate, double delta);

// Two-agent reduction of the block model.
struct MeanFieldPrediction {
  double coupling = 0.0;  // effective two-agent a
  ClassificationResult classification;
  std::optional<double> polarization;  // 2b/(2 coupling + b) when PD
};

// Row-normalized weights: coupling a beta with beta = q/(p+q).
MeanFieldPrediction mean_field_prediction(double a, double b, double p, double q, double xL,
                                          double xR);
// Unit weights: each agent has about q n cross neighbors of weight a, so the
// coupling is a n q and the PD polarization 2b/(b + 2 a n q).
MeanFieldPrediction mean_field_prediction_unit_weight(double a, double b, std::size_t n, double q,
                                                      double xL, double xR);

// Upper and lower envelopes of each block's opinions.
struct EnvelopeState {
  double xbar_L = 0.0;
  double xunder_L = 0.0;
  double xbar_R = 0.0;
  double xunder_R = 0.0;
};

struct EnvelopeTrajectory {
  std::vector<double> times;
  std::vector<EnvelopeState> states;
  double step = 0.0;
  // xL < 0 < xR: the system was solved for the negated opinions and mapped back.
  bool mirrored = false;
};

struct EnvelopeParams {
  double a = 1.0;
  double b = 1.0;
  double p = 0.25;
  double q = 0.125;
  double delta = 0.1;
  double epsilon = kDefaultEpsilon;
};

// RK4 (same step guard as integrate) for
//   xbar_L'   = a c_lo (xbar_R - xbar_L)     + b(s(xbar_L) - xbar_L)
//   xunder_L' = a c_hi (xunder_R - xunder_L) + b(s(xunder_L) - xunder_L)
//   xbar_R'   = a c_hi (xbar_L - xbar_R)     + b(s(xbar_R) - xbar_R)
//   xunder_R' = a c_lo (xunder_L - xunder_R) + b(s(xunder_R) - xunder_R)
// with c_lo = (1-delta)q/((1+delta)(p+q)), c_hi = (1+delta)q/((1-delta)(p+q)),
// starting from xL > 0 > xR. The mirrored start xL < 0 < xR is handled by odd
// symmetry. delta = 0 is accepted (the envelopes coincide).
EnvelopeTrajectory integrate_envelopes(const EnvelopeParams& params, double xL, double xR,
                                       double horizon, double step = kDefaultStep);

// Largest distance by which an agent leaves its block's envelope, over states
// sampled at `times` (which must lie on the envelope grid). <= 0 when every
// agent is inside.
double envelope_excess(const InfluenceGraph& graph, const std::vector<double>& times,
                       const std::vector<std::vector<double>>& states,
                       const EnvelopeTrajectory& envelopes);

}  // namespace opdyn
