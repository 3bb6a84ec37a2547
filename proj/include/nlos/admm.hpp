#pragma once

#include <array>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "nlos/dct.hpp"
#include "nlos/operators.hpp"

namespace nlos {

// One data term λ_i ‖Φ̃_i x + α ν_i - β y_i‖²_{w_i} of the fused program.
struct MeasurementTerm {
  std::shared_ptr<const LinearOp> op;
  std::vector<cplx> data;              // measured y (packed like op outputs)
  double weight = 1.0;                 // λ_i
  std::vector<double> sample_weights;  // w_i ∈ {0,1}; empty = all ones
  double noise_sigma = 0.0;            // σ_i (drives Eq-15 weighting)
  bool auto_scale = false;             // β applies to this term's data
};

struct FusionProblem {
  Grid2D obj;
  std::shared_ptr<const Basis> basis;
  std::vector<MeasurementTerm> terms;
};

struct PhaseThresholds {
  double eps_primal, eps_dual, eps_grad;
  bool operator==(const PhaseThresholds&) const = default;
};

struct SolverConfig {
  double lambda_s = 1e-3;  // sparsity weight
  double mu = 5e-3;        // augmented-Lagrangian penalty
  int max_outer = 500;
  int max_inner = 200;
  PhaseThresholds phase1{1.0, 1e-4, 1e-3};
  PhaseThresholds phase2{0.5, 1e-6, 1e-8};
  int phase = 0;  // 0 = both, 1 or 2 = that phase only
  bool estimate_ambient = true;
  bool auto_scale = false;  // enable β updates on flagged terms
  std::array<double, 3> trial_steps{0.1, 0.5, 1.0};
  int threads = 1;
};

struct IterationStats {
  int iter = 0;
  double objective = 0.0;
  double primal = 0.0;
  double dual = 0.0;
  double alpha = 0.0;
  double beta = 1.0;
  int inner = 0;
  double wall_ms = 0.0;
  int phase = 1;
};

struct AdmmState {
  std::vector<double> x, z, u;
  double alpha = 0.0;
  double beta = 1.0;
  int outer = 0;
  double primal = std::numeric_limits<double>::infinity();
  double dual = std::numeric_limits<double>::infinity();
};

struct SolveResult {
  AdmmState state;
  std::vector<double> profile;  // Ψ x̂, raw (unclamped)
  bool converged = false;
  bool beta_degenerate = false;  // auto-scale hit a zero denominator
  std::vector<IterationStats> history;
};

// S̄_a(v) = max(1 - a/|v|, 0) v, elementwise.
std::vector<double> shrink(std::span<const double> v, double a);

// Full objective λs‖x‖₁ + Σ λ_i ‖Φ̃_i x + α ν_i - β y_i‖²_{w_i}.
double objective(const FusionProblem& p, double lambda_s, std::span<const double> x,
                 double alpha, double beta = 1.0);

// Augmented-Lagrangian gradients at (x, α) given (z, u, μ).
std::vector<double> gradient_x(const FusionProblem& p, std::span<const double> x,
                               double alpha, double beta, std::span<const double> z,
                               std::span<const double> u, double mu);
double gradient_alpha(const FusionProblem& p, std::span<const double> x, double alpha,
                      double beta);

// Closed-form β over the auto-scaled terms; returns 1 (and sets *degenerate)
// when the denominator vanishes.
double auto_scale_update(const FusionProblem& p, std::span<const double> x, double alpha,
                         bool* degenerate = nullptr);

// One inner gradient-descent pass for the x-subproblem (joint over x, α, and
// β when enabled); returns the number of accepted steps.
int x_update(const FusionProblem& p, const SolverConfig& cfg, AdmmState& state,
             double eps_grad);

SolveResult solve(const FusionProblem& p, const SolverConfig& cfg);

}  // namespace nlos
