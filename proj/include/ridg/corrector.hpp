#pragma once

#include <array>
#include <functional>

#include <Eigen/Dense>

#include "ridg/linear_predictor.hpp"

namespace ridg {

/// Q_i^{n+1} = Q_i + C0 W_i + sum_a (C_a^- W_{i-e_a} + C_a^+ W_{i+e_a})
struct CorrectorMatrices {
  Courant courant;
  Eigen::MatrixXd c0;                          // M_C x M_P
  std::array<Eigen::MatrixXd, 3> from_minus;   // C_a^-, couples W_{i-e_a}
  std::array<Eigen::MatrixXd, 3> from_plus;    // C_a^+, couples W_{i+e_a}

  std::vector<Index3> offsets;   // stencil {0, -e_a, +e_a}
  Eigen::MatrixXd stacked;       // [c0 C_0^- C_0^+ ...] in offsets order
};

CorrectorMatrices assemble_corrector(const ReferenceOperators& ops, const Courant& courant);
CorrectorMatrices assemble_corrector(const SchemeBases& bases, const Courant& courant);

/// Returns the new-time field; the inputs are not modified.
CoeffField correct(const CoeffField& field, const SpacetimeField& prediction,
                   const CorrectorMatrices& mats);

/// Predictor and corrector for one fixed step size.
struct LinearStep {
  PredictorMatrices predictor;
  CorrectorMatrices corrector;

  static LinearStep assemble(Scheme scheme, const ReferenceOperators& ops,
                             const Courant& courant);
  CoeffField apply(const CoeffField& field) const;
};

struct AdvectionRun {
  CoeffField field;
  int steps = 0;
  double dt = 0.0;  // nominal step; the last one may be shorter
};

/// Coefficient magnitude that counts as a blown-up run.
inline constexpr double kBlowUpThreshold = 1e10;

/// Advances `initial` to `final_time` with steps of `config.dt`, shortening the
/// last step to land on final_time. `observer`, if set, sees every new field.
/// Throws NumericalError when the coefficients exceed kBlowUpThreshold.
AdvectionRun advance_advection(
    Scheme scheme, const CoeffField& initial, const AdvectionConfig& config,
    double final_time,
    const std::function<void(int, const CoeffField&)>& observer = {});

}  // namespace ridg
