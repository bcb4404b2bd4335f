#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "ridg/mesh_field.hpp"
#include "ridg/reference_operators.hpp"

namespace ridg {

/// Constant-velocity advection q_t + u . grad q = 0 advanced with step dt.
struct AdvectionConfig {
  std::array<double, 3> velocity{0.0, 0.0, 0.0};
  double dt = 0.0;

  Courant courant(const Mesh& mesh) const;
};

/// Per-element predicted spacetime coefficients W_e.
struct SpacetimeField {
  Mesh mesh;
  BasisSpec spec;
  Eigen::MatrixXd coeffs;

  int num_elements() const { return static_cast<int>(coeffs.cols()); }
};

/// Offsets of the 3^dim region around an element, x offset fastest.
std::vector<Index3> region_offsets(int dim);

/// Assembled spacetime prediction operator.
///
/// The region unknowns are stacked block by block in `offsets` order. Region
/// elements get the upwind flux on faces shared with another region element
/// and the one-sided interior flux on faces of the region boundary, so the
/// diagonal block of an element is L0 plus L_a^+ when its -a neighbour is in
/// the region and L_a^- when its +a neighbour is. X_a^+ couples an element to
/// its -a neighbour and X_a^- to its +a neighbour.
struct PredictorMatrices {
  Scheme scheme = Scheme::Lidg;
  SchemeBases bases;
  Courant courant;

  Eigen::MatrixXd l0;  // M_P x M_P
  Eigen::MatrixXd t;   // M_P x M_C
  std::array<Eigen::MatrixXd, 3> face_plus, face_minus;          // L_a^+, L_a^-
  std::array<Eigen::MatrixXd, 3> coupling_plus, coupling_minus;  // X_a^+, X_a^-

  std::vector<Index3> offsets;  // {0} for LIDG
  int center_block = 0;
  Eigen::MatrixXd region;  // block matrix; equals l0 for LIDG
  Eigen::PartialPivLU<Eigen::MatrixXd> factorization;

  /// Center prediction as a function of the initial data:
  /// W_e = sum_o transfer[o] * Q_{e+offsets[o]}.
  std::vector<Eigen::MatrixXd> transfer;
  Eigen::MatrixXd transfer_stacked;  // [transfer[0] transfer[1] ...]

  int num_blocks() const { return static_cast<int>(offsets.size()); }
};

PredictorMatrices assemble_lidg(const SchemeBases& bases, const Courant& courant);
PredictorMatrices assemble_lidg(const ReferenceOperators& ops, const Courant& courant);

PredictorMatrices assemble_ridg_region(const SchemeBases& bases, const Courant& courant);
PredictorMatrices assemble_ridg_region(const ReferenceOperators& ops,
                                       const Courant& courant);

PredictorMatrices assemble_predictor(Scheme scheme, const ReferenceOperators& ops,
                                     const Courant& courant);

/// Solves the full region system around `elem` with the cached factorization.
/// Column b holds the block for offsets[b]; the center column is W_elem, the
/// rest are the discarded neighbour predictions.
Eigen::MatrixXd solve_region(const CoeffField& field, const PredictorMatrices& mats,
                             int elem);

SpacetimeField lidg_predict(const CoeffField& field, const PredictorMatrices& mats);
SpacetimeField ridg_predict(const CoeffField& field, const PredictorMatrices& mats);
/// Dispatches on mats.scheme.
SpacetimeField predict(const CoeffField& field, const PredictorMatrices& mats);

/// Applies a per-offset block operator to the neighbourhood of every element:
/// out_e = sum_o blocks_stacked.block(o) * in_{e+offsets[o]}.
Eigen::MatrixXd apply_stencil(const Mesh& mesh, const std::vector<Index3>& offsets,
                              const Eigen::MatrixXd& blocks_stacked,
                              const Eigen::MatrixXd& in);

}  // namespace ridg
