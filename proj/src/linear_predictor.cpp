#include "ridg/linear_predictor.hpp"

#include <algorithm>
#include <stdexcept>

#include "ridg/errors.hpp"
#include "ridg/parallel.hpp"

namespace ridg {

Courant AdvectionConfig::courant(const Mesh& mesh) const {
  Courant c;
  c.dim = mesh.dim;
  for (int a = 0; a < mesh.dim; ++a) c.nu[a] = velocity[a] * dt / mesh.width(a);
  return c;
}

std::vector<Index3> region_offsets(int dim) {
  std::vector<Index3> out;
  const int nz = dim > 2 ? 3 : 1;
  const int ny = dim > 1 ? 3 : 1;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < 3; ++i)
        out.push_back({i - 1, dim > 1 ? j - 1 : 0, dim > 2 ? k - 1 : 0});
  return out;
}

namespace {

constexpr double kSingularRcond = 1e-13;

void fill_local(PredictorMatrices& m, const ReferenceOperators& ops,
                const Courant& nu) {
  const int d = ops.bases.dim();
  if (nu.dim != d) throw std::domain_error("Courant dimension does not match the basis");
  m.bases = ops.bases;
  m.courant = nu;
  m.l0 = ops.time_derivative + ops.time_inflow;
  for (int a = 0; a < d; ++a) m.l0 += nu.nu[a] * ops.advection[a];
  m.t = ops.initial_data;
  for (int a = 0; a < d; ++a) {
    m.face_plus[a] = nu.plus(a) * ops.face_self[a][0];
    m.face_minus[a] = -nu.minus(a) * ops.face_self[a][1];
    m.coupling_plus[a] = -nu.plus(a) * ops.face_cross[a][0];
    m.coupling_minus[a] = nu.minus(a) * ops.face_cross[a][1];
  }
}

void factor_and_transfer(PredictorMatrices& m) {
  m.factorization.compute(m.region);
  if (!(m.factorization.rcond() > kSingularRcond))
    throw NumericalError("prediction matrix is singular");

  const int mp = static_cast<int>(m.t.rows());
  const int mc = static_cast<int>(m.t.cols());
  const int nb = m.num_blocks();
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(nb * mp, nb * mc);
  for (int b = 0; b < nb; ++b) rhs.block(b * mp, b * mc, mp, mc) = m.t;
  const Eigen::MatrixXd sol = m.factorization.solve(rhs);

  m.transfer_stacked = sol.middleRows(m.center_block * mp, mp);
  m.transfer.resize(nb);
  for (int b = 0; b < nb; ++b) m.transfer[b] = m.transfer_stacked.middleCols(b * mc, mc);
}

int block_of(const std::vector<Index3>& offsets, Index3 o) {
  const auto it = std::find(offsets.begin(), offsets.end(), o);
  return it == offsets.end() ? -1 : static_cast<int>(it - offsets.begin());
}

}  // namespace

PredictorMatrices assemble_lidg(const ReferenceOperators& ops, const Courant& courant) {
  PredictorMatrices m;
  m.scheme = Scheme::Lidg;
  fill_local(m, ops, courant);
  m.offsets = {Index3{0, 0, 0}};
  m.center_block = 0;
  m.region = m.l0;
  factor_and_transfer(m);
  return m;
}

PredictorMatrices assemble_lidg(const SchemeBases& bases, const Courant& courant) {
  return assemble_lidg(build_reference_operators(bases), courant);
}

PredictorMatrices assemble_ridg_region(const ReferenceOperators& ops,
                                       const Courant& courant) {
  if (ops.bases.spacetime.truncation != Truncation::TensorProduct)
    throw std::domain_error("region prediction needs the tensor-product spacetime basis");
  PredictorMatrices m;
  m.scheme = Scheme::Ridg;
  fill_local(m, ops, courant);
  const int d = ops.bases.dim();
  m.offsets = region_offsets(d);
  m.center_block = block_of(m.offsets, Index3{0, 0, 0});

  const int mp = static_cast<int>(m.l0.rows());
  const int nb = m.num_blocks();
  m.region = Eigen::MatrixXd::Zero(nb * mp, nb * mp);
  for (int b = 0; b < nb; ++b) {
    const Index3 o = m.offsets[b];
    auto diag = m.region.block(b * mp, b * mp, mp, mp);
    diag = m.l0;
    for (int a = 0; a < d; ++a) {
      if (o[a] > -1) {
        Index3 nbr = o;
        --nbr[a];
        diag += m.face_plus[a];
        m.region.block(b * mp, block_of(m.offsets, nbr) * mp, mp, mp) += m.coupling_plus[a];
      }
      if (o[a] < 1) {
        Index3 nbr = o;
        ++nbr[a];
        diag += m.face_minus[a];
        m.region.block(b * mp, block_of(m.offsets, nbr) * mp, mp, mp) += m.coupling_minus[a];
      }
    }
  }
  factor_and_transfer(m);
  return m;
}

PredictorMatrices assemble_ridg_region(const SchemeBases& bases, const Courant& courant) {
  return assemble_ridg_region(build_reference_operators(bases), courant);
}

PredictorMatrices assemble_predictor(Scheme scheme, const ReferenceOperators& ops,
                                     const Courant& courant) {
  return scheme == Scheme::Ridg ? assemble_ridg_region(ops, courant)
                                : assemble_lidg(ops, courant);
}

Eigen::MatrixXd solve_region(const CoeffField& field, const PredictorMatrices& mats,
                             int elem) {
  const int mp = static_cast<int>(mats.t.rows());
  const int nb = mats.num_blocks();
  Eigen::VectorXd rhs(nb * mp);
  for (int b = 0; b < nb; ++b)
    rhs.segment(b * mp, mp) =
        mats.t * field.coeffs.col(field.mesh.neighbor(elem, mats.offsets[b]));
  const Eigen::VectorXd sol = mats.factorization.solve(rhs);
  return sol.reshaped(mp, nb);
}

Eigen::MatrixXd apply_stencil(const Mesh& mesh, const std::vector<Index3>& offsets,
                              const Eigen::MatrixXd& blocks_stacked,
                              const Eigen::MatrixXd& in) {
  const int ne = mesh.num_elements();
  const int nb = static_cast<int>(offsets.size());
  const int rows_in = static_cast<int>(in.rows());
  if (blocks_stacked.cols() != nb * rows_in)
    throw std::domain_error("stencil operator does not match its input");
  Eigen::MatrixXd out(blocks_stacked.rows(), ne);

  constexpr int kChunk = 256;
  const int nchunks = (ne + kChunk - 1) / kChunk;
  parallel_for(0, nchunks, [&](int c) {
    const int first = c * kChunk;
    const int count = std::min(kChunk, ne - first);
    Eigen::MatrixXd gathered(nb * rows_in, count);
    for (int j = 0; j < count; ++j) {
      const Index3 base = mesh.coords(first + j);
      for (int b = 0; b < nb; ++b) {
        Index3 at = base;
        for (int a = 0; a < mesh.dim; ++a) at[a] += offsets[b][a];
        gathered.block(b * rows_in, j, rows_in, 1) = in.col(mesh.index(at));
      }
    }
    out.middleCols(first, count).noalias() = blocks_stacked * gathered;
  });
  return out;
}

SpacetimeField lidg_predict(const CoeffField& field, const PredictorMatrices& mats) {
  if (mats.num_blocks() != 1) throw std::domain_error("matrices are not a local predictor");
  SpacetimeField w{field.mesh, mats.bases.spacetime, Eigen::MatrixXd()};
  w.coeffs = mats.transfer[0] * field.coeffs;
  return w;
}

SpacetimeField ridg_predict(const CoeffField& field, const PredictorMatrices& mats) {
  SpacetimeField w{field.mesh, mats.bases.spacetime, Eigen::MatrixXd()};
  w.coeffs = apply_stencil(field.mesh, mats.offsets, mats.transfer_stacked, field.coeffs);
  return w;
}

SpacetimeField predict(const CoeffField& field, const PredictorMatrices& mats) {
  if (field.spec != mats.bases.spatial)
    throw std::domain_error("field basis does not match the predictor");
  return mats.scheme == Scheme::Ridg ? ridg_predict(field, mats) : lidg_predict(field, mats);
}

}  // namespace ridg
