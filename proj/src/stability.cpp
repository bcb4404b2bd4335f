#include "ridg/stability.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <ostream>
#include <stdexcept>

#include <Eigen/Eigenvalues>

#include "ridg/corrector.hpp"
#include "ridg/format.hpp"
#include "ridg/parallel.hpp"

namespace ridg {

std::string scheme_name(Scheme scheme) { return scheme == Scheme::Ridg ? "ridg" : "lidg"; }

StepStencil step_stencil(Scheme scheme, const ReferenceOperators& ops,
                         const Courant& courant) {
  const PredictorMatrices pred = assemble_predictor(scheme, ops, courant);
  const CorrectorMatrices corr = assemble_corrector(ops, courant);
  const int mc = static_cast<int>(corr.c0.rows());
  const int mp = static_cast<int>(corr.c0.cols());

  std::map<Index3, Eigen::MatrixXd> acc;
  acc[Index3{0, 0, 0}] = Eigen::MatrixXd::Identity(mc, mc);
  for (std::size_t c = 0; c < corr.offsets.size(); ++c) {
    const auto block = corr.stacked.middleCols(static_cast<int>(c) * mp, mp);
    for (std::size_t o = 0; o < pred.offsets.size(); ++o) {
      Index3 off{0, 0, 0};
      for (int a = 0; a < 3; ++a) off[a] = corr.offsets[c][a] + pred.offsets[o][a];
      auto [it, fresh] = acc.try_emplace(off, Eigen::MatrixXd::Zero(mc, mc));
      it->second.noalias() += block * pred.transfer[o];
    }
  }
  StepStencil s;
  s.dim = ops.bases.dim();
  for (auto& [off, blk] : acc) {
    s.offsets.push_back(off);
    s.blocks.push_back(std::move(blk));
  }
  return s;
}

Eigen::MatrixXcd amplification_md(const StepStencil& stencil,
                                  const std::array<double, 3>& omega) {
  const int mc = static_cast<int>(stencil.blocks.front().rows());
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(mc, mc);
  for (std::size_t k = 0; k < stencil.offsets.size(); ++k) {
    double phase = 0.0;
    for (int a = 0; a < stencil.dim; ++a) phase += omega[a] * stencil.offsets[k][a];
    m += std::polar(1.0, phase) * stencil.blocks[k].cast<std::complex<double>>();
  }
  return m;
}

Eigen::MatrixXcd amplification_md(Scheme scheme, const SchemeBases& bases,
                                  const Courant& courant,
                                  const std::array<double, 3>& omega) {
  return amplification_md(step_stencil(scheme, build_reference_operators(bases), courant),
                          omega);
}

Eigen::MatrixXcd amplification_1d(Scheme scheme, const SchemeBases& bases, double nu,
                                  double omega) {
  if (bases.dim() != 1) throw std::domain_error("amplification_1d needs a 1D basis");
  if (nu < 0.0) {
    // Reflect x -> -x: M(-nu, omega) = P M(nu, -omega) P, P = diag((-1)^k).
    const Eigen::MatrixXcd m = amplification_1d(scheme, bases, -nu, -omega);
    Eigen::VectorXcd p(m.rows());
    for (int k = 0; k < p.size(); ++k) p[k] = (k % 2) ? -1.0 : 1.0;
    return p.asDiagonal() * m * p.asDiagonal();
  }
  const ReferenceOperators ops = build_reference_operators(bases);
  Courant c;
  c.dim = 1;
  c.nu[0] = nu;
  PredictorMatrices pred;
  if (scheme == Scheme::Ridg)
    pred = assemble_ridg_region(ops, c);
  else
    pred = assemble_lidg(ops, c);
  const CorrectorMatrices corr = assemble_corrector(ops, c);

  using Cd = std::complex<double>;
  const int mc = static_cast<int>(corr.c0.rows());
  const Eigen::MatrixXd local = pred.l0.partialPivLu().solve(pred.t);  // L0^-1 T
  const Cd shift = std::polar(1.0, -omega);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(mc, mc);
  if (scheme == Scheme::Lidg) {
    return (id + corr.c0 * local).cast<Cd>() + shift * (corr.from_minus[0] * local).cast<Cd>();
  }
  const Eigen::PartialPivLU<Eigen::MatrixXd> upwind(pred.l0 + pred.face_plus[0]);
  const Eigen::MatrixXd direct = upwind.solve(pred.t);
  const Eigen::MatrixXd through = upwind.solve(pred.coupling_plus[0] * local);
  return (id + corr.c0 * direct).cast<Cd>() +
         shift * (corr.from_minus[0] * direct - corr.c0 * through).cast<Cd>() -
         shift * shift * (corr.from_minus[0] * through).cast<Cd>();
}

double spectral_radius(const Eigen::MatrixXcd& m) {
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m, false);
  return solver.eigenvalues().cwiseAbs().maxCoeff();
}

int default_omega_resolution(int dim) {
  switch (dim) {
    case 1: return 2001;
    case 2: return 201;
    default: return 61;
  }
}

namespace {

// Max of rho - 1 over the grid. With `stop_above` set, the scan ends as soon
// as any sample exceeds it; the returned value is then only a lower bound.
double scan_omega(const StepStencil& stencil, int resolution, double stop_above) {
  if (resolution < 2) throw std::domain_error("omega resolution must be at least 2");
  const int d = stencil.dim;
  long total = 1;
  for (int a = 0; a < d; ++a) total *= resolution;
  const double h = 2.0 * std::numbers::pi / (resolution - 1);

  constexpr int kChunk = 512;
  const int nchunks = static_cast<int>((total + kChunk - 1) / kChunk);
  std::vector<double> best(nchunks, -1.0);
  std::atomic<bool> done{false};
  parallel_for(0, nchunks, [&](int c) {
    double local = -1.0;
    const long lo = static_cast<long>(c) * kChunk;
    const long hi = std::min(total, lo + kChunk);
    for (long lin = lo; lin < hi && !done.load(std::memory_order_relaxed); ++lin) {
      std::array<int, 3> j{0, 0, 0};
      long rest = lin, mirror = 0, stride = 1;
      for (int a = 0; a < d; ++a) {
        j[a] = static_cast<int>(rest % resolution);
        rest /= resolution;
        mirror += (resolution - 1 - j[a]) * stride;
        stride *= resolution;
      }
      if (mirror < lin) continue;  // conjugate of an evaluated sample
      const std::array<double, 3> omega{j[0] * h, j[1] * h, j[2] * h};
      local = std::max(local, spectral_radius(amplification_md(stencil, omega)) - 1.0);
      if (local > stop_above) done.store(true, std::memory_order_relaxed);
    }
    best[c] = local;
  });
  return *std::max_element(best.begin(), best.end());
}

}  // namespace

double stability_function(const StepStencil& stencil, int omega_resolution) {
  return scan_omega(stencil, omega_resolution, std::numeric_limits<double>::infinity());
}

double stability_function(Scheme scheme, const ReferenceOperators& ops,
                          const Courant& courant, int omega_resolution) {
  return stability_function(step_stencil(scheme, ops, courant), omega_resolution);
}

bool is_linearly_stable(Scheme scheme, const ReferenceOperators& ops,
                        const Courant& courant, double epsilon, int omega_resolution) {
  return scan_omega(step_stencil(scheme, ops, courant), omega_resolution, epsilon) <= epsilon;
}

StabilityReport max_cfl(Scheme scheme, int degree, int dim,
                        const std::array<double, 3>& direction,
                        const StabilityOptions& options) {
  double scale = 0.0;
  for (int a = 0; a < dim; ++a) scale = std::max(scale, std::abs(direction[a]));
  if (!(scale > 0.0)) throw std::domain_error("direction must be nonzero");
  if (!(options.epsilon > 0.0) || !(options.tolerance > 0.0))
    throw std::domain_error("epsilon and tolerance must be positive");

  StabilityReport r;
  r.scheme = scheme;
  r.degree = degree;
  r.dim = dim;
  r.direction = direction;
  r.epsilon = options.epsilon;
  r.omega_resolution =
      options.omega_resolution > 0 ? options.omega_resolution : default_omega_resolution(dim);
  double lo = options.bracket_lower;
  double hi = options.bracket_upper > 0.0 ? options.bracket_upper : (dim == 1 ? 4.0 : 2.0);
  if (!(hi > lo) || lo < 0.0) throw std::domain_error("invalid bisection bracket");

  const ReferenceOperators ops = build_reference_operators(scheme_bases(scheme, degree, dim));
  auto courant_at = [&](double s) {
    Courant c;
    c.dim = dim;
    for (int a = 0; a < dim; ++a) c.nu[a] = s * direction[a] / scale;
    return c;
  };
  auto f = [&](double s, double stop) {
    return scan_omega(step_stencil(scheme, ops, courant_at(s)), r.omega_resolution, stop);
  };

  const double f_lo = f(lo, options.epsilon);
  const double f_hi = f(hi, options.epsilon);
  if (!(f_lo <= options.epsilon) || !(f_hi > options.epsilon))
    throw BracketError("stability function does not cross epsilon on [" +
                           format_number(lo) + ", " + format_number(hi) + "]: f = " +
                           format_number(f_lo) + ", " + format_number(f_hi),
                       f_lo, f_hi);
  while (hi - lo > options.tolerance) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid, options.epsilon) > options.epsilon)
      hi = mid;
    else
      lo = mid;
    ++r.iterations;
  }
  r.lower = lo;
  r.upper = hi;
  r.max_cfl = 0.5 * (lo + hi);
  return r;
}

Eigen::MatrixXd stability_scan_2d(Scheme scheme, int degree,
                                  const std::vector<double>& nu_x,
                                  const std::vector<double>& nu_y, int omega_resolution) {
  const ReferenceOperators ops = build_reference_operators(scheme_bases(scheme, degree, 2));
  const int res = omega_resolution > 0 ? omega_resolution : default_omega_resolution(2);
  Eigen::MatrixXd out(nu_y.size(), nu_x.size());
  for (std::size_t j = 0; j < nu_y.size(); ++j)
    for (std::size_t i = 0; i < nu_x.size(); ++i) {
      Courant c;
      c.dim = 2;
      c.nu = {nu_x[i], nu_y[j], 0.0};
      out(j, i) = stability_function(scheme, ops, c, res) + 1.0;
    }
  return out;
}

void write_stability_csv(std::ostream& out, const std::vector<StabilityReport>& reports) {
  out << "scheme,m_deg,m_dim,direction,max_cfl,epsilon,omega_resolution\n";
  for (const auto& r : reports) {
    std::string dir;
    for (int a = 0; a < r.dim; ++a) dir += (a ? ";" : "") + format_number(r.direction[a]);
    out << scheme_name(r.scheme) << ',' << r.degree << ',' << r.dim << ',' << dir << ','
        << format_number(r.max_cfl) << ',' << format_number(r.epsilon) << ','
        << r.omega_resolution << '\n';
  }
}

void write_scan_csv(std::ostream& out, const std::vector<double>& nu_x,
                    const std::vector<double>& nu_y, const Eigen::MatrixXd& values) {
  out << "nu_x,nu_y,f_plus_1\n";
  for (std::size_t j = 0; j < nu_y.size(); ++j)
    for (std::size_t i = 0; i < nu_x.size(); ++i)
      out << format_number(nu_x[i]) << ',' << format_number(nu_y[j]) << ','
          << format_number(values(j, i)) << '\n';
}

}  // namespace ridg
