#include "ridg/burgers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ridg/corrector.hpp"
#include "ridg/errors.hpp"
#include "ridg/parallel.hpp"

namespace ridg {

ScalarFlux ScalarFlux::quadratic_flux(std::string name,
                                      const std::array<std::array<double, 3>, 3>& c) {
  ScalarFlux fl;
  fl.name = std::move(name);
  fl.f = [c](int a, double q) { return c[a][0] + q * (c[a][1] + q * c[a][2]); };
  fl.f_prime = [c](int a, double q) { return c[a][1] + 2.0 * c[a][2] * q; };
  fl.quadratic = c;
  return fl;
}

ScalarFlux ScalarFlux::burgers() {
  const std::array<double, 3> half{0.0, 0.0, 0.5};
  return quadratic_flux("burgers", {half, half, half});
}

ScalarFlux ScalarFlux::linear(const std::array<double, 3>& u) {
  return quadratic_flux("linear", {std::array<double, 3>{0.0, u[0], 0.0},
                                   std::array<double, 3>{0.0, u[1], 0.0},
                                   std::array<double, 3>{0.0, u[2], 0.0}});
}

ScalarFlux ScalarFlux::generic(std::string name, std::function<double(int, double)> f,
                               std::function<double(int, double)> f_prime) {
  return ScalarFlux{std::move(name), std::move(f), std::move(f_prime), std::nullopt};
}

double rusanov_speed(double ql, double qr, const ScalarFlux& flux, int axis) {
  return std::max({std::abs(flux.derivative(axis, ql)),
                   std::abs(flux.derivative(axis, 0.5 * (ql + qr))),
                   std::abs(flux.derivative(axis, qr))});
}

double rusanov_flux(double ql, double qr, const ScalarFlux& flux, int axis) {
  const double lambda = rusanov_speed(ql, qr, flux, axis);
  return 0.5 * (flux.value(axis, ql) + flux.value(axis, qr)) - 0.5 * lambda * (qr - ql);
}

QuadFreeTensors build_quad_free_tensors(const BasisSpec& st) {
  QuadFreeTensors t;
  t.points_per_axis = triple_product_points(st.degree);
  const QuadratureRule rule = gauss_rule(t.points_per_axis, st.num_axes());
  const BasisTable table = tabulate(st, rule.nodes);
  const Eigen::VectorXd w = rule.weights / std::pow(2.0, st.num_axes());
  const int n = basis_size(st);
  for (int a = 0; a < st.dim; ++a) {
    const Eigen::MatrixXd& d = table.partials[a + 1];
    for (int l = 0; l < n; ++l)
      for (int m = 0; m < n; ++m) {
        const Eigen::VectorXd prod =
            (w.array() * table.values.col(l).array() * table.values.col(m).array()).matrix();
        const Eigen::VectorXd col = d.transpose() * prod;
        for (int k = 0; k < n; ++k)
          if (std::abs(col[k]) > 1e-13) t.volume[a].entries.push_back({k, l, m, col[k]});
      }
  }
  return t;
}

NonlinearOperators build_nonlinear_operators(int degree, int dim) {
  NonlinearOperators ops;
  ops.bases = scheme_bases(Scheme::Ridg, degree, dim);
  const BasisSpec& st = ops.bases.spacetime;
  const BasisSpec& sp = ops.bases.spatial;
  ops.mp = basis_size(st);
  ops.mc = basis_size(sp);
  const ReferenceOperators lin = build_reference_operators(ops.bases);
  ops.initial_data = lin.initial_data;
  ops.extension = lin.time_constant_extension;

  // <Psi Psi_tau^T> + <Psi_tau Psi^T> = 1/2 <Psi Psi^T>|1 - 1/2 <Psi Psi^T>|-1
  // and the -1 trace term is time_inflow, so the outflow term follows.
  const Eigen::MatrixXd outflow =
      lin.time_derivative + lin.time_derivative.transpose() + lin.time_inflow;
  ops.time_matrix = outflow - lin.time_derivative.transpose();
  for (int a = 0; a < dim; ++a) ops.advection_t[a] = lin.advection[a].transpose();

  const int nf = default_points(degree);
  const QuadratureRule lower = gauss_rule(nf, dim);
  ops.face_weights = lower.weights / std::pow(2.0, dim);
  for (int a = 0; a < dim; ++a)
    for (int s = 0; s < 2; ++s) {
      const QuadratureRule face = face_rule(lower, a + 1, s == 0 ? -1.0 : 1.0);
      ops.face_psi[a][s] = tabulate(st, face.nodes, false).values;
      ops.face_phi[a][s] = tabulate(sp, face.nodes.bottomRows(dim), false).values;
    }

  const QuadratureRule vol =
      gauss_rule(std::max(triple_product_points(degree), nf), dim + 1);
  ops.volume_weights = vol.weights / std::pow(2.0, dim + 1);
  const BasisTable psi = tabulate(st, vol.nodes);
  const BasisTable phi = tabulate(sp, vol.nodes.bottomRows(dim));
  ops.volume_psi = psi.values;
  for (int a = 0; a < dim; ++a) {
    ops.volume_dpsi[a] = psi.partials[a + 1];
    ops.volume_dphi[a] = phi.partials[a];
    ops.gradient_mean[a] = psi.partials[a + 1].transpose() * ops.volume_weights;
  }
  ops.tensors = build_quad_free_tensors(st);

  ops.offsets = region_offsets(dim);
  const int nb = static_cast<int>(ops.offsets.size());
  ops.upper_block.assign(nb, {-1, -1, -1});
  for (int b = 0; b < nb; ++b) {
    if (ops.offsets[b] == Index3{0, 0, 0}) ops.center_block = b;
    for (int a = 0; a < dim; ++a) {
      Index3 up = ops.offsets[b];
      ++up[a];
      const auto it = std::find(ops.offsets.begin(), ops.offsets.end(), up);
      if (it != ops.offsets.end())
        ops.upper_block[b][a] = static_cast<int>(it - ops.offsets.begin());
    }
  }
  return ops;
}

std::array<double, 3> step_ratios(const Mesh& mesh, double dt) {
  std::array<double, 3> r{0.0, 0.0, 0.0};
  for (int a = 0; a < mesh.dim; ++a) r[a] = dt / mesh.width(a);
  return r;
}

namespace {

Eigen::VectorXd apply_flux(const ScalarFlux& flux, int axis, const Eigen::VectorXd& q) {
  Eigen::VectorXd out(q.size());
  for (int p = 0; p < q.size(); ++p) out[p] = flux.value(axis, q[p]);
  return out;
}

Eigen::VectorXd apply_flux_derivative(const ScalarFlux& flux, int axis,
                                      const Eigen::VectorXd& q) {
  Eigen::VectorXd out(q.size());
  for (int p = 0; p < q.size(); ++p) out[p] = flux.derivative(axis, q[p]);
  return out;
}

// Adds -r_a <Psi_{,a} f_a'(w) Psi^T> to jac.
void add_volume_jacobian(const NonlinearOperators& ops, const ScalarFlux& flux,
                         const std::array<double, 3>& r, const Eigen::VectorXd& w,
                         Eigen::Ref<Eigen::MatrixXd> jac) {
  const int d = ops.bases.dim();
  if (flux.quadratic) {
    for (int a = 0; a < d; ++a) {
      const auto& c = (*flux.quadratic)[a];
      jac -= (r[a] * c[1]) * ops.advection_t[a];
      if (c[2] == 0.0) continue;
      const double s = 2.0 * r[a] * c[2];
      for (const auto& e : ops.tensors.volume[a].entries) jac(e.k, e.l) -= s * e.value * w[e.m];
    }
    return;
  }
  const Eigen::VectorXd wq = ops.volume_psi * w;
  for (int a = 0; a < d; ++a) {
    const Eigen::VectorXd g =
        ops.volume_weights.cwiseProduct(apply_flux_derivative(flux, a, wq));
    jac -= r[a] * ops.volume_dpsi[a].transpose() * g.asDiagonal() * ops.volume_psi;
  }
}

}  // namespace

Eigen::VectorXd volume_flux_term(const NonlinearOperators& ops, const ScalarFlux& flux,
                                 const std::array<double, 3>& r, const Eigen::VectorXd& w) {
  const int d = ops.bases.dim();
  Eigen::VectorXd out = Eigen::VectorXd::Zero(ops.mp);
  if (flux.quadratic) {
    for (int a = 0; a < d; ++a) {
      const auto& c = (*flux.quadratic)[a];
      Eigen::VectorXd v = c[0] * ops.gradient_mean[a] + c[1] * (ops.advection_t[a] * w);
      if (c[2] != 0.0)
        for (const auto& e : ops.tensors.volume[a].entries)
          v[e.k] += c[2] * e.value * w[e.l] * w[e.m];
      out -= r[a] * v;
    }
    return out;
  }
  const Eigen::VectorXd wq = ops.volume_psi * w;
  for (int a = 0; a < d; ++a)
    out -= r[a] * ops.volume_dpsi[a].transpose() *
           ops.volume_weights.cwiseProduct(apply_flux(flux, a, wq));
  return out;
}

Eigen::VectorXd region_residual(const NonlinearOperators& ops, const ScalarFlux& flux,
                                const std::array<double, 3>& r, const Eigen::MatrixXd& w,
                                const Eigen::MatrixXd& q) {
  const int d = ops.bases.dim();
  const int nb = static_cast<int>(ops.offsets.size());
  if (w.cols() != nb || q.cols() != nb || w.rows() != ops.mp || q.rows() != ops.mc)
    throw std::domain_error("region blocks do not match the operators");
  Eigen::MatrixXd res(ops.mp, nb);
  for (int b = 0; b < nb; ++b)
    res.col(b) = ops.time_matrix * w.col(b) - ops.initial_data * q.col(b) +
                 volume_flux_term(ops, flux, r, w.col(b));

  const Eigen::VectorXd& fw = ops.face_weights;
  for (int a = 0; a < d; ++a) {
    const Eigen::MatrixXd& lo = ops.face_psi[a][0];
    const Eigen::MatrixXd& hi = ops.face_psi[a][1];
    const double h = 0.5 * r[a];
    for (int b = 0; b < nb; ++b) {
      const int up = ops.upper_block[b][a];
      const Eigen::VectorXd ql = hi * w.col(b);
      if (up >= 0) {
        const Eigen::VectorXd qr = lo * w.col(up);
        Eigen::VectorXd flx(ql.size());
        for (int p = 0; p < ql.size(); ++p) flx[p] = fw[p] * rusanov_flux(ql[p], qr[p], flux, a);
        res.col(b) += h * hi.transpose() * flx;
        res.col(up) -= h * lo.transpose() * flx;
      } else {
        res.col(b) += h * hi.transpose() * fw.cwiseProduct(apply_flux(flux, a, ql));
      }
      if (ops.offsets[b][a] == -1) {
        const Eigen::VectorXd qb = lo * w.col(b);
        res.col(b) -= h * lo.transpose() * fw.cwiseProduct(apply_flux(flux, a, qb));
      }
    }
  }
  return res.reshaped();
}

Eigen::MatrixXd region_jacobian(const NonlinearOperators& ops, const ScalarFlux& flux,
                                const std::array<double, 3>& r, const Eigen::MatrixXd& w) {
  const int d = ops.bases.dim();
  const int nb = static_cast<int>(ops.offsets.size());
  const int mp = ops.mp;
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(nb * mp, nb * mp);
  for (int b = 0; b < nb; ++b) {
    auto diag = jac.block(b * mp, b * mp, mp, mp);
    diag = ops.time_matrix;
    add_volume_jacobian(ops, flux, r, w.col(b), diag);
  }

  const Eigen::VectorXd& fw = ops.face_weights;
  for (int a = 0; a < d; ++a) {
    const Eigen::MatrixXd& lo = ops.face_psi[a][0];
    const Eigen::MatrixXd& hi = ops.face_psi[a][1];
    const double h = 0.5 * r[a];
    for (int b = 0; b < nb; ++b) {
      const int up = ops.upper_block[b][a];
      const Eigen::VectorXd ql = hi * w.col(b);
      if (up >= 0) {
        const Eigen::VectorXd qr = lo * w.col(up);
        Eigen::VectorXd dl(ql.size()), dr(ql.size());
        for (int p = 0; p < ql.size(); ++p) {
          const double lambda = rusanov_speed(ql[p], qr[p], flux, a);
          dl[p] = fw[p] * 0.5 * (flux.derivative(a, ql[p]) + lambda);
          dr[p] = fw[p] * 0.5 * (flux.derivative(a, qr[p]) - lambda);
        }
        jac.block(b * mp, b * mp, mp, mp) += h * hi.transpose() * dl.asDiagonal() * hi;
        jac.block(b * mp, up * mp, mp, mp) += h * hi.transpose() * dr.asDiagonal() * lo;
        jac.block(up * mp, b * mp, mp, mp) -= h * lo.transpose() * dl.asDiagonal() * hi;
        jac.block(up * mp, up * mp, mp, mp) -= h * lo.transpose() * dr.asDiagonal() * lo;
      } else {
        const Eigen::VectorXd g = fw.cwiseProduct(apply_flux_derivative(flux, a, ql));
        jac.block(b * mp, b * mp, mp, mp) += h * hi.transpose() * g.asDiagonal() * hi;
      }
      if (ops.offsets[b][a] == -1) {
        const Eigen::VectorXd g =
            fw.cwiseProduct(apply_flux_derivative(flux, a, lo * w.col(b)));
        jac.block(b * mp, b * mp, mp, mp) -= h * lo.transpose() * g.asDiagonal() * lo;
      }
    }
  }
  return jac;
}

NewtonResult newton_predict(const NonlinearOperators& ops, const ScalarFlux& flux,
                            const std::array<double, 3>& r, const Eigen::MatrixXd& q_region,
                            const NewtonSettings& settings, int element) {
  if (!(settings.tolerance > 0.0) || settings.max_iterations < 1)
    throw std::domain_error("invalid Newton settings");
  const int mp = ops.mp;
  NewtonResult out;
  Eigen::MatrixXd w = ops.extension * q_region;
  Eigen::VectorXd res = region_residual(ops, flux, r, w, q_region);
  const int center = ops.center_block * mp;
  Eigen::PartialPivLU<Eigen::MatrixXd> lu;
  for (;;) {
    const double norm = res.segment(center, mp).norm();
    if (!std::isfinite(norm))
      throw NumericalError("Newton iteration diverged at element " + std::to_string(element) +
                           ", iteration " + std::to_string(out.iterations));
    lu.compute(region_jacobian(ops, flux, r, w));
    if (!(lu.rcond() > 1e-14))
      throw NumericalError("singular region Jacobian at element " + std::to_string(element) +
                           ", iteration " + std::to_string(out.iterations + 1));
    w -= lu.solve(res).reshaped(mp, w.cols());
    ++out.iterations;
    // The test looks at the iterate this step started from, so a region that
    // passes still receives the correction computed from it.
    if (norm < settings.tolerance) {
      out.converged = true;
      out.residual = norm;
      break;
    }
    res = region_residual(ops, flux, r, w, q_region);
    if (out.iterations == settings.max_iterations) {
      out.residual = res.segment(center, mp).norm();
      break;
    }
  }
  out.center = w.col(ops.center_block);
  out.region = std::move(w);
  return out;
}

void PredictionStats::merge(const PredictionStats& o) {
  max_iterations = std::max(max_iterations, o.max_iterations);
  total_iterations += o.total_iterations;
  unconverged += o.unconverged;
  regions += o.regions;
}

SpacetimeField nonlinear_predict(const CoeffField& field, double dt, const ScalarFlux& flux,
                                 const NonlinearOperators& ops,
                                 const NewtonSettings& settings, PredictionStats* stats) {
  if (field.spec != ops.bases.spatial)
    throw std::domain_error("field basis does not match the nonlinear operators");
  const Mesh& mesh = field.mesh;
  const int ne = mesh.num_elements();
  const int nb = static_cast<int>(ops.offsets.size());
  const auto r = step_ratios(mesh, dt);

  SpacetimeField w{mesh, ops.bases.spacetime, Eigen::MatrixXd(ops.mp, ne)};
  std::vector<int> iterations(ne, 0);
  std::vector<char> converged(ne, 0);
  parallel_for(0, ne, [&](int e) {
    Eigen::MatrixXd q(ops.mc, nb);
    for (int b = 0; b < nb; ++b) q.col(b) = field.coeffs.col(mesh.neighbor(e, ops.offsets[b]));
    const NewtonResult res = newton_predict(ops, flux, r, q, settings, e);
    w.coeffs.col(e) = res.center;
    iterations[e] = res.iterations;
    converged[e] = res.converged;
  });
  if (stats) {
    PredictionStats s;
    s.regions = ne;
    for (int e = 0; e < ne; ++e) {
      s.max_iterations = std::max(s.max_iterations, iterations[e]);
      s.total_iterations += iterations[e];
      s.unconverged += converged[e] ? 0 : 1;
    }
    stats->merge(s);
  }
  return w;
}

CoeffField nonlinear_correct(const CoeffField& field, const SpacetimeField& prediction,
                             double dt, const ScalarFlux& flux,
                             const NonlinearOperators& ops) {
  const Mesh& mesh = field.mesh;
  const int d = mesh.dim;
  const auto r = step_ratios(mesh, dt);
  const Eigen::VectorXd& fw = ops.face_weights;
  CoeffField out = field;
  parallel_for(0, mesh.num_elements(), [&](int e) {
    const Eigen::VectorXd we = prediction.coeffs.col(e);
    const Eigen::VectorXd wq = ops.volume_psi * we;
    Eigen::VectorXd dq = Eigen::VectorXd::Zero(ops.mc);
    for (int a = 0; a < d; ++a) {
      Index3 lo_off{0, 0, 0}, hi_off{0, 0, 0};
      lo_off[a] = -1;
      hi_off[a] = 1;
      const Eigen::VectorXd w_lo = prediction.coeffs.col(mesh.neighbor(e, lo_off));
      const Eigen::VectorXd w_hi = prediction.coeffs.col(mesh.neighbor(e, hi_off));
      const Eigen::VectorXd in_hi = ops.face_psi[a][1] * we;
      const Eigen::VectorXd out_hi = ops.face_psi[a][0] * w_hi;
      const Eigen::VectorXd in_lo = ops.face_psi[a][0] * we;
      const Eigen::VectorXd out_lo = ops.face_psi[a][1] * w_lo;
      Eigen::VectorXd f_hi(fw.size()), f_lo(fw.size());
      for (int p = 0; p < fw.size(); ++p) {
        f_hi[p] = fw[p] * rusanov_flux(in_hi[p], out_hi[p], flux, a);
        f_lo[p] = fw[p] * rusanov_flux(out_lo[p], in_lo[p], flux, a);
      }
      const Eigen::VectorXd vol =
          ops.volume_dphi[a].transpose() * ops.volume_weights.cwiseProduct(apply_flux(flux, a, wq));
      dq += r[a] * (2.0 * vol - ops.face_phi[a][1].transpose() * f_hi +
                    ops.face_phi[a][0].transpose() * f_lo);
    }
    out.coeffs.col(e) += dq;
  });
  return out;
}

double max_wave_speed(const CoeffField& field, const ScalarFlux& flux) {
  const int d = field.mesh.dim;
  const QuadratureRule rule = gauss_rule(default_points(field.spec.degree), d);
  const Eigen::MatrixXd vals = tabulate(field.spec, rule.nodes, false).values * field.coeffs;
  double speed = 0.0;
  for (int a = 0; a < d; ++a)
    for (Eigen::Index k = 0; k < vals.size(); ++k)
      speed = std::max(speed, std::abs(flux.derivative(a, vals.data()[k])));
  return speed;
}

double burgers_time_step_size(const CoeffField& field, double nu, const ScalarFlux& flux) {
  const double speed = max_wave_speed(field, flux);
  if (!(speed > 0.0)) throw std::domain_error("maximum wave speed is zero");
  return nu * field.mesh.min_width() / speed;
}

BurgersInitialCondition burgers_ic_1d() {
  BurgersInitialCondition ic;
  ic.dim = 1;
  ic.value = [](std::span<const double> x) { return 1.0 - std::cos(x[0]); };
  ic.gradient = [](std::span<const double> x) {
    return std::array<double, 3>{std::sin(x[0]), 0.0, 0.0};
  };
  return ic;
}

BurgersInitialCondition burgers_ic_2d() {
  BurgersInitialCondition ic;
  ic.dim = 2;
  ic.value = [](std::span<const double> x) {
    return 0.25 * (1.0 - std::cos(x[0])) * (1.0 - std::cos(x[1]));
  };
  ic.gradient = [](std::span<const double> x) {
    return std::array<double, 3>{0.25 * std::sin(x[0]) * (1.0 - std::cos(x[1])),
                                 0.25 * (1.0 - std::cos(x[0])) * std::sin(x[1]), 0.0};
  };
  return ic;
}

double burgers_exact(std::span<const double> x, double t, const BurgersInitialCondition& ic) {
  const int d = ic.dim;
  std::array<double, 3> xs{};
  auto foot = [&](double q) {
    for (int a = 0; a < d; ++a) xs[a] = x[a] - q * t;
    return std::span<const double>(xs.data(), d);
  };
  auto g = [&](double q) { return q - ic.value(foot(q)); };

  double q = ic.value(x.first(d));
  double gq = g(q);
  for (int it = 0; it < 100; ++it) {
    if (std::abs(gq) <= 1e-14 * std::max(1.0, std::abs(q))) return q;
    const auto grad = ic.gradient(foot(q));
    double slope = 1.0;
    for (int a = 0; a < d; ++a) slope += t * grad[a];
    if (!(std::abs(slope) > 1e-14)) break;
    const double step = gq / slope;
    double damp = 1.0;
    double trial = q - step;
    double gt = g(trial);
    while (std::abs(gt) > std::abs(gq) && damp > 1e-6) {
      damp *= 0.5;
      trial = q - damp * step;
      gt = g(trial);
    }
    q = trial;
    gq = gt;
  }
  if (std::abs(gq) <= 1e-12 * std::max(1.0, std::abs(q))) return q;
  throw NumericalError("characteristic solve for the exact Burgers solution failed");
}

NonlinearRun advance_nonlinear(const CoeffField& initial, double nu, double final_time,
                               const ScalarFlux& flux, const NewtonSettings& settings) {
  if (!(nu > 0.0)) throw std::domain_error("CFL target must be positive");
  if (final_time < 0.0) throw std::domain_error("final time must be non-negative");
  const NonlinearOperators ops = build_nonlinear_operators(initial.spec.degree, initial.mesh.dim);
  NonlinearRun run{initial, 0, {}};
  double t = 0.0;
  const double eps = 1e-12 * std::max(1.0, final_time);
  while (final_time - t > eps) {
    double dt = burgers_time_step_size(run.field, nu, flux);
    if (t + dt >= final_time - eps) dt = final_time - t;
    const SpacetimeField w = nonlinear_predict(run.field, dt, flux, ops, settings, &run.stats);
    run.field = nonlinear_correct(run.field, w, dt, flux, ops);
    t += dt;
    ++run.steps;
    const double big = run.field.coeffs.cwiseAbs().maxCoeff();
    if (!std::isfinite(big) || big > kBlowUpThreshold)
      throw NumericalError("solution blew up after " + std::to_string(run.steps) + " steps");
  }
  return run;
}

}  // namespace ridg
