#pragma once

#include <array>
#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ridg/errors.hpp"
#include "ridg/linear_predictor.hpp"

namespace ridg {

/// One full predict + correct step written as a stencil on Q^n:
/// Q_i^{n+1} = sum_k blocks[k] Q_{i + offsets[k]}.
struct StepStencil {
  int dim = 1;
  std::vector<Index3> offsets;
  std::vector<Eigen::MatrixXd> blocks;  // M_C x M_C
};

StepStencil step_stencil(Scheme scheme, const ReferenceOperators& ops, const Courant& courant);

/// Amplification matrix M(nu, omega) of the stencil for one Fourier mode.
Eigen::MatrixXcd amplification_md(const StepStencil& stencil,
                                  const std::array<double, 3>& omega);
Eigen::MatrixXcd amplification_md(Scheme scheme, const SchemeBases& bases,
                                  const Courant& courant,
                                  const std::array<double, 3>& omega);

/// Closed-form 1D amplification matrices built from the local blocks
/// (L0, L^+, X^+, T, C0, C^-). Negative nu is mapped onto positive nu by the
/// parity transform of the basis.
Eigen::MatrixXcd amplification_1d(Scheme scheme, const SchemeBases& bases, double nu,
                                  double omega);

double spectral_radius(const Eigen::MatrixXcd& m);

/// Uniform wave-number samples per axis, both ends of [0, 2 pi] included.
int default_omega_resolution(int dim);

/// max over the omega grid of rho(M) - 1. M(-omega) = conj(M(omega)), so
/// only half of the grid is evaluated.
double stability_function(const StepStencil& stencil, int omega_resolution);
double stability_function(Scheme scheme, const ReferenceOperators& ops,
                          const Courant& courant, int omega_resolution);

struct StabilityOptions {
  double epsilon = 5e-4;
  int omega_resolution = 0;   // 0 selects default_omega_resolution(dim)
  double bracket_lower = 0.0;
  double bracket_upper = 0.0; // 0 selects 4 in 1D and 2 otherwise
  double tolerance = 1e-3;    // final bracket width
};

struct StabilityReport {
  Scheme scheme = Scheme::Lidg;
  int degree = 0;
  int dim = 1;
  std::array<double, 3> direction{1.0, 1.0, 1.0};
  double max_cfl = 0.0;  // |nu| = max_a |nu_a|
  double epsilon = 0.0;
  int omega_resolution = 0;
  double lower = 0.0;  // final bracket
  double upper = 0.0;
  int iterations = 0;
};

/// Raised when f does not straddle epsilon on the initial bracket.
class BracketError : public NumericalError {
 public:
  BracketError(const std::string& what, double f_lower, double f_upper)
      : NumericalError(what), f_lower(f_lower), f_upper(f_upper) {}
  double f_lower;
  double f_upper;
};

/// Bisects f(s * direction / max|direction|) = epsilon for s.
StabilityReport max_cfl(Scheme scheme, int degree, int dim,
                        const std::array<double, 3>& direction,
                        const StabilityOptions& options = {});

/// Returns true when f(nu) <= epsilon. Stops scanning omega at the first
/// sample that exceeds epsilon.
bool is_linearly_stable(Scheme scheme, const ReferenceOperators& ops,
                        const Courant& courant, double epsilon, int omega_resolution);

/// Grid of f + 1 values, rows indexed by nu_y and columns by nu_x.
Eigen::MatrixXd stability_scan_2d(Scheme scheme, int degree,
                                  const std::vector<double>& nu_x,
                                  const std::vector<double>& nu_y, int omega_resolution);

/// CSV rows `scheme,m_deg,m_dim,direction,max_cfl,epsilon,omega_resolution`;
/// the direction components are joined with ';'.
void write_stability_csv(std::ostream& out, const std::vector<StabilityReport>& reports);
/// CSV triples `nu_x,nu_y,f_plus_1`.
void write_scan_csv(std::ostream& out, const std::vector<double>& nu_x,
                    const std::vector<double>& nu_y, const Eigen::MatrixXd& values);

std::string scheme_name(Scheme scheme);

}  // namespace ridg
