// Copyright 2026 The qdecon Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qdecon/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "qdecon/errors.hpp"

namespace qdecon {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSupportViolationTol = 1e-10;

double entropy_of_eigenvalues(const Eigen::VectorXd& lambda) {
  const double lambda_max = lambda.size() ? lambda.maxCoeff() : 0.0;
  const double cutoff = kSupportCutoff * lambda_max;
  double h = 0.0;
  for (Eigen::Index i = 0; i < lambda.size(); ++i) {
    if (lambda(i) > cutoff) h -= lambda(i) * std::log2(lambda(i));
  }
  return h;
}

void check_disjoint(const std::vector<std::string>& a,
                    const std::vector<std::string>& b, const char* what) {
  std::set<std::string> sa(a.begin(), a.end());
  for (const auto& l : b) {
    if (sa.count(l)) {
      throw LayoutError(std::string(what) + ": label '" + l +
                        "' appears in both subsystem sets");
    }
  }
}

std::vector<std::string> concat_labels(const std::vector<std::string>& a,
                                       const std::vector<std::string>& b) {
  std::vector<std::string> out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void validate_alpha(double alpha) {
  const bool ok = alpha == 1.0 || (alpha > 0.5 && alpha < 1.0) ||
                  (alpha > 1.0 && alpha <= 2.0);
  if (!ok) {
    throw ConfigError("alpha = " + std::to_string(alpha) +
                      " outside the supported range {1} u (1/2, 1) u (1, 2]");
  }
}

Matrix kron_matrix(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

/// Divergence of rho_ac (dimensions da x dc, conditioner trailing) from
/// 1_A (x) sigma, evaluated from sigma's eigendecomposition. Returns +inf on
/// support violation (alpha > 1) or vanishing sandwiched trace.
double divergence_given_sigma(const Matrix& rho_ac, std::int64_t da,
                              std::int64_t dc, const Matrix& sigma,
                              double alpha) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((sigma + sigma.adjoint()) / 2.0);
  const Eigen::VectorXd mu = es.eigenvalues();
  const double mu_max = mu.size() ? mu.maxCoeff() : 0.0;
  const double cutoff = kSupportCutoff * std::max(mu_max, 0.0);

  if (alpha >= 1.0) {
    // Mass of rho outside 1_A (x) supp(sigma).
    double outside = 0.0;
    for (Eigen::Index k = 0; k < mu.size(); ++k) {
      if (mu(k) > cutoff) continue;
      Matrix pk = Matrix::Zero(dc, dc);
      pk.noalias() = es.eigenvectors().col(k) * es.eigenvectors().col(k).adjoint();
      const Matrix proj = kron_matrix(Matrix::Identity(da, da), pk);
      outside += (proj * rho_ac).trace().real();
    }
    if (outside > kSupportViolationTol) return kInf;
  }

  if (alpha == 1.0) {
    // Relative entropy Tr rho log2 rho - Tr rho log2 (1 (x) sigma).
    Eigen::SelfAdjointEigenSolver<Matrix> er((rho_ac + rho_ac.adjoint()) / 2.0);
    double d = -entropy_of_eigenvalues(er.eigenvalues());
    Matrix log_sigma = Matrix::Zero(dc, dc);
    for (Eigen::Index k = 0; k < mu.size(); ++k) {
      if (mu(k) > cutoff) {
        log_sigma.noalias() += std::log2(mu(k)) * es.eigenvectors().col(k) *
                               es.eigenvectors().col(k).adjoint();
      }
    }
    const Matrix big = kron_matrix(Matrix::Identity(da, da), log_sigma);
    d -= (big * rho_ac).trace().real();
    return d;
  }

  const double q = (1.0 - alpha) / (2.0 * alpha);
  Eigen::VectorXd powered(mu.size());
  for (Eigen::Index k = 0; k < mu.size(); ++k) {
    powered(k) = mu(k) > cutoff ? std::pow(mu(k), q) : 0.0;
  }
  const Matrix a_c =
      es.eigenvectors() * powered.asDiagonal() * es.eigenvectors().adjoint();
  const Matrix sandwich = kron_matrix(Matrix::Identity(da, da), a_c);
  Matrix gamma = sandwich * rho_ac * sandwich;
  gamma = (gamma + gamma.adjoint()) / 2.0;

  Eigen::SelfAdjointEigenSolver<Matrix> eg(gamma, Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (Eigen::Index k = 0; k < eg.eigenvalues().size(); ++k) {
    const double lam = eg.eigenvalues()(k);
    if (lam > 0.0) s += std::pow(lam, alpha);
  }
  if (!(s > 0.0)) return kInf;
  return std::log2(s) / (alpha - 1.0);
}

/// One step of the fixed-point map
///   sigma <- normalize(sigma^q Tr_A[(sigma^q rho sigma^q)^alpha] sigma^q).
Matrix fixed_point_step(const Matrix& rho_ac, std::int64_t da, std::int64_t dc,
                        const Matrix& sigma, double alpha) {
  const double q = (1.0 - alpha) / (2.0 * alpha);
  Eigen::SelfAdjointEigenSolver<Matrix> es((sigma + sigma.adjoint()) / 2.0);
  const Eigen::VectorXd mu = es.eigenvalues();
  const double cutoff = kSupportCutoff * std::max(mu.maxCoeff(), 0.0);
  Eigen::VectorXd powered(mu.size());
  for (Eigen::Index k = 0; k < mu.size(); ++k) {
    powered(k) = mu(k) > cutoff ? std::pow(mu(k), q) : 0.0;
  }
  const Matrix a_c =
      es.eigenvectors() * powered.asDiagonal() * es.eigenvectors().adjoint();
  const Matrix sandwich = kron_matrix(Matrix::Identity(da, da), a_c);
  Matrix gamma = sandwich * rho_ac * sandwich;
  gamma = (gamma + gamma.adjoint()) / 2.0;

  Eigen::SelfAdjointEigenSolver<Matrix> eg(gamma);
  Eigen::VectorXd lam = eg.eigenvalues();
  for (Eigen::Index k = 0; k < lam.size(); ++k) {
    lam(k) = lam(k) > 0.0 ? std::pow(lam(k), alpha) : 0.0;
  }
  const Matrix gamma_alpha =
      eg.eigenvectors() * lam.asDiagonal() * eg.eigenvectors().adjoint();

  // Tr_A with the conditioner as trailing factor: sum the da diagonal blocks.
  Matrix t = Matrix::Zero(dc, dc);
  for (std::int64_t ia = 0; ia < da; ++ia) {
    t += gamma_alpha.block(ia * dc, ia * dc, dc, dc);
  }

  Matrix raw = a_c * t * a_c;
  raw = (raw + raw.adjoint()) / 2.0;
  const double tr = raw.trace().real();
  if (!(tr > 0.0) || !std::isfinite(tr)) return sigma;
  raw /= tr;
  // Tiny support floor so the next inverse power stays evaluable.
  raw = (1.0 - 1e-14) * raw +
        (1e-14 / static_cast<double>(dc)) * Matrix::Identity(dc, dc);
  return raw;
}

/// Real parameterization of a lower-triangular complex matrix; sigma(x) =
/// L L^dag / Tr(L L^dag).
struct CholeskyParam {
  std::int64_t dc;

  std::int64_t size() const { return dc * dc; }

  Matrix lower(const Eigen::VectorXd& x) const {
    Matrix l = Matrix::Zero(dc, dc);
    std::int64_t pos = 0;
    for (std::int64_t i = 0; i < dc; ++i) {
      l(i, i) = x(pos++);
      for (std::int64_t j = 0; j < i; ++j) {
        const double re = x(pos++);
        const double im = x(pos++);
        l(i, j) = Complex(re, im);
      }
    }
    return l;
  }

  Eigen::VectorXd pack(const Matrix& l) const {
    Eigen::VectorXd x(size());
    std::int64_t pos = 0;
    for (std::int64_t i = 0; i < dc; ++i) {
      x(pos++) = l(i, i).real();
      for (std::int64_t j = 0; j < i; ++j) {
        x(pos++) = l(i, j).real();
        x(pos++) = l(i, j).imag();
      }
    }
    return x;
  }

  Matrix sigma(const Eigen::VectorXd& x) const {
    const Matrix l = lower(x);
    Matrix s = l * l.adjoint();
    const double tr = s.trace().real();
    if (!(tr > 1e-300)) return Matrix::Identity(dc, dc) / double(dc);
    return s / tr;
  }
};

struct MinimizeResult {
  double value;
  Matrix sigma;
  double final_step;
  bool converged;
  int iterations_used;
};

/// Quasi-Newton (BFGS, inverse-Hessian form) with Armijo backtracking and
/// central-difference gradients. The objective is smooth near the optimizer;
/// the Cholesky parameterization keeps iterates PSD by construction.
MinimizeResult bfgs_polish(const Matrix& rho_ac, std::int64_t da,
                           std::int64_t dc, const Matrix& sigma0, double alpha,
                           double tol, int budget) {
  CholeskyParam param{dc};
  const std::int64_t n = param.size();

  auto objective = [&](const Eigen::VectorXd& x) {
    return divergence_given_sigma(rho_ac, da, dc, param.sigma(x), alpha);
  };

  Eigen::LLT<Matrix> llt(sigma0 +
                         1e-12 * Matrix::Identity(dc, dc));
  Eigen::VectorXd x = param.pack(llt.matrixL());
  double f = objective(x);
  double best_f = f;
  Matrix best_sigma = param.sigma(x);

  auto gradient = [&](const Eigen::VectorXd& at, double) {
    Eigen::VectorXd g(n);
    for (std::int64_t i = 0; i < n; ++i) {
      const double h = 1e-6 * std::max(1.0, std::abs(at(i)));
      Eigen::VectorXd xp = at, xm = at;
      xp(i) += h;
      xm(i) -= h;
      const double fp = objective(xp);
      const double fm = objective(xm);
      g(i) = (std::isfinite(fp) && std::isfinite(fm)) ? (fp - fm) / (2 * h) : 0.0;
    }
    return g;
  };

  Eigen::MatrixXd hinv = Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd g = gradient(x, f);
  double step = 1.0;
  int it = 0;
  bool converged = false;
  for (; it < budget; ++it) {
    if (g.lpNorm<Eigen::Infinity>() < 1e-9) {
      converged = true;
      break;
    }
    Eigen::VectorXd p = -hinv * g;
    double slope = g.dot(p);
    if (!(slope < 0.0)) {
      hinv.setIdentity();
      p = -g;
      slope = -g.squaredNorm();
    }

    step = 1.0;
    double f_new = kInf;
    Eigen::VectorXd x_new;
    for (int bt = 0; bt < 50; ++bt) {
      x_new = x + step * p;
      f_new = objective(x_new);
      if (std::isfinite(f_new) && f_new <= f + 1e-4 * step * slope) break;
      step *= 0.5;
    }
    if (!std::isfinite(f_new) || f_new > f) {
      converged = std::abs(step * slope) < tol;
      break;  // line search exhausted; we are at numerical resolution
    }

    const Eigen::VectorXd g_new = gradient(x_new, f_new);
    const Eigen::VectorXd s = x_new - x;
    const Eigen::VectorXd y = g_new - g;
    const double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      const Eigen::VectorXd hy = hinv * y;
      const double yhy = y.dot(hy);
      hinv += ((sy + yhy) / (sy * sy)) * (s * s.transpose()) -
              (hy * s.transpose() + s * hy.transpose()) / sy;
    }

    const double delta = f - f_new;
    x = x_new;
    f = f_new;
    g = g_new;
    if (f < best_f) {
      best_f = f;
      best_sigma = param.sigma(x);
    }
    if (delta >= 0.0 && delta < 0.01 * tol &&
        g.lpNorm<Eigen::Infinity>() < 1e-6) {
      converged = true;
      break;
    }
  }
  if (g.lpNorm<Eigen::Infinity>() < 1e-6) converged = true;
  return MinimizeResult{best_f, best_sigma, step, converged, it};
}

}  // namespace

double von_neumann(const DensityOperator& rho) {
  EigResult eig = eig_hermitian(rho.op());
  return entropy_of_eigenvalues(eig.eigenvalues);
}

double renyi_entropy(const DensityOperator& rho, double alpha) {
  validate_alpha(alpha);
  if (alpha == 1.0) return von_neumann(rho);
  EigResult eig = eig_hermitian(rho.op());
  const double cutoff = kSupportCutoff * eig.eigenvalues.maxCoeff();
  double s = 0.0;
  for (Eigen::Index i = 0; i < eig.eigenvalues.size(); ++i) {
    if (eig.eigenvalues(i) > cutoff) s += std::pow(eig.eigenvalues(i), alpha);
  }
  return std::log2(s) / (1.0 - alpha);
}

double conditional_entropy(const DensityOperator& rho,
                           const std::vector<std::string>& a,
                           const std::vector<std::string>& b) {
  check_disjoint(a, b, "conditional_entropy");
  EigResult eig_ab =
      eig_hermitian(partial_trace(rho.op(), concat_labels(a, b)));
  const double h_ab = entropy_of_eigenvalues(eig_ab.eigenvalues);
  if (b.empty()) return h_ab;
  EigResult eig_b = eig_hermitian(partial_trace(rho.op(), b));
  return h_ab - entropy_of_eigenvalues(eig_b.eigenvalues);
}

double cmi(const DensityOperator& rho, const std::vector<std::string>& a,
           const std::vector<std::string>& r,
           const std::vector<std::string>& b) {
  check_disjoint(a, r, "cmi");
  check_disjoint(a, b, "cmi");
  check_disjoint(r, b, "cmi");
  return conditional_entropy(rho, a, b) -
         conditional_entropy(rho, a, concat_labels(r, b));
}

double sandwiched_divergence(const DensityOperator& rho, const Operator& sigma,
                             double alpha) {
  validate_alpha(alpha);
  if (sigma.dim() != rho.dim()) {
    throw ShapeError("sandwiched_divergence: rho and sigma dimensions differ");
  }
  // Treat the whole space as the conditioner (da = 1) so the shared
  // evaluation path applies verbatim.
  return divergence_given_sigma(rho.mat(), 1, rho.dim(), sigma.mat, alpha);
}

double renyi_conditional(const DensityOperator& rho,
                         const std::vector<std::string>& a,
                         const std::vector<std::string>& c,
                         const EntropyParams& params) {
  check_disjoint(a, c, "renyi_conditional");
  validate_alpha(params.alpha);
  const double alpha = params.alpha;
  if (alpha == 1.0) return conditional_entropy(rho, a, c);

  if (c.empty()) {
    return renyi_entropy(
        DensityOperator::unchecked(partial_trace(rho.op(), a)), alpha);
  }

  // Marginal with A leading and the conditioner trailing.
  Operator rho_ac = partial_trace(rho.op(), concat_labels(a, c));
  rho_ac = permute_subsystems(rho_ac, concat_labels(a, c));
  std::int64_t da = 1;
  for (const auto& l : a) da *= rho.layout().dim_of(l);
  const std::int64_t dc = rho_ac.dim() / da;

  // Start from the conditioner marginal (exact at alpha = 1).
  Matrix sigma = Matrix::Zero(dc, dc);
  for (std::int64_t ia = 0; ia < da; ++ia) {
    sigma += rho_ac.mat.block(ia * dc, ia * dc, dc, dc);
  }
  sigma = (sigma + sigma.adjoint()) / 2.0;
  sigma = (1.0 - 1e-12) * sigma / sigma.trace().real() +
          (1e-12 / double(dc)) * Matrix::Identity(dc, dc);

  int budget = params.max_iterations;
  double value = divergence_given_sigma(rho_ac.mat, da, dc, sigma, alpha);
  double best_value = value;
  Matrix best_sigma = sigma;
  double last_change = kInf;

  const int fp_cap = std::min(budget, 500);
  int used = 0;
  for (; used < fp_cap; ++used) {
    Matrix proposal = fixed_point_step(rho_ac.mat, da, dc, sigma, alpha);
    double v_new = divergence_given_sigma(rho_ac.mat, da, dc, proposal, alpha);
    // Damp the step whenever the plain map overshoots.
    double gamma = 1.0;
    int tries = 0;
    while ((!std::isfinite(v_new) || v_new > value + 1e-13) && tries < 20) {
      gamma *= 0.5;
      Matrix damped = (1.0 - gamma) * sigma + gamma * proposal;
      damped /= damped.trace().real();
      proposal = damped;
      v_new = divergence_given_sigma(rho_ac.mat, da, dc, proposal, alpha);
      ++tries;
    }
    if (!std::isfinite(v_new) || v_new > value + 1e-13) break;
    last_change = std::abs(value - v_new);
    sigma = proposal;
    value = v_new;
    if (value < best_value) {
      best_value = value;
      best_sigma = sigma;
    }
    if (last_change < 0.01 * params.tolerance) {
      ++used;
      break;
    }
  }
  budget -= used;

  bool converged = last_change < params.tolerance;
  double final_step = last_change;
  if (budget > 0) {
    MinimizeResult polish = bfgs_polish(rho_ac.mat, da, dc, best_sigma, alpha,
                                        params.tolerance, budget);
    if (polish.value < best_value) {
      best_value = polish.value;
      best_sigma = polish.sigma;
    }
    converged = converged || polish.converged;
    final_step = polish.final_step;
  }

  if (!converged) {
    throw NonConvergenceError(
        "renyi_conditional: minimizer did not settle within tolerance " +
            std::to_string(params.tolerance) + " in " +
            std::to_string(params.max_iterations) + " iterations",
        -best_value, final_step);
  }
  return -best_value;
}

double dual_alpha(double alpha) {
  return alpha / (2.0 * alpha - 1.0);
}

}  // namespace qdecon
