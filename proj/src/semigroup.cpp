#include "damplab/semigroup.hpp"

#include <algorithm>
#include <cmath>

#include "damplab/factor.hpp"

namespace damplab {

std::vector<cplx> project_initial(const std::vector<cplx>& u0,
                                  const SubspaceBasis& kernel) {
  if (u0.size() != kernel.ambient_dim())
    throw SpaceMismatch("project_initial: state dimension");
  std::vector<cplx> out = u0;
  if (kernel.dim() == 0) return out;
  std::vector<cplx> coef(kernel.dim());
  matvec_adj(kernel.q, u0.data(), coef.data());
  for (std::size_t j = 0; j < kernel.dim(); ++j)
    kern::axpy(out.size(), -coef[j], kernel.q.col(j), out.data());
  return out;
}

std::vector<cplx> project_initial(const std::vector<cplx>& u0,
                                  const LinearMap& a,
                                  const RankPolicy& policy) {
  return project_initial(u0, kernel_basis(a, policy));
}

CayleyStepper::CayleyStepper(const LinearMap& a, double dt) : dt_(dt) {
  if (a.rows() != a.cols()) throw SpaceMismatch("CayleyStepper: A not square");
  if (!(dt > 0.0)) throw Error("CayleyStepper: dt must be positive");
  a_ = a.m;
  Matrix lhs = a_;
  lhs *= cplx(-dt / 2.0);
  for (std::size_t i = 0; i < lhs.rows(); ++i) lhs(i, i) += 1.0;
  lu_ = lu_factor(std::move(lhs));
  if (lu_.singular)
    throw SolveFailure("I - dt/2 A is singular; dissipativity violated?");
  scale_ = 1.0 + dt / 2.0 * a_.norm_fro();
}

std::vector<cplx> CayleyStepper::step(const std::vector<cplx>& u) const {
  const std::size_t n = a_.rows();
  if (u.size() != n) throw SpaceMismatch("CayleyStepper: state dimension");
  // rhs = (I + dt/2 A) u
  std::vector<cplx> rhs(n), au(n);
  matvec(a_, u.data(), au.data());
  for (std::size_t i = 0; i < n; ++i) rhs[i] = u[i] + 0.5 * dt_ * au[i];
  std::vector<cplx> x = rhs;
  lu_solve_vec(lu_, x.data());
  // one step of iterative refinement keeps long runs at the rounding floor
  std::vector<cplx> res(n), ax(n);
  matvec(a_, x.data(), ax.data());
  for (std::size_t i = 0; i < n; ++i)
    res[i] = rhs[i] - (x[i] - 0.5 * dt_ * ax[i]);
  std::vector<cplx> corr = res;
  lu_solve_vec(lu_, corr.data());
  for (std::size_t i = 0; i < n; ++i) x[i] += corr[i];
  // residual check
  matvec(a_, x.data(), ax.data());
  double rnorm = 0.0, bnorm = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    rnorm += std::norm(rhs[i] - (x[i] - 0.5 * dt_ * ax[i]));
    bnorm += std::norm(rhs[i]);
  }
  if (std::sqrt(rnorm) > 1e-10 * std::max(1e-300, std::sqrt(bnorm)))
    throw SolveFailure("Cayley solve residual " + std::to_string(std::sqrt(rnorm)));
  return x;
}

std::vector<cplx> step_cayley(const LinearMap& a, const std::vector<cplx>& u,
                              double dt) {
  return CayleyStepper(a, dt).step(u);
}

namespace {

bool uniform_spacing(const std::vector<double>& times, double& t0, double& dt) {
  if (times.size() < 2) return false;
  dt = times[1] - times[0];
  t0 = times[0];
  if (!(dt > 0.0)) return false;
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double want = t0 + double(i) * dt;
    if (std::abs(times[i] - want) > 1e-9 * (1.0 + std::abs(want))) return false;
  }
  return true;
}

}  // namespace

std::vector<std::vector<cplx>> evolve_oracle(const LinearMap& a,
                                             const std::vector<cplx>& u0,
                                             const std::vector<double>& times) {
  const std::size_t n = a.rows();
  if (n != a.cols() || u0.size() != n)
    throw SpaceMismatch("evolve_oracle: dimensions");
  if (n > 4096) throw Error("evolve_oracle: dimension exceeds the dense cap");

  EigResult eig = eig_compute(a.m);
  bool eig_ok = eig.vector_residual < 1e-8;
  LuFac<cplx> vlu;
  if (eig_ok) {
    vlu = lu_factor(eig.vectors);
    eig_ok = !vlu.singular && vlu.min_pivot > 1e-12;
  }
  std::vector<std::vector<cplx>> out;
  out.reserve(times.size());
  if (eig_ok) {
    std::vector<cplx> w = u0;
    lu_solve_vec(vlu, w.data());
    for (double t : times) {
      std::vector<cplx> scaled(n);
      for (std::size_t i = 0; i < n; ++i)
        scaled[i] = std::exp(eig.values[i] * t) * w[i];
      std::vector<cplx> u(n);
      matvec(eig.vectors, scaled.data(), u.data());
      out.push_back(std::move(u));
    }
    return out;
  }

  // defective spectrum: fall back to scaling-and-squaring propagation
  double t0 = 0.0, dt = 0.0;
  if (uniform_spacing(times, t0, dt)) {
    Matrix adt = a.m;
    adt *= cplx(dt);
    Matrix e = expm(adt);
    Matrix e0 = a.m;
    e0 *= cplx(t0);
    std::vector<cplx> u(n);
    matvec(expm(e0), u0.data(), u.data());
    for (std::size_t k = 0; k < times.size(); ++k) {
      out.push_back(u);
      if (k + 1 < times.size()) {
        std::vector<cplx> next(n);
        matvec(e, u.data(), next.data());
        u = std::move(next);
      }
    }
    return out;
  }
  for (double t : times) {
    Matrix at = a.m;
    at *= cplx(t);
    std::vector<cplx> u(n);
    Matrix e = expm(at);
    matvec(e, u0.data(), u.data());
    out.push_back(std::move(u));
  }
  return out;
}

const char* to_string(DecayModel m) {
  switch (m) {
    case DecayModel::Exponential:
      return "exponential";
    case DecayModel::Algebraic:
      return "algebraic";
    default:
      return "conservative";
  }
}

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0;
};

LineFit least_squares(const std::vector<double>& x,
                      const std::vector<double>& y) {
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  LineFit f;
  const double dx = n * sxx - sx * sx;
  if (dx == 0.0) return f;
  f.slope = (n * sxy - sx * sy) / dx;
  f.intercept = (sy - f.slope * sx) / n;
  const double dy = n * syy - sy * sy;
  f.r2 = dy == 0.0 ? 1.0 : (n * sxy - sx * sy) * (n * sxy - sx * sy) / (dx * dy);
  return f;
}

}  // namespace

DecayFit fit_decay(const std::vector<double>& times,
                   const std::vector<double>& energies,
                   double window_fraction) {
  if (times.size() != energies.size())
    throw SpaceMismatch("fit_decay: series lengths differ");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (!(times[i] > times[i - 1]))
      throw Error("fit_decay: times must be strictly increasing");
  if (!(window_fraction > 0.0) || window_fraction > 1.0)
    throw Error("fit_decay: window fraction must lie in (0, 1]");

  std::size_t begin = times.size() -
                      std::size_t(std::ceil(window_fraction * times.size()));
  // drop the underflowed tail
  std::size_t end = times.size();
  for (std::size_t i = begin; i < end; ++i)
    if (!(energies[i] > 1e-290)) {
      end = i;
      break;
    }
  if (end <= begin || end - begin < 32) {
    if (end < times.size())
      throw NonPositiveEnergy("energy underflow leaves fewer than 32 samples");
    throw InsufficientSeries("fit window needs at least 32 samples");
  }

  std::vector<double> t, loge, logt;
  for (std::size_t i = begin; i < end; ++i) {
    if (!(times[i] > 0.0)) continue;
    t.push_back(times[i]);
    loge.push_back(std::log(energies[i]));
    logt.push_back(std::log(times[i]));
  }
  DecayFit fit;
  fit.window_begin = begin;
  LineFit le = least_squares(t, loge);
  fit.rate_exponential = std::max(0.0, -le.slope);
  fit.r2_exponential = le.r2;
  LineFit la = least_squares(logt, loge);
  fit.exponent_algebraic = la.slope;
  fit.r2_algebraic = la.r2;

  const double first = energies[begin], last = energies[end - 1];
  if (last >= (1.0 - 1e-6) * first) {
    fit.selected = DecayModel::Conservative;
  } else {
    fit.selected = fit.r2_exponential >= fit.r2_algebraic
                       ? DecayModel::Exponential
                       : DecayModel::Algebraic;
  }
  return fit;
}

}  // namespace damplab
