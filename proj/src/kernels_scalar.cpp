#include "kernels_detail.hpp"

namespace damplab::kern::detail {
namespace {

cplx s_dotc(std::size_t n, const cplx* x, const cplx* y) {
  double re = 0.0, im = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double xr = x[i].real(), xi = x[i].imag();
    const double yr = y[i].real(), yi = y[i].imag();
    re += xr * yr + xi * yi;
    im += xr * yi - xi * yr;
  }
  return {re, im};
}

double s_dot(std::size_t n, const double* x, const double* y) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void s_axpy_z(std::size_t n, cplx a, const cplx* x, cplx* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_axpy_d(std::size_t n, double a, const double* x, double* y) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void s_scal_z(std::size_t n, cplx a, cplx* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

void s_scal_d(std::size_t n, double a, double* x) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= a;
}

double s_nrm2sq_d(std::size_t n, const double* x) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * x[i];
  return s;
}

void s_rot_d(std::size_t n, double* x, double* y, double c, double s) {
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = x[i], yi = y[i];
    x[i] = c * xi + s * yi;
    y[i] = c * yi - s * xi;
  }
}

void s_crot_z(std::size_t n, cplx* x, cplx* y, double c, cplx s) {
  const cplx sc = std::conj(s);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx xi = x[i], yi = y[i];
    x[i] = c * xi + s * yi;
    y[i] = c * yi - sc * xi;
  }
}

void s_ukern_d(std::size_t k, const double* apack, const double* bpack,
               double* c, std::size_t ldc) {
  double acc[DMR * DNR] = {};
  for (std::size_t p = 0; p < k; ++p) {
    const double* a = apack + p * DMR;
    const double* b = bpack + p * DNR;
    for (std::size_t j = 0; j < DNR; ++j)
      for (std::size_t i = 0; i < DMR; ++i) acc[j * DMR + i] += a[i] * b[j];
  }
  for (std::size_t j = 0; j < DNR; ++j)
    for (std::size_t i = 0; i < DMR; ++i) c[i + j * ldc] += acc[j * DMR + i];
}

void s_ukern_z(std::size_t k, const cplx* apack, const cplx* bpack,
               cplx* c, std::size_t ldc) {
  cplx acc[ZMR * ZNR] = {};
  for (std::size_t p = 0; p < k; ++p) {
    const cplx* a = apack + p * ZMR;
    const cplx* b = bpack + p * ZNR;
    for (std::size_t j = 0; j < ZNR; ++j)
      for (std::size_t i = 0; i < ZMR; ++i) acc[j * ZMR + i] += a[i] * b[j];
  }
  for (std::size_t j = 0; j < ZNR; ++j)
    for (std::size_t i = 0; i < ZMR; ++i) c[i + j * ldc] += acc[j * ZMR + i];
}

}  // namespace

const Table scalar_table = {
    s_dotc, s_dot, s_axpy_z, s_axpy_d, s_scal_z, s_scal_d,
    s_nrm2sq_d, s_rot_d, s_crot_z, s_ukern_d, s_ukern_z,
};

}  // namespace damplab::kern::detail
