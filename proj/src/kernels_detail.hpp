#ifndef DAMPLAB_KERNELS_DETAIL_HPP
#define DAMPLAB_KERNELS_DETAIL_HPP

#include "damplab/kernels.hpp"

namespace damplab::kern::detail {

// Microkernel tile sizes (rows x cols of the C tile). Packed A strips hold
// MR rows per k step; packed B strips hold NR columns per k step.
inline constexpr std::size_t DMR = 8, DNR = 4;  // double
inline constexpr std::size_t ZMR = 4, ZNR = 4;  // complex

struct Table {
  cplx (*dotc)(std::size_t, const cplx*, const cplx*);
  double (*dot)(std::size_t, const double*, const double*);
  void (*axpy_z)(std::size_t, cplx, const cplx*, cplx*);
  void (*axpy_d)(std::size_t, double, const double*, double*);
  void (*scal_z)(std::size_t, cplx, cplx*);
  void (*scal_d)(std::size_t, double, double*);
  double (*nrm2sq_d)(std::size_t, const double*);
  void (*rot_d)(std::size_t, double*, double*, double, double);
  void (*crot_z)(std::size_t, cplx*, cplx*, double, cplx);
  // c tile (mr x nr, column-major ldc) += apack (MR-strip) * bpack (NR-strip)
  void (*ukern_d)(std::size_t k, const double* apack, const double* bpack,
                  double* c, std::size_t ldc);
  void (*ukern_z)(std::size_t k, const cplx* apack, const cplx* bpack,
                  cplx* c, std::size_t ldc);
};

extern const Table scalar_table;

// Null when the AVX2 path is not compiled in or the CPU lacks AVX2/FMA.
const Table* avx2_table();

}  // namespace damplab::kern::detail

#endif
