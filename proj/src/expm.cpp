#include <cmath>

#include "damplab/factor.hpp"

namespace damplab {

// Scaling-and-squaring with the degree-13 Pade approximant.
Matrix expm(const Matrix& a_in) {
  static const double b[14] = {64764752532480000.0, 32382376266240000.0,
                               7771770303897600.0,  1187353796428800.0,
                               129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,
                               1323241920.0,        40840800.0,
                               960960.0,            16380.0,
                               182.0,               1.0};
  const double theta13 = 5.371920351148152;
  const std::size_t n = a_in.rows();

  int s = 0;
  const double nrm = a_in.norm_one();
  if (nrm > theta13) s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
  Matrix a = a_in;
  if (s > 0) a *= cplx(std::ldexp(1.0, -s));

  const Matrix a2 = mul(a, a);
  const Matrix a4 = mul(a2, a2);
  const Matrix a6 = mul(a2, a4);
  const Matrix eye = Matrix::identity(n);

  Matrix w = b[13] * a6 + b[11] * a4 + b[9] * a2;
  w = mul(a6, w);
  w += b[7] * a6 + b[5] * a4 + b[3] * a2 + b[1] * eye;
  const Matrix u = mul(a, w);

  Matrix z = b[12] * a6 + b[10] * a4 + b[8] * a2;
  z = mul(a6, z);
  Matrix v = z + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * eye;

  // r = (v - u)^{-1} (v + u)
  Matrix num = v + u;
  Matrix den = v - u;
  LuFac<cplx> f = lu_factor(std::move(den));
  Matrix r = lu_solve(f, std::move(num));
  for (int i = 0; i < s; ++i) r = mul(r, r);
  return r;
}

}  // namespace damplab
