#ifndef DAMPLAB_LINALG_HPP
#define DAMPLAB_LINALG_HPP

// Labeled linear maps, orthonormal subspace bases, and rank decisions.
// At finite dimension every range is closed; what the rest of the code
// reports as a "closed range margin" is always a smallest retained singular
// value under the rank policy below, so the policy is the one place where
// the zero/nonzero call is made.

#include <optional>
#include <string>

#include "damplab/dense.hpp"
#include "damplab/errors.hpp"
#include "damplab/factor.hpp"

namespace damplab {

struct RankPolicy {
  double relative_threshold = 1e-10;
  double absolute_floor = 1e-14;

  void validate() const {
    if (!(relative_threshold > 0.0) || !(absolute_floor > 0.0))
      throw Error("RankPolicy thresholds must be strictly positive");
  }
};

struct LinearMap {
  Matrix m;
  std::string domain;
  std::string codomain;

  LinearMap() = default;
  LinearMap(Matrix mat, std::string dom, std::string codom);

  std::size_t rows() const { return m.rows(); }
  std::size_t cols() const { return m.cols(); }
  bool square_on(const std::string& space) const {
    return domain == space && codomain == space && m.rows() == m.cols();
  }
};

LinearMap compose(const LinearMap& a, const LinearMap& b);  // a after b
LinearMap adjoint_map(const LinearMap& a);
LinearMap add(const LinearMap& a, const LinearMap& b);

struct SubspaceBasis {
  Matrix q;           // orthonormal columns
  std::string space;  // label of the ambient space
  double tol_used = 0.0;

  std::size_t dim() const { return q.cols(); }
  std::size_t ambient_dim() const { return q.rows(); }
};

// ||Q^H Q - I||_F
double orthonormality_residual(const Matrix& q);

// max_j || inner_j - P_outer inner_j ||
double containment_residual(const SubspaceBasis& inner,
                            const SubspaceBasis& outer);

// Orthonormal basis of the orthogonal complement within the ambient space.
SubspaceBasis orthonormal_complement(const SubspaceBasis& b);

struct RankReport {
  std::size_t rank = 0;
  double cutoff = 0.0;
  double smallest_kept = 0.0;
  double largest_dropped = 0.0;
  bool ambiguous = false;  // a singular value within 10% of the cutoff
};

RankReport decide_rank(const std::vector<double>& sigma,
                       const RankPolicy& policy);

// ---- operations -----------------------------------------------------------

struct HermitianSqrtResult {
  LinearMap sqrt;
  LinearMap inv_sqrt;
};

// Hermitian positive definite square root (and its inverse).
HermitianSqrtResult hermitian_sqrt(const LinearMap& m,
                                   const RankPolicy& policy = {});

double min_singular_value(const LinearMap& m);

SubspaceBasis range_basis(const LinearMap& m, const RankPolicy& policy,
                          RankReport* report = nullptr);
SubspaceBasis kernel_basis(const LinearMap& m, const RankPolicy& policy,
                           RankReport* report = nullptr);

// Orthonormal basis of b1 intersect b2 via principal angles; a direction
// counts as common when its cosine exceeds 1 - cos_tol.
SubspaceBasis subspace_intersection(const SubspaceBasis& b1,
                                    const SubspaceBasis& b2,
                                    double cos_tol = 1e-8);

// Inverse of [[A, B], [C, 0]] on its natural domain:
// [[0, C^-1], [B^-1, -B^-1 A C^-1]]. B and C must be invertible.
LinearMap block_inverse_antitriangular(const LinearMap& a, const LinearMap& b,
                                       const LinearMap& c,
                                       const RankPolicy& policy = {});

}  // namespace damplab

#endif
