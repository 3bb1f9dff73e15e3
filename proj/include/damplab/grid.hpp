#ifndef DAMPLAB_GRID_HPP
#define DAMPLAB_GRID_HPP

// Staggered (Yee-type) discretization of a 2D rectangle with PEC walls.
// Scalar potentials live on interior vertices, E on edges (Ex on x-directed
// edges, Ey on y-directed ones), H at cell centers. The stencils are
// integer multiples of 1/h, so curl0 . grad0 cancels exactly, entry by
// entry, on the unit square.

#include <utility>
#include <vector>

#include "damplab/linalg.hpp"

namespace damplab {

struct GridSpec {
  std::size_t nx = 8, ny = 8;
  double lx = 1.0, ly = 1.0;

  void validate() const;
  double hx() const { return lx / double(nx); }
  double hy() const { return ly / double(ny); }

  // degrees of freedom
  std::size_t n_vertices() const { return (nx - 1) * (ny - 1); }
  std::size_t n_ex() const { return nx * (ny - 1); }
  std::size_t n_ey() const { return (nx - 1) * ny; }
  std::size_t n_edges() const { return n_ex() + n_ey(); }
  std::size_t n_cells() const { return nx * ny; }

  // interior vertex (i, j), i in [1, nx), j in [1, ny)
  std::size_t vertex_index(std::size_t i, std::size_t j) const {
    return (i - 1) + (j - 1) * (nx - 1);
  }
  // x-edge from vertex (i, j) to (i+1, j), i in [0, nx), j in [1, ny)
  std::size_t ex_index(std::size_t i, std::size_t j) const {
    return i + (j - 1) * nx;
  }
  // y-edge from vertex (i, j) to (i, j+1), i in [1, nx), j in [0, ny)
  std::size_t ey_index(std::size_t i, std::size_t j) const {
    return n_ex() + (i - 1) + j * (nx - 1);
  }
  std::size_t cell_index(std::size_t i, std::size_t j) const {
    return i + j * nx;
  }

  std::pair<double, double> edge_midpoint(std::size_t edge) const;
  bool edge_is_ex(std::size_t edge) const { return edge < n_ex(); }

  // space labels carry the resolution so cross-grid composition is caught
  std::string e_label() const;
  std::string h_label() const;
  std::string p_label() const;
};

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  bool contains(double x, double y) const {
    return x > x0 && x < x1 && y > y0 && y < y1;
  }
};

struct RegionMask {
  std::vector<bool> edges;  // over E degrees of freedom
  std::string description;

  static RegionMask from_rects(const GridSpec& g, const std::vector<Rect>& rects);
  static RegionMask full(const GridSpec& g);

  std::size_t count() const;
  bool empty() const { return count() == 0; }
  RegionMask complement() const;

  // vertices whose four incident edges all lie in the region: the discrete
  // H^1_0 potential space of the region
  std::vector<bool> interior_vertices(const GridSpec& g) const;
  // vertices incident to at least one region edge: the H^1 potential space
  std::vector<bool> touched_vertices(const GridSpec& g) const;
};

LinearMap build_grad0(const GridSpec& g);

// (curl0, curl0^*): curl0 maps E to cell scalars with the tangential-E
// condition built in; the adjoint is the literal conjugate transpose.
std::pair<LinearMap, LinearMap> build_curl_pair(const GridSpec& g);

LinearMap build_projector(const GridSpec& g, const RegionMask& region);

// Constant-per-region material description. eps/sigma are 2x2 blocks acting
// on the (Ex, Ey) pair at a vertex; edges without a partner carry only the
// matching diagonal entry.
struct MaterialSpec {
  double eps_xx = 1.0, eps_yy = 1.0;
  cplx eps_xy = 0.0;  // Hermitian coupling
  double mu = 1.0;
  // sigma restricted to D (may be non-selfadjoint; Re part must be >= c)
  double sigma_xx = 1.0, sigma_yy = 1.0;
  cplx sigma_xy = 0.0, sigma_yx = 0.0;
  // Hermitian PSD background on the complement of D
  double sigma_background = 0.0;
};

struct MaterialField {
  LinearMap eps;    // on E
  LinearMap mu;     // on H
  LinearMap sigma;  // on E
  double sigma_lower = 0.0;  // certified c with Re sigma >= c on D
  double eps_lower = 0.0;
  double mu_lower = 0.0;
};

MaterialField sample_materials(const GridSpec& g, const RegionMask& damping,
                               const MaterialSpec& spec);

}  // namespace damplab

#endif
