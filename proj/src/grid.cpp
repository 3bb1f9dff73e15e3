#include "damplab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace damplab {

void GridSpec::validate() const {
  if (nx < 3 || ny < 3) throw ConfigError("grid needs nx, ny >= 3");
  if (!(lx > 0.0) || !(ly > 0.0)) throw ConfigError("grid needs lx, ly > 0");
}

std::pair<double, double> GridSpec::edge_midpoint(std::size_t edge) const {
  if (edge < n_ex()) {
    const std::size_t i = edge % nx, j = edge / nx + 1;
    return {(double(i) + 0.5) * hx(), double(j) * hy()};
  }
  const std::size_t k = edge - n_ex();
  const std::size_t i = k % (nx - 1) + 1, j = k / (nx - 1);
  return {double(i) * hx(), (double(j) + 0.5) * hy()};
}

std::string GridSpec::e_label() const {
  return "E#" + std::to_string(nx) + "x" + std::to_string(ny);
}
std::string GridSpec::h_label() const {
  return "H#" + std::to_string(nx) + "x" + std::to_string(ny);
}
std::string GridSpec::p_label() const {
  return "P#" + std::to_string(nx) + "x" + std::to_string(ny);
}

RegionMask RegionMask::from_rects(const GridSpec& g,
                                  const std::vector<Rect>& rects) {
  RegionMask m;
  m.description = "rects:" + std::to_string(rects.size());
  m.edges.assign(g.n_edges(), false);
  for (std::size_t e = 0; e < g.n_edges(); ++e) {
    const auto [x, y] = g.edge_midpoint(e);
    for (const Rect& r : rects)
      if (r.contains(x, y)) {
        m.edges[e] = true;
        break;
      }
  }
  return m;
}

RegionMask RegionMask::full(const GridSpec& g) {
  RegionMask m;
  m.edges.assign(g.n_edges(), true);
  m.description = "full";
  return m;
}

std::size_t RegionMask::count() const {
  return std::size_t(std::count(edges.begin(), edges.end(), true));
}

RegionMask RegionMask::complement() const {
  RegionMask m;
  m.edges.resize(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) m.edges[i] = !edges[i];
  m.description = "complement(" + description + ")";
  return m;
}

std::vector<bool> RegionMask::interior_vertices(const GridSpec& g) const {
  std::vector<bool> v(g.n_vertices(), false);
  for (std::size_t j = 1; j < g.ny; ++j)
    for (std::size_t i = 1; i < g.nx; ++i)
      v[g.vertex_index(i, j)] = edges[g.ex_index(i - 1, j)] &&
                                edges[g.ex_index(i, j)] &&
                                edges[g.ey_index(i, j - 1)] &&
                                edges[g.ey_index(i, j)];
  return v;
}

std::vector<bool> RegionMask::touched_vertices(const GridSpec& g) const {
  std::vector<bool> v(g.n_vertices(), false);
  for (std::size_t j = 1; j < g.ny; ++j)
    for (std::size_t i = 1; i < g.nx; ++i)
      v[g.vertex_index(i, j)] = edges[g.ex_index(i - 1, j)] ||
                                edges[g.ex_index(i, j)] ||
                                edges[g.ey_index(i, j - 1)] ||
                                edges[g.ey_index(i, j)];
  return v;
}

LinearMap build_grad0(const GridSpec& g) {
  g.validate();
  const double ix = 1.0 / g.hx(), iy = 1.0 / g.hy();
  Matrix m(g.n_edges(), g.n_vertices());
  for (std::size_t j = 1; j < g.ny; ++j)
    for (std::size_t i = 1; i < g.nx; ++i) {
      const std::size_t p = g.vertex_index(i, j);
      m(g.ex_index(i - 1, j), p) = ix;   // edge ending at the vertex
      m(g.ex_index(i, j), p) = -ix;      // edge starting at the vertex
      m(g.ey_index(i, j - 1), p) = iy;
      m(g.ey_index(i, j), p) = -iy;
    }
  return {std::move(m), g.p_label(), g.e_label()};
}

std::pair<LinearMap, LinearMap> build_curl_pair(const GridSpec& g) {
  g.validate();
  const double ix = 1.0 / g.hx(), iy = 1.0 / g.hy();
  Matrix m(g.n_cells(), g.n_edges());
  for (std::size_t j = 0; j < g.ny; ++j)
    for (std::size_t i = 0; i < g.nx; ++i) {
      const std::size_t c = g.cell_index(i, j);
      // (Ey(i+1) - Ey(i))/hx - (Ex(j+1) - Ex(j))/hy with PEC edges absent
      if (i + 1 < g.nx) m(c, g.ey_index(i + 1, j)) = ix;
      if (i >= 1) m(c, g.ey_index(i, j)) = -ix;
      if (j + 1 < g.ny) m(c, g.ex_index(i, j + 1)) = -iy;
      if (j >= 1) m(c, g.ex_index(i, j)) = iy;
    }
  LinearMap curl0(std::move(m), g.e_label(), g.h_label());
  LinearMap curl0_star = adjoint_map(curl0);
  return {std::move(curl0), std::move(curl0_star)};
}

LinearMap build_projector(const GridSpec& g, const RegionMask& region) {
  if (region.edges.size() != g.n_edges())
    throw SpaceMismatch("projector mask size does not match the grid");
  if (region.empty()) throw EmptyRegion("projector over an empty region");
  Matrix m(g.n_edges(), g.n_edges());
  for (std::size_t e = 0; e < g.n_edges(); ++e)
    if (region.edges[e]) m(e, e) = 1.0;
  return {std::move(m), g.e_label(), g.e_label()};
}

namespace {

// smallest eigenvalue of the Hermitian part of a 2x2 block
double min_re_eig_2x2(cplx axx, cplx axy, cplx ayx, cplx ayy) {
  const double hxx = axx.real();
  const double hyy = ayy.real();
  const cplx hxy = 0.5 * (axy + std::conj(ayx));
  const double tr = hxx + hyy;
  const double det = hxx * hyy - std::norm(hxy);
  const double disc = std::sqrt(std::max(0.0, tr * tr / 4.0 - det));
  return tr / 2.0 - disc;
}

}  // namespace

MaterialField sample_materials(const GridSpec& g, const RegionMask& damping,
                               const MaterialSpec& spec) {
  g.validate();
  if (damping.edges.size() != g.n_edges())
    throw SpaceMismatch("damping mask size does not match the grid");

  const std::size_t ne = g.n_edges();
  Matrix eps(ne, ne), sigma(ne, ne);
  Matrix mu(g.n_cells(), g.n_cells());

  // eps: diagonal entries per edge, Hermitian coupling on (Ex, Ey) pairs
  // sharing a vertex
  for (std::size_t e = 0; e < ne; ++e)
    eps(e, e) = g.edge_is_ex(e) ? spec.eps_xx : spec.eps_yy;
  if (spec.eps_xy != cplx(0)) {
    for (std::size_t j = 1; j < g.ny; ++j)
      for (std::size_t i = 1; i < g.nx; ++i) {
        const std::size_t ex = g.ex_index(i, j), ey = g.ey_index(i, j);
        eps(ex, ey) = spec.eps_xy;
        eps(ey, ex) = std::conj(spec.eps_xy);
      }
  }
  {
    const double lo =
        min_re_eig_2x2(spec.eps_xx, spec.eps_xy, std::conj(spec.eps_xy),
                       spec.eps_yy);
    if (lo <= 0.0)
      throw IndefiniteMaterial("eps has eigenvalue " + std::to_string(lo));
  }

  if (spec.mu <= 0.0)
    throw IndefiniteMaterial("mu = " + std::to_string(spec.mu));
  for (std::size_t c = 0; c < g.n_cells(); ++c) mu(c, c) = spec.mu;

  // sigma: block value on D, Hermitian PSD background elsewhere. An
  // all-zero sigma is an undamped (conservative) material set.
  const bool undamped = spec.sigma_xx == 0.0 && spec.sigma_yy == 0.0 &&
                        spec.sigma_xy == cplx(0) && spec.sigma_yx == cplx(0) &&
                        spec.sigma_background == 0.0;
  if (spec.sigma_background < 0.0)
    throw IndefiniteMaterial("sigma background " +
                             std::to_string(spec.sigma_background));
  double sigma_lower = std::numeric_limits<double>::max();
  bool any_damped = false;
  for (std::size_t e = 0; e < ne && !undamped; ++e) {
    if (damping.edges[e]) {
      sigma(e, e) = g.edge_is_ex(e) ? spec.sigma_xx : spec.sigma_yy;
      any_damped = true;
    } else {
      sigma(e, e) = spec.sigma_background;
    }
  }
  if (spec.sigma_xy != cplx(0) || spec.sigma_yx != cplx(0)) {
    for (std::size_t j = 1; j < g.ny; ++j)
      for (std::size_t i = 1; i < g.nx; ++i) {
        const std::size_t ex = g.ex_index(i, j), ey = g.ey_index(i, j);
        if (damping.edges[ex] && damping.edges[ey]) {
          sigma(ex, ey) = spec.sigma_xy;
          sigma(ey, ex) = spec.sigma_yx;
        }
      }
  }
  // node-by-node accretivity on D, positivity off D
  for (std::size_t j = 1; undamped ? false : j < g.ny; ++j)
    for (std::size_t i = 1; i < g.nx; ++i) {
      const std::size_t ex = g.ex_index(i, j), ey = g.ey_index(i, j);
      const double lo = min_re_eig_2x2(sigma(ex, ex), sigma(ex, ey),
                                       sigma(ey, ex), sigma(ey, ey));
      if (damping.edges[ex] && damping.edges[ey]) {
        if (lo <= 0.0)
          throw IndefiniteMaterial("Re sigma at node (" + std::to_string(i) +
                                   "," + std::to_string(j) + ") eigenvalue " +
                                   std::to_string(lo));
        sigma_lower = std::min(sigma_lower, lo);
      } else if (lo < 0.0) {
        throw IndefiniteMaterial("sigma background at node (" +
                                 std::to_string(i) + "," + std::to_string(j) +
                                 ") eigenvalue " + std::to_string(lo));
      }
    }
  for (std::size_t e = 0; e < ne && !undamped; ++e) {
    const double v = sigma(e, e).real();
    if (damping.edges[e]) {
      if (v <= 0.0)
        throw IndefiniteMaterial("Re sigma on edge " + std::to_string(e) +
                                 " is " + std::to_string(v));
      sigma_lower = std::min(sigma_lower, v);
    }
  }
  if (!any_damped) sigma_lower = 0.0;

  MaterialField out{
      LinearMap(std::move(eps), g.e_label(), g.e_label()),
      LinearMap(std::move(mu), g.h_label(), g.h_label()),
      LinearMap(std::move(sigma), g.e_label(), g.e_label()),
      any_damped ? sigma_lower : 0.0,
      min_re_eig_2x2(spec.eps_xx, spec.eps_xy, std::conj(spec.eps_xy),
                     spec.eps_yy),
      spec.mu};
  return out;
}

}  // namespace damplab
