#include "imexstab/discretize2d.hpp"

#include "imexstab/errors.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>

namespace imexstab {

Grid2D::Grid2D(int m) : m_(m) {
  if (m < 1) {
    throw ConfigError("grid needs at least one interior point per direction, got m=" +
                      std::to_string(m));
  }
}

void PdeParams::validate() const {
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    throw ConfigError("epsilon must be positive");
  }
  if (!(epsilon0 >= 0) || !std::isfinite(epsilon0)) {
    throw ConfigError("epsilon0 must be nonnegative");
  }
  if (mode == AntidiffusionMode::kAveraging && q < 1) {
    throw ConfigError("averaging repetitions q must be at least 1");
  }
  if (!std::isfinite(theta)) {
    throw ConfigError("theta must be finite");
  }
}

BoundaryData half_plane_boundary(double theta) {
  const double nx = -std::sin(theta);
  const double ny = std::cos(theta);
  return [nx, ny](double x, double y) { return (x - 0.5) * nx + (y - 0.5) * ny > 0.0 ? 1.0 : 0.0; };
}

std::vector<Eigen::Vector2d> boundary_points(const Grid2D& grid) {
  std::vector<Eigen::Vector2d> pts;
  pts.reserve(static_cast<std::size_t>(4 * grid.m()));
  for (int s = 0; s < grid.m(); ++s) {
    const double c = (s + 1) * grid.h();
    pts.emplace_back(c, 0.0);
    pts.emplace_back(c, 1.0);
    pts.emplace_back(0.0, c);
    pts.emplace_back(1.0, c);
  }
  return pts;
}

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;

SparseMatrix from_triplets(Index rows, Index cols, const Triplets& t) {
  SparseMatrix m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

constexpr int kDi[4] = {1, -1, 0, 0};
constexpr int kDj[4] = {0, 0, 1, -1};

bool inside(const Grid2D& g, int i, int j) { return i >= 0 && j >= 0 && i < g.m() && j < g.m(); }

// Coordinates of a (possibly boundary) node in the extended index range -1..m.
double coord(const Grid2D& g, int i) { return (i + 1) * g.h(); }

}  // namespace

SparseMatrix assemble_convection(const Grid2D& grid, const Eigen::Vector2d& b) {
  const int m = grid.m();
  const double wx = b.x() / (2.0 * grid.h());
  const double wy = b.y() / (2.0 * grid.h());
  Triplets t;
  t.reserve(static_cast<std::size_t>(4 * grid.size()));
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const Index r = grid.index(i, j);
      if (i + 1 < m) t.emplace_back(r, grid.index(i + 1, j), wx);
      if (i - 1 >= 0) t.emplace_back(r, grid.index(i - 1, j), -wx);
      if (j + 1 < m) t.emplace_back(r, grid.index(i, j + 1), wy);
      if (j - 1 >= 0) t.emplace_back(r, grid.index(i, j - 1), -wy);
    }
  }
  SparseMatrix bm = from_triplets(grid.size(), grid.size(), t);
  if (max_skew_defect(bm) != 0.0) {
    throw StructuralError("assemble_convection: stencil is not exactly skew-symmetric");
  }
  return bm;
}

SparseMatrix assemble_diffusion(const Grid2D& grid, double coef) {
  if (!(coef > 0)) {
    throw ConfigError("assemble_diffusion: coefficient must be positive");
  }
  const int m = grid.m();
  const double h2 = grid.h() * grid.h();
  const double diag = coef * 4.0 / h2;
  const double off = -coef / h2;
  Triplets t;
  t.reserve(static_cast<std::size_t>(5 * grid.size()));
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const Index r = grid.index(i, j);
      t.emplace_back(r, r, diag);
      for (int d = 0; d < 4; ++d) {
        const int ii = i + kDi[d], jj = j + kDj[d];
        if (inside(grid, ii, jj)) t.emplace_back(r, grid.index(ii, jj), off);
      }
    }
  }
  SparseMatrix a = from_triplets(grid.size(), grid.size(), t);
  if (max_asymmetry(a) != 0.0) {
    throw StructuralError("assemble_diffusion: stencil is not exactly symmetric");
  }
  return a;
}

SparseMatrix averaging_operator(const Grid2D& grid) {
  const int m = grid.m();
  Triplets t;
  t.reserve(static_cast<std::size_t>(5 * grid.size()));
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const Index r = grid.index(i, j);
      t.emplace_back(r, r, 0.5);
      for (int d = 0; d < 4; ++d) {
        const int ii = i + kDi[d], jj = j + kDj[d];
        if (inside(grid, ii, jj)) t.emplace_back(r, grid.index(ii, jj), 0.125);
      }
    }
  }
  return from_triplets(grid.size(), grid.size(), t);
}

SparseMatrix coarse_prolongation(const Grid2D& grid) {
  const int m = grid.m();
  if ((m + 1) % 2 != 0) {
    throw UnsupportedGrid("projection needs an even number of cells (m+1), got m=" +
                          std::to_string(m));
  }
  const int mc = (m + 1) / 2 - 1;
  if (mc < 1) {
    throw UnsupportedGrid("projection needs at least one coarse interior node (m >= 3)");
  }
  // 1D weights: coarse node I sits on fine node 2I+1; its fine neighbours get 1/2.
  auto weights = [](int coarse) {
    const int f = 2 * coarse + 1;
    return std::array<std::pair<int, double>, 3>{{{f - 1, 0.5}, {f, 1.0}, {f + 1, 0.5}}};
  };
  Triplets t;
  t.reserve(static_cast<std::size_t>(9 * mc * mc));
  for (int jc = 0; jc < mc; ++jc) {
    for (int ic = 0; ic < mc; ++ic) {
      const Index col = static_cast<Index>(jc) * mc + ic;
      for (auto [fj, wj] : weights(jc)) {
        for (auto [fi, wi] : weights(ic)) {
          t.emplace_back(grid.index(fi, fj), col, wi * wj);
        }
      }
    }
  }
  return from_triplets(grid.size(), static_cast<Index>(mc) * mc, t);
}

LinearOperator projection_operator(const Grid2D& grid) {
  const SparseMatrix pi = coarse_prolongation(grid);
  const SparseMatrix pit = pi.transpose();
  SparseMatrix gram = (pit * pi).pruned();
  // Pi^T Pi is symmetric in exact arithmetic; make the stored copy so too.
  gram = 0.5 * (gram + SparseMatrix(gram.transpose()));
  return LinearOperator::composite({LinearOperator::sparse(pit), LinearOperator::spd_inverse(gram),
                                    LinearOperator::sparse(pi)});
}

LinearOperator assemble_antidiffusion(const Grid2D& grid, const PdeParams& params) {
  params.validate();
  if (params.epsilon0 == 0.0) {
    return LinearOperator::zero(grid.size());
  }
  const LinearOperator lap = LinearOperator::sparse(assemble_diffusion(grid, 1.0));
  std::vector<LinearOperator> factors;
  if (params.mode == AntidiffusionMode::kAveraging) {
    const LinearOperator s = LinearOperator::sparse(averaging_operator(grid));
    factors.assign(static_cast<std::size_t>(params.q), s);
    factors.push_back(lap);
    factors.insert(factors.end(), static_cast<std::size_t>(params.q), s);
  } else {
    const LinearOperator p = projection_operator(grid);
    for (const auto& f : p.factors()) factors.push_back(f);
    factors.push_back(lap);
    for (const auto& f : p.factors()) factors.push_back(f);
  }
  return LinearOperator::composite(std::move(factors), params.epsilon0);
}

Vector lift_boundary(const Grid2D& grid, const PdeParams& params) {
  return lift_boundary(grid, params, half_plane_boundary(params.theta));
}

Vector lift_boundary(const Grid2D& grid, const PdeParams& params, const BoundaryData& phi) {
  params.validate();
  const int m = grid.m();
  const double h = grid.h();
  const double h2 = h * h;
  const Eigen::Vector2d b = params.b_field();
  const double diff = params.epsilon + params.epsilon0;

  // Boundary value seen from interior node (i,j) in direction d; 0 if that
  // neighbour is interior.
  auto bdry = [&](int i, int j, int d) {
    const int ii = i + kDi[d], jj = j + kDj[d];
    return inside(grid, ii, jj) ? 0.0 : phi(coord(grid, ii), coord(grid, jj));
  };

  Vector g = Vector::Zero(grid.size());
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i < m; ++i) {
      const Index r = grid.index(i, j);
      double sum = 0.0;
      for (int d = 0; d < 4; ++d) sum += bdry(i, j, d);
      // A u + (boundary part) = f  ->  move +diff/h^2 * phi to the right.
      g(r) += diff / h2 * sum;
      // B u: +b_x/(2h) u_{i+1} - b_x/(2h) u_{i-1} + same in y.
      g(r) -= b.x() / (2 * h) * (bdry(i, j, 0) - bdry(i, j, 1));
      g(r) -= b.y() / (2 * h) * (bdry(i, j, 2) - bdry(i, j, 3));
    }
  }

  if (params.mode == AntidiffusionMode::kAveraging && params.epsilon0 > 0.0) {
    // Affine part of eps0 * S^q (-Lap) S^q on the extended field with zero
    // interior: inner averages keep the Dirichlet data on the boundary, the
    // Laplacian reads it, the outer averages see a homogeneous boundary.
    const SparseMatrix s = averaging_operator(grid);
    const SparseMatrix lap = assemble_diffusion(grid, 1.0);
    Vector avg_bdry = Vector::Zero(grid.size());
    Vector lap_bdry = Vector::Zero(grid.size());
    for (int j = 0; j < m; ++j) {
      for (int i = 0; i < m; ++i) {
        double sum = 0.0;
        for (int d = 0; d < 4; ++d) sum += bdry(i, j, d);
        avg_bdry(grid.index(i, j)) = sum / 8.0;
        lap_bdry(grid.index(i, j)) = sum / h2;
      }
    }
    Vector v = Vector::Zero(grid.size());
    for (int r = 0; r < params.q; ++r) v = s * v + avg_bdry;
    Vector w = lap * v - lap_bdry;
    for (int r = 0; r < params.q; ++r) w = s * w;
    // -C_affine(u) = -C u - eps0 w  ->  +eps0 w on the right.
    g += params.epsilon0 * w;
  }
  return g;
}

DiscreteSystem assemble_system(const Grid2D& grid, const PdeParams& params, bool validate) {
  params.validate();
  DiscreteOperators ops;
  ops.laplacian = assemble_diffusion(grid, 1.0);
  ops.a = assemble_diffusion(grid, params.epsilon + params.epsilon0);
  ops.b = assemble_convection(grid, params.b_field());
  ops.s = averaging_operator(grid);
  if (params.mode == AntidiffusionMode::kProjection) {
    ops.p_h = projection_operator(grid);
  }
  ops.c = assemble_antidiffusion(grid, params);
  ops.g_lift = lift_boundary(grid, params);

  OdeSystem system(LinearOperator::sparse(ops.a), SkewField::constant(LinearOperator::sparse(ops.b)),
                   ops.c, constant_forcing(ops.g_lift), Vector::Zero(grid.size()),
                   /*forcing_is_constant=*/true);
  DiscreteSystem out{std::move(system), std::move(ops), std::nullopt};
  if (validate) {
    out.report = validate_structure(out.system, kDefaultStructureTol,
                                    std::vector<Vector>{out.system.initial_state()});
  }
  return out;
}

void write_grid_csv(const std::filesystem::path& path, const Grid2D& grid, const Vector& u,
                    const ParamList& params) {
  if (u.size() != grid.size()) {
    throw StructuralError("write_grid_csv: state size does not match grid");
  }
  CsvWriter w(path, params, {"i", "j", "x", "y", "u"});
  for (int j = 0; j < grid.m(); ++j) {
    for (int i = 0; i < grid.m(); ++i) {
      w.field(i).field(j).field(grid.x(i)).field(grid.y(j)).field(u(grid.index(i, j)));
      w.end_row();
    }
  }
}

}  // namespace imexstab
