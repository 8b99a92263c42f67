#pragma once

#include "imexstab/csv.hpp"
#include "imexstab/linear_operator.hpp"
#include "imexstab/system.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <optional>

namespace imexstab {

/// Uniform grid on [0,1]^2 with m interior points per direction, h = 1/(m+1).
/// Interior node (i,j), 0 <= i,j < m, sits at ((i+1)h, (j+1)h) and has
/// lexicographic index j*m + i.
class Grid2D {
 public:
  explicit Grid2D(int m);

  int m() const noexcept { return m_; }
  double h() const noexcept { return 1.0 / (m_ + 1); }
  Index size() const noexcept { return static_cast<Index>(m_) * m_; }
  Index index(int i, int j) const noexcept { return static_cast<Index>(j) * m_ + i; }
  double x(int i) const noexcept { return (i + 1) * h(); }
  double y(int j) const noexcept { return (j + 1) * h(); }

 private:
  int m_;
};

enum class AntidiffusionMode {
  /// C = eps0 S^q (-Lap) S^q
  kAveraging,
  /// C = eps0 P_H (-Lap) P_H
  kProjection,
};

struct PdeParams {
  double theta = 17.0 * std::numbers::pi / 180.0;
  double epsilon = 1e-4;
  double epsilon0 = 1e-4;
  AntidiffusionMode mode = AntidiffusionMode::kAveraging;
  int q = 2;

  Eigen::Vector2d b_field() const { return {std::cos(theta), std::sin(theta)}; }
  /// Throws ConfigError on epsilon <= 0, epsilon0 < 0, or q < 1 in averaging mode.
  void validate() const;
};

/// Boundary data phi(x, y), evaluated only at boundary grid points.
using BoundaryData = std::function<double(double, double)>;

/// 1 strictly north of the line through (0.5, 0.5) at angle theta, else 0.
/// "North" means (x - 0.5, y - 0.5) . (-sin theta, cos theta) > 0.
BoundaryData half_plane_boundary(double theta);

/// The 4m non-corner boundary nodes (corners never enter a 5-point stencil).
std::vector<Eigen::Vector2d> boundary_points(const Grid2D& grid);

/// b . grad_h by central differences, out-of-domain neighbours dropped.
/// Exactly skew-symmetric.
SparseMatrix assemble_convection(const Grid2D& grid, const Eigen::Vector2d& b);

/// coef * (-Lap_h), the 5-point Dirichlet Laplacian. Exactly symmetric.
SparseMatrix assemble_diffusion(const Grid2D& grid, double coef);

/// (S u)_ij = (4 u_ij + sum of the 4 neighbours)/8, missing neighbours as 0.
SparseMatrix averaging_operator(const Grid2D& grid);

/// Bilinear prolongation from the H = 2h coarse interior nodes to the fine
/// interior nodes. Throws UnsupportedGrid unless m+1 is even and m >= 3.
SparseMatrix coarse_prolongation(const Grid2D& grid);

/// Orthogonal projector onto range(Pi): Pi (Pi^T Pi)^{-1} Pi^T, applied as
/// restriction, coarse Gram solve, prolongation.
LinearOperator projection_operator(const Grid2D& grid);

/// C in the mode selected by params, as a composite of sparse factors.
LinearOperator assemble_antidiffusion(const Grid2D& grid, const PdeParams& params);

/// Right-hand-side vector carrying the Dirichlet data of the diffusion,
/// convection and (averaging mode) anti-diffusion stencils.
Vector lift_boundary(const Grid2D& grid, const PdeParams& params);
Vector lift_boundary(const Grid2D& grid, const PdeParams& params, const BoundaryData& phi);

struct DiscreteOperators {
  SparseMatrix a;          ///< (eps + eps0)(-Lap)
  SparseMatrix b;          ///< central-difference advection
  LinearOperator c;        ///< anti-diffusion
  Vector g_lift;
  SparseMatrix s;          ///< averaging
  SparseMatrix laplacian;  ///< -Lap_h
  std::optional<LinearOperator> p_h;
};

struct DiscreteSystem {
  OdeSystem system;
  DiscreteOperators ops;
  /// Filled when assembled with validation. A failed check is reported here,
  /// not thrown.
  std::optional<StructureReport> report;
};

/// u0 = 0, f(t) = g_lift, A, constant B, C as above.
DiscreteSystem assemble_system(const Grid2D& grid, const PdeParams& params, bool validate = true);

/// CSV `i,j,x,y,u`, one row per interior node in lexicographic order.
void write_grid_csv(const std::filesystem::path& path, const Grid2D& grid, const Vector& u,
                    const ParamList& params);

}  // namespace imexstab
