#pragma once

#include "forge/mesh/mesh.hpp"

namespace forge {

enum class BooleanOp { INTERSECT, SUBTRACT, UNION };

struct CsgOptions {
  // Distance under which a vertex counts as lying on a splitting plane; also
  // the weld tolerance for the exact path.
  double plane_epsilon = 1e-5;
  bool allow_voxel_fallback = true;
  // Skips the exact path entirely (used to exercise the fallback).
  bool force_voxel = false;
  double voxel_resolution = 0.5;
  // Upper bound on voxel cells; the resolution is coarsened to respect it.
  long long max_voxel_cells = 40'000'000;
};

struct BooleanResult {
  Mesh mesh;
  bool used_voxel_fallback = false;
};

// Regularized boolean of two watertight meshes. An empty result is returned as
// a mesh without triangles. Throws NonWatertightInput or BooleanFailure.
Mesh boolean_op(const Mesh& a, const Mesh& b, BooleanOp op, const CsgOptions& options = {});
BooleanResult boolean_op_detailed(const Mesh& a, const Mesh& b, BooleanOp op, const CsgOptions& options = {});

// Voxel boolean on its own: occupancy grids at `resolution`, combined
// cell-wise, surface rebuilt from the exposed cell faces.
Mesh voxel_boolean(const Mesh& a, const Mesh& b, BooleanOp op, double resolution, long long max_cells);

// Stitches T-junctions left by polygon splitting: edges without a twin are
// split at vertices lying on them. Returns the repaired mesh.
Mesh repair_t_junctions(const Mesh& m, double tolerance);

}  // namespace forge
