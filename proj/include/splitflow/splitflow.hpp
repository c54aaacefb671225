#pragma once

#include "splitflow/bench/scaling.hpp"
#include "splitflow/chemistry/mechanism.hpp"
#include "splitflow/chemistry/mechanism_io.hpp"
#include "splitflow/core/dense.hpp"
#include "splitflow/core/error.hpp"
#include "splitflow/core/parallel.hpp"
#include "splitflow/core/types.hpp"
#include "splitflow/driver/config.hpp"
#include "splitflow/driver/history.hpp"
#include "splitflow/driver/run.hpp"
#include "splitflow/driver/solver.hpp"
#include "splitflow/grid/boundary.hpp"
#include "splitflow/grid/grid.hpp"
#include "splitflow/grid/plot3d.hpp"
#include "splitflow/implicit/correction.hpp"
#include "splitflow/implicit/jacobian.hpp"
#include "splitflow/implicit/lusgs.hpp"
#include "splitflow/implicit/operator.hpp"
#include "splitflow/implicit/time_step.hpp"
#include "splitflow/io/atomic_file.hpp"
#include "splitflow/io/svg.hpp"
#include "splitflow/io/toml_lite.hpp"
#include "splitflow/io/vtk.hpp"
#include "splitflow/mixture/mixture.hpp"
#include "splitflow/mixture/mixture_io.hpp"
#include "splitflow/spatial/field.hpp"
#include "splitflow/spatial/flux.hpp"
#include "splitflow/spatial/reconstruction.hpp"
#include "splitflow/spatial/residual.hpp"
#include "splitflow/spatial/viscous.hpp"
