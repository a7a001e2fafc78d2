#pragma once

// Umbrella header.

#include "polyzero/canonical.hpp"
#include "polyzero/errors.hpp"
#include "polyzero/experiments.hpp"
#include "polyzero/geometry.hpp"
#include "polyzero/graph.hpp"
#include "polyzero/hull.hpp"
#include "polyzero/ising.hpp"
#include "polyzero/mesh.hpp"
#include "polyzero/mesh_io.hpp"
#include "polyzero/meshgen.hpp"
#include "polyzero/rng.hpp"
#include "polyzero/vec3.hpp"
