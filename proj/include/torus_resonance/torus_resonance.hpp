#pragma once

#include "torus_resonance/conditions.hpp"
#include "torus_resonance/errors.hpp"
#include "torus_resonance/experiments/expectation.hpp"
#include "torus_resonance/experiments/philox.hpp"
#include "torus_resonance/experiments/sampling.hpp"
#include "torus_resonance/fixed_fraction.hpp"
#include "torus_resonance/parallel.hpp"
#include "torus_resonance/params.hpp"
#include "torus_resonance/parse.hpp"
#include "torus_resonance/resonance.hpp"
#include "torus_resonance/spectral/field.hpp"
#include "torus_resonance/spectral/field_io.hpp"
#include "torus_resonance/spectral/geometry.hpp"
#include "torus_resonance/spectral/grid.hpp"
#include "torus_resonance/spectral/operators.hpp"
#include "torus_resonance/version.hpp"
