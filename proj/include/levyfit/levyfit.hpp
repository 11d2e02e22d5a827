#pragma once

// Umbrella header: estimation of (theta, alpha, epsilon) for SDEs driven by
// symmetric alpha-stable noise, by matching a kernel density estimate from
// observations against solutions of the nonlocal Fokker-Planck equation.

#include "levyfit/distance.hpp"
#include "levyfit/drift.hpp"
#include "levyfit/errors.hpp"
#include "levyfit/estimator.hpp"
#include "levyfit/fpsolver.hpp"
#include "levyfit/grid.hpp"
#include "levyfit/kde.hpp"
#include "levyfit/params.hpp"
#include "levyfit/stable.hpp"
#include "levyfit/trajectory.hpp"
#include "levyfit/trajectory_io.hpp"
#include "levyfit/version.hpp"
