#pragma once

#include "curvtv/curvature.hpp"
#include "curvtv/image.hpp"
#include "curvtv/io.hpp"
#include "curvtv/metrics.hpp"
#include "curvtv/noise.hpp"
#include "curvtv/operators.hpp"
#include "curvtv/solver.hpp"
#include "curvtv/spectral.hpp"
#include "curvtv/synthetic.hpp"
