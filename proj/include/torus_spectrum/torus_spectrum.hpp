#ifndef TORUS_SPECTRUM_TORUS_SPECTRUM_HPP
#define TORUS_SPECTRUM_TORUS_SPECTRUM_HPP

#include "torus_spectrum/constants.hpp"
#include "torus_spectrum/errors.hpp"
#include "torus_spectrum/function.hpp"
#include "torus_spectrum/geometry.hpp"
#include "torus_spectrum/grid_oracle.hpp"
#include "torus_spectrum/json_io.hpp"
#include "torus_spectrum/log_real.hpp"
#include "torus_spectrum/morrey.hpp"
#include "torus_spectrum/parallel.hpp"
#include "torus_spectrum/random.hpp"
#include "torus_spectrum/report.hpp"
#include "torus_spectrum/sampling.hpp"
#include "torus_spectrum/search.hpp"
#include "torus_spectrum/statistics.hpp"

#endif  // TORUS_SPECTRUM_TORUS_SPECTRUM_HPP
