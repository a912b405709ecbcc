#pragma once

#include "oinl/analytics.hpp"
#include "oinl/config.hpp"
#include "oinl/constants.hpp"
#include "oinl/dipole_kernel.hpp"
#include "oinl/errors.hpp"
#include "oinl/fft.hpp"
#include "oinl/field_io.hpp"
#include "oinl/gpe_solver.hpp"
#include "oinl/grid.hpp"
#include "oinl/observables.hpp"
#include "oinl/physical_params.hpp"
#include "oinl/protocol.hpp"
#include "oinl/quadrature.hpp"
#include "oinl/scan.hpp"
