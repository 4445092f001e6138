#pragma once

// Discrete phase-space toolkit for spin systems on an odd N x N lattice:
// Schwinger operator basis, Wigner and Husimi maps, Liouvillian dynamics,
// and entropy diagnostics, plus file formats for grids and heatmaps.

#include "spinphase/entropy.hpp"
#include "spinphase/fe8.hpp"
#include "spinphase/io.hpp"
#include "spinphase/kernels.hpp"
#include "spinphase/lattice.hpp"
#include "spinphase/liouville.hpp"
#include "spinphase/mapping.hpp"
#include "spinphase/schwinger.hpp"
#include "spinphase/spectrum.hpp"
#include "spinphase/spin.hpp"
#include "spinphase/theta.hpp"
#include "spinphase/timeseries.hpp"
#include "spinphase/types.hpp"
