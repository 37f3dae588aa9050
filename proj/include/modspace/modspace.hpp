#ifndef MODSPACE_MODSPACE_HPP
#define MODSPACE_MODSPACE_HPP

// Everything in one include.
#include "modspace/error.hpp"
#include "modspace/parallel.hpp"
#include "modspace/rng.hpp"
#include "modspace/lattice.hpp"
#include "modspace/windows.hpp"
#include "modspace/fft.hpp"
#include "modspace/grid.hpp"
#include "modspace/stats.hpp"
#include "modspace/trajectory.hpp"
#include "modspace/decomp.hpp"
#include "modspace/norms.hpp"
#include "modspace/families.hpp"
#include "modspace/symbols.hpp"
#include "modspace/evolve.hpp"
#include "modspace/verify.hpp"
#include "modspace/config.hpp"
#include "modspace/io.hpp"
#include "modspace/trace.hpp"
#include "modspace/driver.hpp"

#endif  // MODSPACE_MODSPACE_HPP
