#pragma once

#include "latvib/acoustic.hpp"
#include "latvib/bloch.hpp"
#include "latvib/dos.hpp"
#include "latvib/lattice.hpp"
#include "latvib/linalg.hpp"
#include "latvib/quadrature.hpp"
#include "latvib/report.hpp"
#include "latvib/spec_io.hpp"
#include "latvib/thermo.hpp"
