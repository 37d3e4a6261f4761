// Umbrella header.
#pragma once

#include "pauli_cloner/errors.hpp"
#include "pauli_cloner/simcore.hpp"
#include "pauli_cloner/mub.hpp"
#include "pauli_cloner/noise.hpp"
#include "pauli_cloner/cloner.hpp"
#include "pauli_cloner/analytic.hpp"
#include "pauli_cloner/optimize.hpp"
#include "pauli_cloner/validate.hpp"
