#pragma once

// Umbrella header for the library part (no CLI).

#include "maxplus/csr.hpp"
#include "maxplus/error.hpp"
#include "maxplus/expansion.hpp"
#include "maxplus/graph.hpp"
#include "maxplus/kleene.hpp"
#include "maxplus/matrix.hpp"
#include "maxplus/orbit.hpp"
#include "maxplus/scalar.hpp"
