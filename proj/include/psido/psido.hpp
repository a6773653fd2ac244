#pragma once

#include "psido/calculus.hpp"
#include "psido/catalog.hpp"
#include "psido/cli.hpp"
#include "psido/config.hpp"
#include "psido/grid.hpp"
#include "psido/group.hpp"
#include "psido/io.hpp"
#include "psido/multipliers.hpp"
#include "psido/parallel.hpp"
#include "psido/quantize.hpp"
#include "psido/sobolev.hpp"
#include "psido/spectral.hpp"
#include "psido/symbol.hpp"
#include "psido/transform.hpp"
