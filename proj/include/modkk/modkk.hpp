#pragma once

#include "matrix.hpp"
#include "rng.hpp"
#include "matfun.hpp"
#include "quadrature.hpp"
#include "decay.hpp"
#include "hilbert_module.hpp"
#include "modular_cycle.hpp"
#include "modular_lift.hpp"
#include "transforms.hpp"
#include "kk_product.hpp"
#include "fractal_string.hpp"
#include "io.hpp"
#include "parallel.hpp"
#include "cli.hpp"
