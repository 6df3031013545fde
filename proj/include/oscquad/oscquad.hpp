#pragma once

#include "oscquad/bernstein.hpp"
#include "oscquad/gauss_legendre.hpp"
#include "oscquad/grid.hpp"
#include "oscquad/matrix.hpp"
#include "oscquad/product_rule.hpp"
#include "oscquad/reference.hpp"
#include "oscquad/summation.hpp"
