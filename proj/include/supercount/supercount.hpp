#pragma once

#include "numtheory.hpp"
#include "intpoly.hpp"
#include "curve.hpp"
#include "matrix.hpp"
#include "recurrence.hpp"
#include "rforest.hpp"
#include "cartier.hpp"
#include "driver.hpp"
