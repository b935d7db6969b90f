#pragma once

#include "presburger/exact.hpp"
#include "presburger/formula.hpp"
#include "presburger/genfun.hpp"
#include "presburger/polyhedron.hpp"
#include "presburger/qelim.hpp"
#include "presburger/quasipoly.hpp"
#include "presburger/semilinear.hpp"
#include "presburger/serialize.hpp"
