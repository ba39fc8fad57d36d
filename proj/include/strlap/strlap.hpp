#pragma once

#include "strlap/error.hpp"
#include "strlap/string_space.hpp"
#include "strlap/spheres.hpp"
#include "strlap/laplace.hpp"
#include "strlap/objective.hpp"
#include "strlap/estimators.hpp"
#include "strlap/median_lev.hpp"
#include "strlap/mixture.hpp"
#include "strlap/oracle.hpp"
#include "strlap/io.hpp"
