#pragma once

#include "burgers/engine.hpp"
#include "burgers/errors.hpp"
#include "burgers/ilt.hpp"
#include "burgers/operational.hpp"
#include "burgers/problem.hpp"
#include "burgers/quadrature.hpp"
#include "burgers/reference.hpp"
