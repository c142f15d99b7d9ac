#pragma once

#include "basis.hpp"
#include "closed_forms.hpp"
#include "error.hpp"
#include "expansions.hpp"
#include "family.hpp"
#include "io.hpp"
#include "oracle.hpp"
#include "params.hpp"
#include "polynomial.hpp"
#include "recurrence_engine.hpp"
#include "residual.hpp"
#include "roots.hpp"
#include "scalar.hpp"
#include "special_functions.hpp"
#include "termination.hpp"
