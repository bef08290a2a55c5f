#pragma once

#include "skewfill/errors.hpp"
#include "skewfill/shape.hpp"
#include "skewfill/filling.hpp"
#include "skewfill/skew_structure.hpp"
#include "skewfill/enumeration.hpp"
#include "skewfill/chain_bijection.hpp"
#include "skewfill/verify.hpp"
