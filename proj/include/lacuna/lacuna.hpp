#pragma once

#include "lacuna/core_arith.hpp"
#include "lacuna/error.hpp"
#include "lacuna/moments.hpp"
#include "lacuna/multiplicity.hpp"
#include "lacuna/parallel.hpp"
#include "lacuna/partitions.hpp"
#include "lacuna/recurrence.hpp"
#include "lacuna/sequences.hpp"
