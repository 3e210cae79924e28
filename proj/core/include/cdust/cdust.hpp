#pragma once

#include "cdust/boxdim.hpp"
#include "cdust/cantor.hpp"
#include "cdust/composite.hpp"
#include "cdust/errors.hpp"
#include "cdust/geometry.hpp"
#include "cdust/intersect.hpp"
#include "cdust/io.hpp"
#include "cdust/isometry.hpp"
#include "cdust/john.hpp"
#include "cdust/parallel.hpp"
#include "cdust/rng.hpp"
