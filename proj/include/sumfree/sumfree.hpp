#pragma once

#include "sumfree/core.hpp"
#include "sumfree/fft.hpp"
#include "sumfree/io.hpp"
#include "sumfree/solver.hpp"
#include "sumfree/spectral.hpp"
#include "sumfree/structure.hpp"
#include "sumfree/weights.hpp"
#include "sumfree/equidist.hpp"
#include "sumfree/reference.hpp"
#include "sumfree/check.hpp"
