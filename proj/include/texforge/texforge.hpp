#pragma once

#include "texforge/bench.hpp"
#include "texforge/csv.hpp"
#include "texforge/features.hpp"
#include "texforge/glcm.hpp"
#include "texforge/image.hpp"
#include "texforge/parallel.hpp"
#include "texforge/pgm.hpp"
#include "texforge/pipeline.hpp"
