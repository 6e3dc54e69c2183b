#pragma once

#include "harmap/acceptance.hpp"
#include "harmap/alexander.hpp"
#include "harmap/core.hpp"
#include "harmap/errors.hpp"
#include "harmap/families.hpp"
#include "harmap/geometry.hpp"
#include "harmap/io.hpp"
#include "harmap/means.hpp"
#include "harmap/parallel.hpp"
#include "harmap/render.hpp"
#include "harmap/sampling.hpp"
#include "harmap/univalence.hpp"
#include "harmap/winding.hpp"
