#pragma once

#include "ballmapper/analysis.hpp"
#include "ballmapper/cover.hpp"
#include "ballmapper/datasets.hpp"
#include "ballmapper/errors.hpp"
#include "ballmapper/graph.hpp"
#include "ballmapper/io.hpp"
#include "ballmapper/metric.hpp"
#include "ballmapper/multiscale.hpp"
#include "ballmapper/nerve.hpp"
#include "ballmapper/parallel.hpp"
#include "ballmapper/random.hpp"
#include "ballmapper/union_find.hpp"
