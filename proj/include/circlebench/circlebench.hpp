#pragma once

// Umbrella header.
#include "circlebench/analysis.hpp"
#include "circlebench/circle_map.hpp"
#include "circlebench/conjugacy.hpp"
#include "circlebench/defaults.hpp"
#include "circlebench/errors.hpp"
#include "circlebench/homeo.hpp"
#include "circlebench/partition.hpp"
#include "circlebench/report.hpp"
#include "circlebench/repro.hpp"
#include "circlebench/root_solve.hpp"
#include "circlebench/spec_json.hpp"
#include "circlebench/word.hpp"
