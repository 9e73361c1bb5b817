#pragma once

// Umbrella header.

#include "edgerm/characterization.hpp"
#include "edgerm/code.hpp"
#include "edgerm/cwl.hpp"
#include "edgerm/edge_removal.hpp"
#include "edgerm/entropy.hpp"
#include "edgerm/error.hpp"
#include "edgerm/group.hpp"
#include "edgerm/group_codes.hpp"
#include "edgerm/io.hpp"
#include "edgerm/library.hpp"
#include "edgerm/mixed_radix.hpp"
#include "edgerm/network.hpp"
#include "edgerm/parallel.hpp"
#include "edgerm/rational.hpp"
#include "edgerm/report.hpp"
