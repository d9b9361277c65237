#pragma once

#include "chartsim.hpp"
#include "cvchain.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "ncycle.hpp"
#include "nsboxes.hpp"
#include "random.hpp"
#include "rational.hpp"
#include "reduction.hpp"
#include "serialize.hpp"
