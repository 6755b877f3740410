#pragma once

#include "muntz/poly.hpp"
#include "muntz/norms.hpp"
#include "muntz/operators.hpp"
#include "muntz/parallel.hpp"
#include "muntz/essential.hpp"
#include "muntz/bernstein.hpp"
#include "muntz/serialize.hpp"
#include "muntz/experiment.hpp"
