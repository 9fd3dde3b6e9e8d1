#pragma once

#include "error.hpp"
#include "fxp.hpp"
#include "graph.hpp"
#include "lut.hpp"
#include "lut_spec.hpp"
#include "sim.hpp"
#include "vhdl.hpp"
#include "examples.hpp"
#include "report_json.hpp"
