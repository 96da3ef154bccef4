#pragma once

#include "qcell/calibration.hpp"
#include "qcell/gate_bench.hpp"
#include "qcell/report.hpp"
