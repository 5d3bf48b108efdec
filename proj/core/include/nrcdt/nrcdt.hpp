#pragma once

#include "nrcdt/cdt.hpp"
#include "nrcdt/classify.hpp"
#include "nrcdt/datasets.hpp"
#include "nrcdt/error.hpp"
#include "nrcdt/io.hpp"
#include "nrcdt/measures.hpp"
#include "nrcdt/parallel.hpp"
#include "nrcdt/radon.hpp"
#include "nrcdt/raster.hpp"
