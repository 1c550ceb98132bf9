#pragma once

#include "rixp/csv.hpp"
#include "rixp/error.hpp"
#include "rixp/geo.hpp"
#include "rixp/geocoder.hpp"
#include "rixp/heatmap.hpp"
#include "rixp/hub.hpp"
#include "rixp/latency.hpp"
#include "rixp/locations.hpp"
#include "rixp/matrix.hpp"
#include "rixp/ranking.hpp"
#include "rixp/report.hpp"
