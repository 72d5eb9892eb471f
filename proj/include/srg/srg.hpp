#pragma once

// Everything except the HTTP server, which pulls in cpp-httplib.

#include "srg/criterion_text.hpp"
#include "srg/error.hpp"
#include "srg/gradient.hpp"
#include "srg/grid.hpp"
#include "srg/homogeneity.hpp"
#include "srg/io.hpp"
#include "srg/label_map.hpp"
#include "srg/overlay.hpp"
#include "srg/phantom.hpp"
#include "srg/pipeline.hpp"
#include "srg/region_grow.hpp"
#include "srg/report_io.hpp"
#include "srg/rle.hpp"
#include "srg/seg_properties.hpp"
