#ifndef WLIP_WLIP_HPP_
#define WLIP_WLIP_HPP_

#include "wlip/error.hpp"
#include "wlip/rational.hpp"
#include "wlip/point_set.hpp"
#include "wlip/metric.hpp"
#include "wlip/topology.hpp"
#include "wlip/structures.hpp"
#include "wlip/induced_topology.hpp"
#include "wlip/uniformity.hpp"
#include "wlip/maps.hpp"
#include "wlip/model.hpp"
#include "wlip/generators.hpp"
#include "wlip/laws.hpp"
#include "wlip/report.hpp"

#endif  // WLIP_WLIP_HPP_
