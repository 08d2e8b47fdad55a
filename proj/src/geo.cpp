// Copyright 2026 The blefind Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "blefind/geo.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

namespace blefind {

namespace {

constexpr double kDegToRad = std::numbers::pi / 180.0;

double wrap_lon_delta(double dlon) {
  while (dlon > 180.0) dlon -= 360.0;
  while (dlon < -180.0) dlon += 360.0;
  return dlon;
}

}  // namespace

double distance_m(const GeoFix& a, const GeoFix& b) {
  const double mean_lat = 0.5 * (a.lat + b.lat) * kDegToRad;
  const double x = wrap_lon_delta(b.lon - a.lon) * kDegToRad * std::cos(mean_lat);
  const double y = (b.lat - a.lat) * kDegToRad;
  return kEarthRadiusM * std::sqrt(x * x + y * y);
}

GeoFix offset_m(const GeoFix& origin, double north_m, double east_m) {
  const double dlat = north_m / kEarthRadiusM / kDegToRad;
  const double dlon =
      east_m / (kEarthRadiusM * std::cos(origin.lat * kDegToRad)) / kDegToRad;
  return {origin.lat + dlat, origin.lon + dlon};
}

GeoFix quantize_to_grid(const GeoFix& fix, double cell_m) {
  const double cell_lat = cell_m / kEarthRadiusM / kDegToRad;
  const double lat = (std::floor(fix.lat / cell_lat) + 0.5) * cell_lat;
  const double cell_lon =
      cell_m / (kEarthRadiusM * std::cos(lat * kDegToRad)) / kDegToRad;
  const double lon = (std::floor(fix.lon / cell_lon) + 0.5) * cell_lon;
  return {lat, lon};
}

std::string format_coord(double degrees) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6f", degrees);
  return buf;
}

std::string format_fix(const GeoFix& fix) {
  return format_coord(fix.lat) + "," + format_coord(fix.lon);
}

}  // namespace blefind
