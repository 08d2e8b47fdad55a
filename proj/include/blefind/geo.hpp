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

#pragma once

#include <string>

namespace blefind {

/// Geographic fix in decimal degrees.
struct GeoFix {
  double lat = 0.0;
  double lon = 0.0;

  friend bool operator==(const GeoFix&, const GeoFix&) = default;
};

inline constexpr double kEarthRadiusM = 6371000.0;

/// Equirectangular approximation of great-circle distance, in meters.
/// Adequate for scenario extents below ~100 km; longitude wrap is handled.
double distance_m(const GeoFix& a, const GeoFix& b);

/// Moves `origin` by the given north/east offsets in meters.
GeoFix offset_m(const GeoFix& origin, double north_m, double east_m);

/// Snaps a fix to the center of its cell on a grid of `cell_m` meters,
/// used as a coarse IP-geolocation stand-in.
GeoFix quantize_to_grid(const GeoFix& fix, double cell_m);

/// Fixed six-decimal rendering, "lat,lon". Every serialized store and report
/// uses this form so coordinate scans are exact string matches.
std::string format_fix(const GeoFix& fix);
std::string format_coord(double degrees);

}  // namespace blefind
