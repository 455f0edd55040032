#pragma once

#include "cruiseopt/arc_integrator.hpp"

namespace cruiseopt::test {

// Converged schedules from the indirect solver with default options, frozen
// so that most tests only integrate.
inline ArcSchedule table1_schedule() {
  return {105.09928384586264, 6257.7667372118467, 6297.2729273543628, 0.69833710728740728};
}
inline constexpr double kTable1Cost = -27245.234660034446;

inline ArcSchedule bang_bang_schedule() {  // alpha = 1
  return {4580.6473424651904, 4580.6473424651904, 4719.2432604963187, 0.636383440767468};
}

inline ArcSchedule alpha0_schedule() {
  return {41.493274063449448, 7076.1451435540257, 7076.1451435540257, 0.72967946395041028};
}

inline ArcSchedule constant_wind_schedule() {
  return {93.205273477710861, 6193.3461896003473, 6237.9603858679593, 0.58306175725892628};
}

}  // namespace cruiseopt::test
