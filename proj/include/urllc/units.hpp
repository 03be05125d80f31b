#ifndef URLLC_UNITS_HPP_
#define URLLC_UNITS_HPP_

#include <cmath>

#include "urllc/types.hpp"

namespace urllc::units {

inline Scalar dbm_to_watts(Scalar dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline Scalar watts_to_dbm(Scalar w) { return 10.0 * std::log10(w) + 30.0; }
inline Scalar db_to_linear(Scalar db) { return std::pow(10.0, db / 10.0); }
inline Scalar linear_to_db(Scalar x) { return 10.0 * std::log10(x); }
inline Scalar ms_to_slots(Scalar ms, Scalar slot_ms) { return ms / slot_ms; }
inline Scalar slots_to_ms(Scalar slots, Scalar slot_ms) { return slots * slot_ms; }

}  // namespace urllc::units

#endif  // URLLC_UNITS_HPP_
