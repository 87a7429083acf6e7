#pragma once

#include <string>

#include "loewner/evolution.hpp"
#include "loewner/field.hpp"
#include "loewner/herglotz.hpp"
#include "loewner/recovery.hpp"
#include "loewner/report.hpp"
#include "loewner/solver.hpp"
#include "loewner/variational.hpp"

namespace loewner {

/// Shortest round-trip decimal representation of a double.
std::string format_double(double x);

// --- JSON (schema documented in the repository README) ---------------------

std::string domain_to_json(const Domain& domain);
Domain domain_from_json(const std::string& text);

/// Serializable variants: radial, linear (constant matrix), polynomial_disc,
/// berkson_porta (rational or polynomial p), piecewise_time of serializable
/// parts. Throws SchemaError for custom/callable-backed fields.
std::string field_to_json(const FieldSpec& field);
FieldSpec field_from_json(const std::string& text);

std::string herglotz_report_to_json(const HerglotzReport& report);
std::string verification_report_to_json(const VerificationReport& report);

/// Trajectory metadata (start, initial point, status, escape time, sample
/// count); numbers survive a parse round-trip bit-exactly.
std::string trajectory_meta_to_json(const Trajectory& trajectory);

struct TrajectoryMeta {
    double start_time = 0.0;
    CVector initial_point;
    IntegrationStatus status = IntegrationStatus::completed;
    std::optional<double> escape_time;
    double end_time = 0.0;
    std::size_t sample_count = 0;
};
TrajectoryMeta trajectory_meta_from_json(const std::string& text);

std::string recovered_field_to_json(const RecoveredField& recovered);

/// Transport path export: per time sample, row-major complex entries of H.
std::string transport_to_json(const TransportState& state);

// --- CSV --------------------------------------------------------------------

/// Columns: t, re_x1, im_x1, ...
std::string trajectory_to_csv(const Trajectory& trajectory);

/// Columns: t, re_z_j, im_z_j, re_g_j, im_g_j (per coordinate), error_estimate.
std::string recovered_field_to_csv(const RecoveredField& recovered);

} // namespace loewner
