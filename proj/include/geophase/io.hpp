#pragma once

// Text formats: holonomy JSON, phase tokens, diagram CSV/JSON, fit and
// correspondence reports. Floats use 12 significant digits.

#include <iosfwd>
#include <string>

#include <json.hpp>

#include "geophase/analysis.hpp"

namespace geophase {

std::string format_number(double value);

/// A float in (-pi, pi], NEAR_CRITICAL, or ERROR:<code>.
std::string phase_token(const PhaseResult& r);
std::string phase_token(const PhaseCell& cell);
std::string error_token(Errc code);
/// JSON form of a phase: a number when defined, otherwise the string token.
nlohmann::json phase_json(const PhaseResult& r);

/// {"dim": n, "steps": N, "matrix": [[[re, im], ...], ...]}
nlohmann::json holonomy_to_json(const Eigen::MatrixXcd& matrix, int steps);
/// Inverse of holonomy_to_json; throws Parse on malformed input.
Eigen::MatrixXcd holonomy_from_json(const nlohmann::json& j, int* steps = nullptr);

void write_diagram_csv(std::ostream& out, const PhaseDiagramGrid& grid);
nlohmann::json diagram_to_json(const PhaseDiagramGrid& grid);

nlohmann::json dome_fit_to_json(const DomeFit& fit);

std::string to_string(LoopFamily family);
std::string to_string(Verdict verdict);
std::string to_string(WZRoute route);
nlohmann::json correspondence_to_json(const CorrespondenceReport& report);

}  // namespace geophase
