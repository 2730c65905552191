#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace geophase {

enum class Errc {
  NotHermitian,
  NoConvergence,
  NotAntiHermitian,
  NotPSD,
  RankDeficient,
  GapClosure,
  GaugePole,
  NonpositiveTemperature,
  OpenPath,
  TooFewSegments,
  GaugeDiscontinuity,
  GapClosureOnPath,
  NoBracket,
  EmptyDome,
  NotClosed,
  StepTooLarge,
  InvalidArgument,
  Parse,
};

constexpr std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::NotAntiHermitian: return "NotAntiHermitian";
    case Errc::NotPSD: return "NotPSD";
    case Errc::RankDeficient: return "RankDeficient";
    case Errc::GapClosure: return "GapClosure";
    case Errc::GaugePole: return "GaugePole";
    case Errc::NonpositiveTemperature: return "NonpositiveTemperature";
    case Errc::OpenPath: return "OpenPath";
    case Errc::TooFewSegments: return "TooFewSegments";
    case Errc::GaugeDiscontinuity: return "GaugeDiscontinuity";
    case Errc::GapClosureOnPath: return "GapClosureOnPath";
    case Errc::NoBracket: return "NoBracket";
    case Errc::EmptyDome: return "EmptyDome";
    case Errc::NotClosed: return "NotClosed";
    case Errc::StepTooLarge: return "StepTooLarge";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::Parse: return "Parse";
  }
  return "Unknown";
}

/// Exception carrying a machine-readable code; every module reports
/// precondition and numerical failures through it.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace geophase
