#include "geophase/io.hpp"

#include <cstdio>
#include <numbers>
#include <ostream>

namespace geophase {

std::string format_number(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

std::string error_token(Errc code) { return "ERROR:" + std::string(to_string(code)); }

namespace {

// Round-trips through the 12-digit text form so JSON and CSV carry the same
// values.
double rounded(double value) { return std::stod(format_number(value)); }

// An angle within print precision of -pi is -pi, which the range (-pi, pi]
// folds onto +pi.
double printable_phase(double phase) {
  static const double top = rounded(std::numbers::pi);
  return rounded(phase) <= -top ? std::numbers::pi : phase;
}

}  // namespace

std::string phase_token(const PhaseResult& r) {
  return r.defined() ? format_number(printable_phase(r.phase)) : std::string("NEAR_CRITICAL");
}

std::string phase_token(const PhaseCell& cell) {
  switch (cell.status) {
    case CellStatus::Defined: return format_number(printable_phase(cell.phase));
    case CellStatus::NearCritical: return "NEAR_CRITICAL";
    case CellStatus::Error: break;
  }
  return error_token(cell.error);
}

nlohmann::json phase_json(const PhaseResult& r) {
  return r.defined() ? nlohmann::json(rounded(printable_phase(r.phase))) : nlohmann::json(phase_token(r));
}

nlohmann::json holonomy_to_json(const Eigen::MatrixXcd& matrix, int steps) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < matrix.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < matrix.cols(); ++j)
      row.push_back({rounded(matrix(i, j).real()), rounded(matrix(i, j).imag())});
    rows.push_back(std::move(row));
  }
  return {{"dim", matrix.rows()}, {"steps", steps}, {"matrix", std::move(rows)}};
}

Eigen::MatrixXcd holonomy_from_json(const nlohmann::json& j, int* steps) {
  try {
    const int dim = j.at("dim").get<int>();
    const auto& rows = j.at("matrix");
    if (dim <= 0 || !rows.is_array() || rows.size() != static_cast<std::size_t>(dim))
      throw Error(Errc::Parse, "holonomy matrix does not match dim");
    Eigen::MatrixXcd m(dim, dim);
    for (int r = 0; r < dim; ++r) {
      const auto& row = rows.at(static_cast<std::size_t>(r));
      if (!row.is_array() || row.size() != static_cast<std::size_t>(dim))
        throw Error(Errc::Parse, "holonomy row has the wrong length");
      for (int c = 0; c < dim; ++c) {
        const auto& entry = row.at(static_cast<std::size_t>(c));
        if (!entry.is_array() || entry.size() != 2) throw Error(Errc::Parse, "entries must be [re, im]");
        m(r, c) = Complex(entry[0].get<double>(), entry[1].get<double>());
      }
    }
    if (steps) *steps = j.at("steps").get<int>();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Parse, e.what());
  }
}

void write_diagram_csv(std::ostream& out, const PhaseDiagramGrid& grid) {
  out << "# Uhlmann phase of the 4D tight-binding kx loop; T in units of R0 = R(m=-3); angles in radians\n";
  out << "m,T,theta_U,magnitude\n";
  for (std::size_t i = 0; i < grid.m.size(); ++i) {
    for (std::size_t j = 0; j < grid.T.size(); ++j) {
      const PhaseCell& c = grid.at(i, j);
      out << format_number(grid.m[i]) << ',' << format_number(grid.T[j]) << ',' << phase_token(c) << ','
          << (c.status == CellStatus::Error ? std::string() : format_number(c.magnitude)) << '\n';
    }
  }
}

nlohmann::json diagram_to_json(const PhaseDiagramGrid& grid) {
  nlohmann::json m = nlohmann::json::array(), t = nlohmann::json::array();
  for (double v : grid.m) m.push_back(rounded(v));
  for (double v : grid.T) t.push_back(rounded(v));
  nlohmann::json phases = nlohmann::json::array(), mags = nlohmann::json::array();
  for (std::size_t i = 0; i < grid.m.size(); ++i) {
    nlohmann::json prow = nlohmann::json::array(), mrow = nlohmann::json::array();
    for (std::size_t j = 0; j < grid.T.size(); ++j) {
      const PhaseCell& c = grid.at(i, j);
      if (c.status == CellStatus::Defined)
        prow.push_back(rounded(printable_phase(c.phase)));
      else
        prow.push_back(phase_token(c));
      if (c.status == CellStatus::Error)
        mrow.push_back(nullptr);
      else
        mrow.push_back(rounded(c.magnitude));
    }
    phases.push_back(std::move(prow));
    mags.push_back(std::move(mrow));
  }
  return {{"m", std::move(m)}, {"T", std::move(t)}, {"theta_U", std::move(phases)}, {"magnitude", std::move(mags)}};
}

nlohmann::json dome_fit_to_json(const DomeFit& fit) {
  nlohmann::json boundary = nlohmann::json::array();
  for (const auto& b : fit.boundary) boundary.push_back({{"m", rounded(b.m)}, {"T_c", rounded(b.t_c)}});
  return {{"A", rounded(fit.amplitude)},
          {"p", rounded(fit.exponent)},
          {"residual", rounded(fit.residual)},
          {"boundary", std::move(boundary)}};
}

std::string to_string(LoopFamily family) {
  switch (family) {
    case LoopFamily::Equator: return "equator";
    case LoopFamily::Tb4dKx: return "tb4d";
    case LoopFamily::Explicit: return "explicit";
  }
  return "unknown";
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Match: return "match";
    case Verdict::Mismatch: return "mismatch";
    case Verdict::Undecided: return "undecided";
  }
  return "unknown";
}

std::string to_string(WZRoute route) {
  return route == WZRoute::AnalyticGauge ? "analytic_gauge" : "transported";
}

nlohmann::json correspondence_to_json(const CorrespondenceReport& report) {
  nlohmann::json loop = {{"family", to_string(report.family)}, {"steps", report.steps}};
  if (report.family == LoopFamily::Equator) loop["R"] = rounded(report.radius);
  if (report.family == LoopFamily::Tb4dKx) loop["m"] = rounded(report.mass);

  nlohmann::json rungs = nlohmann::json::array();
  for (std::size_t i = 0; i < report.ladder.size(); ++i) {
    const PhaseResult& r = report.theta_u[i];
    rungs.push_back({{"T", rounded(report.ladder[i])},
                     {"theta_U", phase_json(r)},
                     {"magnitude", rounded(r.magnitude)}});
  }

  nlohmann::json j = {{"loop", std::move(loop)},
                      {"ladder", std::move(rungs)},
                      {"theta_U_limit", rounded(printable_phase(report.theta_u_limit))},
                      {"ladder_converged", report.ladder_converged},
                      {"theta_WZ", phase_json(report.theta_wz)},
                      {"wz_route", to_string(report.wz_route)},
                      {"verdict", to_string(report.verdict)},
                      {"unitary_family", report.unitary_family}};
  j["theta_WZ_analytic_gauge"] =
      report.theta_wz_analytic_gauge ? nlohmann::json(rounded(printable_phase(*report.theta_wz_analytic_gauge))) : nlohmann::json();
  j["kappa"] = report.kappa ? nlohmann::json(*report.kappa) : nlohmann::json();
  j["kappa_residual"] = rounded(report.kappa_residual);
  j["commutator_norm"] = report.commutator_norm ? nlohmann::json(rounded(*report.commutator_norm)) : nlohmann::json();
  return j;
}

}  // namespace geophase
