#pragma once

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "besdp/linalg.hpp"
#include "besdp/optimize.hpp"
#include "besdp/qsim.hpp"
#include "besdp/sdp.hpp"

namespace besdp {

inline constexpr const char* kReportSchemaVersion = "besdp-report/1";

// Malformed or inconsistent input files; the CLI maps this to the usage exit
// code.
struct InstanceFormatError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace io_detail {

// Shortest round-trip decimal form; deterministic across runs.
inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

inline Matrix parse_complex_matrix(const nlohmann::json& j, Eigen::Index d,
                                   const std::string& field) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != d) {
    throw InstanceFormatError(field + ": expected " + std::to_string(d) + " rows");
  }
  Matrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
      throw InstanceFormatError(field + ": row " + std::to_string(r) + " must have " +
                                std::to_string(d) + " entries");
    }
    for (Eigen::Index c = 0; c < d; ++c) {
      const auto& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw InstanceFormatError(field + ": entry (" + std::to_string(r) + "," +
                                  std::to_string(c) + ") must be a [re, im] pair");
      }
      m(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  return m;
}

inline nlohmann::json complex_matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back({m(r, c).real(), m(r, c).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace io_detail

inline SdpInstance parse_instance(const nlohmann::json& j) {
  for (const char* key : {"d", "c", "H", "Q", "q"}) {
    if (!j.contains(key)) {
      throw InstanceFormatError(std::string("instance: missing field '") + key + "'");
    }
  }
  if (!j["d"].is_number_integer() || j["d"].get<int>() <= 0) {
    throw InstanceFormatError("instance: 'd' must be a positive integer");
  }
  if (!j["c"].is_number_integer() || j["c"].get<int>() <= 0) {
    throw InstanceFormatError("instance: 'c' must be a positive integer");
  }
  const Eigen::Index d = j["d"].get<Eigen::Index>();
  const Eigen::Index c = j["c"].get<Eigen::Index>();
  if (!j["Q"].is_array() || static_cast<Eigen::Index>(j["Q"].size()) != c) {
    throw InstanceFormatError("instance: 'Q' must list exactly c matrices");
  }
  if (!j["q"].is_array() || static_cast<Eigen::Index>(j["q"].size()) != c) {
    throw InstanceFormatError("instance: 'q' must list exactly c reals");
  }

  HermitianMatrix H = [&] {
    try {
      return HermitianMatrix(io_detail::parse_complex_matrix(j["H"], d, "H"));
    } catch (const std::invalid_argument& e) {
      throw InstanceFormatError(std::string("H: ") + e.what());
    }
  }();
  std::vector<HermitianMatrix> Q;
  for (Eigen::Index i = 0; i < c; ++i) {
    const std::string name = "Q[" + std::to_string(i) + "]";
    try {
      Q.emplace_back(
          io_detail::parse_complex_matrix(j["Q"][static_cast<std::size_t>(i)], d, name));
    } catch (const std::invalid_argument& e) {
      throw InstanceFormatError(name + ": " + e.what());
    }
  }
  RealVector q(c);
  for (Eigen::Index i = 0; i < c; ++i) {
    const auto& e = j["q"][static_cast<std::size_t>(i)];
    if (!e.is_number()) {
      throw InstanceFormatError("q[" + std::to_string(i) + "]: must be a real number");
    }
    q(i) = e.get<double>();
  }
  try {
    return SdpInstance(std::move(H), std::move(Q), std::move(q));
  } catch (const std::invalid_argument& e) {
    throw InstanceFormatError(e.what());
  }
}

inline SdpInstance load_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InstanceFormatError("cannot open instance file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InstanceFormatError("instance JSON parse error: " + std::string(e.what()));
  }
  return parse_instance(j);
}

inline nlohmann::json instance_to_json(const SdpInstance& inst) {
  nlohmann::json j;
  j["d"] = inst.dim();
  j["c"] = inst.num_constraints();
  j["H"] = io_detail::complex_matrix_to_json(inst.objective.mat());
  nlohmann::json qs = nlohmann::json::array();
  for (const auto& Qi : inst.constraints) {
    qs.push_back(io_detail::complex_matrix_to_json(Qi.mat()));
  }
  j["Q"] = std::move(qs);
  nlohmann::json targets = nlohmann::json::array();
  for (Eigen::Index i = 0; i < inst.targets.size(); ++i) targets.push_back(inst.targets(i));
  j["q"] = std::move(targets);
  return j;
}

// One row per iteration; fixed column set.
inline std::string trace_to_csv(const RunTrace& trace) {
  std::ostringstream out;
  out << "iter,f_T,grad_norm,lambda_min,step,wall_ms\n";
  for (const auto& row : trace.iterations) {
    out << row.iter << ',' << io_detail::format_double(row.f_T) << ','
        << io_detail::format_double(row.grad_norm) << ','
        << io_detail::format_double(row.lambda_min) << ','
        << io_detail::format_double(row.step) << ','
        << static_cast<long long>(row.wall_ms) << '\n';
  }
  return out.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

inline nlohmann::json audit_to_json(const BoundAudit& audit) {
  nlohmann::json j;
  j["entropy_correction"] = audit.entropy_correction;
  j["dual_subopt_bound"] = audit.dual_subopt_bound;
  j["approx_bound"] = audit.approx_bound;
  j["schedule_bound"] = audit.schedule_bound;
  j["bound_total"] = audit.bound_total;
  if (audit.measured_gap) {
    j["measured_gap"] = *audit.measured_gap;
    j["dominated"] = audit.dominated;
  }
  return j;
}

inline nlohmann::json final_report_to_json(const FinalReport& report) {
  nlohmann::json j;
  j["e_estimate"] = report.f_tilde;
  j["f_t"] = report.f_T;
  j["f_tilde_exact"] = report.f_tilde_exact;
  j["temperature"] = report.temperature;
  j["iterations"] = report.iterations;
  j["lambda_min_final"] = report.lambda_min_final;
  j["grad_norm_final"] = report.grad_norm_final;
  j["converged"] = report.converged;
  nlohmann::json mu = nlohmann::json::array();
  for (Eigen::Index i = 0; i < report.mu_final.size(); ++i) mu.push_back(report.mu_final(i));
  j["mu_final"] = std::move(mu);
  if (report.final_estimate_stderr > 0.0) {
    j["final_estimate_stderr"] = report.final_estimate_stderr;
  }
  if (report.gradient_estimator_calls > 0) {
    j["gradient_estimator_calls"] = report.gradient_estimator_calls;
  }
  if (report.hessian_estimator_calls > 0) {
    j["hessian_estimator_calls"] = report.hessian_estimator_calls;
  }
  if (report.audit) j["bound_decomposition"] = audit_to_json(*report.audit);
  return j;
}

inline nlohmann::json budget_to_json(const EstimatorBudget& b) {
  nlohmann::json j;
  j["mode"] = b.kind == EstimatorKind::Gradient ? "gradient" : "hessian";
  j["M"] = b.M;
  j["t_max"] = b.t_max;
  j["N"] = b.shots;
  j["epsilon"] = b.epsilon;
  j["error_split"] = {{"series", b.series_budget},
                      {"tail", b.tail_budget},
                      {"statistical", b.stat_budget}};
  return j;
}

}  // namespace besdp
