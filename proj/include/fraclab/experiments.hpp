#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "fraclab/eigensolver.hpp"
#include "fraclab/geometry.hpp"

namespace fraclab {

struct OutputPaths {
  std::string csv = "records.csv";
  std::string json = "summary.json";
  std::string plotdata = "plot.dat";
};

struct VerifyFlags {
  bool gauss = true;
  bool farfield = false;
  bool conditionC = true;
  bool measures = true;
};

struct ExperimentConfig {
  int schema = 1;
  std::string name = "sweep";
  int dimension = 1;
  double s = 0.5;
  Domain1D omega{-1.0, 1.0};
  PartitionFamily family;
  std::vector<int> ks;
  DiscParams disc;
  /// Shrink h per record so every bounded exterior piece spans at least four cells.
  bool refine_to_feature = true;
  /// Grow L per record so every bounded exterior piece lies inside the collar.
  bool fit_collar = true;
  SolverParams solver;
  OutputPaths outputs;
  VerifyFlags verify;
  std::vector<double> measure_radii;  // empty: 2|Omega| and 8|Omega|
  std::vector<double> farfield_points;
  /// Set by a "partition" block: a single fixed partition solved as k = 0.
  std::optional<ExteriorPartition> fixed_partition;

  ExteriorPartition partition(int k) const;
  FractionalOrder order() const { return FractionalOrder(dimension, s); }
  std::vector<double> radii() const;
};

/// Strict parse: unknown keys, a wrong schema number and invalid values raise ConfigError.
ExperimentConfig parse_config(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);
nlohmann::json to_json(const ExperimentConfig& config);

/// Parses an exterior set written as [[lo, hi], ...]; "inf"/"-inf" strings or null mark unbounded ends.
ExteriorSet parse_exterior_set(const nlohmann::json& j);

struct ExperimentRecord {
  int k = 0;
  double param = 0.0;
  double lambda1 = std::numeric_limits<double>::quiet_NaN();
  double baseline = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> measN;
  std::vector<double> measD;
  double condC = std::numeric_limits<double>::quiet_NaN();
  bool condC_finite = true;
  double sep = std::numeric_limits<double>::quiet_NaN();
  double gauss_res = std::numeric_limits<double>::quiet_NaN();
  int iters = 0;
  double h = 0.0;
  double L = 0.0;
  double ms = 0.0;
  double farfield_slope = std::numeric_limits<double>::quiet_NaN();
  std::string error;  // empty on success, otherwise "<ErrorCode>: message"

  bool ok() const { return error.empty(); }
};

/// Mesh actually used for one partition after feature refinement and collar fitting.
DiscParams effective_disc(const ExperimentConfig& config, const ExteriorPartition& partition);

/// One record per k, computed by `jobs` workers and returned sorted by k.
std::vector<ExperimentRecord> run(const ExperimentConfig& config, int jobs = 1);

/// All-Dirichlet eigenvalue for the given mesh, cached per (omega, s, h, L, scheme, solver).
double dirichlet_baseline(const Domain1D& omega, const FractionalOrder& order, const DiscParams& disc,
                          const SolverParams& solver = {});

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int count = 0;
};

/// Least squares of log y against log x over records whose two fields are positive.
/// Fields: k, param, lambda1, baseline, gap, condC, sep, gauss_res, iters, h, L, ms. Throws DegenerateData below 4 points.
RateFit fit_rate(const std::vector<ExperimentRecord>& records, const std::string& x_field, const std::string& y_field);
RateFit fit_rate(const std::vector<double>& x, const std::vector<double>& y);

double record_field(const ExperimentRecord& r, const std::string& field);

extern const char* const kCsvHeader;

/// CSV text for the records (17 significant digits).
std::string to_csv(const std::vector<ExperimentRecord>& records);
nlohmann::json summary_json(const std::vector<ExperimentRecord>& records, const ExperimentConfig& config);
std::string to_plotdata(const std::vector<ExperimentRecord>& records);

/// Writes the three outputs below `out_dir`; IoError names the failing path.
void emit(const std::vector<ExperimentRecord>& records, const ExperimentConfig& config,
          const std::filesystem::path& out_dir);

struct Extrapolation {
  std::vector<double> h;
  std::vector<double> lambda;
  double order = 0.0;  // observed convergence order from the last three levels
  double value = 0.0;  // Richardson estimate of the h -> 0 limit
};

/// All-Dirichlet eigenvalue at h, h/2, h/4, ... and its Richardson extrapolation.
Extrapolation richardson_baseline(const Domain1D& omega, double s, double h0, int levels = 3,
                                  Scheme scheme = Scheme::P1, double L = 0.0);

struct IdentitySuite {
  int functions = 0;
  double gauss_rel = 0.0;  // max over functions of |1^T K u| / sum |(K u)_i|
  double parts_rel = 0.0;  // max of the block-decomposition defect over sum |v_i (K u)_i|
  double quad_rel_p0 = 0.0;  // |u^T K u - quadrature energy| / energy on a 36-cell mesh
  double quad_rel_p1 = 0.0;
  double tol = 1e-12;
  double quad_tol = 1e-10;
  bool pass() const {
    return gauss_rel <= tol && parts_rel <= tol && quad_rel_p0 <= quad_tol && quad_rel_p1 <= quad_tol;
  }
};

/// Matrix identities for random discrete functions on a mesh without Dirichlet data
/// (h = 0.05, L = 4|Omega|), plus the quadrature cross-check of the quadratic form.
IdentitySuite identity_suite(const Domain1D& omega, double s, int functions = 10);

}  // namespace fraclab
