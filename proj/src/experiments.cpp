#include "fraclab/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <future>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "fraclab/nonlocal_ops.hpp"

namespace fraclab {

using nlohmann::json;

namespace {

[[noreturn]] void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

void reject_unknown(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) config_error(where + " must be an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items())
    if (!ok.count(key)) config_error("unknown key '" + key + "' in " + where);
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    config_error(where + "." + key + ": " + e.what());
  }
}

double parse_end(const json& v, const std::string& where) {
  if (v.is_null()) return kInf;  // sign fixed by the caller
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
  }
  config_error(where + ": interval ends must be numbers, \"inf\", \"-inf\" or null");
}

json end_to_json(double x) {
  if (x == kInf) return "inf";
  if (x == -kInf) return "-inf";
  return x;
}

json set_to_json(const ExteriorSet& set) {
  json out = json::array();
  for (const auto& iv : set.intervals()) out.push_back({end_to_json(iv.lo), end_to_json(iv.hi)});
  return out;
}

}  // namespace

ExteriorSet parse_exterior_set(const json& j) {
  if (!j.is_array()) config_error("exterior set must be an array of [lo, hi] pairs");
  std::vector<Interval> out;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2) config_error("exterior set entries must be [lo, hi] pairs");
    double lo = parse_end(pair[0], "interval"), hi = parse_end(pair[1], "interval");
    if (pair[0].is_null()) lo = -kInf;
    out.push_back({lo, hi});
  }
  try {
    return ExteriorSet(std::move(out));
  } catch (const Error& e) {
    config_error(e.what());
  }
}

std::vector<double> ExperimentConfig::radii() const {
  if (!measure_radii.empty()) return measure_radii;
  return {2.0 * omega.length(), 8.0 * omega.length()};
}

ExperimentConfig parse_config(const json& doc) {
  reject_unknown(doc, "config",
                 {"schema", "name", "order", "omega", "family", "partition", "discretization", "solver", "outputs",
                  "verify"});
  ExperimentConfig c;
  if (!doc.contains("schema")) config_error("missing \"schema\"");
  read(doc, "schema", c.schema, "config");
  if (c.schema != 1) config_error("unsupported schema " + std::to_string(c.schema));
  read(doc, "name", c.name, "config");

  if (doc.contains("order")) {
    const json& o = doc["order"];
    reject_unknown(o, "order", {"N", "s"});
    read(o, "N", c.dimension, "order");
    read(o, "s", c.s, "order");
  }
  if (c.dimension != 1) config_error("only N = 1 is solved; the 2D oracle is the efr subcommand");
  if (!(c.s > 0.0 && c.s < 1.0)) config_error("order.s must lie in (0, 1)");

  if (doc.contains("omega")) {
    std::vector<double> ab;
    read(doc, "omega", ab, "config");
    if (ab.size() != 2 || !(ab[0] < ab[1])) config_error("omega must be [a, b] with a < b");
    c.omega = Domain1D(ab[0], ab[1]);
  }

  const bool has_family = doc.contains("family"), has_partition = doc.contains("partition");
  if (has_family == has_partition) config_error("exactly one of \"family\" and \"partition\" is required");
  if (has_family) {
    const json& f = doc["family"];
    reject_unknown(f, "family", {"kind", "position", "length", "base", "ratio", "anchor", "side", "k"});
    std::string kind;
    read(f, "kind", kind, "family");
    if (kind.empty()) config_error("family.kind is required");
    try {
      c.family.kind = family_kind_from_string(kind);
    } catch (const Error& e) {
      config_error(e.what());
    }
    read(f, "position", c.family.position, "family");
    if (f.contains("length")) c.family.length = parse_end(f["length"], "family.length");
    read(f, "base", c.family.base, "family");
    read(f, "ratio", c.family.ratio, "family");
    read(f, "anchor", c.family.anchor, "family");
    read(f, "side", c.family.side, "family");
    read(f, "k", c.ks, "family");
    if (c.ks.empty()) config_error("family.k must list at least one index");
    c.family.omega = c.omega;
  } else {
    const json& p = doc["partition"];
    reject_unknown(p, "partition", {"dirichlet", "neumann"});
    if (p.contains("dirichlet") == p.contains("neumann"))
      config_error("partition needs exactly one of \"dirichlet\" and \"neumann\"");
    // a single-partition run is a family with one member, k = 0
    c.ks = {0};
    c.family.omega = c.omega;
    c.family.kind = FamilyKind::NestedNeumann;
    c.family.ratio = 1.0;
    const bool dir = p.contains("dirichlet");
    const ExteriorSet set = parse_exterior_set(dir ? p["dirichlet"] : p["neumann"]);
    c.fixed_partition = dir ? ExteriorPartition::with_dirichlet(c.omega, set) : ExteriorPartition::with_neumann(c.omega, set);
    try {
      c.fixed_partition->validate();
    } catch (const Error& e) {
      config_error(e.what());
    }
  }

  if (doc.contains("discretization")) {
    const json& d = doc["discretization"];
    reject_unknown(d, "discretization", {"h", "L", "scheme", "refine_to_feature", "fit_collar"});
    read(d, "h", c.disc.h, "discretization");
    read(d, "L", c.disc.L, "discretization");
    std::string scheme = to_string(c.disc.scheme);
    read(d, "scheme", scheme, "discretization");
    try {
      c.disc.scheme = scheme_from_string(scheme);
    } catch (const Error& e) {
      config_error(e.what());
    }
    read(d, "refine_to_feature", c.refine_to_feature, "discretization");
    read(d, "fit_collar", c.fit_collar, "discretization");
  }
  if (!(c.disc.h > 0.0) || !(c.disc.L > 0.0)) config_error("discretization.h and L must be positive");
  if (c.disc.L < 4.0 * c.omega.length()) config_error("discretization.L must be at least 4|Omega|");
  if (c.disc.scheme == Scheme::P0 && c.s >= 0.5) config_error("scheme P0 needs s < 1/2");

  if (doc.contains("solver")) {
    const json& s = doc["solver"];
    reject_unknown(s, "solver", {"tol", "max_iter"});
    read(s, "tol", c.solver.tol, "solver");
    read(s, "max_iter", c.solver.max_iter, "solver");
  }
  if (!(c.solver.tol > 0.0) || c.solver.max_iter < 1) config_error("solver.tol and solver.max_iter must be positive");

  if (doc.contains("outputs")) {
    const json& o = doc["outputs"];
    reject_unknown(o, "outputs", {"csv", "json", "plotdata"});
    read(o, "csv", c.outputs.csv, "outputs");
    read(o, "json", c.outputs.json, "outputs");
    read(o, "plotdata", c.outputs.plotdata, "outputs");
  }
  if (doc.contains("verify")) {
    const json& v = doc["verify"];
    reject_unknown(v, "verify", {"gauss", "farfield", "conditionC", "measures", "measure_radii", "farfield_points"});
    read(v, "gauss", c.verify.gauss, "verify");
    read(v, "farfield", c.verify.farfield, "verify");
    read(v, "conditionC", c.verify.conditionC, "verify");
    read(v, "measures", c.verify.measures, "verify");
    read(v, "measure_radii", c.measure_radii, "verify");
    read(v, "farfield_points", c.farfield_points, "verify");
  }
  for (double R : c.measure_radii)
    if (!(R > 0.0)) config_error("verify.measure_radii must be positive");
  for (double x : c.farfield_points)
    if (c.omega.interval().contains(x) || x == c.omega.a || x == c.omega.b)
      config_error("verify.farfield_points must lie outside the closed domain");

  // every member must be constructible before any solve starts
  for (int k : c.ks) {
    if (k < 0) config_error("family.k entries must be nonnegative");
    try {
      const ExteriorPartition p = c.partition(k);
      p.validate();
    } catch (const Error& e) {
      config_error("k = " + std::to_string(k) + ": " + e.what());
    }
  }
  return c;
}

ExteriorPartition ExperimentConfig::partition(int k) const {
  if (fixed_partition) return *fixed_partition;
  return generate(family, k);
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigError, "cannot open config " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigError, path.string() + ": " + e.what());
  }
  return parse_config(doc);
}

json to_json(const ExperimentConfig& c) {
  json out;
  out["schema"] = c.schema;
  out["name"] = c.name;
  out["order"] = {{"N", c.dimension}, {"s", c.s}};
  out["omega"] = {c.omega.a, c.omega.b};
  if (c.fixed_partition) {
    out["partition"] = {{"dirichlet", set_to_json(c.fixed_partition->dirichlet)}};
  } else {
    out["family"] = {{"kind", to_string(c.family.kind)},
                     {"position", c.family.position},
                     {"length", end_to_json(c.family.length)},
                     {"base", c.family.base},
                     {"ratio", c.family.ratio},
                     {"anchor", c.family.anchor},
                     {"side", c.family.side},
                     {"k", c.ks}};
  }
  out["discretization"] = {{"h", c.disc.h},
                           {"L", c.disc.L},
                           {"scheme", to_string(c.disc.scheme)},
                           {"refine_to_feature", c.refine_to_feature},
                           {"fit_collar", c.fit_collar}};
  out["solver"] = {{"tol", c.solver.tol}, {"max_iter", c.solver.max_iter}};
  out["outputs"] = {{"csv", c.outputs.csv}, {"json", c.outputs.json}, {"plotdata", c.outputs.plotdata}};
  out["verify"] = {{"gauss", c.verify.gauss},
                   {"farfield", c.verify.farfield},
                   {"conditionC", c.verify.conditionC},
                   {"measures", c.verify.measures},
                   {"measure_radii", c.radii()},
                   {"farfield_points", c.farfield_points}};
  return out;
}

// ---------------------------------------------------------------------------

DiscParams effective_disc(const ExperimentConfig& config, const ExteriorPartition& partition) {
  DiscParams d = config.disc;
  const Domain1D& om = partition.omega;
  double smallest = kInf, reach = 0.0;
  for (const auto* set : {&partition.dirichlet, &partition.neumann}) {
    for (const auto& iv : set->intervals()) {
      if (iv.bounded()) smallest = std::min(smallest, iv.length());
      for (double e : {iv.lo, iv.hi})
        if (std::isfinite(e)) reach = std::max(reach, e < om.a ? om.a - e : e - om.b);
    }
  }
  if (config.refine_to_feature && std::isfinite(smallest)) d.h = std::min(d.h, smallest / 4.0);
  if (config.fit_collar) d.L = std::max(d.L, reach);
  return d;
}

namespace {

struct BaselineKey {
  double a, b, s, h, L, tol;
  int scheme, max_iter;
  auto operator<=>(const BaselineKey&) const = default;
};

std::mutex baseline_mutex;
std::map<BaselineKey, std::shared_future<double>> baseline_cache;

}  // namespace

double dirichlet_baseline(const Domain1D& omega, const FractionalOrder& order, const DiscParams& disc,
                          const SolverParams& solver) {
  const BaselineKey key{omega.a, omega.b, order.s, disc.h, disc.L, solver.tol, static_cast<int>(disc.scheme),
                        solver.max_iter};
  std::promise<double> promise;
  std::shared_future<double> fut;
  bool owner = false;
  {
    std::lock_guard lock(baseline_mutex);
    auto it = baseline_cache.find(key);
    if (it == baseline_cache.end()) {
      fut = promise.get_future().share();
      baseline_cache.emplace(key, fut);
      owner = true;
    } else {
      fut = it->second;
    }
  }
  if (owner) {
    try {
      promise.set_value(solve_mixed(ExteriorPartition::all_dirichlet(omega), order, disc, solver).lambda1);
    } catch (...) {
      promise.set_exception(std::current_exception());
      std::lock_guard lock(baseline_mutex);
      baseline_cache.erase(key);
    }
  }
  return fut.get();
}

namespace {

ExperimentRecord solve_record(const ExperimentConfig& config, int k) {
  ExperimentRecord rec;
  rec.k = k;
  rec.param = config.fixed_partition ? 0.0 : config.family.parameter(k);
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const FractionalOrder order = config.order();
    const ExteriorPartition p = config.partition(k);
    const DiscParams d = effective_disc(config, p);
    rec.h = d.h;
    rec.L = d.L;
    if (config.verify.measures) {
      for (double R : config.radii()) {
        rec.measN.push_back(measure_in_ball(p.neumann, R));
        rec.measD.push_back(measure_in_ball(p.dirichlet, R));
      }
    }
    rec.sep = p.dirichlet.empty() ? kInf : separation(p.dirichlet, p.omega);
    if (config.verify.conditionC) {
      const ConditionC cc = condition_C(p.dirichlet, p.omega, order);
      rec.condC = cc.value;
      rec.condC_finite = cc.finite;
    }
    EigenResult r = solve_mixed(p, order, d, config.solver);
    rec.lambda1 = r.lambda1;
    rec.iters = r.iterations;
    if (!r.converged) throw Error(ErrorCode::InvalidArgument, "inverse iteration did not converge");
    if (config.verify.gauss) rec.gauss_res = r.gauss_residual;
    DiscParams base_disc = d;
    base_disc.L = config.disc.L;  // the all-Dirichlet problem carries an exact far-field tail
    rec.baseline = dirichlet_baseline(p.omega, order, base_disc, config.solver);
    rec.gap = rec.baseline - rec.lambda1;
    if (config.verify.farfield) {
      std::vector<double> pts = config.farfield_points;
      if (pts.empty())
        for (int i = 0; i <= 8; ++i) pts.push_back(p.omega.b + 10.0 * std::pow(10.0, i / 4.0));
      DiscreteFunction u(r.system->disc, r.full_vector());
      rec.farfield_slope = farfield_rate(u, order, pts).slope;
    }
  } catch (const Error& e) {
    rec.error = e.what();
  } catch (const std::exception& e) {
    rec.error = std::string("InternalError: ") + e.what();
  }
  rec.ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

}  // namespace

std::vector<ExperimentRecord> run(const ExperimentConfig& config, int jobs) {
  const std::size_t n = config.ks.size();
  std::vector<ExperimentRecord> records(n);
  jobs = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) records[i] = solve_record(config, config.ks[i]);
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
  }
  std::stable_sort(records.begin(), records.end(),
                   [](const ExperimentRecord& x, const ExperimentRecord& y) { return x.k < y.k; });
  return records;
}

// ---------------------------------------------------------------------------

double record_field(const ExperimentRecord& r, const std::string& f) {
  if (f == "k") return r.k;
  if (f == "param") return r.param;
  if (f == "lambda1") return r.lambda1;
  if (f == "baseline") return r.baseline;
  if (f == "gap") return r.gap;
  if (f == "condC") return r.condC;
  if (f == "sep") return r.sep;
  if (f == "gauss_res") return r.gauss_res;
  if (f == "iters") return r.iters;
  if (f == "h") return r.h;
  if (f == "L") return r.L;
  if (f == "ms") return r.ms;
  if (f == "farfield_slope") return r.farfield_slope;
  throw Error(ErrorCode::InvalidArgument, "unknown record field '" + f + "'");
}

RateFit fit_rate(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error(ErrorCode::InvalidArgument, "fit needs equally many abscissae and values");
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] > 0.0 && y[i] > 0.0 && std::isfinite(x[i]) && std::isfinite(y[i])) {
      lx.push_back(std::log(x[i]));
      ly.push_back(std::log(y[i]));
    }
  }
  const std::size_t n = lx.size();
  if (n < 4) throw Error(ErrorCode::DegenerateData, "rate fit needs at least 4 positive points, got " + std::to_string(n));
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw Error(ErrorCode::DegenerateData, "all abscissae coincide");
  RateFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy == 0.0 ? 1.0 : sxy * sxy / (sxx * syy);
  fit.count = static_cast<int>(n);
  return fit;
}

RateFit fit_rate(const std::vector<ExperimentRecord>& records, const std::string& x_field, const std::string& y_field) {
  std::vector<double> x, y;
  for (const auto& r : records) {
    if (!r.ok()) continue;
    x.push_back(record_field(r, x_field));
    y.push_back(record_field(r, y_field));
  }
  return fit_rate(x, y);
}

const char* const kCsvHeader = "k,param,lambda1,baseline,gap,measN_R,measD_R,condC,sep,gauss_res,iters,h,L,ms";

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string joined(const std::vector<double>& v) {
  if (v.empty()) return "nan";
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? ";" : "") + num(v[i]);
  return out;
}

json num_json(double v) {
  if (std::isfinite(v)) return v;
  return num(v);
}

}  // namespace

std::string to_csv(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    const double condC = r.condC_finite ? r.condC : kInf;
    out << r.k << ',' << num(r.param) << ',' << num(r.lambda1) << ',' << num(r.baseline) << ',' << num(r.gap) << ','
        << joined(r.measN) << ',' << joined(r.measD) << ',' << num(condC) << ',' << num(r.sep) << ','
        << num(r.gauss_res) << ',' << r.iters << ',' << num(r.h) << ',' << num(r.L) << ',' << num(r.ms) << '\n';
  }
  return out.str();
}

std::string to_plotdata(const std::vector<ExperimentRecord>& records) {
  std::ostringstream out;
  auto block = [&](const char* title, const char* x, const char* y) {
    out << "# " << title << "\n# " << x << ' ' << y << '\n';
    for (const auto& r : records)
      if (r.ok()) out << num(record_field(r, x)) << ' ' << num(record_field(r, y)) << '\n';
    out << "\n\n";
  };
  block("lambda1 against the family parameter", "param", "lambda1");
  block("gap to the Dirichlet baseline", "param", "gap");
  block("lambda1 against the record index", "k", "lambda1");
  return out.str();
}

json summary_json(const std::vector<ExperimentRecord>& records, const ExperimentConfig& config) {
  json out;
  out["config"] = to_json(config);
  int failed = 0;
  json errors = json::array();
  for (const auto& r : records)
    if (!r.ok()) {
      ++failed;
      errors.push_back({{"k", r.k}, {"error", r.error}});
    }
  out["count"] = records.size();
  out["failed"] = failed;
  out["errors"] = errors;

  json fits = json::object();
  for (const auto& [name, x, y] : {std::tuple{"gap_vs_param", "param", "gap"}, std::tuple{"lambda1_vs_param", "param", "lambda1"}}) {
    try {
      const RateFit f = fit_rate(records, x, y);
      fits[name] = {{"slope", f.slope}, {"intercept", f.intercept}, {"r2", f.r2}, {"count", f.count}};
    } catch (const Error& e) {
      fits[name] = {{"error", e.what()}};
    }
  }
  out["fits"] = fits;

  json rows = json::array();
  for (const auto& r : records) {
    rows.push_back({{"k", r.k},
                    {"param", num_json(r.param)},
                    {"lambda1", num_json(r.lambda1)},
                    {"baseline", num_json(r.baseline)},
                    {"gap", num_json(r.gap)},
                    {"measN", r.measN},
                    {"measD", r.measD},
                    {"condC", r.condC_finite ? num_json(r.condC) : json("inf")},
                    {"sep", num_json(r.sep)},
                    {"gauss_res", num_json(r.gauss_res)},
                    {"farfield_slope", num_json(r.farfield_slope)},
                    {"iters", r.iters},
                    {"h", r.h},
                    {"L", r.L}});
  }
  out["records"] = rows;

  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  out["environment"] = {{"generated", stamp},
#if defined(__clang__)
                        {"compiler", std::string("clang ") + __clang_version__},
#elif defined(__GNUC__)
                        {"compiler", std::string("gcc ") + __VERSION__},
#endif
                        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                      std::to_string(EIGEN_MINOR_VERSION)},
                        {"cxx", static_cast<long>(__cplusplus)}};
  return out;
}

void emit(const std::vector<ExperimentRecord>& records, const ExperimentConfig& config,
          const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw Error(ErrorCode::IoError, "cannot create " + out_dir.string() + ": " + ec.message());
  auto write = [&](const std::string& name, const std::string& text) {
    const std::filesystem::path path = out_dir / name;
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
    f << text;
    if (!f) throw Error(ErrorCode::IoError, "write failed for " + path.string());
  };
  write(config.outputs.csv, to_csv(records));
  write(config.outputs.json, summary_json(records, config).dump(2) + "\n");
  write(config.outputs.plotdata, to_plotdata(records));
}

IdentitySuite identity_suite(const Domain1D& omega, double s, int functions) {
  IdentitySuite out;
  out.functions = functions;
  const FractionalOrder order(1, s);
  const Scheme scheme = s < 0.5 ? Scheme::P0 : Scheme::P1;
  auto disc = std::make_shared<const Discretization>(
      build_mesh(ExteriorPartition::all_neumann(omega), order, 0.05 * omega.length() / 2.0, 4.0 * omega.length(), scheme));
  const StiffnessSystem K = assemble(disc, order);
  std::mt19937_64 rng(20261019);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto random = [&](const std::shared_ptr<const Discretization>& d) {
    Eigen::VectorXd v(d->num_free());
    for (int i = 0; i < v.size(); ++i) v(i) = U(rng);
    return DiscreteFunction(d, v);
  };
  for (int i = 0; i < functions; ++i) {
    const DiscreteFunction u = random(disc), v = random(disc);
    const Eigen::VectorXd Ku = K.apply(u.coeffs());
    out.gauss_rel = std::max(out.gauss_rel, gauss_residual(K, u) / Ku.cwiseAbs().sum());
    out.parts_rel = std::max(out.parts_rel, parts_residual(K, u, v) / v.coeffs().cwiseProduct(Ku).cwiseAbs().sum());
  }
  // 4 cells in Omega, Neumann pieces inside a Dirichlet exterior: 36 cells in all
  const double len = omega.length();
  const ExteriorPartition mixed = ExteriorPartition::with_neumann(
      omega, ExteriorSet({{omega.a - 2.0 * len, omega.a}, {omega.b + 2.0 * len, omega.b + 4.0 * len}}));
  for (auto [sq, sc] : {std::pair{std::min(s, 0.45), Scheme::P0}, std::pair{s, Scheme::P1}}) {
    const FractionalOrder o(1, sq);
    auto d = std::make_shared<const Discretization>(build_mesh(mixed, o, len / 4.0, 4.0 * len, sc));
    const StiffnessSystem Ks = assemble(d, o);
    const DiscreteFunction u = random(d);
    const double form = u.coeffs().dot(Ks.apply(u.coeffs()));
    const double ref = energy_by_quadrature(u, o);
    (sc == Scheme::P0 ? out.quad_rel_p0 : out.quad_rel_p1) = std::abs(form - ref) / std::abs(ref);
  }
  return out;
}

Extrapolation richardson_baseline(const Domain1D& omega, double s, double h0, int levels, Scheme scheme, double L) {
  if (levels < 3) throw Error(ErrorCode::InvalidArgument, "extrapolation needs at least three levels");
  Extrapolation ex;
  DiscParams d;
  d.scheme = scheme;
  d.L = L > 0.0 ? L : 4.0 * omega.length();
  const FractionalOrder order(1, s);
  for (int i = 0; i < levels; ++i) {
    d.h = h0 / std::pow(2.0, i);
    ex.h.push_back(d.h);
    ex.lambda.push_back(dirichlet_baseline(omega, order, d));
  }
  const double l1 = ex.lambda[levels - 3], l2 = ex.lambda[levels - 2], l3 = ex.lambda[levels - 1];
  if (!((l1 - l2) / (l2 - l3) > 1.0))
    throw Error(ErrorCode::DegenerateData, "eigenvalues are not in the asymptotic range for extrapolation");
  ex.order = std::log2((l1 - l2) / (l2 - l3));
  ex.value = l3 - (l2 - l3) / (std::pow(2.0, ex.order) - 1.0);
  return ex;
}

}  // namespace fraclab
