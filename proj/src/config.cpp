#include "sublevy/config.hpp"

#include <fstream>
#include <set>

namespace sublevy {

namespace {

class StrictObject {
 public:
  StrictObject(const nlohmann::json& j, std::string path)
      : json_(j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError(path_ + ": expected an object");
  }

  const nlohmann::json* find(const char* key) {
    claimed_.insert(key);
    auto it = json_.find(key);
    return it == json_.end() ? nullptr : &*it;
  }

  const nlohmann::json& require(const char* key) {
    const auto* p = find(key);
    if (p == nullptr)
      throw ConfigError(path_ + ": missing key '" + std::string(key) + "'");
    return *p;
  }

  // Unknown keys are rejected, never ignored.
  void finish() const {
    for (auto it = json_.begin(); it != json_.end(); ++it)
      if (claimed_.find(it.key()) == claimed_.end())
        throw ConfigError(path_ + ": unknown key '" + it.key() + "'");
  }

  const std::string& path() const { return path_; }

 private:
  const nlohmann::json& json_;
  std::string path_;
  std::set<std::string> claimed_;
};

double as_double(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number()) throw ConfigError(path + ": expected a number");
  return j.get<double>();
}

long as_long(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number_integer()) throw ConfigError(path + ": expected an integer");
  return j.get<long>();
}

std::uint64_t as_seed(const nlohmann::json& j, const std::string& path) {
  if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() &&
                                 j.get<long long>() < 0))
    throw ConfigError(path + ": expected an unsigned 64-bit integer");
  return j.get<std::uint64_t>();
}

std::vector<double> as_double_array(const nlohmann::json& j,
                                    const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i)
    out.push_back(as_double(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Eigen::VectorXd as_eigen(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(),
                                           static_cast<long>(v.size()));
}

Eigen::MatrixXd as_matrix(const nlohmann::json& j, const std::string& path) {
  if (!j.is_array() || j.empty())
    throw ConfigError(path + ": expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Eigen::MatrixXd out(static_cast<long>(j.size()), static_cast<long>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::vector<double> row =
        as_double_array(j[r], path + "[" + std::to_string(r) + "]");
    if (row.size() != cols) throw ConfigError(path + ": ragged matrix");
    for (std::size_t c = 0; c < cols; ++c)
      out(static_cast<long>(r), static_cast<long>(c)) = row[c];
  }
  return out;
}

CovOperator parse_cov(const nlohmann::json& j, const SpaceLayout& layout,
                      const std::string& path) {
  StrictObject obj(j, path);
  const auto* eigenvalues = obj.find("eigenvalues");
  const auto* matrix = obj.find("matrix");
  obj.finish();
  if ((eigenvalues != nullptr) == (matrix != nullptr))
    throw ConfigError(path + ": give exactly one of 'eigenvalues' or 'matrix'");
  try {
    if (eigenvalues != nullptr) {
      std::vector<Eigen::VectorXd> per_component;
      if (layout.d() == 1 && !eigenvalues->empty() &&
          !(*eigenvalues)[0].is_array()) {
        per_component.push_back(
            as_eigen(as_double_array(*eigenvalues, path + ".eigenvalues")));
      } else {
        if (!eigenvalues->is_array() ||
            static_cast<int>(eigenvalues->size()) != layout.d())
          throw ConfigError(path + ".eigenvalues: need one array per component");
        for (std::size_t c = 0; c < eigenvalues->size(); ++c)
          per_component.push_back(as_eigen(as_double_array(
              (*eigenvalues)[c],
              path + ".eigenvalues[" + std::to_string(c) + "]")));
      }
      return CovOperator::diagonal(layout, std::move(per_component));
    }
    std::vector<Eigen::MatrixXd> matrices;
    if (layout.d() == 1 && !matrix->empty() && (*matrix)[0].is_array() &&
        !(*matrix)[0].empty() && !(*matrix)[0][0].is_array()) {
      matrices.push_back(as_matrix(*matrix, path + ".matrix"));
    } else {
      if (!matrix->is_array() || static_cast<int>(matrix->size()) != layout.d())
        throw ConfigError(path + ".matrix: need one matrix per component");
      for (std::size_t c = 0; c < matrix->size(); ++c)
        matrices.push_back(as_matrix(
            (*matrix)[c], path + ".matrix[" + std::to_string(c) + "]"));
    }
    return CovOperator::from_matrix(layout, std::move(matrices));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

UniJump parse_uni_jump(const nlohmann::json& j, const std::string& path) {
  StrictObject obj(j, path);
  const std::string family = obj.require("family").get<std::string>();
  UniJump out;
  if (family == "ig") {
    out = IgJump{as_double(obj.require("s"), path + ".s"),
                 as_double(obj.require("c"), path + ".c")};
  } else if (family == "stable") {
    out = StableJump{as_double(obj.require("alpha"), path + ".alpha"),
                     as_double(obj.require("scale"), path + ".scale")};
  } else if (family == "gamma") {
    out = GammaJump{as_double(obj.require("a"), path + ".a")};
  } else {
    throw ConfigError(path + ".family: expected ig | stable | gamma");
  }
  obj.finish();
  try {
    validate_uni_jump(out);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return out;
}

JumpDist parse_jump_dist(const nlohmann::json& j, const std::string& path) {
  StrictObject obj(j, path);
  const std::string type = obj.require("type").get<std::string>();
  if (type == "atoms") {
    AtomJumpDist dist;
    dist.probs = as_double_array(obj.require("probs"), path + ".probs");
    const auto& points = obj.require("points");
    if (!points.is_array()) throw ConfigError(path + ".points: expected array");
    for (std::size_t k = 0; k < points.size(); ++k)
      dist.points.push_back(as_double_array(
          points[k], path + ".points[" + std::to_string(k) + "]"));
    obj.finish();
    return dist;
  }
  if (type == "exponential") {
    ExponentialJumpDist dist;
    dist.means = as_double_array(obj.require("means"), path + ".means");
    obj.finish();
    return dist;
  }
  throw ConfigError(path + ".type: expected atoms | exponential");
}

SubordinatorSpec parse_subordinator(const nlohmann::json& j, int d,
                                    const std::string& path) {
  StrictObject obj(j, path);
  SubordinatorSpec sub;
  sub.drift = as_double_array(obj.require("drift"), path + ".drift");
  if (static_cast<int>(sub.drift.size()) != d)
    throw ConfigError(path + ".drift: expected " + std::to_string(d) +
                      " entries");
  if (const auto* jumps = obj.find("jumps")) {
    StrictObject jobj(*jumps, path + ".jumps");
    const std::string type = jobj.require("type").get<std::string>();
    if (type == "none") {
      jobj.finish();
    } else if (type == "per_component") {
      const auto& parts = jobj.require("parts");
      jobj.finish();
      if (!parts.is_array() || static_cast<int>(parts.size()) != d)
        throw ConfigError(path + ".jumps.parts: expected " + std::to_string(d) +
                          " entries");
      PerComponentJumps pc;
      for (std::size_t k = 0; k < parts.size(); ++k) {
        if (parts[k].is_null())
          pc.parts.push_back(std::nullopt);
        else
          pc.parts.push_back(parse_uni_jump(
              parts[k], path + ".jumps.parts[" + std::to_string(k) + "]"));
      }
      sub.jumps = std::move(pc);
    } else if (type == "compound_poisson") {
      CompoundPoissonJumps cp;
      cp.rate = as_double(jobj.require("rate"), path + ".jumps.rate");
      cp.dist = parse_jump_dist(jobj.require("jump"), path + ".jumps.jump");
      jobj.finish();
      sub.jumps = std::move(cp);
    } else if (type == "common_factor") {
      CommonFactorJumps cf;
      cf.factor = parse_uni_jump(jobj.require("factor"), path + ".jumps.factor");
      cf.loadings =
          as_double_array(jobj.require("loadings"), path + ".jumps.loadings");
      if (const auto* idio = jobj.find("idiosyncratic")) {
        if (!idio->is_array() || static_cast<int>(idio->size()) != d)
          throw ConfigError(path + ".jumps.idiosyncratic: expected " +
                            std::to_string(d) + " entries");
        for (std::size_t k = 0; k < idio->size(); ++k) {
          if ((*idio)[k].is_null())
            cf.idiosyncratic.push_back(std::nullopt);
          else
            cf.idiosyncratic.push_back(
                parse_uni_jump((*idio)[k], path + ".jumps.idiosyncratic[" +
                                               std::to_string(k) + "]"));
        }
      }
      jobj.finish();
      sub.jumps = std::move(cf);
    } else {
      throw ConfigError(path +
                        ".jumps.type: expected none | per_component | "
                        "compound_poisson | common_factor");
    }
  }
  obj.finish();
  try {
    sub.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return sub;
}

BaseProcessSpec parse_base(const nlohmann::json& j, const SpaceLayout& layout,
                           const std::string& path) {
  StrictObject obj(j, path);
  BaseProcessSpec base;
  base.layout = layout;

  const auto& drift = obj.require("drift");
  std::vector<Eigen::VectorXd> comps;
  if (layout.d() == 1 && !drift.empty() && !drift[0].is_array()) {
    comps.push_back(as_eigen(as_double_array(drift, path + ".drift")));
  } else {
    if (!drift.is_array() || static_cast<int>(drift.size()) != layout.d())
      throw ConfigError(path + ".drift: need one array per component");
    for (std::size_t c = 0; c < drift.size(); ++c)
      comps.push_back(as_eigen(as_double_array(
          drift[c], path + ".drift[" + std::to_string(c) + "]")));
  }
  try {
    base.drift = Vector(layout, std::move(comps));
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ".drift: " + e.what());
  }
  base.gaussian = parse_cov(obj.require("q"), layout, path + ".q");

  if (const auto* jumps = obj.find("jumps")) {
    if (!jumps->is_array() || static_cast<int>(jumps->size()) != layout.d())
      throw ConfigError(path + ".jumps: need one entry per component");
    for (std::size_t c = 0; c < jumps->size(); ++c) {
      const std::string jpath = path + ".jumps[" + std::to_string(c) + "]";
      if ((*jumps)[c].is_null()) {
        base.jumps.push_back(std::nullopt);
        continue;
      }
      StrictObject jobj((*jumps)[c], jpath);
      ComponentJumpSpec part;
      part.rate = as_double(jobj.require("rate"), jpath + ".rate");
      const auto& atoms = jobj.require("atoms");
      jobj.finish();
      if (!atoms.is_array() || atoms.empty())
        throw ConfigError(jpath + ".atoms: expected a nonempty array");
      for (std::size_t k = 0; k < atoms.size(); ++k) {
        const std::string apath = jpath + ".atoms[" + std::to_string(k) + "]";
        StrictObject aobj(atoms[k], apath);
        part.probs.push_back(as_double(aobj.require("p"), apath + ".p"));
        part.atoms.push_back(
            as_eigen(as_double_array(aobj.require("x"), apath + ".x")));
        aobj.finish();
      }
      base.jumps.push_back(std::move(part));
    }
  }
  obj.finish();
  try {
    base.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return base;
}

std::vector<std::vector<double>> default_growth_grid(int d) {
  std::vector<std::vector<double>> grid;
  for (double scale : {0.5, 1.0, 2.0, 4.0, 8.0})
    grid.emplace_back(static_cast<std::size_t>(d), scale);
  return grid;
}

}  // namespace

const char* check_id(const CheckRequest& request) {
  if (std::holds_alternative<CfCheckRequest>(request)) return "cf";
  if (std::holds_alternative<MomentsCheckRequest>(request)) return "moments";
  if (std::holds_alternative<ScalingCheckRequest>(request)) return "scaling";
  if (std::holds_alternative<GrowthCheckRequest>(request)) return "growth";
  if (std::holds_alternative<TailCheckRequest>(request)) return "tail_index";
  return "jump_measure";
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& doc) {
  ExperimentConfig config;
  config.echo = doc;
  StrictObject root(doc, "config");

  // --- spec ---
  {
    const auto& spec_json = root.require("spec");
    StrictObject spec(spec_json, "spec");
    config.family = spec.require("family").get<std::string>();
    const auto& params = spec.require("params");
    spec.finish();
    StrictObject p(params, "spec.params");
    try {
      if (config.family == "hnig") {
        const std::vector<double> b =
            as_double_array(p.require("b"), "spec.params.b");
        const SpaceLayout layout{static_cast<int>(b.size())};
        HNIGParams hp{as_double(p.require("s"), "spec.params.s"),
                      as_double(p.require("c"), "spec.params.c"),
                      Vector(layout, {as_eigen(b)}),
                      parse_cov(p.require("q"), layout, "spec.params.q")};
        p.finish();
        config.family_degenerate = hp.degenerate();
        config.spec = make_hnig(hp);
      } else if (config.family == "stable") {
        const double alpha = as_double(p.require("alpha"), "spec.params.alpha");
        const auto& q_json = p.require("q");
        // Layout comes from the eigenvalue/matrix block itself.
        StrictObject probe(q_json, "spec.params.q");
        const auto* ev = probe.find("eigenvalues");
        const auto* mat = probe.find("matrix");
        int n = 0;
        if (ev != nullptr && ev->is_array())
          n = static_cast<int>(ev->size());
        else if (mat != nullptr && mat->is_array())
          n = static_cast<int>(mat->size());
        if (n <= 0)
          throw ConfigError("spec.params.q: cannot infer the dimension");
        const SpaceLayout layout{n};
        StableParams sp{alpha, parse_cov(q_json, layout, "spec.params.q")};
        p.finish();
        config.family_alpha = alpha;
        config.spec = make_stable(sp);
      } else if (config.family == "hvg") {
        const std::vector<double> b =
            as_double_array(p.require("b"), "spec.params.b");
        const SpaceLayout layout{static_cast<int>(b.size())};
        HVGParams hp{as_double(p.require("a"), "spec.params.a"),
                     Vector(layout, {as_eigen(b)}),
                     parse_cov(p.require("q"), layout, "spec.params.q")};
        p.finish();
        config.spec = make_hvg(hp);
      } else if (config.family == "custom") {
        const std::vector<double> dims_raw =
            as_double_array(p.require("dims"), "spec.params.dims");
        std::vector<int> dims;
        for (double v : dims_raw) dims.push_back(static_cast<int>(v));
        const SpaceLayout layout(dims);
        config.spec.base =
            parse_base(p.require("base"), layout, "spec.params.base");
        config.spec.subordinator = parse_subordinator(
            p.require("subordinator"), layout.d(), "spec.params.subordinator");
        p.finish();
        config.spec.validate();
      } else {
        throw ConfigError("spec.family: expected hnig | stable | hvg | custom");
      }
    } catch (const std::invalid_argument& e) {
      throw ConfigError(std::string("spec: ") + e.what());
    }
  }

  // --- run ---
  {
    const auto& run_json = root.require("run");
    StrictObject run(run_json, "run");
    config.run.seed = as_seed(run.require("seed"), "run.seed");
    if (const auto* samples = run.find("samples"))
      config.run.samples = as_long(*samples, "run.samples");
    if (const auto* t = run.find("t")) config.run.t = as_double(*t, "run.t");
    if (const auto* grid = run.find("grid"))
      config.run.grid = as_double_array(*grid, "run.grid");
    run.finish();
    if (config.run.samples < 1) throw ConfigError("run.samples: must be >= 1");
    if (!(config.run.t > 0.0)) throw ConfigError("run.t: must be > 0");
    if (config.run.grid) {
      double prev = 0.0;
      for (double t : *config.run.grid) {
        if (!(t > prev))
          throw ConfigError("run.grid: must be positive and strictly increasing");
        prev = t;
      }
    }
  }

  // --- checks ---
  if (const auto* checks = root.find("checks")) {
    if (!checks->is_array()) throw ConfigError("checks: expected an array");
    for (std::size_t i = 0; i < checks->size(); ++i) {
      const std::string path = "checks[" + std::to_string(i) + "]";
      StrictObject c((*checks)[i], path);
      const std::string id = c.require("id").get<std::string>();
      if (id == "cf") {
        CfCheckRequest req;
        req.cfg.samples = config.run.samples;
        req.cfg.t = config.run.t;
        if (const auto* v = c.find("probes"))
          req.cfg.probes = static_cast<int>(as_long(*v, path + ".probes"));
        if (const auto* v = c.find("min_radius"))
          req.cfg.min_radius = as_double(*v, path + ".min_radius");
        if (const auto* v = c.find("max_radius"))
          req.cfg.max_radius = as_double(*v, path + ".max_radius");
        if (const auto* v = c.find("samples"))
          req.cfg.samples = as_long(*v, path + ".samples");
        if (const auto* v = c.find("t")) req.cfg.t = as_double(*v, path + ".t");
        if (const auto* v = c.find("k_sigma"))
          req.cfg.k_sigma = as_double(*v, path + ".k_sigma");
        config.checks.emplace_back(req);
      } else if (id == "moments") {
        MomentsCheckRequest req;
        req.samples = config.run.samples;
        if (const auto* v = c.find("samples"))
          req.samples = as_long(*v, path + ".samples");
        if (const auto* v = c.find("k_sigma"))
          req.k_sigma = as_double(*v, path + ".k_sigma");
        config.checks.emplace_back(req);
      } else if (id == "scaling") {
        ScalingCheckRequest req;
        req.samples = config.run.samples;
        if (const auto* v = c.find("alpha"))
          req.alpha = as_double(*v, path + ".alpha");
        else if (config.family_alpha)
          req.alpha = *config.family_alpha;
        else
          throw ConfigError(path + ": 'alpha' required for non-stable specs");
        if (const auto* v = c.find("t")) req.t = as_double(*v, path + ".t");
        if (const auto* v = c.find("samples"))
          req.samples = as_long(*v, path + ".samples");
        config.checks.emplace_back(req);
      } else if (id == "growth") {
        GrowthCheckRequest req;
        req.samples = config.run.samples;
        if (const auto* v = c.find("grid")) {
          if (!v->is_array() || v->empty())
            throw ConfigError(path + ".grid: expected a nonempty array");
          for (std::size_t g = 0; g < v->size(); ++g)
            req.grid.push_back(as_double_array(
                (*v)[g], path + ".grid[" + std::to_string(g) + "]"));
        } else {
          req.grid = default_growth_grid(config.spec.d());
        }
        if (const auto* v = c.find("samples"))
          req.samples = as_long(*v, path + ".samples");
        if (const auto* v = c.find("k_sigma"))
          req.k_sigma = as_double(*v, path + ".k_sigma");
        config.checks.emplace_back(req);
      } else if (id == "tail_index") {
        TailCheckRequest req;
        if (const auto* v = c.find("samples"))
          req.samples = as_long(*v, path + ".samples");
        if (const auto* v = c.find("top_fraction"))
          req.top_fraction = as_double(*v, path + ".top_fraction");
        const auto* lo = c.find("expected_min");
        const auto* hi = c.find("expected_max");
        if ((lo == nullptr) != (hi == nullptr))
          throw ConfigError(path +
                            ": give both expected_min and expected_max or neither");
        if (lo != nullptr) {
          req.expected_range = {as_double(*lo, path + ".expected_min"),
                                as_double(*hi, path + ".expected_max")};
        } else if (config.family == "hnig" && config.family_degenerate) {
          req.expected_range = {0.8, 1.2};  // Cauchy-type projections
        } else if (config.family_alpha && *config.family_alpha < 2.0) {
          req.expected_range = {*config.family_alpha - 0.2,
                                *config.family_alpha + 0.2};
        }
        config.checks.emplace_back(req);
      } else if (id == "jump_measure") {
        JumpMeasureCheckRequest req;
        if (const auto* v = c.find("radii"))
          req.cfg.radii = as_double_array(*v, path + ".radii");
        if (const auto* v = c.find("paths"))
          req.cfg.paths = as_long(*v, path + ".paths");
        if (const auto* v = c.find("horizon"))
          req.cfg.horizon = as_double(*v, path + ".horizon");
        if (const auto* v = c.find("steps_per_unit_time"))
          req.cfg.steps_per_unit_time =
              static_cast<int>(as_long(*v, path + ".steps_per_unit_time"));
        if (const auto* v = c.find("inner_pairs"))
          req.cfg.triplet.inner_pairs = as_long(*v, path + ".inner_pairs");
        if (const auto* v = c.find("k_sigma"))
          req.cfg.k_sigma = as_double(*v, path + ".k_sigma");
        config.checks.emplace_back(req);
      } else {
        throw ConfigError(path + ".id: unknown check '" + id + "'");
      }
      c.finish();
    }
  }

  // --- output ---
  if (const auto* output = root.find("output")) {
    StrictObject out(*output, "output");
    if (const auto* dir = out.find("dir"))
      config.output.dir = dir->get<std::string>();
    if (const auto* formats = out.find("formats")) {
      if (!formats->is_array())
        throw ConfigError("output.formats: expected an array");
      config.output.formats.clear();
      for (const auto& f : *formats) {
        const std::string name = f.get<std::string>();
        if (name != "csv" && name != "json")
          throw ConfigError("output.formats: expected csv | json");
        config.output.formats.push_back(name);
      }
    }
    out.finish();
  }

  root.finish();
  return config;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw std::ios_base::failure("cannot open config file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  return from_json(doc);
}

std::vector<VerificationReport> run_checks(const ExperimentConfig& config,
                                           std::uint64_t seed, int threads) {
  std::vector<VerificationReport> reports;
  std::uint64_t chain = seed;
  for (const auto& request : config.checks) {
    const std::uint64_t check_seed = splitmix64_next(chain);
    std::visit(
        [&](const auto& req) {
          using T = std::decay_t<decltype(req)>;
          if constexpr (std::is_same_v<T, CfCheckRequest>) {
            reports.push_back(check_cf(config.spec, req.cfg, check_seed, threads));
          } else if constexpr (std::is_same_v<T, MomentsCheckRequest>) {
            reports.push_back(check_moments(config.spec, req.samples, check_seed,
                                            req.k_sigma, threads));
          } else if constexpr (std::is_same_v<T, ScalingCheckRequest>) {
            reports.push_back(check_scaling(config.spec, req.alpha, req.t,
                                            req.samples, check_seed, threads));
          } else if constexpr (std::is_same_v<T, GrowthCheckRequest>) {
            reports.push_back(check_growth_bounds(config.spec.base, req.grid,
                                                  req.samples, check_seed,
                                                  req.k_sigma, threads));
          } else if constexpr (std::is_same_v<T, TailCheckRequest>) {
            reports.push_back(check_tail_index(config.spec, req.samples,
                                               req.top_fraction,
                                               req.expected_range, check_seed,
                                               threads));
          } else {
            reports.push_back(
                check_jump_measure(config.spec, req.cfg, check_seed, threads));
          }
        },
        request);
  }
  return reports;
}

Vector parse_probe(const SpaceLayout& layout, const std::string& text) {
  std::vector<Eigen::VectorXd> comps;
  std::size_t start = 0;
  std::vector<std::vector<double>> raw(1);
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == ';' || text[i] == ',') {
      const std::string token = text.substr(start, i - start);
      if (token.empty())
        throw ConfigError("probe: empty coefficient in '" + text + "'");
      try {
        raw.back().push_back(std::stod(token));
      } catch (const std::exception&) {
        throw ConfigError("probe: bad number '" + token + "'");
      }
      if (i < text.size() && text[i] == ';') raw.emplace_back();
      start = i + 1;
    }
  }
  if (static_cast<int>(raw.size()) != layout.d())
    throw ConfigError("probe '" + text + "': expected " +
                      std::to_string(layout.d()) + " components");
  for (int j = 0; j < layout.d(); ++j) {
    if (static_cast<int>(raw[static_cast<std::size_t>(j)].size()) !=
        layout.dims[static_cast<std::size_t>(j)])
      throw ConfigError("probe '" + text + "': component " + std::to_string(j) +
                        " expects " +
                        std::to_string(layout.dims[static_cast<std::size_t>(j)]) +
                        " coefficients");
    comps.push_back(as_eigen(raw[static_cast<std::size_t>(j)]));
  }
  return Vector(layout, std::move(comps));
}

}  // namespace sublevy
