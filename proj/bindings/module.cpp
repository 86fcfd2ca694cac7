#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sublevy/config.hpp"

namespace py = pybind11;
using namespace sublevy;

namespace {

Vector vector_d1(const Eigen::VectorXd& flat) {
  const SpaceLayout layout{static_cast<int>(flat.size())};
  return Vector::from_flat(layout, flat);
}

std::string report_json(const VerificationReport& report) {
  return report.to_json().dump();
}

SubordinatedProcessSpec spec_from_config_json(const std::string& text) {
  return ExperimentConfig::from_json(nlohmann::json::parse(text)).spec;
}

py::dict quad_result_dict(const QuadResult& q) {
  py::dict out;
  out["value"] = Eigen::VectorXd(q.value);
  out["quad_error"] = Eigen::VectorXd(q.quad_error);
  out["mc_se"] = Eigen::VectorXd(q.mc_se);
  out["converged"] = q.converged;
  out["theta_max"] = q.theta_max;
  out["intervals_used"] = q.intervals_used;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Simulation and statistical verification of multivariate-subordinated "
      "Levy processes on truncated Hilbert spaces.";

  py::class_<SpaceLayout>(m, "SpaceLayout")
      .def(py::init<std::vector<int>>(), py::arg("dims"))
      .def_readonly("dims", &SpaceLayout::dims)
      .def_property_readonly("d", &SpaceLayout::d)
      .def("total_dim", &SpaceLayout::total_dim)
      .def("__repr__", [](const SpaceLayout& l) {
        std::string s = "SpaceLayout([";
        for (std::size_t i = 0; i < l.dims.size(); ++i)
          s += (i ? "," : "") + std::to_string(l.dims[i]);
        return s + "])";
      });

  py::class_<Vector>(m, "Vector")
      .def_static("zero", &Vector::zero, py::arg("layout"))
      .def_static("from_flat", &Vector::from_flat, py::arg("layout"),
                  py::arg("flat"))
      .def_property_readonly("layout", &Vector::layout)
      .def("flat", &Vector::flat)
      .def("norm", &Vector::norm);

  m.def("inner", &inner, py::arg("u"), py::arg("v"),
        "<u|v> = sum_j <u_j|v_j>_j");

  py::class_<CovOperator>(m, "CovOperator")
      .def_static("diagonal", &CovOperator::diagonal, py::arg("layout"),
                  py::arg("eigenvalues"))
      .def_static("identity", &CovOperator::identity, py::arg("layout"))
      .def_static("zero", &CovOperator::zero, py::arg("layout"))
      .def_static("from_matrix", &CovOperator::from_matrix, py::arg("layout"),
                  py::arg("matrices"))
      .def_property_readonly("layout", &CovOperator::layout)
      .def("apply", &CovOperator::apply)
      .def("quad_form", &CovOperator::quad_form)
      .def("trace", &CovOperator::trace)
      .def("to_dense", &CovOperator::to_dense);

  py::class_<SubordinatorSpec>(m, "SubordinatorSpec")
      .def_static("pure_drift", &SubordinatorSpec::pure_drift, py::arg("a0"))
      .def_property_readonly("d", &SubordinatorSpec::d)
      .def_readonly("drift", &SubordinatorSpec::drift);

  py::class_<BaseProcessSpec>(m, "BaseProcessSpec")
      .def_readonly("layout", &BaseProcessSpec::layout)
      .def("mean", &BaseProcessSpec::mean)
      .def("mean_zero", &BaseProcessSpec::mean_zero)
      .def("cov_dense", &BaseProcessSpec::cov_dense);

  py::class_<SubordinatedProcessSpec>(m, "SubordinatedProcessSpec")
      .def_readonly("base", &SubordinatedProcessSpec::base)
      .def_readonly("subordinator", &SubordinatedProcessSpec::subordinator)
      .def_property_readonly("d", &SubordinatedProcessSpec::d);

  // Family constructors (single-subordinator layouts).
  m.def(
      "make_hnig",
      [](double s, double c, const Eigen::VectorXd& b, const CovOperator& q) {
        return make_hnig(HNIGParams{s, c, vector_d1(b), q});
      },
      py::arg("s"), py::arg("c"), py::arg("b"), py::arg("q"));
  m.def(
      "make_stable",
      [](double alpha, const CovOperator& q) {
        return make_stable(StableParams{alpha, q});
      },
      py::arg("alpha"), py::arg("q"));
  m.def(
      "make_hvg",
      [](double a, const Eigen::VectorXd& b, const CovOperator& q) {
        return make_hvg(HVGParams{a, vector_d1(b), q});
      },
      py::arg("a"), py::arg("b"), py::arg("q"));

  m.def("spec_from_config_json", &spec_from_config_json, py::arg("text"),
        "Build a process spec from the JSON config schema's 'spec' semantics "
        "(pass a whole config document).");

  m.def(
      "subordinated_exponent",
      [](const SubordinatedProcessSpec& spec, const Eigen::VectorXd& u) {
        return subordinated_exponent(
            spec, Vector::from_flat(spec.base.layout, u));
      },
      py::arg("spec"), py::arg("u"),
      "rho(u) = psi(phi_1(u_1), ..., phi_d(u_d)) for flat coefficients u");

  m.def(
      "laplace_exponent",
      [](const SubordinatorSpec& spec, const std::vector<Complex>& s) {
        return laplace_exponent(spec, s);
      },
      py::arg("spec"), py::arg("s"));

  m.def("sample", &sample_X_matrix, py::arg("spec"), py::arg("t"), py::arg("n"),
        py::arg("seed"), py::arg("stream_base") = 0, py::arg("threads") = 1,
        "n rows of X(t) coefficients; deterministic given (seed, stream_base)");

  m.def(
      "sample_path",
      [](const SubordinatedProcessSpec& spec, const std::vector<double>& grid,
         std::uint64_t seed) {
        Rng rng(seed);
        const std::vector<Vector> path = simulate_path(spec, grid, rng);
        Eigen::MatrixXd out(static_cast<long>(path.size()),
                            spec.base.layout.total_dim());
        for (std::size_t k = 0; k < path.size(); ++k)
          out.row(static_cast<long>(k)) = path[k].flat();
        return out;
      },
      py::arg("spec"), py::arg("grid"), py::arg("seed"));

  m.def(
      "classify_json",
      [](const SubordinatedProcessSpec& spec) {
        const IntegrabilityReport report = classify_integrability(spec);
        nlohmann::json comps = nlohmann::json::array();
        for (const auto& c : report.components)
          comps.push_back({{"label", to_string(c.label)},
                           {"rule", c.governing_rule},
                           {"square_integrable", c.square_integrable()}});
        return nlohmann::json{
            {"components", comps},
            {"x_integrable", to_string(report.x_integrable)},
            {"x_mean_zero", to_string(report.x_mean_zero)},
            {"x_square_integrable", to_string(report.x_square_integrable)}}
            .dump();
      },
      py::arg("spec"));

  m.def(
      "mean_of_x",
      [](const SubordinatedProcessSpec& spec) { return mean_of_X(spec).flat(); },
      py::arg("spec"));
  m.def(
      "cov_of_x",
      [](const SubordinatedProcessSpec& spec) {
        return cov_operator_of_X(spec).to_dense();
      },
      py::arg("spec"));

  py::class_<JumpMeasure>(m, "JumpMeasure")
      .def("tail_mass",
           [](const JumpMeasure& mu, double r) {
             return quad_result_dict(mu.tail_mass(r));
           })
      .def("halfspace_mass",
           [](const JumpMeasure& mu, const Eigen::VectorXd& v, double q) {
             return quad_result_dict(mu.halfspace_mass(
                 Vector::from_flat(mu.spec().base.layout, v), q));
           })
      .def("large_jump_mean", [](const JumpMeasure& mu) {
        return quad_result_dict(mu.large_jump_mean());
      });

  m.def(
      "triplet",
      [](const SubordinatedProcessSpec& spec, std::uint64_t seed,
         long inner_pairs) {
        TripletConfig cfg;
        cfg.seed = seed;
        cfg.inner_pairs = inner_pairs;
        SubordinatedTriplet t = subordinated_triplet(spec, cfg);
        py::dict out;
        out["beta"] = t.beta.flat();
        out["gamma_dense"] = t.gamma.to_dense();
        out["beta_quadrature"] = quad_result_dict(t.beta_quadrature);
        out["mu"] = t.mu;
        return out;
      },
      py::arg("spec"), py::arg("seed") = 0, py::arg("inner_pairs") = 10000);

  // Verification checks; reports returned as JSON strings.
  m.def(
      "check_cf_json",
      [](const SubordinatedProcessSpec& spec, int probes, long samples,
         double t, std::uint64_t seed, int threads) {
        CFCheckConfig cfg;
        cfg.probes = probes;
        cfg.samples = samples;
        cfg.t = t;
        return report_json(check_cf(spec, cfg, seed, threads));
      },
      py::arg("spec"), py::arg("probes") = 20, py::arg("samples") = 100000,
      py::arg("t") = 1.0, py::arg("seed") = 0, py::arg("threads") = 1);
  m.def(
      "check_moments_json",
      [](const SubordinatedProcessSpec& spec, long samples, std::uint64_t seed,
         int threads) {
        return report_json(check_moments(spec, samples, seed, 4.0, threads));
      },
      py::arg("spec"), py::arg("samples") = 100000, py::arg("seed") = 0,
      py::arg("threads") = 1);
  m.def(
      "check_scaling_json",
      [](const SubordinatedProcessSpec& spec, double alpha, double t,
         long samples, std::uint64_t seed, int threads) {
        return report_json(
            check_scaling(spec, alpha, t, samples, seed, threads));
      },
      py::arg("spec"), py::arg("alpha"), py::arg("t") = 2.0,
      py::arg("samples") = 100000, py::arg("seed") = 0, py::arg("threads") = 1);
  m.def(
      "check_tail_index_json",
      [](const SubordinatedProcessSpec& spec, long samples, double top_fraction,
         std::optional<std::pair<double, double>> expected_range,
         std::uint64_t seed, int threads) {
        return report_json(check_tail_index(spec, samples, top_fraction,
                                            expected_range, seed, threads));
      },
      py::arg("spec"), py::arg("samples") = 1000000,
      py::arg("top_fraction") = 0.01, py::arg("expected_range") = py::none(),
      py::arg("seed") = 0, py::arg("threads") = 1);
  m.def(
      "run_checks_json",
      [](const std::string& config_text,
         std::optional<std::uint64_t> seed_override, int threads) {
        const ExperimentConfig config =
            ExperimentConfig::from_json(nlohmann::json::parse(config_text));
        const std::uint64_t seed =
            seed_override ? *seed_override : config.run.seed;
        nlohmann::json checks = nlohmann::json::array();
        bool pass = true;
        for (const auto& rep : run_checks(config, seed, threads)) {
          checks.push_back(rep.to_json());
          pass = pass && (rep.pass || rep.skipped);
        }
        return nlohmann::json{{"seed", seed}, {"pass", pass}, {"checks", checks}}
            .dump();
      },
      py::arg("config_text"), py::arg("seed") = py::none(),
      py::arg("threads") = 1,
      "Run the config's check battery; returns the report document as JSON.");

  m.attr("__version__") = "0.1.0";
}
