#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "submax/harness.hpp"

namespace py = pybind11;
using namespace submax;

namespace {

py::object json_to_py(const json& j) {
  switch (j.type()) {
    case json::value_t::null: return py::none();
    case json::value_t::boolean: return py::bool_(j.get<bool>());
    case json::value_t::number_integer:
    case json::value_t::number_unsigned:
      return py::int_(j.get<long long>());
    case json::value_t::number_float: return py::float_(j.get<double>());
    case json::value_t::string: return py::str(j.get<std::string>());
    case json::value_t::array: {
      py::list out;
      for (const auto& v : j) out.append(json_to_py(v));
      return out;
    }
    case json::value_t::object: {
      py::dict out;
      for (auto it = j.begin(); it != j.end(); ++it) {
        out[py::str(it.key())] = json_to_py(it.value());
      }
      return out;
    }
    default: return py::none();
  }
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Online Frank-Wolfe algorithms for monotone DR-submodular and "
            "submodular-set maximization";

  py::register_exception<ConfigError>(m, "ConfigError");

  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t>(), py::arg("seed"))
      .def_static("stream", &Rng::stream, py::arg("root"), py::arg("purpose"),
                  py::arg("a") = 0, py::arg("b") = 0)
      .def("uniform01", &Rng::uniform01)
      .def("normal", &Rng::normal);

  py::class_<RegionBounds>(m, "RegionBounds")
      .def_readonly("diameter", &RegionBounds::diameter)
      .def_readonly("radius", &RegionBounds::radius)
      .def_readonly("lower", &RegionBounds::lower);

  py::class_<FeasibleRegion>(m, "FeasibleRegion")
      .def("dim", &FeasibleRegion::dim)
      .def("lmo", &FeasibleRegion::lmo, py::arg("direction"))
      .def("contains", &FeasibleRegion::contains, py::arg("x"),
           py::arg("tol") = kMembershipTol)
      .def("bounds", &FeasibleRegion::bounds)
      .def("lower_bound", &FeasibleRegion::lower_bound);

  py::class_<ConstraintSet, FeasibleRegion>(m, "ConstraintSet")
      .def_static("box", &ConstraintSet::box, py::arg("upper"))
      .def_static("scaled_simplex", &ConstraintSet::scaled_simplex,
                  py::arg("budget"), py::arg("dim"))
      .def_static("uniform_matroid", &ConstraintSet::uniform_matroid,
                  py::arg("rank"), py::arg("dim"))
      .def_static("partition_matroid", &ConstraintSet::partition_matroid,
                  py::arg("part_of"), py::arg("caps"))
      .def("inscribed_orthant_radius",
           &ConstraintSet::inscribed_orthant_radius)
      .def("family", [](const ConstraintSet& s) {
        return family_name(s.family());
      });

  py::class_<InteriorSet, FeasibleRegion>(m, "InteriorSet")
      .def(py::init<ConstraintSet, double>(), py::arg("base"),
           py::arg("delta"))
      .def_property_readonly("delta", &InteriorSet::delta)
      .def_property_readonly("alpha", &InteriorSet::alpha)
      .def("discrepancy_bound", &InteriorSet::discrepancy_bound);

  m.def("shrink_interior", &shrink_interior, py::arg("set"), py::arg("delta"));

  py::class_<QuadraticDR>(m, "QuadraticDR")
      .def(py::init<Vec, Mat, Vec, double>(), py::arg("h"), py::arg("H"),
           py::arg("box_upper"), py::arg("sigma0") = 0.0)
      .def("value", &QuadraticDR::value)
      .def("grad", &QuadraticDR::grad)
      .def("stoch_grad", &QuadraticDR::stoch_grad)
      .def("lipschitz", &QuadraticDR::lipschitz)
      .def("smoothness", &QuadraticDR::smoothness)
      .def("value_bound", &QuadraticDR::value_bound);

  py::class_<SetObjective, SetObjectivePtr>(m, "SetObjective")
      .def("dim", &SetObjective::dim)
      .def("value", &SetObjective::value, py::arg("mask"))
      .def("value_bound", &SetObjective::value_bound);

  m.def(
      "random_coverage",
      [](int d, int universe, std::uint64_t seed) {
        Rng rng(seed);
        return make_random_set_objective(SetObjectiveKind::kCoverage, d,
                                         universe, rng);
      },
      py::arg("d"), py::arg("universe"), py::arg("seed"));
  m.def(
      "random_facility_location",
      [](int d, int universe, std::uint64_t seed) {
        Rng rng(seed);
        return make_random_set_objective(SetObjectiveKind::kFacilityLocation,
                                         d, universe, rng);
      },
      py::arg("d"), py::arg("universe"), py::arg("seed"));

  py::class_<MultilinearExtension>(m, "MultilinearExtension")
      .def(py::init<SetObjectivePtr>(), py::arg("f"))
      .def("value", &MultilinearExtension::value)
      .def("grad", &MultilinearExtension::grad)
      .def("stoch_grad", &MultilinearExtension::stoch_grad)
      .def("lipschitz", &MultilinearExtension::lipschitz)
      .def("smoothness", &MultilinearExtension::smoothness);

  m.def("lipschitz_smoothness_of_extension",
        &lipschitz_smoothness_of_extension, py::arg("m1"), py::arg("d"));

  m.def("rho_schedule_mono", &rho_schedule_mono, py::arg("k"), py::arg("K"));
  m.def("rho_schedule_bandit", &rho_schedule_bandit, py::arg("k"));
  m.def("sphere_sample", &sphere_sample, py::arg("rng"), py::arg("d"));
  m.def("ball_sample", &ball_sample, py::arg("rng"), py::arg("d"));

  py::class_<BlockPlan>(m, "BlockPlan")
      .def_readonly("T_effective", &BlockPlan::T_effective)
      .def_readonly("Q", &BlockPlan::Q)
      .def_readonly("K", &BlockPlan::K)
      .def_readonly("L", &BlockPlan::L)
      .def_readonly("eta", &BlockPlan::eta)
      .def_readonly("delta", &BlockPlan::delta);

  m.def("derive_params_mono", &derive_params_mono, py::arg("T"));
  m.def(
      "derive_params_bandit",
      [](long T, const ConstraintSet& set) {
        auto [plan, interior] = derive_params_bandit(T, set);
        return py::make_tuple(plan, std::move(interior));
      },
      py::arg("T"), py::arg("set"));

  py::class_<Matroid>(m, "Matroid")
      .def_static("uniform", &Matroid::uniform, py::arg("rank"), py::arg("d"))
      .def_static("partition", &Matroid::partition, py::arg("part_of"),
                  py::arg("caps"))
      .def("dim", &Matroid::dim)
      .def("is_independent", &Matroid::is_independent, py::arg("mask"));

  m.def("random_round", &random_round, py::arg("x"), py::arg("rng"));
  m.def("pipage_round", &pipage_round, py::arg("x"), py::arg("matroid"),
        py::arg("rng"));

  m.def(
      "impossibility_demo",
      [](int n_samples, std::uint64_t seed) {
        const auto rep = impossibility_demo(n_samples, seed);
        py::list samples;
        for (const auto& s : rep.samples) {
          py::dict d;
          d["x"] = py::make_tuple(s.x1, s.x2);
          d["family_a"] = py::make_tuple(s.p1_family_a, s.p2_family_a);
          d["family_b"] = py::make_tuple(s.p1_family_b, s.p2_family_b);
          samples.append(d);
        }
        py::dict out;
        out["samples"] = samples;
        out["max_residual_a"] = rep.max_residual_a;
        out["max_residual_b"] = rep.max_residual_b;
        out["min_solution_gap"] = rep.min_solution_gap;
        out["summary"] = rep.summary;
        return out;
      },
      py::arg("n_samples") = 100, py::arg("seed") = 7);

  m.def(
      "run_experiment",
      [](const std::string& config_path,
         const std::optional<std::string>& out_dir,
         const std::optional<std::uint64_t>& seed) {
        ExperimentConfig cfg = load_config_file(config_path);
        if (out_dir) cfg.out_dir = *out_dir;
        if (seed) cfg.seed = *seed;
        return json_to_py(run_experiment(cfg).summary);
      },
      py::arg("config_path"), py::arg("out_dir") = std::nullopt,
      py::arg("seed") = std::nullopt);

  m.def(
      "bench",
      [](const std::string& config_path) {
        return json_to_py(bench_only(load_config_file(config_path)));
      },
      py::arg("config_path"));

  m.def("list_families", [] { return json_to_py(list_families()); });

#ifdef VERSION_INFO
#define STR_IMPL(x) #x
#define STR(x) STR_IMPL(x)
  m.attr("__version__") = STR(VERSION_INFO);
#undef STR
#undef STR_IMPL
#else
  m.attr("__version__") = "0.1.0";
#endif
}
