#include <pybind11/functional.h>
#include <pybind11/operators.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "glvr/config.hpp"
#include "glvr/error.hpp"
#include "glvr/gantrain.hpp"
#include "glvr/harness.hpp"
#include "glvr/latentops.hpp"
#include "glvr/nets.hpp"
#include "glvr/recovery.hpp"
#include "glvr/storage.hpp"

namespace py = pybind11;

namespace {

glvr::ResampleCriterion as_criterion(const py::object& obj) {
  if (py::isinstance<py::str>(obj)) return glvr::ResampleCriterion::parse(obj.cast<std::string>());
  return obj.cast<glvr::ResampleCriterion>();
}

py::dict record_dict(const glvr::TrialRecord& r) {
  py::dict d;
  d["trial"] = r.trial;
  d["criterion"] = r.criterion.to_string();
  d["seed"] = r.seed;
  d["error"] = r.error;
  d["final_loss"] = r.final_loss;
  d["resamples"] = r.resamples;
  d["wall_ms"] = r.wall_ms;
  return d;
}

}  // namespace

PYBIND11_MODULE(_glvr, m) {
  m.doc() = "Latent vector recovery for dense GAN generators";

  py::register_exception<glvr::Error>(m, "GlvrError", PyExc_RuntimeError);

  py::class_<glvr::ResampleCriterion>(m, "Criterion")
      .def_static("parse", &glvr::ResampleCriterion::parse, py::arg("text"))
      .def_static("disabled", &glvr::ResampleCriterion::disabled)
      .def_static("hard", &glvr::ResampleCriterion::hard, py::arg("c"))
      .def_static("logistic", &glvr::ResampleCriterion::logistic, py::arg("a"), py::arg("b"))
      .def_static("trunc_normal", &glvr::ResampleCriterion::trunc_normal, py::arg("a"))
      .def("probability", &glvr::ResampleCriterion::probability, py::arg("z"))
      .def("label", &glvr::ResampleCriterion::label)
      .def("__str__", &glvr::ResampleCriterion::to_string)
      .def("__repr__", [](const glvr::ResampleCriterion& c) { return "Criterion('" + c.to_string() + "')"; })
      .def(py::self == py::self);

  m.def("resample_prob", [](const py::object& c, double z) { return as_criterion(c).probability(z); },
        py::arg("criterion"), py::arg("z"));
  m.def("per_step_prob", &glvr::per_step_prob, py::arg("p"), py::arg("expected_iters"));
  m.def("reconstruction_error",
        [](const std::vector<double>& a, const std::vector<double>& b) { return glvr::reconstruction_error(a, b); },
        py::arg("z_true"), py::arg("z_approx"));

  py::class_<glvr::Network>(m, "Network")
      .def_property_readonly("in_dim", &glvr::Network::in_dim)
      .def_property_readonly("out_dim", &glvr::Network::out_dim)
      .def_property_readonly("parameter_count", &glvr::Network::parameter_count)
      .def_readonly("seed", &glvr::Network::seed)
      .def_readonly("step", &glvr::Network::step)
      .def_property_readonly("is_generator",
                             [](const glvr::Network& n) { return n.kind == glvr::NetKind::generator; })
      .def("forward", [](const glvr::Network& n, const std::vector<double>& z) { return n.forward(z); },
           py::arg("z"))
      .def("flat_params", &glvr::Network::flat_params)
      .def("save", [](const glvr::Network& n, const std::filesystem::path& p) { glvr::save_checkpoint(n, p); },
           py::arg("path"));

  m.def("load_checkpoint", &glvr::load_checkpoint, py::arg("path"));
  m.def(
      "init_generator",
      [](std::vector<std::size_t> dims, std::uint64_t seed, double weight_std, const std::string& hidden,
         const std::string& output) {
        auto spec = glvr::NetSpec::generator(std::move(dims));
        auto act = [](const std::string& name) {
          if (name == "relu") return glvr::Activation::relu;
          if (name == "tanh") return glvr::Activation::tanh;
          if (name == "identity") return glvr::Activation::identity;
          if (name == "leaky_relu") return glvr::Activation::leaky_relu;
          if (name == "sigmoid") return glvr::Activation::sigmoid;
          throw glvr::ConfigError("unknown activation '" + name + "'");
        };
        spec.hidden_activation = act(hidden);
        spec.output_activation = act(output);
        return glvr::init_net(spec, seed, weight_std);
      },
      py::arg("dims"), py::arg("seed"), py::arg("weight_std") = glvr::kInitWeightStd,
      py::arg("hidden") = "relu", py::arg("output") = "tanh");

  m.def(
      "sample_prior",
      [](std::uint64_t seed, std::size_t d) {
        glvr::Rng rng(seed);
        return glvr::sample_prior(rng, d);
      },
      py::arg("seed"), py::arg("d"));

  m.def(
      "recover",
      [](const glvr::Network& gen, const std::vector<double>& x, const py::object& criterion,
         std::size_t iters, double lr, std::uint64_t seed, bool record_trace, bool reset_moments) {
        glvr::RecoveryConfig cfg;
        cfg.iterations = iters;
        cfg.lr = lr;
        cfg.seed = seed;
        cfg.record_trace = record_trace;
        cfg.reset_moments = reset_moments;
        const auto crit = as_criterion(criterion);
        glvr::RecoveryResult res;
        {
          py::gil_scoped_release release;
          res = glvr::recover(x, gen.layers, crit, cfg);
        }
        py::dict out;
        out["z"] = res.z;
        out["final_loss"] = res.final_loss;
        out["resample_counts"] = res.resample_counts;
        out["seed"] = res.seed;
        py::list trace;
        for (const auto& p : res.trace) trace.append(py::make_tuple(p.iter, p.loss, p.resamples));
        out["trace"] = trace;
        return out;
      },
      py::arg("generator"), py::arg("x"), py::arg("criterion") = "disabled", py::arg("iters") = 20000,
      py::arg("lr") = 0.01, py::arg("seed") = 0, py::arg("record_trace") = false,
      py::arg("reset_moments") = true);

  m.def("unit_vector", &glvr::unit_vector, py::arg("i"), py::arg("d"));
  m.def("slerp",
        [](const std::vector<double>& a, const std::vector<double>& b, double mu) { return glvr::slerp(a, b, mu); },
        py::arg("z1"), py::arg("z2"), py::arg("mu"));
  m.def(
      "great_circle",
      [](const std::vector<double>& z, std::size_t steps, std::uint64_t seed) {
        return glvr::great_circle(z, steps, seed).points;
      },
      py::arg("z"), py::arg("steps"), py::arg("seed") = 0);

  m.def(
      "run_paired_trials",
      [](const glvr::Network& gen, const std::vector<py::object>& criteria, std::size_t trials,
         std::uint64_t master_seed, std::size_t iters, double lr, std::size_t jobs) {
        std::vector<glvr::ResampleCriterion> crits;
        for (const auto& c : criteria) crits.push_back(as_criterion(c));
        glvr::HarnessConfig cfg;
        cfg.trials = trials;
        cfg.master_seed = master_seed;
        cfg.recovery.iterations = iters;
        cfg.recovery.lr = lr;
        cfg.jobs = jobs;
        std::vector<glvr::TrialRecord> records;
        {
          py::gil_scoped_release release;
          records = glvr::run_paired_trials(gen.layers, crits, cfg);
        }
        const auto table = glvr::summarize(records);
        py::list recs;
        for (const auto& r : records) recs.append(record_dict(r));
        py::dict out;
        out["records"] = recs;
        out["markdown"] = glvr::render_table(table, glvr::TableFormat::markdown);
        out["csv"] = glvr::render_table(table, glvr::TableFormat::csv);
        py::list rows;
        for (const auto& row : table.rows) {
          py::dict d;
          d["criterion"] = row.criterion.to_string();
          d["below_threshold"] = std::vector<double>(row.below_threshold.begin(), row.below_threshold.end());
          d["wins"] = row.wins ? py::cast(*row.wins) : py::none();
          d["sig_wins"] = row.sig_wins ? py::cast(*row.sig_wins) : py::none();
          d["avg_error"] = row.avg_error;
          rows.append(d);
        }
        out["rows"] = rows;
        return out;
      },
      py::arg("generator"), py::arg("criteria"), py::arg("trials"), py::arg("master_seed") = 0,
      py::arg("iters") = 20000, py::arg("lr") = 0.01, py::arg("jobs") = 1);

  m.def(
      "read_tensor",
      [](const std::filesystem::path& p) {
        const auto t = glvr::read_tensor(p);
        return py::make_tuple(t.shape(), t.data());
      },
      py::arg("path"));
  m.def(
      "write_tensor",
      [](const std::filesystem::path& p, std::vector<std::size_t> shape, std::vector<double> data) {
        glvr::write_tensor(p, glvr::Tensor(std::move(shape), std::move(data)));
      },
      py::arg("path"), py::arg("shape"), py::arg("data"));
}
