#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "tsorder/applications.hpp"
#include "tsorder/cli.hpp"
#include "tsorder/montecarlo.hpp"
#include "tsorder/order_statistics.hpp"

namespace py = pybind11;
using namespace tsorder;

namespace {

py::dict verdict_dict(const OrderVerdict& v) {
  py::dict d;
  d["relation"] = to_string(v.relation);
  d["outcome"] = to_string(v.outcome);
  d["max_violation"] = v.max_violation;
  if (v.witness) {
    py::dict w;
    w["x1"] = v.witness->x1;
    w["x2"] = v.witness->x2;
    w["v1"] = v.witness->v1;
    w["v2"] = v.witness->v2;
    d["witness"] = w;
  } else {
    d["witness"] = py::none();
  }
  d["grid"] = py::dict(py::arg("name") = v.grid.name,
                       py::arg("points") = v.grid.points,
                       py::arg("lo") = v.grid.lo, py::arg("hi") = v.grid.hi);
  if (!v.note.empty()) d["note"] = v.note;
  return d;
}

py::object json_to_py(const nlohmann::ordered_json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

SimConfig make_config(std::uint64_t seed, int replications, bool strict,
                      int bins) {
  SimConfig cfg;
  cfg.seed = seed;
  cfg.replications = replications;
  cfg.strict_conditioning = strict;
  cfg.histogram_bins = bins;
  return cfg;
}

py::dict histogram_dict(const Histogram& h) {
  py::dict d;
  d["edges"] = h.edges;
  d["counts"] = h.counts;
  d["draws"] = h.draws;
  d["accepted"] = h.accepted;
  d["recorded"] = h.recorded;
  d["cdf"] = h.cdf_at_edges();
  return d;
}

}  // namespace

PYBIND11_MODULE(_tsorder, m) {
  m.doc() = "lattice Laplace transforms, stochastic orders and random-size "
            "order statistics";
  m.attr("__version__") = kVersion;

  py::class_<LatticePmf>(m, "LatticePmf")
      .def_property_readonly(
          "convention",
          [](const LatticePmf& p) { return to_string(p.convention()); })
      .def_property_readonly("offset", &LatticePmf::offset)
      .def_property_readonly("probs", &LatticePmf::probs)
      .def_property_readonly("tail_mass", &LatticePmf::tail_mass)
      .def_property_readonly("label", &LatticePmf::label)
      .def("mass_at", &LatticePmf::mass_at, py::arg("x"),
           py::arg("tol") = 1e-9)
      .def("prob_at_least", &LatticePmf::prob_at_least)
      .def("__len__", &LatticePmf::size)
      .def("__repr__", [](const LatticePmf& p) {
        return "<LatticePmf " + p.label() + ">";
      });

  m.def(
      "gamma_delta",
      [](double a, double b, double eps) { return gamma_delta(a, b, eps); },
      py::arg("alpha"), py::arg("beta"),
      py::arg("eps") = LatticePmf::kDefaultTruncEps);
  m.def(
      "gamma_nabla",
      [](double a, double b, double eps) { return gamma_nabla(a, b, eps); },
      py::arg("alpha"), py::arg("beta"),
      py::arg("eps") = LatticePmf::kDefaultTruncEps);
  m.def(
      "geometric",
      [](const std::string& conv, double p, double eps) {
        return geometric(convention_from_string(conv), p, eps);
      },
      py::arg("convention"), py::arg("p"),
      py::arg("eps") = LatticePmf::kDefaultTruncEps);
  m.def(
      "from_table",
      [](const std::string& conv, double offset, std::vector<double> probs,
         const std::string& label) {
        return from_table(convention_from_string(conv), offset,
                          std::move(probs), label);
      },
      py::arg("convention"), py::arg("offset"), py::arg("probs"),
      py::arg("label") = "table");
  m.def(
      "degenerate",
      [](const std::string& conv, double point) {
        return degenerate(convention_from_string(conv), point);
      },
      py::arg("convention"), py::arg("point"));
  m.def("parse_distribution", &parse_distribution, py::arg("spec"));

  m.def("nabla_moment", &nabla_moment, py::arg("pmf"), py::arg("k"));
  m.def("delta_moment", &delta_moment, py::arg("pmf"), py::arg("k"));
  m.def("pi", &pi, py::arg("pmf"), py::arg("threshold"));
  m.def("convolve", &convolve, py::arg("a"), py::arg("b"));

  py::class_<TransformFn>(m, "TransformFn")
      .def("__call__", &TransformFn::operator())
      .def_property_readonly(
          "convention",
          [](const TransformFn& t) { return to_string(t.convention()); })
      .def_property_readonly("domain", &TransformFn::domain)
      .def("grid",
           [](const TransformFn& t, int points) {
             const EvalGrid g = EvalGrid::standard(t.convention(), points);
             return py::make_tuple(g.s, t.eval_grid(g));
           },
           py::arg("points") = 512);

  m.def("laplace", &laplace, py::arg("pmf"));
  m.def("derivative_k", &derivative_k, py::arg("transform"), py::arg("i"));
  m.def("derivative_series", &derivative_series, py::arg("pmf"), py::arg("i"));
  m.def(
      "fractional_derivative_series",
      [](const LatticePmf& x, double gamma, bool full_support) {
        return fractional_derivative_series(
            x, gamma,
            full_support ? FracSupport::full : FracSupport::from_gamma);
      },
      py::arg("pmf"), py::arg("gamma"), py::arg("full_support") = true);
  m.def("lstar_lstarstar", &lstar_lstarstar, py::arg("pmf"));
  m.def("psi_density", &psi_density, py::arg("pmf"));
  m.def("reliability_sequence", &reliability_sequence, py::arg("pmf"),
        py::arg("s"), py::arg("nmax"));

  m.def(
      "check_order",
      [](const std::string& relation, const LatticePmf& x, const LatticePmf& y,
         double i, double gamma, int grid_points, double tol) {
        const Relation rel = relation_from_string(relation);
        const EvalGrid grid = EvalGrid::standard(x.convention(), grid_points);
        OrderVerdict v;
        switch (rel) {
          case Relation::Lt: v = check_Lt(x, y, &grid, tol); break;
          case Relation::LtRatio: v = check_Lt_r(x, y, &grid, tol); break;
          case Relation::RevLtRatio: v = check_r_Lt_r(x, y, &grid, tol); break;
          case Relation::DiffLtRatio:
            v = check_d_i_Lt_r(x, y, i, &grid, tol);
            break;
          case Relation::CondDiffLtRatio:
            v = check_D_i_Lt_r(x, y, static_cast<int>(i), &grid, tol);
            break;
          case Relation::FracDiffLtRatio:
            v = check_D_gamma_Lt_r(x, y, gamma, &grid, tol);
            break;
          default:
            v = check_classical(rel, gridded_from_pmf(x), gridded_from_pmf(y),
                                tol);
        }
        return verdict_dict(v);
      },
      py::arg("relation"), py::arg("x"), py::arg("y"), py::arg("i") = 1.0,
      py::arg("gamma") = 1.5, py::arg("grid_points") = 512,
      py::arg("tol") = kOrderTol);

  py::class_<ContinuousDist>(m, "ContinuousDist")
      .def("pdf", &ContinuousDist::pdf)
      .def("cdf", &ContinuousDist::cdf)
      .def("survival", &ContinuousDist::survival)
      .def("quantile", &ContinuousDist::quantile)
      .def_property_readonly("label", &ContinuousDist::label);
  m.def("uniform01", &ContinuousDist::uniform01);
  m.def("exponential", &ContinuousDist::exponential, py::arg("rate"));
  m.def("weibull", &ContinuousDist::weibull, py::arg("shape"),
        py::arg("scale"));

  py::class_<OsSpec>(m, "OsSpec")
      .def_readonly("index", &OsSpec::index)
      .def_readonly("fos_anchor", &OsSpec::fos_anchor)
      .def_readonly("fractional", &OsSpec::fractional);
  m.def("integer_os", &OsSpec::integer_os, py::arg("i"), py::arg("parent"),
        py::arg("size"));
  m.def("fractional_os", &OsSpec::fractional_os, py::arg("gamma"),
        py::arg("parent"), py::arg("size"));

  m.def("os_pdf", &os_pdf_random_size, py::arg("spec"), py::arg("x"));
  m.def("os_cdf", &os_cdf_random_size, py::arg("spec"), py::arg("x"));
  m.def("os_pdf_u", &os_pdf_u, py::arg("spec"), py::arg("u"));
  m.def("os_cdf_u", &os_cdf_u, py::arg("spec"), py::arg("u"));
  m.def(
      "fos_pdf",
      [](const OsSpec& spec, double x) {
        return fos_pdf_random_size(spec, x);
      },
      py::arg("spec"), py::arg("x"));
  m.def(
      "fos_cdf",
      [](const OsSpec& spec, double x) {
        return fos_cdf_random_size(spec, x);
      },
      py::arg("spec"), py::arg("x"));
  m.def(
      "fos_pdf_u",
      [](const OsSpec& spec, double u) { return fos_pdf_u(spec, u); },
      py::arg("spec"), py::arg("u"));
  m.def(
      "fos_cdf_u",
      [](const OsSpec& spec, double u) { return fos_cdf_u(spec, u); },
      py::arg("spec"), py::arg("u"));

  m.def("extreme_min_sf", &extreme_min_sf, py::arg("size"), py::arg("parent"),
        py::arg("x"));
  m.def("extreme_min_pdf", &extreme_min_pdf, py::arg("size"),
        py::arg("parent"), py::arg("x"));
  m.def("extreme_max_pdf", &extreme_max_pdf, py::arg("size"),
        py::arg("parent"), py::arg("x"));
  m.def(
      "spacing_operator",
      [](const std::vector<double>& u, const std::string& kind, double order,
         int i) {
        return spacing_operator(u, convention_from_string(kind), order, i);
      },
      py::arg("u"), py::arg("kind"), py::arg("order"), py::arg("i"));

  m.def(
      "simulate_os",
      [](const OsSpec& spec, std::uint64_t seed, int replications, bool strict,
         int bins) {
        return histogram_dict(
            simulate_os(spec, make_config(seed, replications, strict, bins)));
      },
      py::arg("spec"), py::arg("seed") = 42, py::arg("replications") = 100000,
      py::arg("strict") = false, py::arg("bins") = 256);
  m.def(
      "simulate_fos",
      [](const OsSpec& spec, std::uint64_t seed, int replications, int bins) {
        return histogram_dict(
            simulate_fos(spec, make_config(seed, replications, false, bins)));
      },
      py::arg("spec"), py::arg("seed") = 42, py::arg("replications") = 100000,
      py::arg("bins") = 256);
  m.def(
      "simulate_compound",
      [](const LatticePmf& n, const LatticePmf& x, std::uint64_t seed,
         int replications, int grid_points) {
        const EvalGrid grid =
            EvalGrid::standard(Convention::nabla, grid_points);
        const CompoundResult r = simulate_compound(
            n, x, make_config(seed, replications, false, 256), grid);
        py::dict d;
        d["s"] = r.s;
        d["empirical"] = r.empirical;
        d["analytic"] = r.analytic;
        d["max_abs_dev"] = r.max_abs_dev;
        return d;
      },
      py::arg("size"), py::arg("summand"), py::arg("seed") = 42,
      py::arg("replications") = 100000, py::arg("grid_points") = 128);
  m.def("compound_transform", &compound_transform, py::arg("size"),
        py::arg("summand"), py::arg("s"));

  m.def("theorem_ids", &theorem_ids);
  m.def(
      "verify_theorem",
      [](const std::string& id, std::uint64_t seed, int replications) {
        const Battery battery = Battery::standard();
        const TheoremReport rep = verify_theorem(
            id, battery, make_config(seed, replications, false, 256));
        return json_to_py(rep.to_json());
      },
      py::arg("id"), py::arg("seed") = 42, py::arg("replications") = 20000);
  m.def("battery_labels", []() {
    const Battery battery = Battery::standard();
    std::vector<std::string> nabla, delta;
    for (const auto& mem : battery.nabla) nabla.push_back(mem.label);
    for (const auto& mem : battery.delta) delta.push_back(mem.label);
    return py::make_tuple(nabla, delta);
  });

  py::class_<BaselineHazard>(m, "BaselineHazard")
      .def("hazard", &BaselineHazard::hazard)
      .def("cum_hazard", &BaselineHazard::cum_hazard);
  m.def("exponential_hazard", &BaselineHazard::exponential, py::arg("rate"));
  m.def("weibull_hazard", &BaselineHazard::weibull, py::arg("shape"),
        py::arg("scale"));
  m.def(
      "cluster_likelihood",
      [](const std::vector<std::tuple<double, bool, std::vector<double>>>&
             subjects,
         const BaselineHazard& baseline, const std::vector<double>& coeffs,
         const LatticePmf& frailty) {
        ClusterData data;
        data.baseline = baseline;
        data.coefficients = coeffs;
        for (const auto& [t, e, z] : subjects) {
          data.subjects.push_back({t, e, z});
        }
        return cluster_likelihood(data, frailty);
      },
      py::arg("subjects"), py::arg("baseline"), py::arg("coefficients"),
      py::arg("frailty"));
  m.def(
      "cluster_survival",
      [](const std::vector<std::tuple<double, bool, std::vector<double>>>&
             subjects,
         const BaselineHazard& baseline, const std::vector<double>& coeffs,
         const LatticePmf& frailty) {
        ClusterData data;
        data.baseline = baseline;
        data.coefficients = coeffs;
        for (const auto& [t, e, z] : subjects) {
          data.subjects.push_back({t, e, z});
        }
        return cluster_survival(data, frailty);
      },
      py::arg("subjects"), py::arg("baseline"), py::arg("coefficients"),
      py::arg("frailty"));
  m.def(
      "ns_hazard_compare",
      [](const LatticePmf& x, const LatticePmf& y,
         const std::vector<double>& s_grid, int nmax) {
        return verdict_dict(ns_hazard_compare(x, y, s_grid, nmax));
      },
      py::arg("x"), py::arg("y"), py::arg("s_grid"), py::arg("nmax") = 16);
}
