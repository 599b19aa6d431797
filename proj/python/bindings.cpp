// Python bindings. Matrices cross the boundary as float64 numpy arrays,
// permutations as lists of 0-based indices.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "unshuffle/estimators.hpp"
#include "unshuffle/experiments.hpp"
#include "unshuffle/lap.hpp"
#include "unshuffle/metrics.hpp"
#include "unshuffle/model.hpp"

namespace py = pybind11;
using namespace unshuffle;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

DenseMatrix to_matrix(const Array& a) {
  if (a.ndim() == 1) {
    const auto n = static_cast<std::size_t>(a.shape(0));
    return DenseMatrix(n, 1, std::vector<double>(a.data(), a.data() + n));
  }
  if (a.ndim() != 2) throw std::invalid_argument("expected a 1-D or 2-D array");
  const auto r = static_cast<std::size_t>(a.shape(0));
  const auto c = static_cast<std::size_t>(a.shape(1));
  return DenseMatrix(r, c, std::vector<double>(a.data(), a.data() + r * c));
}

Array to_array(const DenseMatrix& m) {
  Array out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

std::vector<std::size_t> to_list(const Permutation& p) {
  return {p.map().begin(), p.map().end()};
}

py::dict estimate_dict(const EstimationResult& r) {
  py::dict d;
  d["perm"] = to_list(r.perm_hat);
  d["b"] = to_array(r.b_hat);
  d["objective"] = r.objective;
  d["iterations"] = r.iterations;
  return d;
}

Snr snr_from_py(double v) {
  return std::isinf(v) && v > 0 ? Snr::noiseless() : Snr::finite(v);
}

}  // namespace

PYBIND11_MODULE(_unshuffle, m) {
  m.doc() = "Shuffled linear regression: one-step estimator and tools";

  py::register_exception<RankDeficientError>(m, "RankDeficientError",
                                             PyExc_RuntimeError);

  m.def("one_step_estimate",
        [](const Array& x, const Array& y) {
          return estimate_dict(one_step_estimate(to_matrix(x), to_matrix(y)));
        },
        py::arg("x"), py::arg("y"));

  m.def("oracle_permutation_estimate",
        [](const Array& x, const Array& y, const Array& b) {
          return to_list(oracle_permutation_estimate(
              to_matrix(x), to_matrix(y), to_matrix(b)));
        },
        py::arg("x"), py::arg("y"), py::arg("b_true"));

  m.def("least_squares_signal",
        [](const Array& x, const Array& y, std::vector<std::size_t> perm) {
          return to_array(least_squares_signal(to_matrix(x), to_matrix(y),
                                               Permutation(std::move(perm))));
        },
        py::arg("x"), py::arg("y"), py::arg("perm"));

  m.def("alternating_minimization",
        [](const Array& x, const Array& y, std::vector<std::size_t> init_perm,
           const Array& init_b, std::size_t max_iters) {
          const AltMinResult r = alternating_minimization(
              to_matrix(x), to_matrix(y), Permutation(std::move(init_perm)),
              to_matrix(init_b), max_iters);
          py::dict d = estimate_dict(r.estimate);
          d["converged"] = r.converged;
          std::vector<double> residuals;
          for (const auto& step : r.trace) residuals.push_back(step.residual);
          d["residuals"] = residuals;
          return d;
        },
        py::arg("x"), py::arg("y"), py::arg("init_perm"), py::arg("init_b"),
        py::arg("max_iters") = 100);

  m.def("lap_maximize",
        [](const Array& cost) {
          const Assignment a = lap_maximize(to_matrix(cost));
          return py::make_tuple(to_list(a.perm), a.objective);
        },
        py::arg("cost"));

  m.def("lap_brute_force",
        [](const Array& cost) {
          const Assignment a = lap_brute_force(to_matrix(cost));
          return py::make_tuple(to_list(a.perm), a.objective);
        },
        py::arg("cost"));

  m.def("sample_design_matrix",
        [](std::size_t n, std::size_t p, const std::string& dist,
           std::uint64_t seed, bool normalize_variance) {
          return to_array(sample_design_matrix(n, p, parse_distribution(dist),
                                               seed, {normalize_variance}));
        },
        py::arg("n"), py::arg("p"), py::arg("dist") = "gaussian",
        py::arg("seed") = 0, py::arg("normalize_variance") = false);

  m.def("sample_permutation",
        [](std::size_t n, std::size_t h, std::uint64_t seed) {
          return to_list(sample_permutation_with_hamming_weight(n, h, seed));
        },
        py::arg("n"), py::arg("h"), py::arg("seed") = 0);

  m.def("build_canonical_signal",
        [](std::size_t p, std::size_t mm, double scale) {
          return to_array(build_canonical_signal(p, mm, scale));
        },
        py::arg("p"), py::arg("m"), py::arg("scale") = 1.0);

  m.def("synthesize_instance",
        [](std::size_t n, std::size_t h, const Array& b, double sigma,
           const std::string& dist, std::uint64_t seed) {
          const DenseMatrix bm = to_matrix(b);
          const ProblemInstance inst = synthesize_instance(
              n, bm.rows(), bm.cols(), h, parse_distribution(dist), bm, sigma,
              seed);
          py::dict d;
          d["x"] = to_array(inst.x);
          d["y"] = to_array(inst.y);
          d["b_true"] = to_array(inst.b_true);
          d["perm_true"] = to_list(inst.perm_true);
          d["sigma"] = inst.noise_sigma;
          return d;
        },
        py::arg("n"), py::arg("h"), py::arg("b_true"), py::arg("sigma") = 0.0,
        py::arg("dist") = "gaussian", py::arg("seed") = 0);

  m.def("hamming_distance",
        [](std::vector<std::size_t> a, std::vector<std::size_t> b) {
          return hamming_distance(Permutation(std::move(a)),
                                  Permutation(std::move(b)));
        },
        py::arg("a"), py::arg("b"));

  m.def("stable_rank",
        [](const Array& b) { return stable_rank(to_matrix(b)); },
        py::arg("b"));
  m.def("snr",
        [](const Array& b, double sigma) {
          const DenseMatrix bm = to_matrix(b);
          const Snr s = snr(bm, bm.cols(), sigma);
          return s.is_noiseless() ? std::numeric_limits<double>::infinity()
                                  : s.value();
        },
        py::arg("b"), py::arg("sigma"));
  m.def("logdet_ratio",
        [](const Array& b, double sigma, std::size_t n) {
          return logdet_ratio(to_matrix(b), sigma, n);
        },
        py::arg("b"), py::arg("sigma"), py::arg("n"));
  m.def("minimax_logdet_threshold", &minimax_logdet_threshold, py::arg("n"));
  m.def("classify_regime",
        [](double srank, std::size_t n, double c0) {
          return std::string(to_string(classify_regime(srank, n, {c0})));
        },
        py::arg("srank"), py::arg("n"), py::arg("c0") = 2.0);

  // Runs a Monte-Carlo sweep and returns the CSV text. Use float("inf") in
  // snr_grid for the noiseless point.
  m.def("run_sweep",
        [](std::size_t n, std::size_t p, std::size_t mm, std::size_t h,
           const std::vector<double>& snr_grid, std::size_t trials,
           std::uint64_t seed, const std::string& dist,
           const std::string& estimator, std::size_t threads) {
          ExperimentConfig c;
          c.n = n;
          c.p = p;
          c.m = mm;
          c.h = h;
          for (double v : snr_grid) c.snr_grid.push_back(snr_from_py(v));
          c.trials = trials;
          c.master_seed = seed;
          c.dist = parse_distribution(dist);
          c.estimator = parse_estimator(estimator);
          SweepResult r;
          {
            py::gil_scoped_release release;
            r = run_sweep(c, threads);
          }
          std::ostringstream out;
          write_csv(out, r);
          return out.str();
        },
        py::arg("n"), py::arg("p"), py::arg("m"), py::arg("h"),
        py::arg("snr_grid"), py::arg("trials") = 100, py::arg("seed") = 1,
        py::arg("dist") = "gaussian", py::arg("estimator") = "one_step",
        py::arg("threads") = 1);

  m.def("reproduce_failure_demo",
        [](std::size_t n, std::size_t iters, std::uint64_t seed) {
          std::vector<py::tuple> rows;
          for (const auto& r : reproduce_failure_demo(n, iters, seed))
            rows.push_back(py::make_tuple(r.iteration, r.hamming, r.residual));
          return rows;
        },
        py::arg("n") = 1000, py::arg("iters") = 100, py::arg("seed") = 1);
}
