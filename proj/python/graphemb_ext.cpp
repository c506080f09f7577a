#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>

#include "graphemb/analysis.hpp"
#include "graphemb/bindings.hpp"
#include "graphemb/codes.hpp"
#include "graphemb/error.hpp"
#include "graphemb/graphs.hpp"
#include "graphemb/parallel.hpp"
#include "graphemb/sweep.hpp"
#include "graphemb/trials.hpp"
#include "graphemb/verify.hpp"

namespace py = pybind11;
using namespace graphemb;

namespace {

BindingKind parse_binding_kind(const std::string& name) {
  for (auto k : {BindingKind::Tensor, BindingKind::Hadamard, BindingKind::PermutedHadamard, BindingKind::Convolution,
                 BindingKind::CircularCorrelation}) {
    if (to_string(k) == name) return k;
  }
  throw Error(Errc::UnsupportedScheme, "unknown binding scheme '" + name + "'");
}

Side parse_side(const std::string& name) {
  if (name == "left") return Side::Left;
  if (name == "right") return Side::Right;
  throw Error(Errc::InvalidArgument, "side must be 'left' or 'right'");
}

py::array entries_to_numpy(const Entries& e) {
  return std::visit([](const auto& v) { return py::array(py::cast(v)); }, e);
}

template <typename T>
py::array matrix_to_numpy(const Matrix<T>& m) {
  py::array_t<T> out({m.rows, m.cols});
  std::copy(m.data.begin(), m.data.end(), out.mutable_data());
  return out;
}

py::array payload_to_numpy(const Payload& p) {
  return std::visit(
      [](const auto& v) -> py::array {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, RealMatrix> || std::is_same_v<V, ComplexMatrix>) {
          return matrix_to_numpy(v);
        } else {
          return py::array(py::cast(v));
        }
      },
      p);
}

CodeVector code_from_numpy(const std::string& scheme, py::array values) {
  const CodeScheme s = parse_code_scheme(scheme);
  if (values.ndim() != 1) throw Error(Errc::InvalidArgument, "code entries must be one-dimensional");
  if (is_complex_scheme(s)) return CodeVector(s, values.cast<ComplexVector>());
  return CodeVector(s, values.cast<RealVector>());
}

SchemeOp make_scheme_op(const std::string& scheme, const std::string& op, unsigned order) {
  const SchemeFamily f = parse_scheme_family(scheme);
  if (op == "vertex-query") return SchemeOp::vertex_query(f);
  if (op == "edge-composition") return SchemeOp::edge_composition(f);
  if (op == "general") return SchemeOp::general(f, order);
  throw Error(Errc::InvalidArgument, "op must be vertex-query, edge-composition or general");
}

py::dict sweep_row_dict(const SweepRow& r) {
  py::dict d;
  d["k"] = r.k;
  d["mean_present"] = r.mean_present;
  d["sd_present"] = r.sd_present;
  d["mean_absent"] = r.mean_absent;
  d["sd_absent"] = r.sd_absent;
  d["recovery_rate"] = r.recovery_rate;
  d["theory_snr"] = r.theory_snr;
  d["theory_recovery_bound"] = r.theory_recovery_bound;
  return d;
}

}  // namespace

PYBIND11_MODULE(_graphemb, m) {
  m.doc() = "Graph embeddings with tensor and Hadamard binding";

  // Leaked on purpose: the exception type must outlive the module's teardown.
  static PyObject* error_type = py::exception<Error>(m, "GraphembError", PyExc_RuntimeError).inc_ref().ptr();
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::handle(error_type)(py::str(e.what()));
      exc.attr("code") = py::str(std::string(to_string(e.code())));
      PyErr_SetObject(error_type, exc.ptr());
    }
  });

  py::class_<CodeVector>(m, "CodeVector")
      .def(py::init(&code_from_numpy), py::arg("scheme"), py::arg("values"))
      .def_property_readonly("dim", &CodeVector::dim)
      .def_property_readonly("scheme", [](const CodeVector& c) { return std::string(to_string(c.scheme())); })
      .def_property_readonly("is_complex", &CodeVector::is_complex)
      .def("conforms", &CodeVector::conforms, py::arg("tol") = 1e-9)
      .def("to_numpy", [](const CodeVector& c) { return entries_to_numpy(c.entries()); })
      .def("__eq__", [](const CodeVector& a, const CodeVector& b) { return a == b; })
      .def("__repr__", [](const CodeVector& c) {
        return "CodeVector(scheme='" + std::string(to_string(c.scheme())) + "', dim=" + std::to_string(c.dim()) + ")";
      });

  m.def(
      "sample_code",
      [](const std::string& scheme, std::size_t dim, std::uint64_t seed) {
        Rng rng = make_rng(seed);
        return sample_code(parse_code_scheme(scheme), dim, rng);
      },
      py::arg("scheme"), py::arg("dim"), py::arg("seed") = 0);
  m.def("dot", &dot);
  m.def("similarity", &similarity);

  py::class_<Codebook>(m, "Codebook")
      .def(py::init([](std::size_t n, std::size_t dim, const std::string& scheme, std::uint64_t seed) {
             return make_codebook(n, dim, parse_code_scheme(scheme), seed);
           }),
           py::arg("n"), py::arg("dim"), py::arg("scheme"), py::arg("seed") = 0)
      .def("__len__", &Codebook::size)
      .def("__getitem__", &Codebook::at)
      .def_property_readonly("dim", &Codebook::dim)
      .def_property_readonly("seed", &Codebook::seed)
      .def_property_readonly("scheme", [](const Codebook& c) { return std::string(to_string(c.scheme())); })
      .def("__eq__", [](const Codebook& a, const Codebook& b) { return a == b; })
      .def("to_bytes",
           [](const Codebook& c) {
             std::ostringstream out(std::ios::binary);
             c.write_binary(out);
             return py::bytes(out.str());
           })
      .def_static("from_bytes",
                  [](const py::bytes& b) {
                    std::istringstream in(std::string(b), std::ios::binary);
                    return Codebook::read_binary(in);
                  })
      .def("to_csv",
           [](const Codebook& c) {
             std::ostringstream out;
             c.write_csv(out);
             return out.str();
           })
      .def_static("from_csv", [](const std::string& text) {
        std::istringstream in(text);
        return Codebook::read_csv(in);
      });

  m.def(
      "theoretical_dot_moments",
      [](const std::string& scheme, std::size_t dim) {
        const DotMoments mo = theoretical_dot_moments(parse_code_scheme(scheme), dim);
        return py::make_tuple(mo.mean, mo.variance);
      },
      py::arg("scheme"), py::arg("dim"));

  py::class_<BindingScheme>(m, "BindingScheme")
      .def(py::init([](const std::string& kind, std::size_t dim) { return BindingScheme::of(parse_binding_kind(kind), dim); }),
           py::arg("kind"), py::arg("dim") = 0)
      .def_property_readonly("kind", [](const BindingScheme& s) { return std::string(to_string(s.kind())); })
      .def_property_readonly("has_matrix_payload", &BindingScheme::has_matrix_payload);

  py::class_<EdgeEmbedding>(m, "EdgeEmbedding")
      .def_property_readonly("dim", &EdgeEmbedding::dim)
      .def_property_readonly("is_matrix", &EdgeEmbedding::is_matrix)
      .def_property_readonly("is_complex", &EdgeEmbedding::is_complex)
      .def_property_readonly("scheme", &EdgeEmbedding::scheme)
      .def("to_numpy", [](const EdgeEmbedding& e) { return payload_to_numpy(e.payload()); });

  m.def("bind", &bind, py::arg("scheme"), py::arg("a"), py::arg("b"));
  m.def("bind_via_fft", &bind_via_fft, py::arg("scheme"), py::arg("a"), py::arg("b"));
  m.def(
      "unbind",
      [](const BindingScheme& s, const CodeVector& key, const EdgeEmbedding& e, const std::string& side) {
        return unbind(s, key, e, parse_side(side));
      },
      py::arg("scheme"), py::arg("key"), py::arg("edge"), py::arg("side") = "left");
  m.def("compose_edges", &compose_edges, py::arg("e1"), py::arg("e2"));

  py::class_<GraphSpec>(m, "GraphSpec")
      .def(py::init<>())
      .def_readonly("vertices", &GraphSpec::vertices)
      .def_readonly("edges", &GraphSpec::edges)
      .def("add_vertex", &GraphSpec::add_vertex)
      .def("add_edge", &GraphSpec::add_edge, py::arg("domain"), py::arg("codomain"))
      .def("index_of", &GraphSpec::index_of);
  m.def(
      "parse_edge_list",
      [](const std::string& text) {
        std::istringstream in(text);
        return parse_edge_list(in);
      },
      py::arg("text"));
  m.def("read_edge_list", &read_edge_list, py::arg("path"));
  m.def("max_connectivity", &max_connectivity);

  py::class_<GraphEmbedding>(m, "GraphEmbedding")
      .def_property_readonly("dim", &GraphEmbedding::dim)
      .def_property_readonly("edge_count", &GraphEmbedding::edge_count)
      .def_property_readonly("composed", &GraphEmbedding::composed)
      .def("add_edge", &GraphEmbedding::add_edge, py::arg("domain"), py::arg("codomain"))
      .def("to_numpy", [](const GraphEmbedding& g) { return payload_to_numpy(g.payload()); });
  m.def("embed_graph", &embed_graph, py::arg("graph"), py::arg("codebook"), py::arg("scheme"));
  m.def(
      "vertex_query",
      [](const CodeVector& v, const GraphEmbedding& g, const std::string& side) {
        return vertex_query(v, g, parse_side(side));
      },
      py::arg("v"), py::arg("graph"), py::arg("side") = "left");
  m.def("edge_compose", &edge_compose, py::arg("graph"));
  m.def("edge_query", &edge_query, py::arg("s"), py::arg("t"), py::arg("graph"), py::arg("raw") = false);
  m.def(
      "cleanup",
      [](const CodeVector& output, const std::vector<CodeVector>& candidates, std::optional<std::size_t> truth) {
        const QueryOutcome q = cleanup(output, candidates, truth);
        py::dict d;
        d["winner"] = q.winner;
        d["scores"] = q.scores;
        d["correct"] = q.correct;
        return d;
      },
      py::arg("output"), py::arg("candidates"), py::arg("truth") = py::none());

  m.def(
      "snr_theory",
      [](const std::string& scheme, const std::string& op, std::size_t dim, std::size_t k, unsigned order) {
        const SnrTheory t = snr_theory(make_scheme_op(scheme, op, order), dim, k);
        return py::make_tuple(t.signal_sq, t.noise_sq, t.snr);
      },
      py::arg("scheme"), py::arg("op"), py::arg("dim"), py::arg("k"), py::arg("order") = 1);
  m.def(
      "snr_full_expansion",
      [](const std::string& scheme, const std::string& op, std::size_t dim, std::size_t k) {
        const SnrTheory t = snr_full_expansion(make_scheme_op(scheme, op, 1), dim, k);
        return py::make_tuple(t.signal_sq, t.noise_sq, t.snr);
      },
      py::arg("scheme"), py::arg("op"), py::arg("dim"), py::arg("k"));
  m.def(
      "recovery_lower_bound",
      [](const std::string& scheme, const std::string& op, std::size_t dim, std::size_t k, std::size_t distractors) {
        return recovery_lower_bound(make_scheme_op(scheme, op, 1), dim, k, distractors);
      },
      py::arg("scheme"), py::arg("op"), py::arg("dim"), py::arg("k"), py::arg("distractors"));
  m.def(
      "capacity_memory_ratio",
      [](const std::string& scheme, unsigned order, double dim) {
        return capacity_memory_ratio(parse_scheme_family(scheme), order, dim).ratio;
      },
      py::arg("scheme"), py::arg("order"), py::arg("dim"));
  m.def(
      "theory_report_json",
      [](const std::string& scheme, const std::string& op, std::size_t dim, std::size_t k, std::size_t distractors) {
        return to_json(theory_report(make_scheme_op(scheme, op, 1), dim, k, distractors));
      },
      py::arg("scheme"), py::arg("op"), py::arg("dim"), py::arg("k"), py::arg("distractors") = 31);

  m.def("default_workers", &default_workers);
  m.def("parse_k_grid", &parse_k_grid);
  m.def(
      "run_sweep",
      [](const std::string& scheme, const std::string& op, std::size_t dim, const std::vector<std::size_t>& k,
         std::size_t trials, std::uint64_t seed, const std::string& sampling, std::size_t codebook_size,
         std::size_t distractors, bool raw, std::size_t workers) {
        SweepConfig cfg;
        cfg.scheme = parse_scheme_family(scheme);
        cfg.op = parse_sweep_op(op);
        cfg.dim = dim;
        cfg.k_grid = k;
        cfg.trials = trials;
        cfg.seed = seed;
        cfg.sampling = parse_sampling_mode(sampling);
        cfg.codebook_size = codebook_size;
        cfg.distractors = distractors;
        cfg.raw = raw;
        cfg.validate();
        std::vector<SweepRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_sweep(cfg, workers == 0 ? default_workers() : workers);
        }
        py::list out;
        for (const auto& r : rows) out.append(sweep_row_dict(r));
        return py::make_tuple(out, sweep_csv(rows));
      },
      py::arg("scheme") = "tensor", py::arg("op") = "edge-query", py::arg("dim") = 32,
      py::arg("k") = std::vector<std::size_t>{8, 16, 32, 64}, py::arg("trials") = 200, py::arg("seed") = 0,
      py::arg("sampling") = "fixed", py::arg("codebook_size") = 1024, py::arg("distractors") = 31,
      py::arg("raw") = false, py::arg("workers") = 0);
  m.def(
      "parse_sweep_csv",
      [](const std::string& text) {
        py::list out;
        for (const auto& r : parse_sweep_csv(text)) out.append(sweep_row_dict(r));
        return out;
      },
      py::arg("text"));
  m.def(
      "render_svg",
      [](const std::string& csv, const std::string& title, double present_ideal) {
        return render_svg(parse_sweep_csv(csv), title, present_ideal);
      },
      py::arg("csv"), py::arg("title") = "", py::arg("present_ideal") = 1.0);

  m.def(
      "verify_theory",
      [](const std::string& grid, std::uint64_t seed, const std::string& ec_theory, std::size_t trials,
         std::size_t workers) {
        VerifyConfig cfg;
        cfg.grid = parse_verify_grid(grid);
        cfg.ec_theory = parse_ec_theory(ec_theory);
        cfg.seed = seed;
        cfg.trials = trials;
        VerifyReport report;
        {
          py::gil_scoped_release release;
          report = verify_theory(cfg, workers == 0 ? default_workers() : workers);
        }
        return py::make_tuple(report.all_passed(), format_report(report));
      },
      py::arg("grid") = "small", py::arg("seed") = 0, py::arg("ec_theory") = "expansion", py::arg("trials") = 0,
      py::arg("workers") = 0);
}
