#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wzlq/analysis.hpp"
#include "wzlq/codec.hpp"
#include "wzlq/netsim.hpp"
#include "wzlq/sources.hpp"

namespace py = pybind11;
using namespace wzlq;

PYBIND11_MODULE(_wzlq, m) {
    m.doc() = "lattice quantization with side information";

    py::class_<Lattice>(m, "Lattice")
        .def_readonly("dim", &Lattice::dim)
        .def_readonly("basis", &Lattice::basis)
        .def_readonly("det_abs", &Lattice::det_abs);
    m.def("make_zn", &make_zn, py::arg("n"));
    m.def("make_a2", &make_a2, py::arg("det_normalize") = false);
    m.def("scale", &scale, py::arg("lattice"), py::arg("s"));
    m.def("voronoi_volume", &voronoi_volume);
    m.def(
        "nearest_point",
        [](const Lattice& lat, const Eigen::VectorXd& x) {
            auto p = nearest_point(lat, x);
            return py::make_tuple(p.coords, p.embedding);
        },
        py::arg("lattice"), py::arg("x"));
    m.def(
        "second_moment_mc",
        [](const Lattice& lat, long long trials, uint64_t seed) {
            auto e = second_moment_mc(lat, trials, seed);
            return py::make_tuple(e.g, e.stderr_);
        },
        py::arg("lattice"), py::arg("trials"), py::arg("seed"));

    py::class_<SimilarityMap>(m, "SimilarityMap")
        .def_readonly("matrix", &SimilarityMap::matrix)
        .def_readonly("norm_c", &SimilarityMap::norm_c)
        .def_readonly("index_N", &SimilarityMap::index_N);
    m.def("scaling_similarity", &scaling_similarity, py::arg("lattice"), py::arg("k"));
    m.def("eisenstein_similarity", &eisenstein_similarity, py::arg("a2"), py::arg("a"),
          py::arg("b"));
    m.def("minimal_norm", &minimal_norm, py::arg("lattice"), py::arg("kappa"));

    py::class_<WzLvq>(m, "Codec")
        .def_readonly("s", &WzLvq::s)
        .def_property_readonly("dim", [](const WzLvq& q) { return q.lattice.dim; })
        .def_property_readonly(
            "index_count", [](const WzLvq& q) { return q.cosets.representatives.size(); });
    m.def("make_codec", &make_codec, py::arg("lattice"), py::arg("kappa"), py::arg("s"));
    m.def("encode", &encode, py::arg("codec"), py::arg("x"));
    m.def("decode", &decode, py::arg("codec"), py::arg("index"), py::arg("y"));
    m.def("scale_schedule", &scale_schedule, py::arg("rho"), py::arg("sigma_x"));

    m.def("wyner_bound", &wyner_bound, py::arg("sigma_x"), py::arg("rho"),
          py::arg("rate_nats"));
    m.def("gn_bounds", &gn_bounds, py::arg("n"));
    m.def("figure_of_merit", &figure_of_merit, py::arg("d_bar"), py::arg("sigma_x"),
          py::arg("rho"), py::arg("rate_nats"));

    py::class_<DistortionReport>(m, "DistortionReport")
        .def_readonly("d_bar", &DistortionReport::d_bar)
        .def_readonly("alpha", &DistortionReport::alpha)
        .def_readonly("beta", &DistortionReport::beta)
        .def_readonly("p_err", &DistortionReport::p_err)
        .def_readonly("d_bar_stderr", &DistortionReport::d_bar_stderr)
        .def_readonly("trials", &DistortionReport::trials);
    m.def(
        "mc_distortion",
        [](const WzLvq& q, double sigma_x, double sigma_y, double rho, long long trials,
           uint64_t seed) {
            CodecVariant cv{&q, nullptr};
            return mc_distortion(cv, sigma_x, sigma_y, rho, trials, seed,
                                 SideInfoMode::Joint);
        },
        py::arg("codec"), py::arg("sigma_x"), py::arg("sigma_y"), py::arg("rho"),
        py::arg("trials"), py::arg("seed"));
    m.def(
        "empirical_rate",
        [](const WzLvq& q, double sigma_x, long long trials, uint64_t seed) {
            CodecVariant cv{&q, nullptr};
            auto r = empirical_rate(cv, sigma_x, trials, seed);
            return py::make_tuple(r.empirical_entropy_rate, r.high_rate_approx);
        },
        py::arg("codec"), py::arg("sigma_x"), py::arg("trials"), py::arg("seed"));

    py::class_<BrownianField>(m, "BrownianField")
        .def_readonly("nodes", &BrownianField::nodes)
        .def_readonly("sigma", &BrownianField::sigma)
        .def_readonly("slots", &BrownianField::slots)
        .def_readonly("samples", &BrownianField::samples);
    m.def("gen_brownian_field", &gen_brownian_field, py::arg("nodes"), py::arg("sigma"),
          py::arg("slots"), py::arg("seed"));

    py::class_<TransportAudit>(m, "TransportAudit")
        .def_readonly("slots", &TransportAudit::slots)
        .def_readonly("collisions", &TransportAudit::collisions)
        .def_readonly("queue_violations", &TransportAudit::queue_violations)
        .def_readonly("per_node_rate_bits", &TransportAudit::per_node_rate_bits)
        .def_readonly("exact_rate", &TransportAudit::exact_rate);
    m.def(
        "run_transport",
        [](int n, int r_bits, int periods) {
            return run_transport(build_layout(n), r_bits, periods);
        },
        py::arg("n"), py::arg("r_bits"), py::arg("periods"));

    py::class_<ChainRunReport>(m, "ChainRunReport")
        .def_readonly("n", &ChainRunReport::n)
        .def_readonly("distortion", &ChainRunReport::distortion)
        .def_readonly("p_err", &ChainRunReport::p_err)
        .def_readonly("total_errors", &ChainRunReport::total_errors)
        .def_readonly("mean_sq_jump", &ChainRunReport::mean_sq_jump)
        .def_readonly("d_mid", &ChainRunReport::d_mid);
    m.def(
        "chain_code",
        [](const BrownianField& field, int stride, double budget_bits, int bits,
           double t_factor, bool error_free) {
            ChainCodecSpec spec;
            spec.bits = bits;
            spec.t_factor = t_factor;
            return chain_code(field, stride, budget_bits, spec, error_free);
        },
        py::arg("field"), py::arg("stride"), py::arg("budget_bits"), py::arg("bits"),
        py::arg("t_factor"), py::arg("error_free") = false);
}
