#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "henonlab/dimension.hpp"
#include "henonlab/fatou.hpp"
#include "henonlab/green.hpp"
#include "henonlab/henon_map.hpp"
#include "henonlab/horn.hpp"
#include "henonlab/implosion.hpp"

namespace py = pybind11;
using namespace henonlab;

namespace {

#define HENONLAB_STR(x) #x
#define HENONLAB_XSTR(x) HENONLAB_STR(x)

py::tuple as_tuple(const ComplexPoint2 &p)
{
    return py::make_tuple(p.z, p.w);
}

Window window_from(const std::array<double, 4> &w)
{
    const Window out{w[0], w[1], w[2], w[3]};
    if (!out.valid()) {
        throw std::invalid_argument("window must satisfy x0 < x1 and y0 < y1");
    }
    return out;
}

Direction direction_from(const std::string &s)
{
    if (s == "forward") {
        return Direction::forward;
    }
    if (s == "backward") {
        return Direction::backward;
    }
    throw std::invalid_argument("direction must be 'forward' or 'backward'");
}

py::object optional_complex(bool ok, cplx v)
{
    return ok ? py::cast(v) : py::none();
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Semi-parabolic Henon dynamics";
    m.attr("__version__") = HENONLAB_XSTR(VERSION_INFO);

    py::class_<HenonMap>(m, "HenonMap")
        .def(py::init<cplx, cplx>(), py::arg("c"), py::arg("a"))
        .def_property_readonly("c", &HenonMap::c)
        .def_property_readonly("a", &HenonMap::a)
        .def_property_readonly("radius", &HenonMap::radius)
        .def("forward", [](const HenonMap &f, cplx z, cplx w) { return as_tuple(f.forward({z, w})); })
        .def("inverse", [](const HenonMap &f, cplx z, cplx w) { return as_tuple(f.inverse({z, w})); })
        .def("fixed_points", [](const HenonMap &f) {
            py::list out;
            for (const auto &fp : fixed_points(f)) {
                py::dict d;
                d["location"] = as_tuple(fp.location);
                d["multipliers"] = py::make_tuple(fp.multipliers[0], fp.multipliers[1]);
                d["multiplicity"] = fp.multiplicity;
                d["semi_parabolic"] = fp.semi_parabolic;
                out.append(d);
            }
            return out;
        });

    m.def("semi_parabolic_parameter", &semi_parabolic_parameter, py::arg("a"));
    m.def("semi_parabolic_map", [](cplx a) { return HenonMap(semi_parabolic_parameter(a), a); }, py::arg("a") = 0.5);

    m.def(
        "green",
        [](const HenonMap &f, cplx z, cplx w, const std::string &direction, int max_iter) {
            return green(f, {z, w}, direction_from(direction), max_iter).value;
        },
        py::arg("map"), py::arg("z"), py::arg("w"), py::arg("direction") = "forward",
        py::arg("max_iter") = default_green_iterations);

    m.def(
        "green_slice",
        [](const HenonMap &f, std::array<double, 4> window, int nx, int ny, cplx w0, const std::string &direction,
           int max_iter, unsigned workers) {
            Slice s;
            s.base = {0.0, w0};
            FieldGrid g;
            {
                py::gil_scoped_release release;
                g = julia_slice(f, s, window_from(window), nx, ny, direction_from(direction), max_iter, workers);
            }
            py::array_t<double> out({ny, nx});
            std::copy(g.values.begin(), g.values.end(), out.mutable_data());
            return out;
        },
        "Green function on the line w = w0, shape (ny, nx), row j at increasing imaginary part.",
        py::arg("map"), py::arg("window"), py::arg("nx"), py::arg("ny"), py::arg("w0") = cplx(0.0),
        py::arg("direction") = "forward", py::arg("max_iter") = default_green_iterations, py::arg("workers") = 1);

    py::class_<FatouEvaluator>(m, "FatouEvaluator")
        .def(py::init([](const HenonMap &f) { return FatouEvaluator(f); }), py::arg("map"))
        .def("in_basin", [](const FatouEvaluator &ev, cplx z, cplx w) { return ev.in_basin({z, w}); })
        .def("incoming",
             [](const FatouEvaluator &ev, cplx z, cplx w) {
                 const auto r = ev.incoming({z, w});
                 return optional_complex(r.ok(), r.value);
             })
        .def("outgoing", [](const FatouEvaluator &ev, cplx u) -> py::object {
            const auto r = ev.outgoing(u);
            if (!r.ok()) {
                return py::none();
            }
            return as_tuple(r.sigma.point);
        });

    py::class_<HornMap>(m, "HornMap")
        .def(py::init([](const HenonMap &f) { return HornMap(FatouEvaluator(f)); }), py::arg("map"))
        .def("__call__", [](const HornMap &h, cplx z) {
            const auto r = h.evaluate(z);
            return optional_complex(r.ok(), r.value);
        });

    m.def("canonical_lift", &canonical_lift, py::arg("z"));
    m.def("cylinder_coordinate", &cylinder_coordinate, py::arg("z"));

    m.def("alpha_epsilon", &alpha_epsilon, py::arg("alpha"), py::arg("n"));
    m.def(
        "implosion_median",
        [](const FatouEvaluator &ev, double alpha, int n, int samples, std::uint64_t seed) -> py::object {
            ImplosionReport r;
            {
                py::gil_scoped_release release;
                r = implosion_error(ev, alpha, n, basin_samples(ev, samples, seed));
            }
            return r.median_error ? py::cast(*r.median_error) : py::none();
        },
        py::arg("evaluator"), py::arg("alpha"), py::arg("n"), py::arg("samples") = 20, py::arg("seed") = 0);

    m.def(
        "uniform_bowen",
        [](int branches, double ratio) { return bowen_dimension(uniform_system(branches, ratio)).dimension; },
        py::arg("branches"), py::arg("ratio"));

    m.def(
        "box_dimension",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> points, int scale_count, unsigned workers) {
            if (points.ndim() != 2) {
                throw std::invalid_argument("points must be a 2-D array of shape (count, dim)");
            }
            const auto dim = static_cast<int>(points.shape(1));
            std::vector<double> coords(points.data(), points.data() + points.size());
            const auto r = box_dimension(make_cloud(dim, std::move(coords)), scale_count, workers);
            py::dict d;
            d["slope"] = r.slope;
            d["standard_error"] = r.standard_error;
            d["scales"] = r.scales;
            d["counts"] = r.counts;
            return d;
        },
        py::arg("points"), py::arg("scale_count") = 6, py::arg("workers") = 1);

    m.def(
        "shoot_quadratic",
        [](cplx lambda0, cplx critical_point, int n, cplx target_guess, int period) {
            ShootOptions opt;
            opt.period = period;
            const auto r = misiurewicz_shoot(quadratic_family(), lambda0, critical_point, n, target_guess, opt);
            py::dict d;
            d["parameter"] = r.parameter;
            d["target"] = r.target;
            d["residual"] = r.residual;
            d["converged"] = r.converged;
            d["message"] = r.message;
            return d;
        },
        py::arg("lambda0"), py::arg("critical_point"), py::arg("n"), py::arg("target_guess"), py::arg("period") = 1);
}
