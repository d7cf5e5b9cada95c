#include <pybind11/pybind11.h>

namespace py = pybind11;

PYBIND11_MODULE(_fsklab, m) {
    m.doc() = "fractional Schrodinger kernel laboratory (native core)";
    m.attr("__version__") = "0.1.0";
}
