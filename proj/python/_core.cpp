#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "heightlab/bounds.hpp"
#include "heightlab/curve.hpp"
#include "heightlab/heights.hpp"
#include "heightlab/lattes.hpp"
#include "heightlab/numeric.hpp"
#include "heightlab/ramify.hpp"
#include "heightlab/reduction.hpp"
#include "heightlab/verify.hpp"

namespace py = pybind11;
using namespace heightlab;

namespace {

Rat to_rat(const py::object& o) {
    if (py::isinstance<py::float_>(o))
        throw input_error("floats are inexact; pass int, str, or Fraction");
    std::string s = py::cast<std::string>(py::str(o));
    std::string t;
    for (char c : s)
        if (!isspace(static_cast<unsigned char>(c))) t += c;
    try {
        return Rat(t);
    } catch (const std::exception&) {
        throw input_error("cannot parse rational: " + s);
    }
}

py::object py_bigint(const Int& n) {
    static py::object ctor = py::module_::import("builtins").attr("int");
    return ctor(n.str());
}

py::object py_fraction(const Rat& q) {
    static py::object ctor = py::module_::import("fractions").attr("Fraction");
    return ctor(py_bigint(numerator(q)), py_bigint(denominator(q)));
}

py::tuple py_real(const RealApprox& r) {
    return py::make_tuple(r.to_double(), r.error());
}

WeierstrassCurve to_curve(const py::sequence& a) {
    if (py::len(a) != 5) throw input_error("curve needs [a1, a2, a3, a4, a6]");
    return WeierstrassCurve(to_rat(a[0]), to_rat(a[1]), to_rat(a[2]), to_rat(a[3]),
                            to_rat(a[4]));
}

CurvePoint to_point(const py::sequence& a) {
    if (py::len(a) != 2) throw input_error("point needs (x, y)");
    return CurvePoint::affine(QuadElt(to_rat(a[0])), QuadElt(to_rat(a[1])));
}

py::dict cert_dict(const RamCert& c) {
    py::dict d;
    d["prime"] = py_bigint(c.p);
    d["verdict"] = ram_verdict_name(c.verdict);
    d["subject"] = c.subject;
    return d;
}

py::dict bound_dict(const LowerBoundResult& res) {
    py::dict d;
    d["height_floor"] = py_real(res.height_floor);
    d["torsion_cap"] = py_real(res.torsion_cap);
    d["count"] = res.count;
    py::list trace;
    for (auto& [k, v] : res.trace) trace.append(py::make_tuple(k, v));
    d["trace"] = trace;
    return d;
}

py::dict report_dict(const CheckReport& rep) {
    py::dict d;
    d["name"] = rep.name;
    d["all_hold"] = rep.all_hold;
    py::list rows;
    for (auto& r : rep.rows)
        rows.append(py::dict(py::arg("s") = r.s, py::arg("lhs") = py_real(r.lhs),
                             py::arg("rhs") = py_real(r.rhs),
                             py::arg("holds") = r.holds));
    d["rows"] = rows;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "exact canonical heights on elliptic curves and their Lattes maps";

    py::register_exception<input_error>(m, "InputError", PyExc_ValueError);
    py::register_exception<precision_error>(m, "PrecisionError", PyExc_ArithmeticError);

    m.def("set_precision_bits", &set_working_precision_bits, py::arg("bits"));
    m.def("precision_bits", &working_precision_bits);

    m.def(
        "curve_info",
        [](const py::sequence& curve) {
            auto E = to_curve(curve);
            py::dict d;
            d["j"] = py_fraction(E.j());
            d["discriminant"] = py_fraction(E.disc());
            d["c4"] = py_fraction(E.c4());
            d["c6"] = py_fraction(E.c6());
            d["torsion_order"] = rational_torsion(E).size();
            auto gm = global_minimal_model(E);
            py::list bad;
            for (auto& [p, e] : gm.disc_factorization) {
                auto lr = local_reduction(E, p);
                py::dict row;
                row["p"] = py_bigint(p);
                row["type"] = reduction_type_name(lr.type);
                row["component_index"] = lr.component_index;
                bad.append(row);
            }
            d["bad_primes"] = bad;
            return d;
        },
        py::arg("curve"));

    m.def(
        "canonical_height",
        [](const py::sequence& curve, const py::sequence& point) {
            return py_real(canonical_height(to_curve(curve), to_point(point)));
        },
        py::arg("curve"), py::arg("point"));

    m.def(
        "height_breakdown",
        [](const py::sequence& curve, const py::sequence& point) {
            auto bk = canonical_height_breakdown(to_curve(curve), to_point(point));
            py::dict d;
            d["total"] = py_real(bk.total);
            d["smooth_multiple"] = py_bigint(bk.smooth_multiple);
            py::list terms;
            for (auto& t : bk.terms) {
                py::dict row;
                row["place"] = t.p == 0 ? py::object(py::str("inf")) : py_bigint(t.p);
                row["value"] = py_real(t.value);
                terms.append(row);
            }
            d["local_heights"] = terms;
            return d;
        },
        py::arg("curve"), py::arg("point"));

    m.def(
        "lattes_height",
        [](const py::object& A, const py::object& B, const py::object& t) {
            LattesMap f(to_rat(A), to_rat(B));
            return py_real(lattes_height(f, to_rat(t)));
        },
        py::arg("A"), py::arg("B"), py::arg("t"),
        "height of t under the duplication map of y^2 = x^3 + Ax + B");

    m.def(
        "lattes_orbit",
        [](const py::object& A, const py::object& B, const py::object& t) {
            LattesMap f(to_rat(A), to_rat(B));
            auto orb = classify_orbit(f, to_rat(t));
            py::dict d;
            d["preperiodic"] = orb.preperiodic;
            d["preperiod"] = orb.preperiod;
            d["period"] = orb.period;
            d["hits_infinity"] = orb.hits_infinity;
            return d;
        },
        py::arg("A"), py::arg("B"), py::arg("t"));

    m.def(
        "bound",
        [](const py::sequence& curve, const py::object& prime, int variant, long degree,
           long ramification, long residue) {
            auto E = to_curve(curve);
            Int p(py::cast<std::string>(py::str(prime)));
            py::dict d;
            d["variant"] = variant;
            switch (variant) {
                case 41:
                    d["result"] = bound_dict(
                        bound_elliptic_split(bound_input_from_curve(E, p, degree,
                                                                    ramification)));
                    break;
                case 42:
                    d["result"] = bound_dict(
                        bound_lattes_split(bound_input_from_curve(E, p, degree,
                                                                  ramification)));
                    break;
                case 51: {
                    auto sd = split_degree(E, p);
                    d["split_degree"] = sd.k;
                    d["split_ramification"] = sd.e_ext;
                    d["result"] = bound_dict(bound_extension_split(
                        bound_input_from_curve(E, p, degree, ramification), sd.k,
                        sd.e_ext));
                    break;
                }
                case 52:
                    d["result"] = bound_dict(
                        bound_galois_stable(bound_input_from_curve(E, p, degree,
                                                                   ramification)));
                    break;
                case 53: {
                    auto lr = local_reduction(E, p);
                    if (lr.type != ReductionType::Additive ||
                        !lr.potentially_multiplicative)
                        throw input_error("variant 53 needs additive, potentially "
                                          "multiplicative reduction");
                    BoundInput in;
                    in.p = p;
                    in.d = degree;
                    in.e = 1;
                    in.ordv_jinv = -ord_p(E.j(), p).v;
                    in.hj = weil_height_rational(E.j());
                    d["result"] = bound_dict(bound_additive_unramified(in));
                    break;
                }
                case 25:
                    d["result"] = py::dict(py::arg("height_floor") = py_real(
                                               bound_totally_real(
                                                   weil_height_rational(E.j()))));
                    break;
                case 26: {
                    Rat j = E.j();
                    long nu = 0;
                    if (j != 0) {
                        auto vj = ord_p(j, p);
                        if (!vj.infinite && vj.v < 0) nu = -vj.v;
                    }
                    PreperBoundInput in{p, ramification, residue, nu,
                                        weil_height_rational(j)};
                    d["result"] = bound_dict(bound_preperiodic_tower(in));
                    break;
                }
                default:
                    throw input_error("unknown variant (41, 42, 51, 52, 53, 25, 26)");
            }
            return d;
        },
        py::arg("curve"), py::arg("prime"), py::arg("variant") = 41,
        py::arg("degree") = 1, py::arg("ramification") = 1, py::arg("residue") = 1);

    m.def(
        "small_height_tower",
        [](const py::object& prime, int levels) {
            Int p(py::cast<std::string>(py::str(prime)));
            auto seq = small_height_sequence(p, levels);
            py::dict d;
            d["p"] = py_bigint(seq.p);
            d["alpha0"] = py_fraction(seq.alpha0);
            d["base_height"] = py_real(seq.base_height);
            py::list lv;
            for (auto& l : seq.levels) {
                py::dict row;
                row["level"] = l.level;
                row["field_degree"] = l.xi_poly.degree();
                row["height"] = py_real(l.height);
                row["certificate"] = cert_dict(l.cert);
                lv.append(row);
            }
            d["levels"] = lv;
            return d;
        },
        py::arg("prime"), py::arg("levels") = 5);

    m.def(
        "construct_unramified_point",
        [](const py::sequence& curve, const py::object& prime) {
            Int p(py::cast<std::string>(py::str(prime)));
            auto up = construct_unramified_point(to_curve(curve), p);
            py::dict d;
            d["n"] = up.n;
            if (up.x_rational) d["x"] = py_fraction(up.x);
            if (up.y_rational) d["y"] = py_fraction(up.y);
            py::list xm, ym;
            for (auto& c : up.x_minpoly.coeffs()) xm.append(py_bigint(c));
            d["x_minpoly"] = xm;
            if (!up.y_rational) {
                for (auto& c : up.y_minpoly.coeffs()) ym.append(py_bigint(c));
                d["y_minpoly"] = ym;
            }
            d["x_certificate"] = cert_dict(up.x_cert);
            d["y_certificate"] = cert_dict(up.y_cert);
            d["non_torsion_certified"] = up.non_torsion_certified;
            return d;
        },
        py::arg("curve"), py::arg("prime"));

    m.def(
        "dynamical_match",
        [](const py::sequence& curve, const py::sequence& point, long mmax) {
            return report_dict(
                dynamical_match_check(to_curve(curve), to_point(point), mmax));
        },
        py::arg("curve"), py::arg("point"), py::arg("mmax") = 3);

    m.def(
        "multiple_sum_sweep",
        [](const py::sequence& curve, const py::sequence& point, const py::object& prime,
           long smax) {
            Int p(py::cast<std::string>(py::str(prime)));
            return report_dict(
                multiple_sum_check(to_curve(curve), to_point(point), p, 1, smax));
        },
        py::arg("curve"), py::arg("point"), py::arg("prime"), py::arg("smax") = 12);

    m.def("pairing_weight_identity", &pairing_weight_identity, py::arg("smax") = 30);

    m.def(
        "lambert_w",
        [](int branch, double y) { return py_real(lambert_w(branch, RealApprox(y))); },
        py::arg("branch"), py::arg("y"));

    m.def(
        "height_from_minpoly",
        [](const py::sequence& coeffs) {
            std::vector<Int> c;
            for (auto o : coeffs)
                c.emplace_back(py::cast<std::string>(py::str(o)));
            return py_real(height_from_minpoly(IntPoly(std::move(c)), 1e-12));
        },
        py::arg("coeffs"), "coeffs ascending; height of any root");
}
