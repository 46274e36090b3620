#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "heightlab/bounds.hpp"
#include "heightlab/curve.hpp"
#include "heightlab/heights.hpp"
#include "heightlab/lattes.hpp"
#include "heightlab/ramify.hpp"
#include "heightlab/reduction.hpp"
#include "heightlab/verify.hpp"

using json = nlohmann::ordered_json;
using namespace heightlab;

namespace {

struct RunConfig {
    long precision_bits = 128;
    double hmax = 8.0;
    long smax = 12;
    long levels = 5;
    std::string output = "json";
    unsigned long seed = 0;
    std::string out_path;
};

// ---- parsing ---------------------------------------------------------

Rat parse_rat(const std::string& s) {
    std::string t;
    for (char c : s)
        if (!isspace(static_cast<unsigned char>(c))) t += c;
    if (t.empty()) throw input_error("empty rational literal");
    try {
        return Rat(t);
    } catch (const std::exception&) {
        throw input_error("cannot parse rational: " + s);
    }
}

std::vector<Rat> parse_rat_list(const std::string& s, size_t expect) {
    std::string t;
    for (char c : s)
        if (c != '[' && c != ']' && c != '(' && c != ')' &&
            !isspace(static_cast<unsigned char>(c)))
            t += c;
    std::vector<Rat> out;
    std::stringstream ss(t);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(parse_rat(item));
    if (expect != 0 && out.size() != expect)
        throw input_error("expected " + std::to_string(expect) + " entries in " + s);
    return out;
}

WeierstrassCurve parse_curve(const std::string& s) {
    auto a = parse_rat_list(s, 5);
    return WeierstrassCurve(a[0], a[1], a[2], a[3], a[4]);
}

CurvePoint parse_point(const std::string& s) {
    auto a = parse_rat_list(s, 2);
    return CurvePoint::affine(QuadElt(a[0]), QuadElt(a[1]));
}

// ---- serialization ---------------------------------------------------

std::string rat_str(const Rat& q) {
    return numerator(q).str() + "/" + denominator(q).str();
}

json real_json(const RealApprox& r) {
    return json::array({r.to_double(), r.error()});
}

json poly_json(const IntPoly& f) {
    json c = json::array();
    for (const auto& v : f.coeffs()) c.push_back(v.str());
    return json{{"degree", f.degree()}, {"coeffs", c}};
}

json cert_json(const RamCert& c) {
    json out;
    out["prime"] = c.p.str();
    out["verdict"] = ram_verdict_name(c.verdict);
    out["ramification_index"] = c.index;
    if (!c.subject.empty()) out["subject"] = c.subject;
    return out;
}

json point_json(const CurvePoint& P) {
    if (P.infinity) return json{{"infinity", true}};
    return json{{"x", rat_str(P.x.rational())}, {"y", rat_str(P.y.rational())}};
}

json report_json(const CheckReport& rep) {
    json rows = json::array();
    for (auto& r : rep.rows)
        rows.push_back(json{{"s", r.s},
                            {"lhs", real_json(r.lhs)},
                            {"rhs", real_json(r.rhs)},
                            {"holds", r.holds}});
    return json{{"name", rep.name}, {"all_hold", rep.all_hold}, {"rows", rows}};
}

json bound_json(const LowerBoundResult& res) {
    json trace = json::array();
    for (auto& [k, v] : res.trace) trace.push_back(json::array({k, v}));
    return json{{"height_floor", real_json(res.height_floor)},
                {"torsion_cap", real_json(res.torsion_cap)},
                {"count", res.count},
                {"trace", trace}};
}

// ---- flat csv rendering ----------------------------------------------

void write_csv_value(std::ostream& os, const json& v) {
    if (v.is_string()) {
        os << v.get<std::string>();
    } else if (v.is_array() && v.size() == 2 && v[0].is_number()) {
        os << v[0].dump() << ";" << v[1].dump();
    } else {
        os << v.dump();
    }
}

void flatten_json(const std::string& prefix, const json& v,
                  std::vector<std::pair<std::string, const json*>>& rows) {
    if (v.is_object()) {
        for (auto it = v.begin(); it != v.end(); ++it)
            flatten_json(prefix.empty() ? it.key() : prefix + "." + it.key(),
                         it.value(), rows);
    } else if (v.is_array() && !(v.size() == 2 && v[0].is_number() && !v[0].is_string())) {
        for (size_t i = 0; i < v.size(); ++i)
            flatten_json(prefix + "[" + std::to_string(i) + "]", v[i], rows);
    } else {
        rows.push_back({prefix, &v});
    }
}

void emit(const json& doc, const RunConfig& cfg) {
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!cfg.out_path.empty()) {
        file.open(cfg.out_path);
        if (!file) throw input_error("cannot open output file " + cfg.out_path);
        os = &file;
    }
    if (cfg.output == "json") {
        *os << doc.dump(2) << "\n";
    } else {
        std::vector<std::pair<std::string, const json*>> rows;
        flatten_json("", doc, rows);
        *os << "key,value\n";
        for (auto& [k, v] : rows) {
            *os << k << ",";
            write_csv_value(*os, *v);
            *os << "\n";
        }
    }
}

json config_json(const RunConfig& cfg) {
    return json{{"precision_bits", cfg.precision_bits},
                {"hmax", cfg.hmax},
                {"smax", cfg.smax},
                {"levels", cfg.levels},
                {"seed", cfg.seed}};
}

json doc_shell(const std::string& command, const RunConfig& cfg) {
    return json{{"schema", "heightlab/1"}, {"command", command},
                {"config", config_json(cfg)}, {"data", json::object()}};
}

// ---- commands --------------------------------------------------------

int run_curve_info(const std::string& curve_s, const RunConfig& cfg) {
    auto E = parse_curve(curve_s);
    json doc = doc_shell("curve-info", cfg);
    json d;
    d["a_invariants"] = json::array({rat_str(E.a1()), rat_str(E.a2()), rat_str(E.a3()),
                                     rat_str(E.a4()), rat_str(E.a6())});
    d["b_invariants"] = json::array(
        {rat_str(E.b2()), rat_str(E.b4()), rat_str(E.b6()), rat_str(E.b8())});
    d["c4"] = rat_str(E.c4());
    d["c6"] = rat_str(E.c6());
    d["discriminant"] = rat_str(E.disc());
    d["j"] = rat_str(E.j());

    auto tor = rational_torsion(E);
    d["torsion_order"] = tor.size();
    json tp = json::array();
    for (auto& P : tor)
        if (!P.infinity) tp.push_back(point_json(P));
    d["torsion_points"] = tp;

    auto gm = global_minimal_model(E);
    const auto& Emin = gm.minimal;
    d["minimal_model"] =
        json::array({rat_str(Emin.a1()), rat_str(Emin.a2()), rat_str(Emin.a3()),
                     rat_str(Emin.a4()), rat_str(Emin.a6())});
    json bad = json::array();
    for (auto& [p, e] : gm.disc_factorization) {
        auto lr = local_reduction(E, p);
        json row;
        row["p"] = p.str();
        row["type"] = reduction_type_name(lr.type);
        row["ord_disc_min"] = lr.ord_disc_min;
        row["potentially_multiplicative"] = lr.potentially_multiplicative;
        if (lr.type == ReductionType::MultiplicativeSplit ||
            lr.type == ReductionType::MultiplicativeNonsplit)
            row["component_index"] = lr.component_index;
        bad.push_back(row);
    }
    d["bad_primes"] = bad;
    doc["data"] = d;
    emit(doc, cfg);
    return 0;
}

int run_height(const std::string& curve_s, const std::string& point_s, bool dynamical,
               const RunConfig& cfg) {
    auto E = parse_curve(curve_s);
    auto P = parse_point(point_s);
    if (!on_curve(E, P)) throw input_error("point is not on the curve");
    json doc = doc_shell("height", cfg);
    json d;
    d["point"] = point_json(P);
    d["is_torsion"] = is_torsion(E, P);
    d["naive_x_height"] = real_json(weil_height_rational(P.x.rational()));
    auto bk = canonical_height_breakdown(E, P);
    d["canonical_height"] = real_json(bk.total);
    d["smooth_multiple"] = bk.smooth_multiple.str();
    json locals = json::array();
    RealApprox sum(0.0);
    for (auto& t : bk.terms) {
        json row;
        row["place"] = t.p == 0 ? std::string("inf") : t.p.str();
        row["value"] = real_json(t.value);
        locals.push_back(row);
        sum += t.value;
    }
    d["local_heights_of_multiple"] = locals;
    d["local_sum"] = real_json(sum);
    if (dynamical) {
        auto T = to_integral_short_any(E);
        auto Es = E.transformed(T);
        auto Ps = transform_point(T, P);
        LattesMap f(Es.a4(), Es.a6());
        d["dynamical"] = json{{"t", rat_str(Ps.x.rational())},
                              {"map_A", rat_str(f.A())},
                              {"map_B", rat_str(f.B())},
                              {"height", real_json(lattes_height(f, Ps.x.rational()))}};
    }
    doc["data"] = d;
    emit(doc, cfg);
    return 0;
}

int run_bound(const std::string& curve_s, const std::string& prime_s, int variant,
              long d_deg, long e_ram, long f_res, const RunConfig& cfg) {
    auto E = parse_curve(curve_s);
    Int p(prime_s);
    json doc = doc_shell("bound", cfg);
    json out;
    out["variant"] = variant;
    out["p"] = p.str();

    switch (variant) {
        case 41: {
            auto in = bound_input_from_curve(E, p, d_deg, e_ram);
            out["result"] = bound_json(bound_elliptic_split(in));
            break;
        }
        case 42: {
            auto in = bound_input_from_curve(E, p, d_deg, e_ram);
            out["result"] = bound_json(bound_lattes_split(in));
            break;
        }
        case 51: {
            auto sd = split_degree(E, p);
            auto in = bound_input_from_curve(E, p, d_deg, e_ram);
            out["split_degree"] = sd.k;
            out["split_ramification"] = sd.e_ext;
            out["result"] = bound_json(bound_extension_split(in, sd.k, sd.e_ext));
            break;
        }
        case 52: {
            auto in = bound_input_from_curve(E, p, d_deg, e_ram);
            out["result"] = bound_json(bound_galois_stable(in));
            break;
        }
        case 53: {
            auto lr = local_reduction(E, p);
            if (lr.type != ReductionType::Additive || !lr.potentially_multiplicative)
                throw input_error("variant 53 needs additive, potentially "
                                  "multiplicative reduction at p");
            BoundInput in;
            in.p = p;
            in.d = d_deg;
            in.e = 1;
            Rat j = E.j();
            in.ordv_jinv = -ord_p(j, p).v;
            in.hj = weil_height_rational(j);
            out["result"] = bound_json(bound_additive_unramified(in));
            break;
        }
        case 25: {
            out["result"] =
                json{{"height_floor", real_json(bound_totally_real(
                          weil_height_rational(E.j())))}};
            break;
        }
        case 26: {
            Rat j = E.j();
            long nu = 0;
            if (j != 0) {
                auto vj = ord_p(j, p);
                if (!vj.infinite && vj.v < 0) nu = -vj.v;
            }
            PreperBoundInput in{p, e_ram, f_res, nu, weil_height_rational(j)};
            out["nu"] = nu;
            out["result"] = bound_json(bound_preperiodic_tower(in));
            break;
        }
        default:
            throw input_error("unknown variant (use 41, 42, 51, 52, 53, 25, 26)");
    }
    doc["data"] = out;
    emit(doc, cfg);
    return 0;
}

int run_verify(bool suite, const std::string& curve_s, const std::string& point_s,
               const std::string& prime_s, const RunConfig& cfg) {
    json doc = doc_shell("verify", cfg);
    json checks = json::array();
    bool all = true;
    auto push = [&](const CheckReport& rep) {
        checks.push_back(report_json(rep));
        all = all && rep.all_hold;
    };

    if (suite) {
        bool weights = pairing_weight_identity(30);
        checks.push_back(json{{"name", "pairing-weights-exact"}, {"all_hold", weights}});
        all = all && weights;

        struct Anchor {
            WeierstrassCurve E;
            CurvePoint P;
            Int split_p;  // 0 = no split multiplicative prime
        };
        std::vector<Anchor> anchors = {
            {WeierstrassCurve(Rat(0), Rat(0), Rat(1), Rat(-1), Rat(0)),
             CurvePoint::affine(QuadElt(Rat(0)), QuadElt(Rat(0))), Int(0)},
            {WeierstrassCurve(Rat(1), Rat(0), Rat(0), Rat(0), Rat(-4)),
             CurvePoint::affine(QuadElt(Rat(4)), QuadElt(Rat(6))), Int(2)},
            {WeierstrassCurve(Rat(0), Rat(1), Rat(1), Rat(-2), Rat(0)),
             CurvePoint::affine(QuadElt(Rat(-1)), QuadElt(Rat(1))), Int(0)},
        };
        for (auto& a : anchors) {
            push(pairing_numeric_check(a.E, a.P, cfg.smax));
            push(quadraticity_check(a.E, a.P, 6));
            push(dynamical_match_check(a.E, a.P, 3));
            push(pair_repulsion_check(a.E, a.P, std::min(cfg.smax, 10L)));
            if (a.split_p != 0) push(multiple_sum_check(a.E, a.P, a.split_p, 1, cfg.smax));
        }
    } else {
        if (curve_s.empty() || point_s.empty())
            throw input_error("verify needs --curve and --point (or --suite)");
        auto E = parse_curve(curve_s);
        auto P = parse_point(point_s);
        if (!on_curve(E, P)) throw input_error("point is not on the curve");
        push(pairing_numeric_check(E, P, cfg.smax));
        push(quadraticity_check(E, P, 6));
        push(dynamical_match_check(E, P, 3));
        push(pair_repulsion_check(E, P, std::min(cfg.smax, 10L)));
        if (!prime_s.empty()) push(multiple_sum_check(E, P, Int(prime_s), 1, cfg.smax));
    }

    doc["data"] = json{{"all_hold", all}, {"checks", checks}};
    emit(doc, cfg);
    return all ? 0 : 1;
}

int run_counterexample(const std::string& prime_s, const RunConfig& cfg) {
    Int p(prime_s);
    json doc = doc_shell("counterexample", cfg);
    auto seq = small_height_sequence(p, static_cast<int>(cfg.levels));
    json d;
    d["p"] = p.str();
    d["alpha0"] = rat_str(seq.alpha0);
    d["base_height"] = real_json(seq.base_height);
    d["level_ratio"] = rat_str(seq.level_ratio);
    json levels = json::array();
    const RealApprox* prev = &seq.base_height;
    for (auto& lv : seq.levels) {
        json row;
        row["level"] = lv.level;
        row["field_degree"] = lv.xi_poly.degree();
        row["height"] = real_json(lv.height);
        row["ratio_exact"] = (lv.height.value() * 4 == prev->value());
        row["certificate"] = cert_json(lv.cert);
        levels.push_back(row);
        prev = &lv.height;
    }
    d["levels"] = levels;
    doc["data"] = d;
    emit(doc, cfg);
    return 0;
}

int run_construct_point(const std::string& curve_s, const std::string& prime_s,
                        const RunConfig& cfg) {
    auto E = parse_curve(curve_s);
    Int p(prime_s);
    json doc = doc_shell("construct-point", cfg);
    auto up = construct_unramified_point(E, p);
    json d;
    d["p"] = p.str();
    d["n"] = up.n;
    if (up.x_rational)
        d["x"] = rat_str(up.x);
    else
        d["x_minpoly"] = poly_json(up.x_minpoly);
    if (up.y_rational)
        d["y"] = rat_str(up.y);
    else
        d["y_minpoly"] = poly_json(up.y_minpoly);
    d["x_certificate"] = cert_json(up.x_cert);
    d["y_certificate"] = cert_json(up.y_cert);
    d["non_torsion_certified"] = up.non_torsion_certified;
    doc["data"] = d;
    emit(doc, cfg);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    if (const char* env = std::getenv("HEIGHTLAB_PRECISION")) {
        char* end = nullptr;
        long bits = std::strtol(env, &end, 10);
        if (end && *end == '\0' && bits >= 16 && bits <= 1 << 20)
            cfg.precision_bits = bits;
    }

    CLI::App app{"exact canonical heights on elliptic curves and their Lattes maps"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--precision-bits", cfg.precision_bits,
                   "working mantissa bits (env HEIGHTLAB_PRECISION)");
    app.add_option("--hmax", cfg.hmax, "naive height cap for point searches");
    app.add_option("--smax", cfg.smax, "sweep cap for verify inequalities");
    app.add_option("--levels", cfg.levels, "tower levels for counterexample");
    app.add_option("--output", cfg.output, "json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_option("--out", cfg.out_path, "write to file instead of stdout");
    app.add_option("--seed", cfg.seed, "rng seed for randomized sweeps");

    std::string curve_s, point_s, prime_s;
    int variant = 41;
    long d_deg = 1, e_ram = 1, f_res = 1;
    bool dynamical = false, suite = false;

    auto* ci = app.add_subcommand("curve-info", "invariants, torsion, reduction types");
    ci->add_option("--curve", curve_s, "[a1,a2,a3,a4,a6]")->required();

    auto* hc = app.add_subcommand("height", "canonical height and local decomposition");
    hc->add_option("--curve", curve_s, "[a1,a2,a3,a4,a6]")->required();
    hc->add_option("--point", point_s, "(x,y) with rational entries")->required();
    hc->add_flag("--dynamical", dynamical, "also the height under the duplication map");

    auto* bc = app.add_subcommand("bound", "effective height floors and torsion caps");
    bc->add_option("--curve", curve_s, "[a1,a2,a3,a4,a6]")->required();
    bc->add_option("--prime", prime_s, "place of bad reduction")->required();
    bc->add_option("--variant", variant, "41 42 51 52 53 25 26")->required();
    bc->add_option("--degree", d_deg, "field degree d");
    bc->add_option("--ramification", e_ram, "ramification bound e");
    bc->add_option("--residue", f_res, "residue degree f (variant 26)");

    auto* vc = app.add_subcommand("verify", "identity and inequality sweeps");
    vc->add_flag("--suite", suite, "run the built-in battery");
    vc->add_option("--curve", curve_s, "[a1,a2,a3,a4,a6]");
    vc->add_option("--point", point_s, "(x,y) non-torsion");
    vc->add_option("--prime", prime_s, "split multiplicative prime for the counting sweep");

    auto* cc = app.add_subcommand("counterexample",
                                  "unramified tower with heights decaying by 1/4");
    cc->add_option("--prime", prime_s, "odd prime p")->required();

    auto* pc = app.add_subcommand("construct-point",
                                  "non-torsion point unramified above p");
    pc->add_option("--curve", curve_s, "[a1,a2,a3,a4,a6], short integral form")->required();
    pc->add_option("--prime", prime_s, "target prime")->required();

    CLI11_PARSE(app, argc, argv);
    set_working_precision_bits(static_cast<int>(cfg.precision_bits));

    try {
        if (ci->parsed()) return run_curve_info(curve_s, cfg);
        if (hc->parsed()) return run_height(curve_s, point_s, dynamical, cfg);
        if (bc->parsed()) return run_bound(curve_s, prime_s, variant, d_deg, e_ram, f_res, cfg);
        if (vc->parsed()) return run_verify(suite, curve_s, point_s, prime_s, cfg);
        if (cc->parsed()) return run_counterexample(prime_s, cfg);
        if (pc->parsed()) return run_construct_point(curve_s, prime_s, cfg);
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const precision_error& e) {
        std::cerr << "precision error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
