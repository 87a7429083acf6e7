#include "loewner/serialize.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "loewner/errors.hpp"

namespace loewner {

using nlohmann::json;

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

namespace {

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2)
        throw SchemaError("expected complex number as [re, im]");
    return Complex(j[0].get<double>(), j[1].get<double>());
}

json cvector_to_json(const CVector& v) {
    json out = json::array();
    for (const auto& z : v) out.push_back(complex_to_json(z));
    return out;
}

CVector cvector_from_json(const json& j) {
    if (!j.is_array()) throw SchemaError("expected array of complex numbers");
    CVector v;
    for (const auto& e : j) v.push_back(complex_from_json(e));
    return v;
}

json order_to_json(double order) {
    if (order == kOrderInf) return "inf";
    return order;
}

double order_from_json(const json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return kOrderInf;
        throw SchemaError("order: expected a number or \"inf\"");
    }
    return j.get<double>();
}

json time_function_to_json(const TimeFunction& f) {
    json pieces = json::array();
    for (const auto& p : f.pieces()) {
        json jp;
        jp["begin"] = p.begin;
        if (std::isfinite(p.end))
            jp["end"] = p.end;
        else
            jp["end"] = "inf";
        switch (p.kind) {
            case TimeFunction::Piece::Kind::constant:
                jp["kind"] = "constant";
                jp["value"] = p.value;
                break;
            case TimeFunction::Piece::Kind::power:
                jp["kind"] = "power";
                jp["coeff"] = p.coeff;
                jp["alpha"] = p.alpha;
                break;
            case TimeFunction::Piece::Kind::smooth:
                throw SchemaError("time function with callable pieces is not serializable");
        }
        pieces.push_back(std::move(jp));
    }
    return json{{"pieces", pieces}};
}

TimeFunction time_function_from_json(const json& j) {
    if (!j.contains("pieces")) throw SchemaError("time function: missing 'pieces'");
    std::vector<TimeFunction::Piece> pieces;
    for (const auto& jp : j.at("pieces")) {
        TimeFunction::Piece p;
        p.begin = jp.at("begin").get<double>();
        const auto& end = jp.at("end");
        p.end = end.is_string() ? std::numeric_limits<double>::infinity() : end.get<double>();
        const std::string kind = jp.at("kind").get<std::string>();
        if (kind == "constant") {
            p.kind = TimeFunction::Piece::Kind::constant;
            p.value = jp.at("value").get<double>();
        } else if (kind == "power") {
            p.kind = TimeFunction::Piece::Kind::power;
            p.coeff = jp.at("coeff").get<double>();
            p.alpha = jp.at("alpha").get<double>();
        } else {
            throw SchemaError("time function: unknown piece kind '" + kind + "'");
        }
        pieces.push_back(std::move(p));
    }
    try {
        return TimeFunction::from_pieces(std::move(pieces));
    } catch (const std::invalid_argument& e) {
        throw SchemaError(std::string("time function: ") + e.what());
    }
}

json domain_to_json_impl(const Domain& d) {
    const char* kind = d.kind() == DomainKind::unit_disc  ? "unit_disc"
                       : d.kind() == DomainKind::unit_ball ? "unit_ball"
                                                           : "polydisc";
    return json{{"kind", kind}, {"dim", d.dim()}};
}

Domain domain_from_json_impl(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const int dim = j.value("dim", 1);
    if (kind == "unit_disc") return Domain::unit_disc();
    if (kind == "unit_ball") return Domain::unit_ball(dim);
    if (kind == "polydisc") return Domain::polydisc(dim);
    throw SchemaError("domain: unknown kind '" + kind + "'");
}

json matrix_to_json(const CMatrix& m) {
    json rows = json::array();
    for (std::size_t i = 0; i < m.dim(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(complex_to_json(m(i, j)));
        rows.push_back(std::move(row));
    }
    return rows;
}

CMatrix matrix_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw SchemaError("matrix: expected array of rows");
    const std::size_t n = j.size();
    CMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!j[i].is_array() || j[i].size() != n) throw SchemaError("matrix: must be square");
        for (std::size_t c = 0; c < n; ++c) m(i, c) = complex_from_json(j[i][c]);
    }
    return m;
}

std::vector<Complex> poly_from_json(const json& j) {
    std::vector<Complex> coeffs;
    for (const auto& e : j) coeffs.push_back(complex_from_json(e));
    if (coeffs.empty()) throw SchemaError("polynomial: needs at least one coefficient");
    return coeffs;
}

Complex poly_eval(const std::vector<Complex>& coeffs, Complex z) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = coeffs.size(); i-- > 0;) acc = acc * z + coeffs[i];
    return acc;
}

FieldSpec berkson_porta_from_json(const json& j, double order) {
    // tau
    const json& jt = j.at("tau");
    std::function<Complex(double)> tau;
    std::vector<double> tau_breaks;
    const std::string tau_type = jt.at("type").get<std::string>();
    if (tau_type == "constant") {
        const Complex v = complex_from_json(jt.at("value"));
        tau = [v](double) { return v; };
    } else if (tau_type == "piecewise_constant") {
        std::vector<double> breaks = jt.at("breaks").get<std::vector<double>>();
        std::vector<Complex> values;
        for (const auto& e : jt.at("values")) values.push_back(complex_from_json(e));
        if (values.size() != breaks.size() + 1)
            throw SchemaError("tau: need one more value than breaks");
        tau_breaks = breaks;
        tau = [breaks, values](double t) {
            std::size_t i = 0;
            while (i < breaks.size() && t >= breaks[i]) ++i;
            return values[i];
        };
    } else {
        throw SchemaError("tau: unknown type '" + tau_type + "'");
    }

    // p
    const json& jpj = j.at("p");
    std::function<Complex(Complex, double)> p;
    const std::string p_type = jpj.at("type").get<std::string>();
    if (p_type == "polynomial") {
        const auto coeffs = poly_from_json(jpj.at("coeffs"));
        p = [coeffs](Complex z, double) { return poly_eval(coeffs, z); };
    } else if (p_type == "rational") {
        const auto numer = poly_from_json(jpj.at("numer"));
        const auto denom = poly_from_json(jpj.at("denom"));
        p = [numer, denom](Complex z, double) { return poly_eval(numer, z) / poly_eval(denom, z); };
    } else {
        throw SchemaError("p: unknown type '" + p_type + "'");
    }

    BerksonPortaField bp;
    bp.tau = std::move(tau);
    bp.tau_breaks = std::move(tau_breaks);
    bp.p = std::move(p);
    // keep the payload so the parsed field can be re-serialized
    bp.schema_hint = json{{"tau", jt}, {"p", jpj}}.dump();
    return FieldSpec::berkson_porta(std::move(bp), order);
}

json field_to_json_impl(const FieldSpec& field) {
    json out;
    out["order"] = order_to_json(field.order());
    return std::visit(
        [&](const auto& f) -> json {
            using T = std::decay_t<decltype(f)>;
            if constexpr (std::is_same_v<T, RadialField>) {
                out["variant"] = "radial";
                out["domain"] = domain_to_json_impl(field.domain());
                out["c"] = time_function_to_json(f.c);
            } else if constexpr (std::is_same_v<T, LinearField>) {
                if (!f.constant)
                    throw SchemaError("linear field with callable matrix is not serializable");
                out["variant"] = "linear";
                out["domain"] = domain_to_json_impl(field.domain());
                out["matrix"] = matrix_to_json(f.a0);
            } else if constexpr (std::is_same_v<T, BerksonPortaField>) {
                if (f.schema_hint.empty())
                    throw SchemaError("berkson-porta field with callables is not serializable");
                out["variant"] = "berkson_porta";
                const json hint = json::parse(f.schema_hint);
                out["tau"] = hint.at("tau");
                out["p"] = hint.at("p");
            } else if constexpr (std::is_same_v<T, PolynomialDiscField>) {
                out["variant"] = "polynomial_disc";
                json coeffs = json::array();
                for (const auto& c : f.coeffs) {
                    json jc;
                    jc["degree"] = c.degree;
                    jc["value"] = complex_to_json(c.value);
                    jc["profile"] = time_function_to_json(c.profile);
                    coeffs.push_back(std::move(jc));
                }
                out["coefficients"] = std::move(coeffs);
            } else if constexpr (std::is_same_v<T, PiecewiseTimeField>) {
                out["variant"] = "piecewise_time";
                out["knots"] = f.knots;
                json parts = json::array();
                for (const auto& part : f.parts) parts.push_back(json::parse(field_to_json(part)));
                out["parts"] = std::move(parts);
            } else {
                throw SchemaError("custom fields are not serializable");
            }
            return out;
        },
        field.variant());
}

FieldSpec field_from_json_impl(const json& j) {
    if (!j.contains("variant")) throw SchemaError("field: missing 'variant'");
    const std::string variant = j.at("variant").get<std::string>();
    const double order = j.contains("order") ? order_from_json(j.at("order")) : kOrderInf;
    if (variant == "radial") {
        const Domain d = domain_from_json_impl(j.at("domain"));
        return FieldSpec::radial(d, time_function_from_json(j.at("c")), order);
    }
    if (variant == "linear") {
        const Domain d = domain_from_json_impl(j.at("domain"));
        return FieldSpec::linear(d, matrix_from_json(j.at("matrix")), order);
    }
    if (variant == "polynomial_disc") {
        std::vector<PolynomialCoefficient> coeffs;
        for (const auto& jc : j.at("coefficients")) {
            PolynomialCoefficient c;
            c.degree = jc.at("degree").get<int>();
            c.value = complex_from_json(jc.at("value"));
            if (jc.contains("profile")) c.profile = time_function_from_json(jc.at("profile"));
            coeffs.push_back(std::move(c));
        }
        return FieldSpec::polynomial_disc(std::move(coeffs), order);
    }
    if (variant == "berkson_porta") return berkson_porta_from_json(j, order);
    if (variant == "piecewise_time") {
        std::vector<double> knots = j.at("knots").get<std::vector<double>>();
        std::vector<FieldSpec> parts;
        for (const auto& jp : j.at("parts")) parts.push_back(field_from_json_impl(jp));
        return FieldSpec::piecewise_time(std::move(knots), std::move(parts));
    }
    throw SchemaError("field: unknown variant '" + variant + "'");
}

json witness_to_json(const CheckWitness& w) {
    json out;
    json points = json::array();
    for (const auto& p : w.points) points.push_back(cvector_to_json(p));
    out["points"] = std::move(points);
    out["times"] = w.times;
    out["value"] = w.value;
    out["note"] = w.note;
    return out;
}

const char* status_name(IntegrationStatus s) {
    switch (s) {
        case IntegrationStatus::completed: return "completed";
        case IntegrationStatus::escaped: return "escaped";
        case IntegrationStatus::step_underflow: return "step_underflow";
    }
    return "unknown";
}

} // namespace

std::string domain_to_json(const Domain& domain) { return domain_to_json_impl(domain).dump(2); }

Domain domain_from_json(const std::string& text) {
    try {
        return domain_from_json_impl(json::parse(text));
    } catch (const json::exception& e) {
        throw SchemaError(std::string("domain: ") + e.what());
    }
}

std::string field_to_json(const FieldSpec& field) { return field_to_json_impl(field).dump(2); }

FieldSpec field_from_json(const std::string& text) {
    try {
        return field_from_json_impl(json::parse(text));
    } catch (const json::exception& e) {
        throw SchemaError(std::string("field: ") + e.what());
    }
}

std::string herglotz_report_to_json(const HerglotzReport& report) {
    json out;
    out["verdict"] = report.verdict == Verdict::pass      ? "pass"
                     : report.verdict == Verdict::fail    ? "fail"
                                                          : "advisory";
    out["worst_value"] = report.worst_value;
    out["tol"] = report.tol;
    out["samples"] = report.samples;
    out["witness"] = json{{"z", cvector_to_json(report.witness.z)},
                          {"w", cvector_to_json(report.witness.w)},
                          {"t", report.witness.t},
                          {"value", report.witness.value}};
    return out.dump(2);
}

std::string verification_report_to_json(const VerificationReport& report) {
    json out;
    out["overall"] = report.overall();
    json checks = json::array();
    for (const auto& c : report.checks) {
        json jc;
        jc["name"] = c.name;
        jc["passed"] = c.passed;
        jc["worst_violation"] = c.worst_violation;
        jc["tolerance"] = c.tolerance;
        jc["witness"] = witness_to_json(c.witness);
        checks.push_back(std::move(jc));
    }
    out["checks"] = std::move(checks);
    return out.dump(2);
}

std::string trajectory_meta_to_json(const Trajectory& trajectory) {
    json out;
    out["start_time"] = trajectory.start_time;
    out["initial_point"] = cvector_to_json(trajectory.initial_point);
    out["status"] = status_name(trajectory.status);
    if (trajectory.escape_time)
        out["escape_time"] = *trajectory.escape_time;
    else
        out["escape_time"] = nullptr;
    out["end_time"] = trajectory.end_time();
    out["sample_count"] = trajectory.samples.size();
    return out.dump(2);
}

TrajectoryMeta trajectory_meta_from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw SchemaError(std::string("trajectory meta: ") + e.what());
    }
    TrajectoryMeta meta;
    meta.start_time = j.at("start_time").get<double>();
    meta.initial_point = cvector_from_json(j.at("initial_point"));
    const std::string status = j.at("status").get<std::string>();
    meta.status = status == "completed"   ? IntegrationStatus::completed
                  : status == "escaped"   ? IntegrationStatus::escaped
                                          : IntegrationStatus::step_underflow;
    if (!j.at("escape_time").is_null()) meta.escape_time = j.at("escape_time").get<double>();
    meta.end_time = j.at("end_time").get<double>();
    meta.sample_count = j.at("sample_count").get<std::size_t>();
    return meta;
}

std::string recovered_field_to_json(const RecoveredField& recovered) {
    json out;
    out["h_sequence"] = recovered.h_sequence;
    out["uniform_bound"] = recovered.bound;
    json samples = json::array();
    for (const auto& s : recovered.samples) {
        json js;
        js["z"] = cvector_to_json(s.z);
        js["t"] = s.t;
        js["g"] = cvector_to_json(s.g);
        js["error_estimate"] = s.error_estimate;
        js["converged"] = s.converged;
        samples.push_back(std::move(js));
    }
    out["samples"] = std::move(samples);
    return out.dump(2);
}

std::string transport_to_json(const TransportState& state) {
    json out;
    out["start_time"] = state.start_time();
    out["base_point"] = cvector_to_json(state.base_point());
    out["max_log10_condition"] = state.max_log10_condition();
    const int n = state.dim();
    json samples = json::array();
    for (const auto& [t, y] : state.samples()) {
        json js;
        js["t"] = t;
        json h = json::array();
        for (std::size_t i = static_cast<std::size_t>(n); i < y.size(); ++i)
            h.push_back(complex_to_json(y[i]));
        js["h"] = std::move(h);
        samples.push_back(std::move(js));
    }
    out["samples"] = std::move(samples);
    return out.dump(2);
}

std::string trajectory_to_csv(const Trajectory& trajectory) {
    std::ostringstream os;
    const std::size_t n = trajectory.initial_point.size();
    os << "t";
    for (std::size_t j = 1; j <= n; ++j) os << ",re_x" << j << ",im_x" << j;
    os << "\n";
    for (const auto& [t, x] : trajectory.samples) {
        os << format_double(t);
        for (const auto& c : x) os << "," << format_double(c.real()) << "," << format_double(c.imag());
        os << "\n";
    }
    return os.str();
}

std::string recovered_field_to_csv(const RecoveredField& recovered) {
    std::ostringstream os;
    const std::size_t n = recovered.samples.empty() ? 1 : recovered.samples.front().z.size();
    os << "t";
    for (std::size_t j = 1; j <= n; ++j)
        os << ",re_z" << j << ",im_z" << j << ",re_g" << j << ",im_g" << j;
    os << ",error_estimate\n";
    for (const auto& s : recovered.samples) {
        os << format_double(s.t);
        for (std::size_t j = 0; j < n; ++j)
            os << "," << format_double(s.z[j].real()) << "," << format_double(s.z[j].imag())
               << "," << format_double(s.g[j].real()) << "," << format_double(s.g[j].imag());
        os << "," << format_double(s.error_estimate) << "\n";
    }
    return os.str();
}

} // namespace loewner
