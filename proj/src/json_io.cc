#include "gcoh/json_io.h"

#include <cmath>
#include <cstdio>
#include <limits>

namespace gcoh {

using nlohmann::json;

namespace {

json vector_to_json(const Eigen::VectorXd &v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        out.push_back(v(i));
    }
    return out;
}

json matrix_to_json(const Eigen::MatrixXd &m) {
    json out = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        out.push_back(std::move(row));
    }
    return out;
}

const json &field(const json &doc, const char *key) {
    if (!doc.is_object()) {
        throw Error(ErrorKind::parse_error, "expected a JSON object");
    }
    auto it = doc.find(key);
    if (it == doc.end()) {
        throw Error(ErrorKind::parse_error, std::string("missing field '") + key + "'");
    }
    return *it;
}

double number(const json &v, const std::string &where) {
    if (!v.is_number()) {
        throw Error(ErrorKind::parse_error, where + ": expected a number");
    }
    return v.get<double>();
}

std::size_t modes_field(const json &doc) {
    const json &m = field(doc, "modes");
    if (!m.is_number_integer() || m.get<long long>() < 1) {
        throw Error(ErrorKind::parse_error, "'modes' must be a positive integer");
    }
    return static_cast<std::size_t>(m.get<long long>());
}

Eigen::VectorXd vector_from_json(const json &v, const std::string &name) {
    if (!v.is_array()) {
        throw Error(ErrorKind::parse_error, "'" + name + "' must be an array");
    }
    Eigen::VectorXd out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) {
        out(static_cast<Eigen::Index>(i)) = number(v[i], name + "[" + std::to_string(i) + "]");
    }
    return out;
}

Eigen::MatrixXd matrix_from_json(const json &v, const std::string &name) {
    if (!v.is_array()) {
        throw Error(ErrorKind::parse_error, "'" + name + "' must be an array of rows");
    }
    const std::size_t rows = v.size();
    std::size_t cols = 0;
    for (std::size_t r = 0; r < rows; ++r) {
        if (!v[r].is_array()) {
            throw Error(ErrorKind::parse_error, "'" + name + "' row " + std::to_string(r) + " is not an array");
        }
        if (r == 0) {
            cols = v[r].size();
        } else if (v[r].size() != cols) {
            throw Error(ErrorKind::shape_error, "'" + name + "' has ragged rows");
        }
    }
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            out(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
                number(v[r][c], name + "[" + std::to_string(r) + "][" + std::to_string(c) + "]");
        }
    }
    return out;
}

void check_dims(const Eigen::MatrixXd &m, std::size_t n, const std::string &name) {
    if (static_cast<std::size_t>(m.rows()) != n || static_cast<std::size_t>(m.cols()) != n) {
        throw Error(ErrorKind::shape_error, "'" + name + "' must be " + std::to_string(n) + "x" + std::to_string(n));
    }
}

void check_dims(const Eigen::VectorXd &v, std::size_t n, const std::string &name) {
    if (static_cast<std::size_t>(v.size()) != n) {
        throw Error(ErrorKind::shape_error, "'" + name + "' must have length " + std::to_string(n));
    }
}

json spec_to_json(const IgoSpec &spec) {
    json blocks = json::array();
    for (const IgoBlock &b : spec.blocks) {
        blocks.push_back({{"source", b.source},
                          {"target", b.target},
                          {"scale", b.scale},
                          {"orientation", matrix_to_json(b.orientation)},
                          {"det", b.orientation_det()}});
    }
    return {{"blocks", std::move(blocks)}, {"noise", spec.noise}, {"strict", spec.strict}};
}

void write_number(std::string &out, double x) {
    if (!std::isfinite(x)) {
        out += "null";
        return;
    }
    char buf[32];
    // -0 prints as 0
    std::snprintf(buf, sizeof(buf), "%.17g", x == 0.0 ? 0.0 : x);
    out += buf;
}

void write(std::string &out, const json &v, bool pretty, int depth) {
    auto newline = [&](int d) {
        if (pretty) {
            out += '\n';
            out.append(static_cast<std::size_t>(2 * d), ' ');
        }
    };
    switch (v.type()) {
        case json::value_t::object: {
            if (v.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (auto it = v.begin(); it != v.end(); ++it) {
                if (!first) {
                    out += ',';
                }
                first = false;
                newline(depth + 1);
                out += json(it.key()).dump();
                out += pretty ? ": " : ":";
                write(out, it.value(), pretty, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case json::value_t::array: {
            if (v.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (const json &e : v) {
                if (!first) {
                    out += pretty ? ", " : ",";
                }
                first = false;
                // rows of numbers stay on one line
                if (pretty && !e.is_primitive()) {
                    if (out.back() == ' ') {
                        out.pop_back();
                    }
                    newline(depth + 1);
                }
                write(out, e, pretty, depth + 1);
            }
            if (pretty && !v.back().is_primitive()) {
                newline(depth);
            }
            out += ']';
            return;
        }
        case json::value_t::number_float:
            write_number(out, v.get<double>());
            return;
        default:
            out += v.dump();
            return;
    }
}

}  // namespace

json state_to_json(const GaussianState &state) {
    return {{"modes", state.modes()}, {"mean", vector_to_json(state.mean())}, {"cov", matrix_to_json(state.cov())}};
}

GaussianState state_from_json(const json &doc, double tol) {
    const std::size_t m = modes_field(doc);
    Eigen::MatrixXd cov = matrix_from_json(field(doc, "cov"), "cov");
    check_dims(cov, 2 * m, "cov");
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * m));
    if (doc.contains("mean")) {
        mean = vector_from_json(doc["mean"], "mean");
        check_dims(mean, 2 * m, "mean");
    }
    return validate_state(cov, mean, tol);
}

json channel_to_json(const GaussianChannel &channel) {
    return {{"modes", channel.modes()},
            {"T", matrix_to_json(channel.transfer())},
            {"N", matrix_to_json(channel.noise())},
            {"shift", vector_to_json(channel.shift())}};
}

GaussianChannel channel_from_json(const json &doc, double tol) {
    const std::size_t m = modes_field(doc);
    Eigen::MatrixXd t = matrix_from_json(field(doc, "T"), "T");
    check_dims(t, 2 * m, "T");
    Eigen::MatrixXd n = matrix_from_json(field(doc, "N"), "N");
    check_dims(n, 2 * m, "N");
    Eigen::VectorXd shift = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(2 * m));
    if (doc.contains("shift")) {
        shift = vector_from_json(doc["shift"], "shift");
        check_dims(shift, 2 * m, "shift");
    }
    return validate_channel(t, n, shift, tol);
}

json coherence_to_json(const CoherenceReport &report) {
    return {{"n_bar", report.n_bar},
            {"entropy", report.entropy},
            {"c_rel_ent", report.c_rel_ent},
            {"reference", state_to_json(report.reference)}};
}

json classification_to_json(const IgoClassification &classification) {
    if (const auto *n = std::get_if<NotIncoherent>(&classification)) {
        return {{"verdict", "NotIncoherent"}, {"reason", n->reason}};
    }
    const IgoSpec *spec = igo_spec(classification);
    json out = spec_to_json(*spec);
    out["verdict"] = spec->strict ? "StrictlyIncoherent" : "Incoherent";
    return out;
}

json unitary_to_json(const IncoherentUnitary &u) {
    return {{"perm", u.perm()}, {"angles", u.angles()}};
}

json verdict_to_json(const EquivalenceVerdict &verdict) {
    return std::visit(
        [](const auto &v) -> json {
            using V = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<V, Equivalent>) {
                return {{"verdict", "Equivalent"},
                        {"perm", v.certificate.perm()},
                        {"angles", v.certificate.angles()},
                        {"residual", v.residual}};
            } else if constexpr (std::is_same_v<V, NotEquivalent>) {
                return {{"verdict", "NotEquivalent"}, {"witness", v.witness}, {"residual", v.best_residual}};
            } else if constexpr (std::is_same_v<V, AllIncoherent>) {
                return {{"verdict", "AllIncoherent"}};
            } else {
                return {{"verdict", "HypothesisViolated"},
                        {"state", v.state},
                        {"mode", v.mode},
                        {"reason", v.reason}};
            }
        },
        verdict);
}

json parse_json(const std::string &text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error &e) {
        throw Error(ErrorKind::parse_error, e.what());
    }
}

std::string dump_json(const json &doc, bool pretty) {
    std::string out;
    write(out, doc, pretty, 0);
    return out;
}

}  // namespace gcoh
