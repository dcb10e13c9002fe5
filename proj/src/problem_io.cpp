#include "kernelcorrupt/problem_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace kc {

namespace {

using nlohmann::json;

struct ScalarValue {
    double value = 0.0;
    std::optional<Rational> exact;
};

ScalarValue parse_scalar(const json& v, const std::string& where) {
    try {
        if (v.is_number_integer()) {
            long long n = v.get<long long>();
            return {static_cast<double>(n), Rational(n)};
        }
        if (v.is_number_float()) return {v.get<double>(), std::nullopt};
        if (v.is_string()) {
            Rational r = Rational::parse(v.get<std::string>());
            return {r.to_double(), r};
        }
    } catch (const Error& e) {
        throw ParseError(where, e.what());
    }
    throw ParseError(where, "expected a number or a fraction string");
}

struct VectorValue {
    std::vector<double> values;
    std::optional<std::vector<Rational>> exact;
};

VectorValue parse_vector(const json& v, const std::string& where) {
    if (!v.is_array()) throw ParseError(where, "expected an array");
    VectorValue out;
    out.exact.emplace();
    for (std::size_t i = 0; i < v.size(); ++i) {
        auto s = parse_scalar(v[i], where + "[" + std::to_string(i) + "]");
        out.values.push_back(s.value);
        if (out.exact && s.exact)
            out.exact->push_back(*s.exact);
        else
            out.exact.reset();
    }
    return out;
}

const json& require_field(const json& obj, const std::string& key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where, "missing field '" + key + "'");
    return *it;
}

FiniteSpace parse_space(const json& v, const std::string& fallback_name, const std::string& where) {
    if (v.is_array()) {
        std::vector<std::string> pts;
        for (const auto& p : v) {
            if (!p.is_string()) throw ParseError(where, "point labels must be strings");
            pts.push_back(p.get<std::string>());
        }
        try {
            return FiniteSpace(fallback_name, pts);
        } catch (const Error& e) {
            throw ParseError(where, e.what());
        }
    }
    if (v.is_object()) {
        std::string name = v.contains("name") ? v["name"].get<std::string>() : fallback_name;
        return parse_space(require_field(v, "points", where), name, where + "/points");
    }
    throw ParseError(where, "expected a point-label array or {name, points}");
}

Space roles_to_space(const json& v, const FiniteSpace& xs, const FiniteSpace& ys, const std::string& where) {
    if (!v.is_array() || v.empty() || v.size() > 2)
        throw ParseError(where, "expected an array of one or two of \"x\", \"y\"");
    std::vector<SpaceFactor> fs;
    for (const auto& e : v) {
        std::string s = e.is_string() ? e.get<std::string>() : "";
        if (s == "x" || s == "X")
            fs.push_back(SpaceFactor{Role::X, xs});
        else if (s == "y" || s == "Y")
            fs.push_back(SpaceFactor{Role::Y, ys});
        else
            throw ParseError(where, "unknown space role '" + s + "'");
    }
    if (fs.size() == 2 && fs[0].role == fs[1].role) throw ParseError(where, "duplicate role");
    return Space(fs);
}

struct KernelValue {
    Kernel<double> k;
    std::optional<Kernel<Rational>> exact;
};

KernelValue parse_kernel_block(const json& v, const FiniteSpace& xs, const FiniteSpace& ys,
                               const std::optional<Space>& fixed_domain, const std::optional<Space>& fixed_image,
                               const std::string& where) {
    if (!v.is_object()) throw ParseError(where, "expected a matrix object");
    Space dom = fixed_domain ? *fixed_domain
                             : roles_to_space(require_field(v, "domain", where), xs, ys, where + "/domain");
    Space img = fixed_image ? *fixed_image
                            : roles_to_space(require_field(v, "image", where), xs, ys, where + "/image");
    auto rows = require_field(v, "rows", where).get<std::size_t>();
    auto cols = require_field(v, "cols", where).get<std::size_t>();
    if (rows != img.size()) throw ParseError(where + "/rows", "rows must equal the image-space size");
    if (cols != dom.size()) throw ParseError(where + "/cols", "cols must equal the domain-space size");
    auto data = parse_vector(require_field(v, "data", where), where + "/data");
    if (data.values.size() != rows * cols)
        throw ParseError(where + "/data", "expected rows*cols entries, row-major");
    try {
        KernelValue out{Kernel<double>(dom, img, data.values), std::nullopt};
        if (data.exact) out.exact = Kernel<Rational>(dom, img, *data.exact);
        return out;
    } catch (const Error& e) {
        throw ParseError(where, e.what());
    }
}

struct CorruptionValue {
    std::optional<CorruptionSpec<double>> spec;
    std::optional<CorruptionSpec<Rational>> exact;
    std::optional<std::pair<Kernel<double>, Kernel<double>>> infeasible;
};

CorruptionValue parse_corruption(const json& v, const FiniteSpace& xs, const FiniteSpace& ys,
                                 const std::string& where) {
    if (!v.is_object()) throw ParseError(where, "expected an object");
    Space prod = Space::pair(Role::X, xs, Role::Y, ys);
    try {
        if (v.contains("joint")) {
            auto k = parse_kernel_block(v["joint"], xs, ys, prod, prod, where + "/joint");
            CorruptionValue out;
            out.spec = CorruptionSpec<double>::non_factorized(k.k);
            if (k.exact) out.exact = CorruptionSpec<Rational>::non_factorized(*k.exact);
            return out;
        }
        auto tau = parse_kernel_block(require_field(v, "tau", where), xs, ys, std::nullopt, std::nullopt,
                                      where + "/tau");
        auto lambda = parse_kernel_block(require_field(v, "lambda", where), xs, ys, std::nullopt, std::nullopt,
                                         where + "/lambda");
        CorruptionValue out;
        if (!check_pairwise_feasible(signature_of(tau.k), signature_of(lambda.k))) {
            out.infeasible = std::pair(tau.k, lambda.k);
            return out;
        }
        out.spec = CorruptionSpec<double>::factorized(tau.k, lambda.k);
        if (tau.exact && lambda.exact)
            out.exact = CorruptionSpec<Rational>::factorized(*tau.exact, *lambda.exact);
        return out;
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError(where, e.what());
    }
}

LossFunction table_loss(const std::vector<std::vector<double>>& table, double bound, std::size_t ny) {
    LossFunction l;
    l.name = "table";
    l.y_size = ny;
    l.bound = bound;
    l.declared_proper = false;
    l.eval = [table](std::span<const double> p, std::size_t y) {
        std::size_t best = 0;
        for (std::size_t k = 1; k < p.size(); ++k)
            if (p[k] > p[best]) best = k;
        return table[best][y];
    };
    return l;
}

json kernel_to_json(const Kernel<double>& k, const std::optional<Kernel<Rational>>& exact, bool with_roles) {
    json out = json::object();
    if (with_roles) {
        auto roles = [](const Space& s) {
            json a = json::array();
            for (const auto& f : s.factors()) a.push_back(f.role == Role::X ? "x" : "y");
            return a;
        };
        out["domain"] = roles(k.domain());
        out["image"] = roles(k.image());
    }
    out["rows"] = k.rows();
    out["cols"] = k.cols();
    json data = json::array();
    for (std::size_t i = 0; i < k.matrix().size(); ++i) {
        if (exact)
            data.push_back(exact->matrix()[i].str());
        else
            data.push_back(k.matrix()[i]);
    }
    out["data"] = data;
    return out;
}

json corruption_to_json(const CorruptionSpec<double>& spec, const std::optional<CorruptionSpec<Rational>>& exact) {
    json out = json::object();
    if (spec.is_factorized()) {
        out["tau"] = kernel_to_json(spec.tau(), exact ? std::optional(exact->tau()) : std::nullopt, true);
        out["lambda"] =
            kernel_to_json(spec.lambda(), exact ? std::optional(exact->lambda()) : std::nullopt, true);
    } else {
        out["joint"] = kernel_to_json(spec.joint_kernel(),
                                      exact ? std::optional(exact->joint_kernel()) : std::nullopt, false);
    }
    return out;
}

json vector_to_json(const std::vector<double>& v, const std::optional<std::vector<Rational>>& exact) {
    json a = json::array();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (exact)
            a.push_back((*exact)[i].str());
        else
            a.push_back(v[i]);
    }
    return a;
}

} // namespace

ProblemFile parse_problem_file(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError("(document)", e.what());
    }
    if (!root.is_object()) throw ParseError("(document)", "expected a JSON object");

    ProblemFile pf;
    const json& spaces = require_field(root, "spaces", "spaces");
    pf.x_space = parse_space(require_field(spaces, "x", "spaces"), "X", "spaces/x");
    pf.y_space = parse_space(require_field(spaces, "y", "spaces"), "Y", "spaces/y");

    auto joint = parse_vector(require_field(root, "joint", "joint"), "joint");
    try {
        pf.joint = make_joint(pf.x_space, pf.y_space, joint.values);
        if (joint.exact) pf.joint_exact = make_joint(pf.x_space, pf.y_space, *joint.exact);
    } catch (const Error& e) {
        throw ParseError("joint", e.what());
    }

    const json& loss = require_field(root, "loss", "loss");
    if (loss.is_string()) {
        pf.loss_selector = loss.get<std::string>();
        if (pf.loss_selector == "brier")
            pf.loss = brier_loss(pf.y_space);
        else if (pf.loss_selector == "zero_one")
            pf.loss = zero_one_loss(pf.y_space);
        else
            throw ParseError("loss", "unknown loss '" + pf.loss_selector + "'");
    } else if (loss.is_object()) {
        pf.loss_selector = "table";
        double bound = parse_scalar(require_field(loss, "bound", "loss/bound"), "loss/bound").value;
        const json& table = require_field(loss, "table", "loss");
        std::size_t ny = pf.y_space.size();
        if (!table.is_array() || table.size() != ny)
            throw ParseError("loss/table", "expected one row per predicted label");
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < ny; ++i) {
            auto row = parse_vector(table[i], "loss/table[" + std::to_string(i) + "]");
            if (row.values.size() != ny)
                throw ParseError("loss/table[" + std::to_string(i) + "]", "expected one entry per true label");
            for (double v : row.values)
                if (v < 0.0 || v > bound)
                    throw ParseError("loss/table", "entries must lie in [0, bound]");
            rows.push_back(row.values);
        }
        pf.loss_table = rows;
        pf.loss_table_bound = bound;
        pf.loss = table_loss(rows, bound, ny);
    } else {
        throw ParseError("loss", "expected \"brier\", \"zero_one\" or {bound, table}");
    }

    const json& hyp = require_field(root, "hypotheses", "hypotheses");
    if (hyp.is_string() && hyp.get<std::string>() == "all_deterministic") {
        pf.hypothesis_selector = "all_deterministic";
        try {
            pf.hypotheses = all_deterministic_hypotheses(pf.x_space, pf.y_space);
        } catch (const Error& e) {
            throw ParseError("hypotheses", e.what());
        }
    } else if (hyp.is_array()) {
        pf.hypothesis_selector = "explicit";
        std::size_t nx = pf.x_space.size(), ny = pf.y_space.size();
        Space dom = Space::single(Role::X, pf.x_space);
        Space img = Space::single(Role::Y, pf.y_space);
        std::vector<Kernel<double>> hs;
        for (std::size_t i = 0; i < hyp.size(); ++i) {
            std::string where = "hypotheses[" + std::to_string(i) + "]";
            const json& assignment = hyp[i];
            if (!assignment.is_array() || assignment.size() != nx)
                throw ParseError(where, "expected one label per attribute point");
            std::vector<std::size_t> labels;
            for (std::size_t x = 0; x < nx; ++x) {
                const json& lv = assignment[x];
                std::size_t label;
                if (lv.is_number_unsigned() || lv.is_number_integer()) {
                    long long raw = lv.get<long long>();
                    if (raw < 0 || raw >= static_cast<long long>(ny))
                        throw ParseError(where, "label index out of range");
                    label = static_cast<std::size_t>(raw);
                } else if (lv.is_string()) {
                    try {
                        label = pf.y_space.index_of(lv.get<std::string>());
                    } catch (const Error& e) {
                        throw ParseError(where, e.what());
                    }
                } else {
                    throw ParseError(where, "labels must be indices or point names");
                }
                labels.push_back(label);
            }
            std::vector<double> m(nx * ny, 0.0);
            for (std::size_t x = 0; x < nx; ++x) m[labels[x] * nx + x] = 1.0;
            hs.emplace_back(dom, img, std::move(m));
            pf.explicit_labels.push_back(labels);
        }
        if (hs.empty()) throw ParseError("hypotheses", "explicit hypothesis list is empty");
        pf.hypotheses = make_hypothesis_class(std::move(hs));
    } else {
        throw ParseError("hypotheses", "expected \"all_deterministic\" or a list of label assignments");
    }

    auto corr = parse_corruption(require_field(root, "corruption", "corruption"), pf.x_space, pf.y_space,
                                 "corruption");
    pf.corruption = std::move(corr.spec);
    pf.corruption_exact = std::move(corr.exact);
    pf.infeasible_factors = std::move(corr.infeasible);

    if (root.contains("expected_corrupted")) {
        auto exp = parse_vector(root["expected_corrupted"], "expected_corrupted");
        try {
            pf.expected_corrupted = make_joint(pf.x_space, pf.y_space, exp.values);
            if (exp.exact) pf.expected_corrupted_exact = make_joint(pf.x_space, pf.y_space, *exp.exact);
        } catch (const Error& e) {
            throw ParseError("expected_corrupted", e.what());
        }
    }
    if (root.contains("cleaning")) {
        auto cleaning = parse_corruption(root["cleaning"], pf.x_space, pf.y_space, "cleaning");
        if (!cleaning.spec) throw ParseError("cleaning", "cleaning factors must form a feasible pair");
        pf.cleaning = std::move(cleaning.spec);
    }

    // cross checks
    LearningProblem check = pf.learning_problem();
    (void)check;
    Space prod = Space::pair(Role::X, pf.x_space, Role::Y, pf.y_space);
    if (pf.corruption && build_joint(*pf.corruption).domain() != prod)
        throw ParseError("corruption", "corruption does not read the declared X x Y");
    return pf;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem_file(ss.str());
}

std::string serialize_problem_file(const ProblemFile& pf) {
    json root;
    root["spaces"]["x"] = {{"name", pf.x_space.name()}, {"points", pf.x_space.points()}};
    root["spaces"]["y"] = {{"name", pf.y_space.name()}, {"points", pf.y_space.points()}};

    std::optional<std::vector<Rational>> joint_exact;
    if (pf.joint_exact) joint_exact = pf.joint_exact->weights();
    root["joint"] = vector_to_json(pf.joint.weights(), joint_exact);

    if (pf.loss_selector == "table") {
        root["loss"]["bound"] = pf.loss_table_bound;
        root["loss"]["table"] = pf.loss_table;
    } else {
        root["loss"] = pf.loss_selector;
    }

    if (pf.hypothesis_selector == "all_deterministic")
        root["hypotheses"] = "all_deterministic";
    else
        root["hypotheses"] = pf.explicit_labels;

    if (pf.corruption) {
        root["corruption"] = corruption_to_json(*pf.corruption, pf.corruption_exact);
    } else {
        root["corruption"]["tau"] = kernel_to_json(pf.infeasible_factors->first, std::nullopt, true);
        root["corruption"]["lambda"] = kernel_to_json(pf.infeasible_factors->second, std::nullopt, true);
    }

    if (pf.expected_corrupted) {
        std::optional<std::vector<Rational>> exact;
        if (pf.expected_corrupted_exact) exact = pf.expected_corrupted_exact->weights();
        root["expected_corrupted"] = vector_to_json(pf.expected_corrupted->weights(), exact);
    }
    if (pf.cleaning) root["cleaning"] = corruption_to_json(*pf.cleaning, std::nullopt);
    return root.dump(2) + "\n";
}

} // namespace kc
