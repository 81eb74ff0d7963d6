#include "sns/model_io.hpp"

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sns/error.hpp"

namespace sns {

namespace {

using nlohmann::json;

constexpr std::array<const char*, 7> kModelKeys = {"n_states", "n_actions",   "n_envs", "gamma",
                                                   "env_chain", "transitions", "rewards"};

std::string line_column(const std::string& text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

const json& field(const json& obj, const char* name) {
    auto it = obj.find(name);
    if (it == obj.end()) throw ParseError(std::string("missing required field \"") + name + "\"");
    return *it;
}

std::size_t read_count(const json& obj, const char* name) {
    const json& v = field(obj, name);
    if (!v.is_number_integer() || v.get<long long>() <= 0) {
        throw ParseError(std::string("field \"") + name + "\" must be a positive integer");
    }
    return v.get<std::size_t>();
}

double read_number(const json& v, const std::string& path) {
    if (!v.is_number()) throw ParseError("field " + path + " must be a number");
    return v.get<double>();
}

const json& read_array(const json& v, std::size_t expected, const std::string& path) {
    if (!v.is_array()) throw ParseError("field " + path + " must be an array");
    if (v.size() != expected) {
        throw ParseError("field " + path + " has " + std::to_string(v.size()) + " entries, expected " +
                         std::to_string(expected));
    }
    return v;
}

Matrix read_matrix(const json& v, std::size_t rows, std::size_t cols, const std::string& path) {
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    read_array(v, rows, path);
    for (std::size_t i = 0; i < rows; ++i) {
        const std::string row_path = path + "[" + std::to_string(i) + "]";
        const json& row = read_array(v[i], cols, row_path);
        for (std::size_t j = 0; j < cols; ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                read_number(row[j], row_path + "[" + std::to_string(j) + "]");
        }
    }
    return m;
}

void write_number(std::ostream& os, double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    os << buf;
}

void write_matrix(std::ostream& os, const Matrix& m, const std::string& indent) {
    os << "[\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        os << indent << "  [";
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) os << ", ";
            write_number(os, m(i, j));
        }
        os << "]" << (i + 1 < m.rows() ? ",\n" : "\n");
    }
    os << indent << "]";
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

json parse_json(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("JSON syntax error at " + line_column(text, e.byte) + ": " + e.what());
    }
}

}  // namespace

SnsMdp parse_model(const std::string& text) {
    const json doc = parse_json(text);
    if (!doc.is_object()) throw ParseError("model file must contain a JSON object");
    for (const auto& [key, value] : doc.items()) {
        bool known = false;
        for (const char* k : kModelKeys) known = known || key == k;
        if (!known) throw ParseError("unknown field \"" + key + "\"");
    }

    SnsMdp model;
    model.n_states = read_count(doc, "n_states");
    model.n_actions = read_count(doc, "n_actions");
    const std::size_t n_envs = read_count(doc, "n_envs");
    model.gamma = read_number(field(doc, "gamma"), "\"gamma\"");
    model.env.q = read_matrix(field(doc, "env_chain"), n_envs, n_envs, "env_chain");

    const json& trans = read_array(field(doc, "transitions"), n_envs, "transitions");
    model.trans.resize(n_envs);
    for (std::size_t e = 0; e < n_envs; ++e) {
        const std::string path = "transitions[" + std::to_string(e) + "]";
        const json& per_env = read_array(trans[e], model.n_actions, path);
        model.trans[e].reserve(model.n_actions);
        for (std::size_t a = 0; a < model.n_actions; ++a) {
            model.trans[e].push_back(read_matrix(per_env[a], model.n_states, model.n_states,
                                                 path + "[" + std::to_string(a) + "]"));
        }
    }

    const json& rewards = read_array(field(doc, "rewards"), n_envs, "rewards");
    model.rewards.reserve(n_envs);
    for (std::size_t e = 0; e < n_envs; ++e) {
        model.rewards.push_back(
            read_matrix(rewards[e], model.n_states, model.n_actions, "rewards[" + std::to_string(e) + "]"));
    }

    require_valid(model);
    return model;
}

std::string serialize_model(const SnsMdp& model) {
    std::ostringstream os;
    os << "{\n";
    os << "  \"n_states\": " << model.n_states << ",\n";
    os << "  \"n_actions\": " << model.n_actions << ",\n";
    os << "  \"n_envs\": " << model.n_envs() << ",\n";
    os << "  \"gamma\": ";
    write_number(os, model.gamma);
    os << ",\n  \"env_chain\": ";
    write_matrix(os, model.env.q, "  ");
    os << ",\n  \"transitions\": [\n";
    for (std::size_t e = 0; e < model.trans.size(); ++e) {
        os << "    [\n";
        for (std::size_t a = 0; a < model.trans[e].size(); ++a) {
            os << "      ";
            write_matrix(os, model.trans[e][a], "      ");
            os << (a + 1 < model.trans[e].size() ? ",\n" : "\n");
        }
        os << "    ]" << (e + 1 < model.trans.size() ? ",\n" : "\n");
    }
    os << "  ],\n  \"rewards\": [\n";
    for (std::size_t e = 0; e < model.rewards.size(); ++e) {
        os << "    ";
        write_matrix(os, model.rewards[e], "    ");
        os << (e + 1 < model.rewards.size() ? ",\n" : "\n");
    }
    os << "  ]\n}\n";
    return os.str();
}

SnsMdp load_model(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    try {
        return parse_model(text);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.violations());
    }
}

void save_model(const SnsMdp& model, const std::filesystem::path& path) {
    require_valid(model);
    const std::string text = serialize_model(model);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    out.flush();
    if (!out) throw Error("write failed for " + path.string());
}

Policy load_policy(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    const json doc = parse_json(text);
    if (!doc.is_object()) throw ParseError("policy file must contain a JSON object");
    const json& rows = field(doc, "policy");
    if (!rows.is_array() || rows.empty() || !rows[0].is_array()) {
        throw ParseError("field \"policy\" must be a non-empty array of arrays");
    }
    return Policy(read_matrix(rows, rows.size(), rows[0].size(), "policy"));
}

}  // namespace sns
