#include "qwb/io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace qwb {

namespace {

using nlohmann::json;

json parse_json_file(const std::string& path) {
    const std::string text = read_text_file(path);
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded()) fail(ErrorCode::ParseError, path + ": not valid JSON");
    return doc;
}

Eigen::MatrixXd read_real_matrix(const json& arr, int n, const std::string& what) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != n)
        fail(ErrorCode::ParseError, what + " must be an " + std::to_string(n) + "-row array");
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i) {
        const json& row = arr[i];
        if (!row.is_array() || static_cast<int>(row.size()) != n)
            fail(ErrorCode::ParseError, what + " row " + std::to_string(i) + " has wrong length");
        for (int j = 0; j < n; ++j) {
            if (!row[j].is_number()) fail(ErrorCode::ParseError, what + " has a non-numeric entry");
            m(i, j) = row[j].get<double>();
        }
    }
    return m;
}

Eigen::VectorXd read_real_vector(const json& arr, int n, const std::string& what) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != n)
        fail(ErrorCode::ParseError, what + " must be a length-" + std::to_string(n) + " array");
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
        if (!arr[i].is_number()) fail(ErrorCode::ParseError, what + " has a non-numeric entry");
        v(i) = arr[i].get<double>();
    }
    return v;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

json vector_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

} // namespace

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path);
    out << content;
    if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

CMatrix load_state_matrix(const std::string& path) {
    const json doc = parse_json_file(path);
    if (!doc.contains("n") || !doc["n"].is_number_integer())
        fail(ErrorCode::ParseError, path + ": missing integer field 'n'");
    const int n = doc["n"].get<int>();
    if (n < 1) fail(ErrorCode::ParseError, path + ": n must be >= 1");
    if (!doc.contains("re")) fail(ErrorCode::ParseError, path + ": missing field 're'");
    const Eigen::MatrixXd re = read_real_matrix(doc["re"], n, path + ": 're'");
    Eigen::MatrixXd im = Eigen::MatrixXd::Zero(n, n);
    if (doc.contains("im")) im = read_real_matrix(doc["im"], n, path + ": 'im'");
    return re.cast<std::complex<double>>() +
           std::complex<double>(0, 1) * im.cast<std::complex<double>>();
}

void save_state_matrix(const std::string& path, const CMatrix& m) {
    json doc;
    doc["n"] = static_cast<int>(m.rows());
    doc["re"] = matrix_to_json(m.real());
    doc["im"] = matrix_to_json(m.imag());
    write_text_file(path, doc.dump(2) + "\n");
}

TransportPlan load_plan(const std::string& path) {
    const json doc = parse_json_file(path);
    if (!doc.contains("triples") || !doc["triples"].is_array())
        fail(ErrorCode::ParseError, path + ": missing array field 'triples'");
    TransportPlan plan;
    int n = -1;
    for (const json& entry : doc["triples"]) {
        if (!entry.contains("w") || !entry["w"].is_number())
            fail(ErrorCode::ParseError, path + ": triple without numeric weight 'w'");
        for (const char* key : {"u_re", "u_im", "v_re", "v_im"})
            if (!entry.contains(key))
                fail(ErrorCode::ParseError, path + ": triple missing field '" + key + "'");
        if (n < 0) n = static_cast<int>(entry["u_re"].size());
        const Eigen::VectorXd ure = read_real_vector(entry["u_re"], n, path + ": 'u_re'");
        const Eigen::VectorXd uim = read_real_vector(entry["u_im"], n, path + ": 'u_im'");
        const Eigen::VectorXd vre = read_real_vector(entry["v_re"], n, path + ": 'v_re'");
        const Eigen::VectorXd vim = read_real_vector(entry["v_im"], n, path + ": 'v_im'");
        PlanTriple tr;
        tr.weight = entry["w"].get<double>();
        tr.u = ure.cast<std::complex<double>>() + std::complex<double>(0, 1) * uim.cast<std::complex<double>>();
        tr.v = vre.cast<std::complex<double>>() + std::complex<double>(0, 1) * vim.cast<std::complex<double>>();
        plan.triples.push_back(std::move(tr));
    }
    return plan;
}

void save_plan(const std::string& path, const TransportPlan& plan) {
    json triples = json::array();
    for (const auto& tr : plan.triples) {
        json entry;
        entry["w"] = tr.weight;
        entry["u_re"] = vector_to_json(tr.u.real());
        entry["u_im"] = vector_to_json(tr.u.imag());
        entry["v_re"] = vector_to_json(tr.v.real());
        entry["v_im"] = vector_to_json(tr.v.imag());
        triples.push_back(std::move(entry));
    }
    json doc;
    doc["triples"] = std::move(triples);
    write_text_file(path, doc.dump(2) + "\n");
}

std::string fnv1a_hex(const std::string& content) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char ch : content) {
        h ^= ch;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace qwb
