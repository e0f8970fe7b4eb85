#include "sanovlab/config.hpp"

#include <fstream>
#include <sstream>

namespace sanovlab {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw ConfigError(where + ": " + what);
}

const json& field(const json& j, const std::string& key, const std::string& where) {
    auto it = j.find(key);
    if (it == j.end()) fail(where, "missing required key '" + key + "'");
    return *it;
}

double get_number(const json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

std::vector<double> get_number_array(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of numbers");
    std::vector<double> out;
    for (const auto& v : j) out.push_back(get_number(v, where));
    return out;
}

std::vector<std::int64_t> get_int_array(const json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of integers");
    std::vector<std::int64_t> out;
    for (const auto& v : j) {
        if (!v.is_number_integer()) fail(where, "expected integers");
        out.push_back(v.get<std::int64_t>());
    }
    return out;
}

Distribution parse_distribution(const json& j, const std::string& where) {
    try {
        return Distribution(get_number_array(j, where));
    } catch (const std::invalid_argument& e) {
        fail(where, e.what());
    }
}

PowerLawSchedule parse_schedule(const json& j, const std::string& where) {
    PowerLawSchedule s;
    if (j.contains("c")) s.c = get_number(j["c"], where + ".c");
    if (j.contains("alpha")) s.alpha = get_number(j["alpha"], where + ".alpha");
    try {
        s.validate();
    } catch (const std::invalid_argument& e) {
        fail(where, e.what());
    }
    return s;
}

} // namespace

std::string kind_name(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::ClassicalSanov: return "classical-sanov";
        case ExperimentKind::QuantumSanov: return "quantum-sanov";
        case ExperimentKind::NeymanPearson: return "neyman-pearson";
        case ExperimentKind::Example1: return "example1";
        case ExperimentKind::Example2: return "example2";
        case ExperimentKind::HiaiPetz: return "hiai-petz";
    }
    return "?";
}

DensityOperator parse_state(const json& j, const std::string& where) {
    if (!j.is_object()) fail(where, "state must be an object");
    try {
        if (j.contains("bloch")) {
            std::vector<double> b = get_number_array(j["bloch"], where + ".bloch");
            if (b.size() != 3) fail(where, "bloch vector must have 3 entries");
            double norm = std::sqrt(b[0] * b[0] + b[1] * b[1] + b[2] * b[2]);
            if (norm > 1.0 + 1e-12)
                fail(where, "bloch vector norm " + std::to_string(norm) + " exceeds 1");
            return DensityOperator::from_bloch(b[0], b[1], b[2]);
        }
        if (j.contains("diag")) {
            return DensityOperator::diagonal(get_number_array(j["diag"], where + ".diag"));
        }
        if (j.contains("re")) {
            const json& re = j["re"];
            if (!re.is_array() || re.empty()) fail(where, "re must be a nonempty array of rows");
            const auto dim = static_cast<Eigen::Index>(re.size());
            Matrix m = Matrix::Zero(dim, dim);
            for (Eigen::Index r = 0; r < dim; ++r) {
                std::vector<double> row = get_number_array(re[static_cast<std::size_t>(r)], where + ".re");
                if (static_cast<Eigen::Index>(row.size()) != dim) fail(where, "re must be square");
                for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = row[static_cast<std::size_t>(c)];
            }
            if (j.contains("im")) {
                const json& im = j["im"];
                if (!im.is_array() || static_cast<Eigen::Index>(im.size()) != dim)
                    fail(where, "im must match the shape of re");
                for (Eigen::Index r = 0; r < dim; ++r) {
                    std::vector<double> row = get_number_array(im[static_cast<std::size_t>(r)], where + ".im");
                    if (static_cast<Eigen::Index>(row.size()) != dim) fail(where, "im must be square");
                    for (Eigen::Index c = 0; c < dim; ++c)
                        m(r, c) += Cplx(0.0, row[static_cast<std::size_t>(c)]);
                }
            }
            return DensityOperator(std::move(m));
        }
    } catch (const std::invalid_argument& e) {
        fail(where, e.what());
    }
    fail(where, "state must provide 'bloch', 'diag', or 're'/'im'");
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open file");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();

    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1, col = 1;
        for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
            if (text[i] == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
        }
        throw ConfigError(path + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + e.what());
    }

    ExperimentConfig cfg;
    cfg.echo = j;

    const std::string kind = field(j, "experiment", path).get<std::string>();
    if (kind == "classical-sanov") cfg.kind = ExperimentKind::ClassicalSanov;
    else if (kind == "quantum-sanov") cfg.kind = ExperimentKind::QuantumSanov;
    else if (kind == "neyman-pearson") cfg.kind = ExperimentKind::NeymanPearson;
    else if (kind == "example1") cfg.kind = ExperimentKind::Example1;
    else if (kind == "example2") cfg.kind = ExperimentKind::Example2;
    else if (kind == "hiai-petz") cfg.kind = ExperimentKind::HiaiPetz;
    else fail(path, "unknown experiment kind '" + kind + "'");

    if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("cap")) {
        cfg.cap = j["cap"].get<Eigen::Index>();
        if (cfg.cap < 2) fail(path, "cap must be at least 2");
    }
    if (j.contains("grouping_tol")) {
        cfg.grouping_tol = get_number(j["grouping_tol"], path + ".grouping_tol");
        if (!(cfg.grouping_tol > 0.0)) fail(path, "grouping_tol must be positive");
    }
    if (j.contains("eps_schedule")) cfg.schedule = parse_schedule(j["eps_schedule"], path + ".eps_schedule");

    auto read_n_list = [&](bool require_odd = false) {
        cfg.n_list = get_int_array(field(j, "n_list", path), path + ".n_list");
        if (cfg.n_list.empty()) fail(path, "n_list must be nonempty");
        for (std::size_t i = 0; i < cfg.n_list.size(); ++i) {
            if (cfg.n_list[i] < 1) fail(path, "n_list entries must be positive");
            if (i > 0 && cfg.n_list[i] <= cfg.n_list[i - 1]) fail(path, "n_list must be increasing");
            if (require_odd && cfg.n_list[i] % 2 == 0) fail(path, "n_list entries must be odd");
        }
    };

    switch (cfg.kind) {
        case ExperimentKind::ClassicalSanov: {
            const json& omega = field(j, "omega", path);
            if (!omega.is_array() || omega.empty()) fail(path, "omega must be a nonempty array");
            for (std::size_t i = 0; i < omega.size(); ++i)
                cfg.omega.push_back(parse_distribution(omega[i], path + ".omega[" + std::to_string(i) + "]"));
            cfg.q = parse_distribution(field(j, "q", path), path + ".q");
            for (const auto& p : cfg.omega)
                if (p.size() != cfg.q->size()) fail(path, "omega members and q must share one alphabet");
            read_n_list();
            break;
        }
        case ExperimentKind::QuantumSanov: {
            const json& psis = field(j, "psi_set", path);
            if (!psis.is_array() || psis.empty()) fail(path, "psi_set must be a nonempty array");
            for (std::size_t i = 0; i < psis.size(); ++i)
                cfg.psi_set.push_back(parse_state(psis[i], path + ".psi_set[" + std::to_string(i) + "]"));
            cfg.phi = parse_state(field(j, "phi", path), path + ".phi");
            for (const auto& psi : cfg.psi_set)
                if (psi.dim() != cfg.phi->dim()) fail(path, "psi_set and phi must share one dimension");
            cfg.l = field(j, "l", path).get<int>();
            if (cfg.l < 1) fail(path, "l must be positive");
            if (j.contains("delta")) {
                cfg.delta = get_number(j["delta"], path + ".delta");
                if (!(cfg.delta > 0.0)) fail(path, "delta must be positive");
            }
            read_n_list();
            break;
        }
        case ExperimentKind::NeymanPearson: {
            cfg.psi_set.push_back(parse_state(field(j, "psi", path), path + ".psi"));
            cfg.phi = parse_state(field(j, "phi", path), path + ".phi");
            if (cfg.psi_set.front().dim() != cfg.phi->dim()) fail(path, "psi and phi must share one dimension");
            cfg.epsilon = get_number(field(j, "epsilon", path), path + ".epsilon");
            if (!(cfg.epsilon > 0.0 && cfg.epsilon < 1.0)) fail(path, "epsilon must lie in (0,1)");
            read_n_list();
            break;
        }
        case ExperimentKind::Example1: {
            cfg.overlap_sq = get_number(field(j, "overlap_sq", path), path + ".overlap_sq");
            if (!(cfg.overlap_sq > 0.0 && cfg.overlap_sq < 1.0)) fail(path, "overlap_sq must lie in (0,1)");
            if (j.contains("deltas")) {
                cfg.deltas = get_number_array(j["deltas"], path + ".deltas");
                for (double d : cfg.deltas)
                    if (d < 0.0 || d > 1.0) fail(path, "deltas must lie in [0,1]");
            }
            if (j.contains("entropy_k_max")) {
                cfg.entropy_k_max = j["entropy_k_max"].get<int>();
                if (cfg.entropy_k_max < 0) fail(path, "entropy_k_max must be nonnegative");
            }
            read_n_list();
            break;
        }
        case ExperimentKind::Example2: {
            read_n_list(/*require_odd=*/true);
            if (cfg.n_list.back() > 25) fail(path, "n_list entries must be at most 25");
            if (j.contains("T")) cfg.big_t = get_number(j["T"], path + ".T");
            if (!(cfg.big_t > 0.0 && cfg.big_t < 1.5707963267948966)) fail(path, "T must lie in (0, pi/2)");
            if (j.contains("trials")) {
                cfg.trials = j["trials"].get<int>();
                if (cfg.trials < 0) fail(path, "trials must be nonnegative");
            }
            break;
        }
        case ExperimentKind::HiaiPetz: {
            if (j.contains("pairs")) {
                cfg.pairs = j["pairs"].get<int>();
                if (cfg.pairs < 1) fail(path, "pairs must be positive");
            }
            if (j.contains("l_list")) {
                cfg.l_list.clear();
                for (std::int64_t l : get_int_array(j["l_list"], path + ".l_list")) {
                    if (l < 1) fail(path, "l_list entries must be positive");
                    cfg.l_list.push_back(static_cast<int>(l));
                }
                if (cfg.l_list.empty()) fail(path, "l_list must be nonempty");
            }
            break;
        }
    }
    return cfg;
}

} // namespace sanovlab
