#include "hqw/cli.hpp"
#include "hqw/walk.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>
#include <thread>

namespace hqw::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep)) parts.push_back(trim(cur));
    if (!s.empty() && s.back() == sep) parts.emplace_back();
    return parts;
}

double parse_double(const std::string& text, const std::string& what) {
    const std::string s = trim(text);
    if (s.empty()) throw ValidationError(what + ": empty number");
    char* end = nullptr;
    const double x = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(x)) {
        throw ValidationError(what + ": cannot parse '" + s + "' as a number");
    }
    return x;
}

std::size_t parse_size(const std::string& text, const std::string& what) {
    const double x = parse_double(text, what);
    if (x < 0 || x != std::floor(x) || x > 1e15) {
        throw ValidationError(what + ": expected a non-negative integer, got '" + trim(text) + "'");
    }
    return static_cast<std::size_t>(x);
}

std::size_t as_size(const LinearParam& p, double omega, const std::string& what) {
    const double x = p.at(omega);
    if (x < 0 || x != std::floor(x)) {
        throw ValidationError(what + " must be a non-negative integer");
    }
    return static_cast<std::size_t>(x);
}

std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

cplx json_complex(const nlohmann::json& v) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
        return {v[0].get<double>(), v[1].get<double>()};
    }
    throw ValidationError("coin entries must be numbers or [re, im] pairs");
}

}  // namespace

LinearParam parse_linear_param(const std::string& text) {
    const std::string s = trim(text);
    const auto w = s.find('w');
    if (w == std::string::npos) return {0.0, parse_double(s, "graph parameter")};
    LinearParam p;
    std::string head = s.substr(0, w);
    if (!head.empty() && head.back() == '*') head.pop_back();
    if (head.empty() || head == "+") {
        p.slope = 1.0;
    } else if (head == "-") {
        p.slope = -1.0;
    } else {
        p.slope = parse_double(head, "graph parameter slope");
    }
    const std::string tail = s.substr(w + 1);
    if (!tail.empty()) {
        if (tail.front() != '+' && tail.front() != '-') {
            throw ValidationError("graph parameter '" + s + "' must look like kw+c");
        }
        p.offset = parse_double(tail, "graph parameter offset");
    }
    return p;
}

bool GraphSource::depends_on_omega() const {
    for (const auto& p : params)
        if (p.depends_on_omega()) return true;
    return false;
}

LabeledGraph GraphSource::build(double omega) const {
    if (builder.empty()) {
        try {
            return load_json(read_file(path));
        } catch (const GraphError& e) {
            throw ValidationError(path + ": " + e.what());
        }
    }
    auto want = [&](std::size_t count) {
        if (params.size() != count) {
            throw ValidationError("builder '" + builder + "' takes " + std::to_string(count) +
                                  " parameter(s), got " + std::to_string(params.size()));
        }
    };
    auto sz = [&](std::size_t i) { return as_size(params[i], omega, builder + " parameter " + std::to_string(i + 1)); };
    try {
        if (builder == "circle2") {
            want(2);
            return build::circle2(params[0].at(omega), params[1].at(omega));
        }
        if (builder == "star") { want(1); return build::star(sz(0)); }
        if (builder == "line2") { want(1); return build::line2(sz(0)); }
        if (builder == "line3") { want(1); return build::line3(sz(0)); }
        if (builder == "line") { want(2); return build::line(sz(0), sz(1)); }
        if (builder == "segment") { want(1); return build::segment_line(sz(0)); }
        if (builder == "fock_g0") { want(2); return build::fock_g0(sz(0), params[1].at(omega)); }
        if (builder == "fock_g0p") { want(1); return build::fock_g0p(sz(0)); }
        if (builder == "cycle") { want(1); return build::cycle(sz(0)); }
        if (builder == "complete") { want(1); return build::complete(sz(0)); }
        if (builder == "benchmark8") { want(0); return build::benchmark8(); }
        if (builder == "tree") { want(1); return build::colored_tree(sz(0)); }
        if (builder == "random_regular") { want(3); return build::random_regular(sz(0), sz(1), sz(2)); }
    } catch (const GraphError& e) {
        throw ValidationError(builder + ": " + e.what());
    }
    throw ValidationError("unknown graph builder '" + builder + "'");
}

GraphSource parse_graph_source(const std::string& text) {
    const std::string s = trim(text);
    if (s.empty()) throw ValidationError("--graph is empty");
    GraphSource src;
    if (ends_with(lower(s), ".json")) {
        src.path = s;
        return src;
    }
    const auto colon = s.find(':');
    src.builder = s.substr(0, colon);
    if (colon != std::string::npos) {
        for (const auto& p : split(s.substr(colon + 1), ',')) src.params.push_back(parse_linear_param(p));
    }
    return src;
}

ComplexMatrix parse_coin(const std::string& text, std::size_t coin_dim) {
    const std::string s = trim(text);
    CoinSpec spec = CoinSpec::identity();
    if (s == "identity") {
        spec = CoinSpec::identity();
    } else if (s == "hadamard") {
        spec = CoinSpec::hadamard();
    } else if (s == "fourier") {
        spec = CoinSpec::fourier();
    } else if (s == "grover") {
        spec = CoinSpec::grover();
    } else if (s.rfind("custom:", 0) == 0) {
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(read_file(s.substr(7)));
        } catch (const nlohmann::json::exception& e) {
            throw ValidationError(std::string("custom coin: ") + e.what());
        }
        if (!doc.is_array() || doc.empty()) throw ValidationError("custom coin must be a square array of rows");
        const std::size_t n = doc.size();
        ComplexMatrix m(n, n);
        for (std::size_t r = 0; r < n; ++r) {
            if (!doc[r].is_array() || doc[r].size() != n) throw ValidationError("custom coin must be square");
            for (std::size_t c = 0; c < n; ++c) m(r, c) = json_complex(doc[r][c]);
        }
        spec = CoinSpec::custom(std::move(m));
    } else {
        throw ValidationError("unknown coin '" + s + "'");
    }
    try {
        return spec.realize(coin_dim);
    } catch (const std::exception& e) {
        throw ValidationError(std::string("coin: ") + e.what());
    }
}

std::vector<cplx> parse_coin_amplitudes(const std::string& text, std::size_t coin_dim) {
    std::string s = trim(text);
    if (s.rfind("coin:", 0) == 0) s = s.substr(5);
    std::vector<cplx> amps(coin_dim);
    if (s == "uniform") {
        for (auto& a : amps) a = 1.0 / std::sqrt(static_cast<double>(coin_dim));
        return amps;
    }
    if (s.rfind("basis:", 0) == 0) {
        const std::size_t k = parse_size(s.substr(6), "basis index");
        if (k >= coin_dim) {
            throw ValidationError("basis index " + std::to_string(k) + " out of range for coin dimension " +
                                  std::to_string(coin_dim));
        }
        amps[k] = 1.0;
        return amps;
    }
    if (s.rfind("amp:", 0) == 0) {
        std::string body = trim(s.substr(4));
        if (body.size() < 2 || body.front() != '[' || body.back() != ']') {
            throw ValidationError("amp: expected [re,im;re,im;...]");
        }
        const auto items = split(body.substr(1, body.size() - 2), ';');
        if (items.size() != coin_dim) {
            throw ValidationError("amp: got " + std::to_string(items.size()) + " amplitudes, coin dimension is " +
                                  std::to_string(coin_dim));
        }
        double norm2 = 0.0;
        for (std::size_t i = 0; i < coin_dim; ++i) {
            const auto parts = split(items[i], ',');
            if (parts.empty() || parts.size() > 2) throw ValidationError("amp: bad entry '" + items[i] + "'");
            amps[i] = {parse_double(parts[0], "amp"), parts.size() == 2 ? parse_double(parts[1], "amp") : 0.0};
            norm2 += std::norm(amps[i]);
        }
        if (norm2 < 1e-24) throw ValidationError("amp: zero vector");
        for (auto& a : amps) a /= std::sqrt(norm2);
        return amps;
    }
    throw ValidationError("unknown coin state '" + text + "'");
}

InitialState parse_initial_state(const std::string& text, const LabeledGraph& g, std::size_t coin_dim) {
    std::string coin_part = "coin:uniform";
    std::string pos_part = "pos:center";
    for (const auto& part : split(trim(text), '/')) {
        if (part.empty()) continue;
        if (part.rfind("pos:", 0) == 0) {
            pos_part = part;
        } else {
            coin_part = part;
        }
    }
    InitialState st;
    st.coin = parse_coin_amplitudes(coin_part, coin_dim);
    const std::string where = pos_part.substr(4);
    if (where == "center") {
        const auto coords = g.coordinates();
        for (std::size_t v = 0; v < coords.size(); ++v) {
            if (coords[v] == 0.0) {
                st.vertex = v;
                break;
            }
        }
    } else {
        st.vertex = parse_size(where, "pos");
        if (st.vertex >= g.vertex_count()) {
            throw ValidationError("pos " + std::to_string(st.vertex) + " out of range");
        }
    }
    return st;
}

std::vector<double> Grid::values() const {
    std::vector<double> v(points);
    for (std::size_t k = 0; k < points; ++k) {
        v[k] = start + (stop - start) * static_cast<double>(k) / static_cast<double>(points - 1);
    }
    v.back() = stop;
    return v;
}

Grid parse_grid(const std::string& text) {
    const auto parts = split(trim(text), ':');
    if (parts.size() != 4) throw ValidationError("--sweep expects name:start:stop:points");
    Grid g{parts[0], parse_double(parts[1], "sweep start"), parse_double(parts[2], "sweep stop"),
           parse_size(parts[3], "sweep points")};
    if (g.name.empty()) throw ValidationError("--sweep: empty parameter name");
    if (g.points < 2) throw ValidationError("--sweep: a grid needs at least 2 points");
    return g;
}

std::pair<std::size_t, std::size_t> parse_entry(const std::string& text) {
    const auto parts = split(trim(text), ',');
    if (parts.size() != 2) throw ValidationError("--entry expects i,j");
    return {parse_size(parts[0], "entry row"), parse_size(parts[1], "entry column")};
}

std::vector<std::size_t> parse_index_list(const std::string& text) {
    std::vector<std::size_t> out;
    for (const auto& p : split(trim(text), ',')) out.push_back(parse_size(p, "index list"));
    return out;
}

bool is_sweep_parameter(const std::string& name) {
    return name == "q_time" || name == "q_mix2" || name == "q_mix3" || name == "q_phase2" ||
           name == "q_phase3";
}

std::vector<cplx> sweep_coin(const std::string& parameter, double q) {
    using std::numbers::pi;
    const cplx phase = std::exp(cplx{0.0, -q * pi});
    if (parameter == "q_time") {
        const double u = 1.0 / std::sqrt(3.0);
        return {u, u, u};
    }
    if (parameter == "q_mix2") {
        if (std::abs(q) > 1.0) throw ValidationError("q_mix2 needs |q| <= 1");
        return {q, std::sqrt(std::max(0.0, 1.0 - q * q)), 0.0};
    }
    if (parameter == "q_mix3") {
        const double rest = 2.0 - 3.0 * q * q;
        if (rest < -1e-12) throw ValidationError("q_mix3 needs 3q^2 <= 2");
        const double s = std::sqrt(3.0);
        return {1.0 / s, q, std::sqrt(std::max(0.0, rest)) / s};
    }
    if (parameter == "q_phase2") {
        const double s = std::sqrt(2.0);
        return {1.0 / s, phase / s, 0.0};
    }
    if (parameter == "q_phase3") {
        const double s = std::sqrt(3.0);
        return {1.0 / s, phase / s, 1.0 / s};
    }
    throw ValidationError("unknown sweep parameter '" + parameter +
                          "' (expected q_time, q_mix2, q_mix3, q_phase2 or q_phase3)");
}

double sweep_time(const std::string& parameter, double q) {
    if (!is_sweep_parameter(parameter)) throw ValidationError("unknown sweep parameter '" + parameter + "'");
    return parameter == "q_time" ? q * std::numbers::pi : 1.5 * std::numbers::pi;
}

std::string RunConfig::canonical() const {
    std::ostringstream s;
    s << "sub=" << subcommand;
    for (const auto& g : graphs) s << "|graph=" << g;
    s << "|coin=" << coin << "|t=" << (t ? format_number(*t) : "-") << "|steps=" << (steps ? std::to_string(*steps) : "-")
      << "|every_step=" << every_step << "|init=" << init;
    for (const auto& g : sweeps) s << "|sweep=" << g;
    s << "|source=" << (source ? std::to_string(*source) : "-")
      << "|target=" << (target ? std::to_string(*target) : "-") << "|path=" << path << "|alpha=" << alpha
      << "|power=" << power << "|entry=" << entry << "|trace_only=" << trace_only
      << "|vertex=" << (vertex ? std::to_string(*vertex) : "-") << "|mode=" << mode << "|shots=" << shots
      << "|seed=" << (seed ? std::to_string(*seed) : "-") << "|format=" << format;
    return s.str();
}

EstimateMode RunConfig::estimate_mode() const {
    if (mode == "exact") return EstimateMode::exact();
    if (mode != "shots") throw ValidationError("--mode must be exact or shots");
    if (shots == 0) throw ValidationError("--mode shots needs --shots >= 1");
    if (!seed) throw ValidationError("--mode shots needs --seed");
    return EstimateMode::sampled(shots, *seed);
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string output_path(const RunConfig& config, const std::string& extension) {
    if (!config.out.empty()) return config.out;
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(config.canonical())));
    return "out/" + config.subcommand + "-" + hex + "." + extension;
}

std::size_t worker_count() {
    if (const char* env = std::getenv("HQW_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v >= 1) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

std::string format_number(double x) {
    if (x == 0.0) return "0";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace hqw::cli
