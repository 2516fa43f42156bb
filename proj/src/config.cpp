#include "dtaoi/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "dtaoi/errors.hpp"

namespace dtaoi {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what)
{
    throw InvalidInput("config: " + path + ": " + what);
}

void reject_unknown(const json& obj, const std::string& prefix,
                    std::initializer_list<std::string_view> known)
{
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (auto k : known)
            ok = ok || key == k;
        if (!ok)
            fail(prefix + key, "unknown key");
    }
}

const json* child(const json& obj, const char* key)
{
    const auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

const json& object_at(const json& obj, const char* key, const std::string& path)
{
    const json* v = child(obj, key);
    if (v == nullptr || !v->is_object())
        fail(path, "expected an object");
    return *v;
}

double number(const json& v, const std::string& path)
{
    if (!v.is_number())
        fail(path, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        fail(path, "expected a finite number");
    return x;
}

std::uint64_t count(const json& v, const std::string& path)
{
    if (!v.is_number_unsigned())
        fail(path, "expected a non-negative integer");
    return v.get<std::uint64_t>();
}

int positive_int(const json& v, const std::string& path)
{
    if (!v.is_number_integer() || v.get<std::int64_t>() < 1
        || v.get<std::int64_t>() > std::numeric_limits<int>::max())
        fail(path, "expected a positive integer");
    return static_cast<int>(v.get<std::int64_t>());
}

} // namespace

Config parse_config(std::string_view text)
{
    json root;
    try {
        root = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw InvalidInput(std::string("config: malformed JSON: ") + e.what());
    }
    if (!root.is_object())
        fail("<root>", "expected an object");
    reject_unknown(root, "", {"sources", "q", "discipline", "tagged_source", "solver", "sim", "search"});

    Config cfg;
    cfg.hash = fnv1a_hex(text);

    const json* sources = child(root, "sources");
    if (sources == nullptr || !sources->is_array() || sources->empty())
        fail("sources", "expected a non-empty array of probabilities");
    for (std::size_t i = 0; i < sources->size(); ++i)
        cfg.scenario.p.push_back(number((*sources)[i], "sources[" + std::to_string(i) + "]"));

    const json* q = child(root, "q");
    if (q == nullptr)
        fail("q", "missing");
    cfg.scenario.q = number(*q, "q");

    const json* disc = child(root, "discipline");
    if (disc == nullptr || !disc->is_string())
        fail("discipline", "expected one of \"npb\", \"pb\", \"npsbr\"");
    try {
        cfg.scenario.discipline = parse_discipline(disc->get<std::string>());
    } catch (const InvalidInput& e) {
        fail("discipline", e.what());
    }

    if (const json* t = child(root, "tagged_source"))
        cfg.scenario.tagged_source = positive_int(*t, "tagged_source");

    if (child(root, "solver")) {
        const json& s = object_at(root, "solver", "solver");
        reject_unknown(s, "solver.", {"tol", "max_iter"});
        if (const json* v = child(s, "tol")) {
            cfg.solver.tol = number(*v, "solver.tol");
            if (!(cfg.solver.tol > 0.0))
                fail("solver.tol", "must be positive");
        }
        if (const json* v = child(s, "max_iter"))
            cfg.solver.max_iter = positive_int(*v, "solver.max_iter");
    }

    if (child(root, "sim")) {
        const json& s = object_at(root, "sim", "sim");
        reject_unknown(s, "sim.", {"horizon", "warmup", "seed"});
        if (const json* v = child(s, "horizon"))
            cfg.sim.horizon = count(*v, "sim.horizon");
        if (const json* v = child(s, "warmup"))
            cfg.sim.warmup = count(*v, "sim.warmup");
        if (const json* v = child(s, "seed"))
            cfg.sim.seed = count(*v, "sim.seed");
        if (cfg.sim.horizon <= cfg.sim.warmup)
            fail("sim.horizon", "must exceed sim.warmup");
    }

    if (child(root, "search")) {
        const json& s = object_at(root, "search", "search");
        reject_unknown(s, "search.", {"alpha", "beta", "grid_step"});
        if (const json* v = child(s, "alpha")) {
            cfg.search.alpha = number(*v, "search.alpha");
            if (!(cfg.search.alpha >= 0.0 && cfg.search.alpha <= 1.0))
                fail("search.alpha", "must lie in [0, 1]");
        }
        if (const json* v = child(s, "beta"); v != nullptr && !v->is_null()) {
            cfg.search.beta = number(*v, "search.beta");
            if (!(*cfg.search.beta > 0.0 && *cfg.search.beta <= 2.0))
                fail("search.beta", "must lie in (0, 2]");
        }
        if (const json* v = child(s, "grid_step")) {
            cfg.search.grid_step = number(*v, "search.grid_step");
            if (!(cfg.search.grid_step > 0.0 && cfg.search.grid_step <= 1.0))
                fail("search.grid_step", "must lie in (0, 1]");
        }
    }

    try {
        validate(cfg.scenario);
    } catch (const InvalidInput& e) {
        throw InvalidInput(std::string("config: ") + e.what());
    }
    return cfg;
}

Config load_config(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InvalidInput("config: cannot read " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string fnv1a_hex(std::string_view bytes)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kDigits[h & 0xFU];
        h >>= 4U;
    }
    return out;
}

std::string format_double(double value)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string tool_version()
{
    return DTAOI_VERSION;
}

void write_provenance(std::ostream& os, const Provenance& p)
{
    os << "# tool=dtaoi " << tool_version() << '\n';
    if (!p.config_hash.empty())
        os << "# config_hash=" << p.config_hash << '\n';
    os << "# solver_tol=" << format_double(p.tol) << '\n';
    os << "# solver_max_iter=" << p.max_iter << '\n';
    if (p.seed)
        os << "# seed=" << *p.seed << '\n';
    for (const auto& [k, v] : p.extra)
        os << "# " << k << '=' << v << '\n';
}

} // namespace dtaoi
