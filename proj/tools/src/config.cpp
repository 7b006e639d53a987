#include "config.hpp"

#include <initializer_list>
#include <limits>
#include <string_view>

#include "ultimum/error.hpp"

namespace ultimum::cli {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
    for (const auto& [key, _] : obj.items()) {
        bool known = false;
        for (auto a : allowed) known = known || key == a;
        if (!known) throw ConfigError("unknown key '" + std::string(where) + key + "'");
    }
}

const json& object_at(const json& parent, const std::string& key, const std::string& path) {
    const json& v = parent.at(key);
    if (!v.is_object()) throw ConfigError("'" + path + "' must be an object");
    return v;
}

double number(const json& obj, const char* key, const std::string& prefix, double fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number()) throw ConfigError("'" + prefix + key + "' must be a number");
    return v.get<double>();
}

double required_number(const json& obj, const char* key, const std::string& prefix) {
    if (!obj.contains(key)) throw ConfigError("missing key '" + prefix + key + "'");
    return number(obj, key, prefix, 0.0);
}

std::uint64_t unsigned_integer(const json& obj, const char* key, const std::string& prefix, std::uint64_t fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_number_unsigned()) throw ConfigError("'" + prefix + key + "' must be a non-negative integer");
    return v.get<std::uint64_t>();
}

bool boolean(const json& obj, const char* key, const std::string& prefix, bool fallback) {
    if (!obj.contains(key)) return fallback;
    const json& v = obj.at(key);
    if (!v.is_boolean()) throw ConfigError("'" + prefix + key + "' must be true or false");
    return v.get<bool>();
}

void require(bool ok, const std::string& key, const char* what) {
    if (!ok) throw ConfigError("'" + key + "' " + what);
}

FamilyParams parse_family(const json& f) {
    if (!f.contains("type") || !f.at("type").is_string()) throw ConfigError("'family.type' must be a string");
    const auto type = f.at("type").get<std::string>();
    const std::string p = "family.";
    FamilyParams params;
    if (type == "brownian_drift") {
        reject_unknown(f, p, {"type", "sigma", "mu"});
        params = BrownianDrift{required_number(f, "sigma", p), required_number(f, "mu", p)};
    } else if (type == "jump_diffusion") {
        reject_unknown(f, p, {"type", "sigma", "mu", "lambda", "eta"});
        params = JumpDiffusion{required_number(f, "sigma", p), required_number(f, "mu", p),
                               required_number(f, "lambda", p), required_number(f, "eta", p)};
    } else if (type == "compound_poisson_drift") {
        reject_unknown(f, p, {"type", "mu", "lambda", "eta"});
        params = CompoundPoissonDrift{required_number(f, "mu", p), required_number(f, "lambda", p),
                                      required_number(f, "eta", p)};
    } else {
        throw ConfigError("'family.type' must be brownian_drift, jump_diffusion or compound_poisson_drift");
    }
    try {
        validate_parameters(params);
    } catch (const DomainError& e) {
        throw ConfigError(std::string("'family': ") + e.what());
    }
    return params;
}

}  // namespace

PathConfig RunConfig::path_config() const {
    PathConfig c;
    c.dt = simulation.dt;
    c.eps_tail = simulation.eps_tail;
    c.horizon_cap = simulation.horizon_cap;
    c.store_full_path = false;
    return c;
}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) throw ConfigError("configuration must be a JSON object");
    reject_unknown(doc, "", {"family", "seed", "curve", "simulation", "verify", "occupation", "tolerances"});
    if (!doc.contains("family")) throw ConfigError("missing key 'family'");

    RunConfig cfg;
    cfg.family = parse_family(object_at(doc, "family", "family"));
    cfg.seed = unsigned_integer(doc, "seed", "", cfg.seed);

    if (doc.contains("curve")) {
        const auto& c = object_at(doc, "curve", "curve");
        reject_unknown(c, "curve.", {"points", "y_max"});
        const auto points = unsigned_integer(c, "points", "curve.", 500);
        require(points >= 2 && points <= 1000000, "curve.points", "must lie in [2, 1e6]");
        cfg.curve.points = static_cast<int>(points);
        cfg.curve.y_max = number(c, "y_max", "curve.", 0.0);
        require(cfg.curve.y_max >= 0.0, "curve.y_max", "must be >= 0 (0 selects 1.5 y*)");
    }

    if (doc.contains("simulation")) {
        const auto& s = object_at(doc, "simulation", "simulation");
        const std::string p = "simulation.";
        reject_unknown(s, p, {"paths", "dt", "eps_tail", "horizon_cap", "threads", "max_unclean_fraction"});
        auto& sim = cfg.simulation;
        sim.paths = unsigned_integer(s, "paths", p, sim.paths);
        sim.dt = number(s, "dt", p, sim.dt);
        sim.eps_tail = number(s, "eps_tail", p, sim.eps_tail);
        sim.horizon_cap = number(s, "horizon_cap", p, sim.horizon_cap);
        const auto threads = unsigned_integer(s, "threads", p, 0);
        require(threads <= 4096, "simulation.threads", "must be <= 4096");
        sim.threads = static_cast<unsigned>(threads);
        sim.max_unclean_fraction = number(s, "max_unclean_fraction", p, sim.max_unclean_fraction);
        require(sim.paths >= 100, "simulation.paths", "must be >= 100");
        require(sim.dt > 0.0, "simulation.dt", "must be > 0");
        require(sim.eps_tail > 0.0 && sim.eps_tail <= 1e-3, "simulation.eps_tail", "must lie in (0, 1e-3]");
        require(sim.horizon_cap > 0.0, "simulation.horizon_cap", "must be > 0");
        require(sim.max_unclean_fraction >= 0.0 && sim.max_unclean_fraction < 1.0, "simulation.max_unclean_fraction",
                "must lie in [0, 1)");
    }

    if (doc.contains("verify")) {
        const auto& v = object_at(doc, "verify", "verify");
        const std::string p = "verify.";
        reject_unknown(v, p, {"sweep", "supremum_check", "supremum_paths", "refined_min_dt", "occupation"});
        if (v.contains("sweep")) {
            const auto& list = v.at("sweep");
            if (!list.is_array()) throw ConfigError("'verify.sweep' must be an array of numbers");
            for (const auto& y : list) {
                if (!y.is_number() || !(y.get<double>() >= 0.0)) throw ConfigError("'verify.sweep' entries must be numbers >= 0");
                cfg.verify.sweep.push_back(y.get<double>());
            }
        }
        cfg.verify.supremum_check = boolean(v, "supremum_check", p, cfg.verify.supremum_check);
        cfg.verify.supremum_paths = unsigned_integer(v, "supremum_paths", p, cfg.verify.supremum_paths);
        cfg.verify.refined_min_dt = number(v, "refined_min_dt", p, cfg.verify.refined_min_dt);
        cfg.verify.occupation = boolean(v, "occupation", p, cfg.verify.occupation);
        require(cfg.verify.supremum_paths >= 1000, "verify.supremum_paths", "must be >= 1000");
        require(cfg.verify.refined_min_dt > 0.0 && cfg.verify.refined_min_dt <= cfg.simulation.dt,
                "verify.refined_min_dt", "must lie in (0, simulation.dt]");
    }

    if (doc.contains("occupation")) {
        const auto& o = object_at(doc, "occupation", "occupation");
        const std::string p = "occupation.";
        reject_unknown(o, p, {"y", "a", "bins", "min_dt"});
        cfg.occupation.y = number(o, "y", p, cfg.occupation.y);
        cfg.occupation.a = number(o, "a", p, cfg.occupation.a);
        cfg.occupation.bins = unsigned_integer(o, "bins", p, cfg.occupation.bins);
        cfg.occupation.min_dt = number(o, "min_dt", p, cfg.occupation.min_dt);
        require(cfg.occupation.a > 0.0, "occupation.a", "must be > 0");
        require(cfg.occupation.y >= 0.0 && cfg.occupation.y < cfg.occupation.a, "occupation.y", "must lie in [0, a)");
        require(cfg.occupation.bins >= 10 && cfg.occupation.bins <= 100000, "occupation.bins", "must lie in [10, 1e5]");
        require(cfg.occupation.min_dt >= 0.0 && cfg.occupation.min_dt <= cfg.simulation.dt, "occupation.min_dt",
                "must lie in [0, simulation.dt]");
    }

    if (doc.contains("tolerances")) {
        const auto& t = object_at(doc, "tolerances", "tolerances");
        const std::string p = "tolerances.";
        reject_unknown(t, p, {"quadrature_rel", "quadrature_depth", "threshold_abs", "max_doublings", "smooth_band",
                              "continuous_band"});
        auto& tol = cfg.tolerances;
        tol.quadrature_rel = number(t, "quadrature_rel", p, tol.quadrature_rel);
        tol.quadrature_depth = static_cast<int>(unsigned_integer(t, "quadrature_depth", p, tol.quadrature_depth));
        tol.threshold_abs = number(t, "threshold_abs", p, tol.threshold_abs);
        tol.max_doublings = static_cast<int>(unsigned_integer(t, "max_doublings", p, tol.max_doublings));
        tol.smooth_band = number(t, "smooth_band", p, tol.smooth_band);
        tol.continuous_band = number(t, "continuous_band", p, tol.continuous_band);
        require(tol.quadrature_rel > 0.0, "tolerances.quadrature_rel", "must be > 0");
        require(tol.quadrature_depth >= 4 && tol.quadrature_depth <= 60, "tolerances.quadrature_depth", "must lie in [4, 60]");
        require(tol.threshold_abs > 0.0, "tolerances.threshold_abs", "must be > 0");
        require(tol.max_doublings >= 1 && tol.max_doublings <= 1000, "tolerances.max_doublings", "must lie in [1, 1000]");
        require(tol.smooth_band > 0.0 && tol.smooth_band < tol.continuous_band, "tolerances.smooth_band",
                "must be > 0 and below continuous_band");
    }

    // Degenerate families are a model error, not a schema error.
    ProcessFamily{cfg.family};
    return cfg;
}

json to_json(const FamilyParams& family) {
    return std::visit(
        [](const auto& p) -> json {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, BrownianDrift>) {
                return {{"type", "brownian_drift"}, {"sigma", p.sigma}, {"mu", p.mu}};
            } else if constexpr (std::is_same_v<T, JumpDiffusion>) {
                return {{"type", "jump_diffusion"}, {"sigma", p.sigma}, {"mu", p.mu}, {"lambda", p.lambda}, {"eta", p.eta}};
            } else {
                return {{"type", "compound_poisson_drift"}, {"mu", p.mu}, {"lambda", p.lambda}, {"eta", p.eta}};
            }
        },
        family);
}

json to_json(const SolverTolerances& tol) {
    return {{"quadrature_rel", tol.quadrature_rel}, {"quadrature_depth", tol.quadrature_depth},
            {"threshold_abs", tol.threshold_abs},   {"max_doublings", tol.max_doublings},
            {"smooth_band", tol.smooth_band},       {"continuous_band", tol.continuous_band}};
}

json to_json(const RunConfig& cfg) {
    const auto& s = cfg.simulation;
    const auto& v = cfg.verify;
    const auto& o = cfg.occupation;
    return {{"family", to_json(cfg.family)},
            {"seed", cfg.seed},
            {"curve", {{"points", cfg.curve.points}, {"y_max", cfg.curve.y_max}}},
            {"simulation",
             {{"paths", s.paths},
              {"dt", s.dt},
              {"eps_tail", s.eps_tail},
              {"horizon_cap", s.horizon_cap},
              {"threads", s.threads},
              {"max_unclean_fraction", s.max_unclean_fraction}}},
            {"verify",
             {{"sweep", v.sweep},
              {"supremum_check", v.supremum_check},
              {"supremum_paths", v.supremum_paths},
              {"refined_min_dt", v.refined_min_dt},
              {"occupation", v.occupation}}},
            {"occupation", {{"y", o.y}, {"a", o.a}, {"bins", o.bins}, {"min_dt", o.min_dt}}},
            {"tolerances", to_json(cfg.tolerances)}};
}

}  // namespace ultimum::cli
