#include "eswm/config.hpp"

#include <fstream>
#include <set>
#include <string>
#include <vector>

namespace eswm {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& why) {
    throw ConfigError(field + ": " + why);
}

void reject_unknown_keys(const json& obj, const std::string& scope,
                         const std::set<std::string>& known) {
    for (const auto& [key, _] : obj.items()) {
        if (!known.contains(key))
            fail(scope.empty() ? key : scope + "." + key, "unknown field");
    }
}

template <typename T>
void read(const json& obj, const std::string& scope, const char* key, T& dst) {
    if (!obj.contains(key)) return;
    try {
        dst = obj.at(key).get<T>();
    } catch (const json::exception&) {
        fail(scope.empty() ? key : scope + "." + key, "wrong type");
    }
}

void read_range(const json& obj, const std::string& scope, const char* key, Range& dst) {
    if (!obj.contains(key)) return;
    const auto& value = obj.at(key);
    if (!value.is_array() || value.size() != 2 || !value[0].is_number() || !value[1].is_number())
        fail(scope + "." + key, "must be a [lo, hi] pair of numbers");
    dst.lo = value[0].get<double>();
    dst.hi = value[1].get<double>();
}

json range_to_json(const Range& r) { return json::array({r.lo, r.hi}); }

} // namespace

ExperimentConfig default_config() { return {}; }

nlohmann::json config_to_json(const ExperimentConfig& config) {
    const auto& p = config.params;
    json curves = json::array();
    for (CurveKind kind : p.population.curves) curves.push_back(std::string(to_string(kind)));

    return json{
        {"population",
         {
             {"requesters", p.population.requesters},
             {"providers", p.population.providers},
             {"value", range_to_json(p.population.value)},
             {"deadline", range_to_json(p.population.deadline)},
             {"depreciation_rate", range_to_json(p.population.depreciation_rate)},
             {"curves", curves},
             {"cost", range_to_json(p.population.cost)},
             {"on_time_prob", range_to_json(p.population.on_time_prob)},
             {"late_rate", range_to_json(p.population.late_rate)},
         }},
        {"capacity", p.capacity},
        {"payment",
         {
             {"requester_share", p.payment.requester_share},
             {"provider_margin", p.payment.provider_margin},
             {"charge_on_realized", p.payment.charge_on_realized},
             {"average_over",
              p.payment.average_over == AverageOver::All ? "all" : "winners"},
         }},
        {"reselection",
         {
             {"exponent", p.reselection.exponent},
             {"floor", p.reselection.floor},
         }},
        {"mode", std::string(to_string(p.mode))},
        {"epochs", p.epochs},
        {"replications", p.replications},
        {"seed", p.seed},
        {"threads", p.threads},
        {"output_dir", config.output_dir},
        {"oracle_check", config.oracle_check},
    };
}

ExperimentConfig config_from_json(const nlohmann::json& root) {
    if (!root.is_object()) throw ConfigError("config: top level must be a JSON object");
    reject_unknown_keys(root, "",
                        {"population", "capacity", "payment", "reselection", "mode", "epochs",
                         "replications", "seed", "threads", "output_dir", "oracle_check"});

    ExperimentConfig config = default_config();
    auto& p = config.params;

    if (root.contains("population")) {
        const auto& pop = root.at("population");
        if (!pop.is_object()) fail("population", "must be an object");
        reject_unknown_keys(pop, "population",
                            {"requesters", "providers", "value", "deadline", "depreciation_rate",
                             "curves", "cost", "on_time_prob", "late_rate"});
        read(pop, "population", "requesters", p.population.requesters);
        read(pop, "population", "providers", p.population.providers);
        read_range(pop, "population", "value", p.population.value);
        read_range(pop, "population", "deadline", p.population.deadline);
        read_range(pop, "population", "depreciation_rate", p.population.depreciation_rate);
        read_range(pop, "population", "cost", p.population.cost);
        read_range(pop, "population", "on_time_prob", p.population.on_time_prob);
        read_range(pop, "population", "late_rate", p.population.late_rate);
        if (pop.contains("curves")) {
            if (!pop.at("curves").is_array()) fail("population.curves", "must be an array");
            p.population.curves.clear();
            for (const auto& entry : pop.at("curves")) {
                if (!entry.is_string()) fail("population.curves", "entries must be strings");
                p.population.curves.push_back(curve_kind_from_string(entry.get<std::string>()));
            }
        }
    }

    read(root, "", "capacity", p.capacity);
    p.population.capacity = p.capacity;

    if (root.contains("payment")) {
        const auto& pay = root.at("payment");
        if (!pay.is_object()) fail("payment", "must be an object");
        reject_unknown_keys(pay, "payment",
                            {"requester_share", "provider_margin", "charge_on_realized",
                             "average_over"});
        read(pay, "payment", "requester_share", p.payment.requester_share);
        read(pay, "payment", "provider_margin", p.payment.provider_margin);
        read(pay, "payment", "charge_on_realized", p.payment.charge_on_realized);
        if (pay.contains("average_over")) {
            const auto name = pay.at("average_over").is_string()
                                  ? pay.at("average_over").get<std::string>()
                                  : std::string();
            if (name == "all")
                p.payment.average_over = AverageOver::All;
            else if (name == "winners")
                p.payment.average_over = AverageOver::Winners;
            else
                fail("payment.average_over", "must be 'all' or 'winners'");
        }
    }

    if (root.contains("reselection")) {
        const auto& rule = root.at("reselection");
        if (!rule.is_object()) fail("reselection", "must be an object");
        reject_unknown_keys(rule, "reselection", {"exponent", "floor"});
        read(rule, "reselection", "exponent", p.reselection.exponent);
        read(rule, "reselection", "floor", p.reselection.floor);
    }

    if (root.contains("mode")) {
        if (!root.at("mode").is_string()) fail("mode", "must be a string");
        p.mode = mode_from_string(root.at("mode").get<std::string>());
    }
    read(root, "", "epochs", p.epochs);
    read(root, "", "replications", p.replications);
    read(root, "", "seed", p.seed);
    read(root, "", "threads", p.threads);
    read(root, "", "output_dir", config.output_dir);
    read(root, "", "oracle_check", config.oracle_check);

    validate_config(config);
    return config;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path.string());
    json root;
    try {
        root = json::parse(in, nullptr, /*allow_exceptions=*/true, /*ignore_comments=*/true);
    } catch (const json::parse_error& err) {
        throw ConfigError("config file " + path.string() + ": " + err.what());
    }
    return config_from_json(root);
}

void apply_overrides(ExperimentConfig& config, const CliOverrides& overrides) {
    if (overrides.seed) config.params.seed = *overrides.seed;
    if (overrides.mode) config.params.mode = mode_from_string(*overrides.mode);
    if (overrides.epochs) config.params.epochs = *overrides.epochs;
    if (overrides.replications) config.params.replications = *overrides.replications;
    if (overrides.output_dir) config.output_dir = *overrides.output_dir;
    if (overrides.oracle_check) config.oracle_check = true;
    validate_config(config);
}

void validate_config(const ExperimentConfig& config) {
    const auto& p = config.params;
    validate_population_spec(p.population);
    if (p.capacity < 0) fail("capacity", "must be >= 0 (constraint 11.a)");
    if (p.population.capacity != p.capacity)
        fail("capacity", "population capacity diverged from the per-mechanism capacity");
    if (!(p.payment.requester_share > 0.0 && p.payment.requester_share <= 1.0))
        fail("payment.requester_share", "must lie in (0, 1]");
    if (!(p.payment.provider_margin >= 0.0)) fail("payment.provider_margin", "must be >= 0");
    if (!(p.reselection.exponent > 0.0)) fail("reselection.exponent", "must be > 0");
    if (!(p.reselection.floor > 0.0)) fail("reselection.floor", "must be > 0");
    if (p.epochs < 1) fail("epochs", "must be >= 1");
    if (p.replications < 1) fail("replications", "must be >= 1");
    if (p.threads < 1) fail("threads", "must be >= 1");
    if (config.output_dir.empty()) fail("output_dir", "must not be empty");
}

} // namespace eswm
