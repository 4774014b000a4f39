#include "nomaqos/io.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "nomaqos/channel_model.hpp"

namespace nomaqos {

namespace {

double number_at(const Json& obj, const char* key, const std::string& where) {
    const auto it = obj.find(key);
    if (it == obj.end()) {
        throw ValidationError(where + "missing field '" + key + "'");
    }
    if (!it->is_number()) {
        throw ValidationError(where + "field '" + key + "' must be a number");
    }
    const double v = it->get<double>();
    if (!std::isfinite(v)) {
        throw ValidationError(where + "field '" + key + "' must be finite");
    }
    return v;
}

double number_or(const Json& obj, const char* key, double fallback, const std::string& where) {
    return obj.contains(key) ? number_at(obj, key, where) : fallback;
}

std::size_t count_at(const Json& obj, const char* key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_number_integer() || v.get<long long>() < 0) {
        throw ValidationError(where + "field '" + key + "' must be a nonnegative integer");
    }
    return v.get<std::size_t>();
}

bool bool_at(const Json& obj, const char* key, const std::string& where) {
    const auto& v = obj.at(key);
    if (!v.is_boolean()) {
        throw ValidationError(where + "field '" + key + "' must be true or false");
    }
    return v.get<bool>();
}

std::vector<double> number_list(const Json& obj, const char* key) {
    const auto& v = obj.at(key);
    if (v.is_number()) {
        return {v.get<double>()};
    }
    if (!v.is_array()) {
        throw ValidationError(std::string("field '") + key + "' must be a number or a list of numbers");
    }
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) {
            throw ValidationError(std::string("field '") + key + "' must contain only numbers");
        }
        out.push_back(e.get<double>());
    }
    return out;
}

void reject_unknown(const Json& obj, const std::set<std::string>& known, const std::string& where) {
    if (!obj.is_object()) {
        throw ValidationError(where + "expected a JSON object");
    }
    for (const auto& item : obj.items()) {
        if (!known.count(item.key())) {
            throw ValidationError(where + "unknown field '" + item.key() + "'");
        }
    }
}

}  // namespace

Json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot open " + path);
    }
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

std::vector<SvcLayerTable> tables_from_json(const Json& doc) {
    if (!doc.is_array() || doc.empty()) {
        throw ValidationError("tables: expected a nonempty array of tables");
    }
    std::vector<SvcLayerTable> tables;
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string where = "device " + std::to_string(i) + ": ";
        const Json& t = doc[i];
        reject_unknown(t, {"layers"}, where);
        if (!t.contains("layers") || !t["layers"].is_array()) {
            throw ValidationError(where + "missing 'layers' array");
        }
        std::vector<SvcLayer> layers;
        for (std::size_t l = 0; l < t["layers"].size(); ++l) {
            const Json& e = t["layers"][l];
            const std::string at = where + "layer " + std::to_string(l + 1) + ": ";
            reject_unknown(e, {"rate_bps", "psnr_db"}, at);
            layers.push_back(SvcLayer{number_at(e, "rate_bps", at), number_at(e, "psnr_db", at)});
        }
        try {
            tables.emplace_back(std::move(layers));
        } catch (const std::invalid_argument& e) {
            throw ValidationError(where + e.what());
        }
    }
    return tables;
}

Json tables_to_json(std::span<const SvcLayerTable> tables) {
    Json doc = Json::array();
    for (const auto& t : tables) {
        Json layers = Json::array();
        for (const auto& l : t.layers()) {
            layers.push_back({{"rate_bps", l.rate_bps}, {"psnr_db", l.psnr_db}});
        }
        doc.push_back({{"layers", layers}});
    }
    return doc;
}

UplinkScenario scenario_from_json(const Json& doc, std::span<const SvcLayerTable> tables) {
    reject_unknown(doc, {"bandwidth_hz", "noise_psd_dbm_per_hz", "devices"}, "scenario: ");
    ChannelParams channel;
    channel.bandwidth_hz = number_or(doc, "bandwidth_hz", channel.bandwidth_hz, "scenario: ");
    channel.noise_psd_dbm_per_hz = number_or(doc, "noise_psd_dbm_per_hz", channel.noise_psd_dbm_per_hz, "scenario: ");
    if (!doc.contains("devices") || !doc["devices"].is_array() || doc["devices"].empty()) {
        throw ValidationError("scenario: 'devices' must be a nonempty array");
    }
    const Json& devs = doc["devices"];
    if (tables.size() != 1 && tables.size() != devs.size()) {
        throw ValidationError("tables: expected 1 or " + std::to_string(devs.size()) + " tables, got " +
                              std::to_string(tables.size()));
    }
    std::vector<Device> devices;
    for (std::size_t i = 0; i < devs.size(); ++i) {
        const std::string where = "device " + std::to_string(i) + ": ";
        const Json& d = devs[i];
        reject_unknown(d, {"gain_sq", "distance_km", "p_max_dbm", "ee_min"}, where);
        double gain = 0.0;
        if (d.contains("gain_sq") == d.contains("distance_km")) {
            throw ValidationError(where + "give exactly one of 'gain_sq' and 'distance_km'");
        }
        if (d.contains("gain_sq")) {
            gain = number_at(d, "gain_sq", where);
        } else {
            const double km = number_at(d, "distance_km", where);
            if (!(km > 0.0)) {
                throw ValidationError(where + "distance_km must be positive");
            }
            gain = dbm_to_mw(-path_loss_db(km));
        }
        devices.push_back(Device{gain, dbm_to_mw(number_at(d, "p_max_dbm", where)), number_or(d, "ee_min", 0.0, where),
                                 tables.size() == 1 ? tables[0] : tables[i]});
    }
    try {
        channel.validate();
    } catch (const std::invalid_argument& e) {
        throw ValidationError(std::string("scenario: ") + e.what());
    }
    return UplinkScenario(std::move(devices), channel.bandwidth_hz, noise_power_mw(channel));
}

SweepSpec sweep_spec_from_json(const Json& doc, SweepSpec base) {
    reject_unknown(doc,
                   {"schemes", "num_devices", "radius_m", "p_max_dbm", "ee_min", "trials", "seed", "solver",
                    "mt_value_tol", "mt_max_iter", "channel", "min_distance_m", "placement", "tables",
                    "table_profile", "oma", "threads", "convergence_devices"},
                   "spec: ");
    const std::string w = "spec: ";
    if (doc.contains("schemes")) {
        if (!doc["schemes"].is_array()) {
            throw ValidationError(w + "'schemes' must be a list");
        }
        base.schemes.clear();
        for (const auto& s : doc["schemes"]) {
            const auto parsed = s.is_string() ? parse_scheme(s.get<std::string>()) : std::nullopt;
            if (!parsed) {
                throw ValidationError(w + "unknown scheme " + s.dump());
            }
            base.schemes.push_back(*parsed);
        }
    }
    if (doc.contains("num_devices")) base.num_devices = count_at(doc, "num_devices", w);
    if (doc.contains("radius_m")) base.radius_m = number_list(doc, "radius_m");
    if (doc.contains("p_max_dbm")) base.p_max_dbm = number_list(doc, "p_max_dbm");
    base.ee_min = number_or(doc, "ee_min", base.ee_min, w);
    if (doc.contains("trials")) base.trials = count_at(doc, "trials", w);
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned()) {
            throw ValidationError(w + "'seed' must be a nonnegative integer");
        }
        base.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("solver")) {
        const Json& s = doc["solver"];
        const std::string ws = "spec.solver: ";
        reject_unknown(s, {"delta", "eps_proj", "max_iter", "max_vertices", "value_tol"}, ws);
        base.solver.delta = number_or(s, "delta", base.solver.delta, ws);
        base.solver.eps_proj = number_or(s, "eps_proj", base.solver.eps_proj, ws);
        if (s.contains("max_iter")) base.solver.max_iter = count_at(s, "max_iter", ws);
        if (s.contains("max_vertices")) base.solver.max_vertices = count_at(s, "max_vertices", ws);
        base.solver.value_tol = number_or(s, "value_tol", base.solver.value_tol, ws);
    }
    base.mt_value_tol = number_or(doc, "mt_value_tol", base.mt_value_tol, w);
    if (doc.contains("mt_max_iter")) base.mt_max_iter = count_at(doc, "mt_max_iter", w);
    if (doc.contains("channel")) {
        const Json& c = doc["channel"];
        const std::string wc = "spec.channel: ";
        reject_unknown(c, {"bandwidth_hz", "noise_psd_dbm_per_hz", "fading"}, wc);
        base.channel.bandwidth_hz = number_or(c, "bandwidth_hz", base.channel.bandwidth_hz, wc);
        base.channel.noise_psd_dbm_per_hz = number_or(c, "noise_psd_dbm_per_hz", base.channel.noise_psd_dbm_per_hz, wc);
        if (c.contains("fading")) base.channel.fading_enabled = bool_at(c, "fading", wc);
    }
    base.min_distance_m = number_or(doc, "min_distance_m", base.min_distance_m, w);
    if (doc.contains("placement")) {
        const Json& p = doc["placement"];
        if (p == "uniform_area") {
            base.placement = Placement::uniform_area;
        } else if (p == "uniform_radius") {
            base.placement = Placement::uniform_radius;
        } else {
            throw ValidationError(w + "placement must be uniform_area or uniform_radius");
        }
    }
    if (doc.contains("tables")) {
        const Json& t = doc["tables"];
        base.tables = t.is_array() && t.empty() ? std::vector<SvcLayerTable>{} : tables_from_json(t);
    }
    if (doc.contains("table_profile")) {
        const Json& t = doc["table_profile"];
        const std::string wt = "spec.table_profile: ";
        reject_unknown(t, {"a", "b", "c", "base_rate_bps", "num_layers", "rate_ratio"}, wt);
        auto& p = base.table_profile;
        p.a = number_or(t, "a", p.a, wt);
        p.b = number_or(t, "b", p.b, wt);
        p.c = number_or(t, "c", p.c, wt);
        p.base_rate_bps = number_or(t, "base_rate_bps", p.base_rate_bps, wt);
        if (t.contains("num_layers")) p.num_layers = count_at(t, "num_layers", wt);
        p.rate_ratio = number_or(t, "rate_ratio", p.rate_ratio, wt);
    }
    if (doc.contains("oma")) {
        const Json& o = doc["oma"];
        const std::string wo = "spec.oma: ";
        reject_unknown(o, {"time_budget", "enforce_ee_floor"}, wo);
        base.oma.time_budget = number_or(o, "time_budget", base.oma.time_budget, wo);
        if (o.contains("enforce_ee_floor")) base.oma.enforce_ee_floor = bool_at(o, "enforce_ee_floor", wo);
    }
    if (doc.contains("threads")) base.threads = count_at(doc, "threads", w);
    if (doc.contains("convergence_devices")) {
        const Json& c = doc["convergence_devices"];
        if (!c.is_array()) {
            throw ValidationError(w + "'convergence_devices' must be a list");
        }
        base.convergence_devices.clear();
        for (const auto& m : c) {
            if (!m.is_number_unsigned()) {
                throw ValidationError(w + "'convergence_devices' must contain nonnegative integers");
            }
            base.convergence_devices.push_back(m.get<std::size_t>());
        }
    }
    return base;
}

Json to_json(const SweepSpec& spec) {
    Json schemes = Json::array();
    for (Scheme s : spec.schemes) {
        schemes.push_back(std::string(to_string(s)));
    }
    const auto& p = spec.table_profile;
    return Json{
        {"schemes", schemes},
        {"num_devices", spec.num_devices},
        {"radius_m", spec.radius_m},
        {"p_max_dbm", spec.p_max_dbm},
        {"ee_min", spec.ee_min},
        {"trials", spec.trials},
        {"seed", spec.seed},
        {"solver",
         {{"delta", spec.solver.delta},
          {"eps_proj", spec.solver.eps_proj},
          {"max_iter", spec.solver.max_iter},
          {"max_vertices", spec.solver.max_vertices},
          {"value_tol", spec.solver.value_tol}}},
        {"mt_value_tol", spec.mt_value_tol},
        {"mt_max_iter", spec.mt_max_iter},
        {"channel",
         {{"bandwidth_hz", spec.channel.bandwidth_hz},
          {"noise_psd_dbm_per_hz", spec.channel.noise_psd_dbm_per_hz},
          {"fading", spec.channel.fading_enabled}}},
        {"min_distance_m", spec.min_distance_m},
        {"placement", std::string(to_string(spec.placement))},
        {"tables", tables_to_json(spec.tables)},
        {"table_profile",
         {{"a", p.a},
          {"b", p.b},
          {"c", p.c},
          {"base_rate_bps", p.base_rate_bps},
          {"num_layers", p.num_layers},
          {"rate_ratio", p.rate_ratio}}},
        {"oma", {{"time_budget", spec.oma.time_budget}, {"enforce_ee_floor", spec.oma.enforce_ee_floor}}},
        {"threads", spec.threads},
        {"convergence_devices", spec.convergence_devices},
    };
}

}  // namespace nomaqos
