#include "eoconv/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "eoconv/constants.hpp"
#include "eoconv/errors.hpp"

namespace eoconv {

namespace {

std::string trim(const std::string& text) {
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = text.find_last_not_of(" \t");
    return text.substr(first, last - first + 1);
}

bool valid_identifier(const std::string& text) {
    if (text.empty()) return false;
    for (char c : text)
        if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'))
            return false;
    return true;
}

// Section -> allowed keys.  Everything else is rejected so typos cannot turn
// into silent defaults.
const std::map<std::string, std::set<std::string>>& schema() {
    static const std::map<std::string, std::set<std::string>> table = {
        {"meta", {"name", "version", "description"}},
        {"optical_pump",
         {"frequency_hz", "gamma_hz", "gamma_prime_hz", "azimuthal_m", "polarization",
          "refractive_index"}},
        {"sideband_plus",
         {"frequency_hz", "offset_from_pump_hz", "gamma_hz", "gamma_prime_hz",
          "polarization"}},
        {"sideband_minus",
         {"frequency_hz", "offset_from_pump_hz", "gamma_hz", "gamma_prime_hz",
          "polarization"}},
        {"microwave",
         {"frequency_hz", "gamma_hz", "gamma_prime_hz", "azimuthal_m", "eps_r",
          "e_single_photon_v_per_m", "mode_volume_m3"}},
        {"coupling", {"g_hz", "g_simulated_hz"}},
        {"drive",
         {"pump_power_w", "pump_power_dbm", "pump_detuning_hz", "microwave_power_w",
          "microwave_power_dbm", "microwave_detuning_hz", "temperature_c"}},
        {"converter", {"pump_mode_matching"}},
        {"reflection", {"mode_matching", "suppression_measured_db"}},
        {"ladder",
         {"reference_temperature_c", "fsr_hz", "te_slope_hz_per_k", "tm_slope_hz_per_k",
          "crossing", "kappa_hz", "tm_offset_hz"}},
        {"sweep",
         {"variable", "unit", "start", "stop", "step", "points", "values", "outputs"}},
    };
    return table;
}

Polarization parse_polarization(const ScenarioValue& value) {
    if (value.raw == "te") return Polarization::TE;
    if (value.raw == "tm") return Polarization::TM;
    throw ParseError("polarization must be 'te' or 'tm', got '" + value.raw + "'",
                     value.line);
}

std::int64_t require_integer(const Scenario& s, const std::string& section,
                             const std::string& key) {
    const double v = s.number(section, key);
    const double rounded = std::round(v);
    if (std::abs(v - rounded) > 1e-9 * std::max(1.0, std::abs(v)))
        throw ParseError(s.origin + ": " + section + "." + key + " must be an integer",
                         s.find(section, key)->line);
    return static_cast<std::int64_t>(rounded);
}

std::vector<std::string> split_list(const std::string& raw) {
    std::vector<std::string> parts;
    std::string token;
    std::istringstream stream(raw);
    while (std::getline(stream, token, ',')) {
        token = trim(token);
        if (!token.empty()) parts.push_back(token);
    }
    return parts;
}

double parse_number_token(const std::string& token, const std::string& origin,
                          std::size_t line) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0')
        throw ParseError(origin + ": not a number: '" + token + "'", line);
    return value;
}

} // namespace

std::string_view to_string(Provenance provenance) {
    switch (provenance) {
        case Provenance::Paper: return "paper";
        case Provenance::Fitted: return "fitted";
        case Provenance::Assumed: return "assumed";
        case Provenance::Untagged: return "untagged";
    }
    return "untagged";
}

bool Scenario::has(const std::string& section, const std::string& key) const {
    return find(section, key) != nullptr;
}

const ScenarioValue* Scenario::find(const std::string& section,
                                    const std::string& key) const {
    const auto sec = sections.find(section);
    if (sec == sections.end()) return nullptr;
    const auto entry = sec->second.find(key);
    if (entry == sec->second.end()) return nullptr;
    return &entry->second;
}

double Scenario::number(const std::string& section, const std::string& key) const {
    const ScenarioValue* value = find(section, key);
    if (!value)
        throw ParseError(origin + ": missing required key " + section + "." + key, 0);
    if (!value->is_number)
        throw ParseError(origin + ": " + section + "." + key + " must be numeric, got '" +
                             value->raw + "'",
                         value->line);
    return value->number;
}

double Scenario::number_or(const std::string& section, const std::string& key,
                           double fallback) const {
    return has(section, key) ? number(section, key) : fallback;
}

std::string Scenario::text_or(const std::string& section, const std::string& key,
                              const std::string& fallback) const {
    const ScenarioValue* value = find(section, key);
    return value ? value->raw : fallback;
}

ProvenanceCounts Scenario::provenance_counts() const {
    ProvenanceCounts counts;
    for (const auto& [_, keys] : sections) {
        for (const auto& [__, value] : keys) {
            switch (value.provenance) {
                case Provenance::Paper: ++counts.paper; break;
                case Provenance::Fitted: ++counts.fitted; break;
                case Provenance::Assumed: ++counts.assumed; break;
                case Provenance::Untagged: ++counts.untagged; break;
            }
        }
    }
    return counts;
}

std::string Scenario::canonical_text() const {
    std::string text;
    for (const auto& [section, keys] : sections) {
        text += '[';
        text += section;
        text += "]\n";
        for (const auto& [key, value] : keys) {
            text += key;
            text += " = ";
            text += value.raw;
            if (value.provenance != Provenance::Untagged) {
                text += " {";
                text += to_string(value.provenance);
                text += '}';
            }
            text += '\n';
        }
    }
    return text;
}

std::uint64_t Scenario::hash() const {
    // FNV-1a 64-bit over the canonical text.
    std::uint64_t h = 14695981039346656037ULL;
    for (unsigned char c : canonical_text()) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string Scenario::hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(hash()));
    return buf;
}

Scenario parse_scenario(std::istream& in, const std::string& origin) {
    Scenario scenario;
    scenario.origin = origin;
    std::string current_section;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string body = trim(line);
        if (body.empty() || body[0] == '#') continue;

        if (body[0] == '[') {
            const auto close = body.find(']');
            if (close == std::string::npos)
                throw ParseError(origin + ": unterminated section header", line_no);
            if (trim(body.substr(close + 1)).length() != 0)
                throw ParseError(origin + ": trailing text after section header",
                                 line_no);
            const std::string name = trim(body.substr(1, close - 1));
            if (!valid_identifier(name))
                throw ParseError(origin + ": invalid section name '" + name + "'",
                                 line_no);
            if (!schema().count(name))
                throw ParseError(origin + ": unknown section [" + name + "]", line_no);
            if (scenario.sections.count(name))
                throw ParseError(origin + ": duplicate section [" + name + "]", line_no);
            scenario.sections[name];
            current_section = name;
            continue;
        }

        const auto eq = body.find('=');
        if (eq == std::string::npos)
            throw ParseError(origin + ": expected 'key = value'", line_no);
        if (current_section.empty())
            throw ParseError(origin + ": key outside any [section]", line_no);
        const std::string key = trim(body.substr(0, eq));
        if (!valid_identifier(key))
            throw ParseError(origin + ": invalid key '" + key + "'", line_no);

        std::string rest = body.substr(eq + 1);
        std::string comment;
        if (const auto hash_pos = rest.find('#'); hash_pos != std::string::npos) {
            comment = rest.substr(hash_pos + 1);
            rest = rest.substr(0, hash_pos);
        }
        ScenarioValue value;
        value.raw = trim(rest);
        value.line = line_no;
        if (value.raw.empty())
            throw ParseError(origin + ": empty value for '" + key + "'", line_no);

        int tags = 0;
        if (comment.find("{paper}") != std::string::npos) {
            value.provenance = Provenance::Paper;
            ++tags;
        }
        if (comment.find("{fitted}") != std::string::npos) {
            value.provenance = Provenance::Fitted;
            ++tags;
        }
        if (comment.find("{assumed}") != std::string::npos) {
            value.provenance = Provenance::Assumed;
            ++tags;
        }
        if (tags > 1)
            throw ParseError(origin + ": multiple provenance tags on one value",
                             line_no);

        const char* begin = value.raw.c_str();
        char* end = nullptr;
        const double num = std::strtod(begin, &end);
        if (end != begin && *end == '\0') {
            value.is_number = true;
            value.number = num;
        }

        auto& section = scenario.sections[current_section];
        if (section.count(key))
            throw ParseError(origin + ": duplicate key '" + key + "' in [" +
                                 current_section + "]",
                             line_no);
        section.emplace(key, std::move(value));
    }

    const ScenarioValue* name = scenario.find("meta", "name");
    if (!name) throw ParseError(origin + ": missing meta.name", 0);
    scenario.name = name->raw;
    if (scenario.has("meta", "version")) {
        const auto version = require_integer(scenario, "meta", "version");
        if (version < 1)
            throw ParseError(origin + ": meta.version must be >= 1",
                             scenario.find("meta", "version")->line);
        scenario.version = static_cast<int>(version);
    }
    return scenario;
}

Scenario read_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open scenario: " + path);
    return parse_scenario(in, path);
}

double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

double watt_to_dbm(double watt) {
    if (!(watt > 0.0)) throw DomainError("dBm conversion needs power > 0");
    return 10.0 * std::log10(watt / 1e-3);
}

namespace {

void check_schema(const Scenario& s) {
    for (const auto& [section, keys] : s.sections) {
        const auto known = schema().find(section);
        if (known == schema().end())
            throw ParseError(s.origin + ": unknown section [" + section + "]", 0);
        for (const auto& [key, value] : keys) {
            if (!known->second.count(key))
                throw ParseError(s.origin + ": unknown key '" + key + "' in [" + section +
                                     "]",
                                 value.line);
        }
    }
    for (const char* required : {"meta", "optical_pump", "microwave", "coupling", "drive"})
        if (!s.sections.count(required))
            throw ParseError(s.origin + ": missing required section [" +
                                 std::string(required) + "]",
                             0);
}

// Exactly one of two alternative keys; returns which one was present.
const char* exactly_one(const Scenario& s, const std::string& section, const char* a,
                        const char* b, bool required) {
    const bool has_a = s.has(section, a);
    const bool has_b = s.has(section, b);
    if (has_a && has_b)
        throw ParseError(s.origin + ": [" + section + "] must set only one of '" + a +
                             "' and '" + b + "'",
                         s.find(section, b)->line);
    if (!has_a && !has_b) {
        if (required)
            throw ParseError(s.origin + ": [" + section + "] needs '" + a + "' or '" + b +
                                 "'",
                             0);
        return nullptr;
    }
    return has_a ? a : b;
}

double power_watt(const Scenario& s, const std::string& section, const char* key_w,
                  const char* key_dbm) {
    const char* key = exactly_one(s, section, key_w, key_dbm, true);
    const double v = s.number(section, key);
    return key == key_w ? v : dbm_to_watt(v);
}

OpticalMode build_sideband(const Scenario& s, const std::string& section,
                           const OpticalMode& pump, double mw_freq_hz, Sideband side,
                           std::int64_t m_mw, std::vector<BuildNote>& notes,
                           bool ladder_present) {
    OpticalMode mode = pump;
    const double sign = side == Sideband::Plus ? 1.0 : -1.0;
    mode.m = pump.m + (side == Sideband::Plus ? m_mw : -m_mw);

    const char* freq_key =
        exactly_one(s, section, "frequency_hz", "offset_from_pump_hz", false);
    if (ladder_present && freq_key)
        throw ParseError(s.origin + ": [" + section + "] frequency keys conflict with "
                                                      "[ladder]; the ladder defines "
                                                      "sideband frequencies",
                         s.find(section, freq_key)->line);
    const double pump_freq_hz = pump.omega0 / kTwoPi;
    if (!freq_key) {
        mode.omega0 = hz_to_angular(pump_freq_hz + sign * mw_freq_hz);
        if (!ladder_present)
            notes.push_back({section, "frequency_hz",
                             "defaulted to pump frequency " +
                                 std::string(side == Sideband::Plus ? "+" : "-") +
                                 " microwave frequency (triply resonant)"});
    } else if (std::string(freq_key) == "frequency_hz") {
        mode.omega0 = hz_to_angular(s.number(section, freq_key));
    } else {
        mode.omega0 = hz_to_angular(pump_freq_hz + s.number(section, freq_key));
    }

    if (s.has(section, "gamma_hz")) {
        mode.gamma = hz_to_angular(s.number(section, "gamma_hz"));
    } else {
        notes.push_back({section, "gamma_hz", "defaulted to pump gamma_hz"});
    }
    if (s.has(section, "gamma_prime_hz")) {
        mode.gamma_prime = hz_to_angular(s.number(section, "gamma_prime_hz"));
    } else {
        notes.push_back({section, "gamma_prime_hz", "defaulted to pump gamma_prime_hz"});
    }
    if (s.has(section, "polarization")) {
        mode.polarization = parse_polarization(*s.find(section, "polarization"));
    } else {
        notes.push_back({section, "polarization", "defaulted to pump polarization"});
    }
    return mode;
}

ModeLadder build_ladder(const Scenario& s, const OpticalMode& pump,
                        std::vector<BuildNote>& notes) {
    if (pump.polarization != Polarization::TE)
        throw ParseError(s.origin + ": [ladder] assumes a TE pump family", 0);
    const double t_ref = s.number("ladder", "reference_temperature_c");
    const double fsr = s.number("ladder", "fsr_hz");
    if (!(fsr > 0.0))
        throw ParseError(s.origin + ": ladder.fsr_hz must be > 0",
                         s.find("ladder", "fsr_hz")->line);
    const double te_slope = s.number("ladder", "te_slope_hz_per_k");
    const std::string crossing = s.text_or("ladder", "crossing", "none");
    if (!s.has("ladder", "crossing"))
        notes.push_back({"ladder", "crossing", "defaulted to none"});
    if (crossing != "none" && crossing != "plus" && crossing != "minus")
        throw ParseError(s.origin + ": ladder.crossing must be none, plus or minus",
                         s.find("ladder", "crossing")->line);

    const double pump_freq_hz = pump.omega0 / kTwoPi;
    const auto te_bare = [&](double nu) {
        return BareMode{nu, te_slope, t_ref, Polarization::TE};
    };

    ModeLadder ladder;
    ladder.pump_m = pump.m;
    ladder.family = Polarization::TE;
    for (int offset = -1; offset <= 1; ++offset) {
        LadderEntry entry;
        entry.m = pump.m + offset;
        const double nu = pump_freq_hz + offset * fsr;
        const bool crossed = (crossing == "plus" && offset == 1) ||
                             (crossing == "minus" && offset == -1);
        if (crossed) {
            const double kappa = s.number("ladder", "kappa_hz");
            const double tm_offset = s.number("ladder", "tm_offset_hz");
            const double tm_slope = s.number("ladder", "tm_slope_hz_per_k");
            CrossingModel model;
            model.mode_a = te_bare(nu);
            model.mode_b = BareMode{nu + tm_offset, tm_slope, t_ref, Polarization::TM};
            model.kappa = kappa;
            entry.model = model;
        } else {
            entry.model = te_bare(nu);
        }
        ladder.entries.push_back(entry);
    }
    ladder.validate();
    return ladder;
}

SweepSpec build_sweep(const Scenario& s, bool ladder_present,
                      std::vector<BuildNote>& notes) {
    SweepSpec spec;
    const ScenarioValue* variable = s.find("sweep", "variable");
    if (!variable) throw ParseError(s.origin + ": missing sweep.variable", 0);
    spec.variable = variable->raw;
    static const std::set<std::string> known_variables = {
        "microwave_frequency", "microwave_power", "pump_power", "pump_detuning",
        "temperature"};
    if (!known_variables.count(spec.variable))
        throw ParseError(s.origin + ": unknown sweep variable '" + spec.variable + "'",
                         variable->line);
    if (spec.variable == "temperature" && !ladder_present)
        throw ParseError(s.origin + ": a temperature sweep needs a [ladder] section",
                         variable->line);

    const bool is_power =
        spec.variable == "microwave_power" || spec.variable == "pump_power";
    const std::string default_unit =
        is_power ? "" : (spec.variable == "temperature" ? "celsius" : "hz");
    spec.unit = s.text_or("sweep", "unit", default_unit);
    if (spec.unit.empty())
        throw ParseError(s.origin + ": power sweeps must set sweep.unit to 'w' or 'dbm'",
                         variable->line);
    if (!s.has("sweep", "unit") && !is_power)
        notes.push_back({"sweep", "unit", "defaulted to " + spec.unit});
    const bool unit_ok = is_power ? (spec.unit == "w" || spec.unit == "dbm")
                                  : (spec.unit == default_unit);
    if (!unit_ok)
        throw ParseError(s.origin + ": sweep.unit '" + spec.unit +
                             "' does not fit variable '" + spec.variable + "'",
                         0);

    constexpr std::size_t kMaxPoints = 1000000;
    if (s.has("sweep", "values")) {
        if (s.has("sweep", "start") || s.has("sweep", "stop") || s.has("sweep", "step") ||
            s.has("sweep", "points"))
            throw ParseError(s.origin + ": sweep.values excludes start/stop/step/points",
                             s.find("sweep", "values")->line);
        const ScenarioValue* values = s.find("sweep", "values");
        for (const std::string& token : split_list(values->raw))
            spec.values.push_back(parse_number_token(token, s.origin, values->line));
        if (spec.values.empty())
            throw ParseError(s.origin + ": sweep.values is empty", values->line);
    } else {
        const double start = s.number("sweep", "start");
        const double stop = s.number("sweep", "stop");
        if (!(stop >= start))
            throw ParseError(s.origin + ": sweep needs stop >= start", 0);
        const char* how = exactly_one(s, "sweep", "step", "points", true);
        std::size_t count = 0;
        double step = 0.0;
        if (std::string(how) == "step") {
            step = s.number("sweep", "step");
            if (!(step > 0.0))
                throw ParseError(s.origin + ": sweep.step must be > 0",
                                 s.find("sweep", "step")->line);
            const double raw_count = (stop - start) / step;
            if (raw_count > static_cast<double>(kMaxPoints))
                throw ParseError(s.origin + ": sweep grid exceeds 1e6 points", 0);
            count = static_cast<std::size_t>(raw_count + 1.5);
            // Walk the grid; a final point within 1e-9 steps of `stop` is kept.
            spec.values.reserve(count);
            for (std::size_t i = 0;; ++i) {
                const double v = start + static_cast<double>(i) * step;
                if (v > stop + 1e-9 * step) break;
                spec.values.push_back(v);
                if (spec.values.size() > kMaxPoints)
                    throw ParseError(s.origin + ": sweep grid exceeds 1e6 points", 0);
            }
        } else {
            const auto points = require_integer(s, "sweep", "points");
            if (points < 1)
                throw ParseError(s.origin + ": sweep.points must be >= 1",
                                 s.find("sweep", "points")->line);
            if (points == 1 && stop != start)
                throw ParseError(s.origin + ": a single-point sweep needs start == stop",
                                 s.find("sweep", "points")->line);
            if (static_cast<std::size_t>(points) > kMaxPoints)
                throw ParseError(s.origin + ": sweep grid exceeds 1e6 points", 0);
            count = static_cast<std::size_t>(points);
            if (count == 1) {
                spec.values.push_back(start);
            } else {
                const double h = (stop - start) / static_cast<double>(count - 1);
                for (std::size_t i = 0; i < count; ++i)
                    spec.values.push_back(start + static_cast<double>(i) * h);
            }
        }
    }

    if (s.has("sweep", "outputs")) {
        spec.outputs = split_list(s.find("sweep", "outputs")->raw);
        if (spec.outputs.empty())
            throw ParseError(s.origin + ": sweep.outputs is empty",
                             s.find("sweep", "outputs")->line);
    } else {
        notes.push_back({"sweep", "outputs", "defaulted per sweep variable"});
    }
    return spec;
}

} // namespace

BuiltScenario build_scenario(const Scenario& s) {
    check_schema(s);
    BuiltScenario built;
    built.name = s.name;
    built.version = s.version;
    built.hash_hex = s.hash_hex();
    built.provenance = s.provenance_counts();

    OpticalMode pump;
    pump.omega0 = hz_to_angular(s.number("optical_pump", "frequency_hz"));
    pump.gamma = hz_to_angular(s.number("optical_pump", "gamma_hz"));
    pump.gamma_prime = hz_to_angular(s.number("optical_pump", "gamma_prime_hz"));
    pump.m = require_integer(s, "optical_pump", "azimuthal_m");
    if (s.has("optical_pump", "refractive_index")) {
        pump.n = s.number("optical_pump", "refractive_index");
    } else {
        pump.n = 2.14;
        built.defaults.push_back({"optical_pump", "refractive_index",
                                  "defaulted to 2.14 (lithium niobate, 1550 nm)"});
    }
    if (s.has("optical_pump", "polarization")) {
        pump.polarization = parse_polarization(*s.find("optical_pump", "polarization"));
    } else {
        pump.polarization = Polarization::TE;
        built.defaults.push_back({"optical_pump", "polarization", "defaulted to te"});
    }

    MicrowaveMode mw;
    const double mw_freq_hz = s.number("microwave", "frequency_hz");
    mw.omega0 = hz_to_angular(mw_freq_hz);
    mw.gamma = hz_to_angular(s.number("microwave", "gamma_hz"));
    mw.gamma_prime = hz_to_angular(s.number("microwave", "gamma_prime_hz"));
    if (s.has("microwave", "eps_r")) {
        const double eps_r = s.number("microwave", "eps_r");
        if (!(eps_r >= 1.0))
            throw ParseError(s.origin + ": microwave.eps_r must be >= 1",
                             s.find("microwave", "eps_r")->line);
        mw.n = std::sqrt(eps_r);
    }
    if (s.has("microwave", "azimuthal_m")) {
        mw.m = require_integer(s, "microwave", "azimuthal_m");
    } else {
        mw.m = 1;
        built.defaults.push_back({"microwave", "azimuthal_m", "defaulted to 1"});
    }
    const char* field_key = exactly_one(s, "microwave", "e_single_photon_v_per_m",
                                        "mode_volume_m3", false);
    if (field_key && std::string(field_key) == "e_single_photon_v_per_m")
        mw.e_single_photon = s.number("microwave", field_key);
    if (field_key && std::string(field_key) == "mode_volume_m3") {
        if (!s.has("microwave", "eps_r"))
            throw ParseError(s.origin + ": microwave.mode_volume_m3 needs microwave.eps_r",
                             s.find("microwave", "mode_volume_m3")->line);
        mw.mode_volume = s.number("microwave", "mode_volume_m3");
    }

    ConverterSystem sys;
    sys.pump = pump;
    sys.mw = mw;
    sys.g = hz_to_angular(s.number("coupling", "g_hz"));
    if (s.has("coupling", "g_simulated_hz"))
        built.g_simulated_hz = s.number("coupling", "g_simulated_hz");

    const bool ladder_present = s.sections.count("ladder") != 0;
    sys.sb_plus = build_sideband(s, "sideband_plus", pump, mw_freq_hz, Sideband::Plus,
                                 mw.m, built.defaults, ladder_present);
    sys.sb_minus = build_sideband(s, "sideband_minus", pump, mw_freq_hz, Sideband::Minus,
                                  mw.m, built.defaults, ladder_present);

    sys.pump_power = power_watt(s, "drive", "pump_power_w", "pump_power_dbm");
    sys.mw_power = power_watt(s, "drive", "microwave_power_w", "microwave_power_dbm");
    built.pump_detuning_hz = s.number_or("drive", "pump_detuning_hz", 0.0);
    if (!s.has("drive", "pump_detuning_hz"))
        built.defaults.push_back({"drive", "pump_detuning_hz", "defaulted to 0"});
    built.microwave_detuning_hz = s.number_or("drive", "microwave_detuning_hz", 0.0);
    if (!s.has("drive", "microwave_detuning_hz"))
        built.defaults.push_back({"drive", "microwave_detuning_hz", "defaulted to 0"});

    if (s.has("converter", "pump_mode_matching")) {
        sys.pump_mode_matching = s.number("converter", "pump_mode_matching");
    } else {
        sys.pump_mode_matching = 1.0;
        built.defaults.push_back({"converter", "pump_mode_matching", "defaulted to 1"});
    }

    if (s.has("reflection", "mode_matching"))
        built.reflection_mode_matching = s.number("reflection", "mode_matching");
    if (s.has("reflection", "suppression_measured_db"))
        built.measured_suppression_db = s.number("reflection", "suppression_measured_db");

    if (ladder_present) {
        built.ladder = build_ladder(s, pump, built.defaults);
        const double t_ref = s.number("ladder", "reference_temperature_c");
        built.temperature_c = s.number_or("drive", "temperature_c", t_ref);
        if (!s.has("drive", "temperature_c"))
            built.defaults.push_back(
                {"drive", "temperature_c", "defaulted to ladder reference temperature"});
    } else if (s.has("drive", "temperature_c")) {
        built.temperature_c = s.number("drive", "temperature_c");
    }

    sys.pump_drive = sys.pump.omega0 + hz_to_angular(built.pump_detuning_hz);
    sys.mw_drive = sys.mw.omega0 + hz_to_angular(built.microwave_detuning_hz);
    built.system = sys;
    if (built.ladder) built.system = at_temperature(built, built.temperature_c);

    if (s.sections.count("sweep"))
        built.sweep = build_sweep(s, ladder_present, built.defaults);

    built.system.validate();
    return built;
}

ConverterSystem at_temperature(const BuiltScenario& built, double t_c) {
    ConverterSystem sys = built.system;
    if (!built.ladder) return sys;
    const ModeLadder& ladder = *built.ladder;
    const double nu_pump = ladder.frequency_at(ladder.pump_m, t_c);
    const FsrPair fsr = fsr_pair(ladder, t_c);
    sys.pump.omega0 = hz_to_angular(nu_pump);
    sys.sb_plus.omega0 = hz_to_angular(nu_pump + fsr.fsr_plus);
    sys.sb_minus.omega0 = hz_to_angular(nu_pump - fsr.fsr_minus);
    // The laser tracks its mode; the microwave cavity is temperature-stable
    // on this scale.
    sys.pump_drive = sys.pump.omega0 + hz_to_angular(built.pump_detuning_hz);
    sys.mw_drive = sys.mw.omega0 + hz_to_angular(built.microwave_detuning_hz);
    return sys;
}

} // namespace eoconv
