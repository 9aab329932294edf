#include "polarslit/config.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

namespace polarslit {

ConfigError::ConfigError(std::string const& message, std::size_t line, std::string key)
    : std::runtime_error(message), line_(line), key_(std::move(key)) {}

ApparatusConfig<double> ExperimentConfig::apparatus() const {
    ApparatusConfig<double> c;
    c.geometry = geometry();
    c.polarizer1 = theta1;
    c.polarizer2 = theta2;
    c.input = make_input_state(a, b);
    return c;
}

std::string format_number(double v) {
    std::array<char, 64> buf{};
    auto const res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

namespace {

bool is_ws(char c) { return c == ' ' || c == '\t'; }

bool is_key_char(char c) { return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_'; }

struct Assignment {
    std::string key;
    std::string value;
    std::size_t line;
};

[[noreturn]] void fail(std::string const& what, Assignment const& a) {
    throw ConfigError(what + " '" + a.key + "' at line " + std::to_string(a.line), a.line, a.key);
}

std::optional<double> to_double(std::string_view s) {
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double v = 0.0;
    auto const res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

double number(Assignment const& a) {
    auto const v = to_double(a.value);
    if (!v) fail("invalid number '" + a.value + "' for key", a);
    return *v;
}

double positive(Assignment const& a) {
    double const v = number(a);
    if (!(v > 0.0)) fail("value must be > 0 for key", a);
    return v;
}

std::uint64_t count(Assignment const& a, std::uint64_t min) {
    std::string_view s = a.value;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    std::uint64_t v = 0;
    auto const res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        // integers may also be written as 1e6
        auto const d = to_double(s);
        if (!d || *d < 0.0 || *d != std::floor(*d) || *d >= 0x1.0p64) {
            fail("invalid integer '" + a.value + "' for key", a);
        }
        v = static_cast<std::uint64_t>(*d);
    }
    if (v < min) fail("value must be >= " + std::to_string(min) + " for key", a);
    return v;
}

double angle(Assignment const& a, bool degrees) {
    double const v = number(a);
    return degrees ? v / 180.0 * std::numbers::pi : v;
}

std::optional<PolarizerAxis<double>> optional_axis(Assignment const& a, bool degrees) {
    if (a.value == "none") return std::nullopt;
    return PolarizerAxis<double>(angle(a, degrees));
}

std::string lower(std::string s) {
    for (char& c : s) c = static_cast<char>(c >= 'A' && c <= 'Z' ? c - 'A' + 'a' : c);
    return s;
}

Detector<double> detector_value(Assignment const& a) {
    std::string const v = lower(a.value);
    if (v == "total") return Detector<double>::total();
    if (v == "v") return Detector<double>::vertical();
    if (v == "h") return Detector<double>::horizontal();
    constexpr std::string_view prefix = "axis:";
    if (v.starts_with(prefix)) {
        auto const phi = to_double(std::string_view(a.value).substr(prefix.size()));
        if (phi) return Detector<double>::along(*phi);
    }
    fail("invalid detector '" + a.value + "' (total|V|H|axis:<radians>) for key", a);
}

using Setter = std::function<void(ExperimentConfig&, Assignment const&)>;

struct KeySpec {
    std::string canonical;  // `theta1_deg` and `theta1` set the same field
    Setter set;
};

std::map<std::string, KeySpec, std::less<>> const& key_table() {
    static std::map<std::string, KeySpec, std::less<>> const table = [] {
        std::map<std::string, KeySpec, std::less<>> t;
        auto add = [&](std::string key, std::string canonical, Setter s) {
            t.emplace(std::move(key), KeySpec{std::move(canonical), std::move(s)});
        };
        add("a_re", "a_re", [](auto& c, auto const& a) { c.a.real(number(a)); });
        add("a_im", "a_im", [](auto& c, auto const& a) { c.a.imag(number(a)); });
        add("b_re", "b_re", [](auto& c, auto const& a) { c.b.real(number(a)); });
        add("b_im", "b_im", [](auto& c, auto const& a) { c.b.imag(number(a)); });
        add("d", "d", [](auto& c, auto const& a) { c.d = positive(a); });
        add("screen_distance", "screen_distance", [](auto& c, auto const& a) { c.screen_distance = positive(a); });
        add("lambda", "lambda", [](auto& c, auto const& a) { c.wavelength = positive(a); });
        add("theta1", "theta1", [](auto& c, auto const& a) { c.theta1 = optional_axis(a, false); });
        add("theta1_deg", "theta1", [](auto& c, auto const& a) { c.theta1 = optional_axis(a, true); });
        add("theta2", "theta2", [](auto& c, auto const& a) { c.theta2 = optional_axis(a, false); });
        add("theta2_deg", "theta2", [](auto& c, auto const& a) { c.theta2 = optional_axis(a, true); });
        add("half_width", "half_width", [](auto& c, auto const& a) { c.half_width = positive(a); });
        add("points", "points", [](auto& c, auto const& a) { c.points = count(a, 2); });
        add("delta", "delta", [](auto& c, auto const& a) {
            if (a.value == "exact") c.delta = DeltaMode::exact;
            else if (a.value == "paraxial") c.delta = DeltaMode::paraxial;
            else fail("invalid value '" + a.value + "' (exact|paraxial) for key", a);
        });
        add("intensity", "intensity", [](auto& c, auto const& a) {
            if (a.value == "averaged") c.intensity = IntensityMode::averaged;
            else if (a.value == "paper") c.intensity = IntensityMode::instantaneous;
            else fail("invalid value '" + a.value + "' (averaged|paper) for key", a);
        });
        add("detector", "detector", [](auto& c, auto const& a) { c.detector = detector_value(a); });
        add("photons", "photons", [](auto& c, auto const& a) {
            auto const v = count(a, 1);
            if (v > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) fail("value too large for key", a);
            c.photons = static_cast<std::int64_t>(v);
        });
        add("seed", "seed", [](auto& c, auto const& a) { c.seed = count(a, 0); });
        add("bins", "bins", [](auto& c, auto const& a) { c.bins = count(a, 1); });
        add("p_basis", "p_basis", [](auto& c, auto const& a) { c.p_basis = PolarizerAxis<double>(angle(a, false)); });
        add("p_basis_deg", "p_basis", [](auto& c, auto const& a) { c.p_basis = PolarizerAxis<double>(angle(a, true)); });
        add("p_outcome", "p_outcome", [](auto& c, auto const& a) {
            if (a.value == "+" || a.value == "plus") c.p_outcome = Outcome::plus;
            else if (a.value == "-" || a.value == "minus") c.p_outcome = Outcome::minus;
            else fail("invalid value '" + a.value + "' (+|-) for key", a);
        });
        add("s_analyzer", "s_analyzer", [](auto& c, auto const& a) {
            std::string const v = lower(a.value);
            if (v == "l") c.s_analyzer = SAnalyzer::L;
            else if (v == "r") c.s_analyzer = SAnalyzer::R;
            else if (v == "none") c.s_analyzer = SAnalyzer::none;
            else fail("invalid value '" + a.value + "' (L|R|none) for key", a);
        });
        add("sweep_points", "sweep_points", [](auto& c, auto const& a) { c.sweep_points = count(a, 2); });
        return t;
    }();
    return table;
}

// line := ws* (comment | assignment | empty)
// assignment := key ws* '=' ws* value ws* comment?
std::optional<Assignment> parse_line(std::string_view line, std::size_t number) {
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    std::size_t i = 0;
    auto skip_ws = [&] {
        while (i < line.size() && is_ws(line[i])) ++i;
    };
    auto syntax = [&](std::string const& what) -> ConfigError {
        return ConfigError("syntax error at line " + std::to_string(number) + ": " + what, number, "");
    };

    skip_ws();
    if (i == line.size() || line[i] == '#') return std::nullopt;

    std::size_t const key_begin = i;
    while (i < line.size() && is_key_char(line[i])) ++i;
    if (i == key_begin) throw syntax("expected a lowercase key");
    Assignment a{std::string(line.substr(key_begin, i - key_begin)), "", number};
    skip_ws();
    if (i == line.size() || line[i] != '=') throw syntax("expected '=' after key '" + a.key + "'");
    ++i;
    skip_ws();
    std::size_t const value_begin = i;
    while (i < line.size() && !is_ws(line[i]) && line[i] != '#') ++i;
    if (i == value_begin) throw syntax("missing value for key '" + a.key + "'");
    a.value = std::string(line.substr(value_begin, i - value_begin));
    skip_ws();
    if (i < line.size() && line[i] != '#') throw syntax("unexpected text after value of key '" + a.key + "'");
    return a;
}

std::string render_axis(std::optional<PolarizerAxis<double>> const& axis) {
    return axis ? format_number(axis->angle()) : "none";
}

}  // namespace

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig config;
    std::map<std::string, std::size_t, std::less<>> seen;
    std::size_t line_no = 0;
    std::size_t last_beam_line = 0;

    while (!text.empty()) {
        std::size_t const nl = text.find('\n');
        std::string_view const line = text.substr(0, nl);
        text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
        ++line_no;

        auto const a = parse_line(line, line_no);
        if (!a) continue;
        auto const it = key_table().find(a->key);
        if (it == key_table().end()) fail("unknown key", *a);
        if (!seen.emplace(it->second.canonical, line_no).second) fail("duplicate key", *a);
        it->second.set(config, *a);
        if (a->key.ends_with("_re") || a->key.ends_with("_im")) last_beam_line = line_no;
    }

    if (config.a == 0.0 && config.b == 0.0) {
        throw ConfigError("null beam: a and b are both zero", last_beam_line, "a_re");
    }
    return config;
}

std::string render_config(ExperimentConfig const& c) {
    std::ostringstream out;
    auto kv = [&](std::string_view key, std::string const& value) { out << key << " = " << value << '\n'; };

    kv("a_re", format_number(c.a.real()));
    kv("a_im", format_number(c.a.imag()));
    kv("b_re", format_number(c.b.real()));
    kv("b_im", format_number(c.b.imag()));
    kv("d", format_number(c.d));
    kv("screen_distance", format_number(c.screen_distance));
    kv("lambda", format_number(c.wavelength));
    kv("theta1", render_axis(c.theta1));
    kv("theta2", render_axis(c.theta2));
    kv("half_width", format_number(c.half_width));
    kv("points", std::to_string(c.points));
    kv("delta", c.delta == DeltaMode::exact ? "exact" : "paraxial");
    kv("intensity", c.intensity == IntensityMode::averaged ? "averaged" : "paper");
    switch (c.detector.kind) {
        case Detector<double>::Kind::total: kv("detector", "total"); break;
        case Detector<double>::Kind::V: kv("detector", "V"); break;
        case Detector<double>::Kind::H: kv("detector", "H"); break;
        case Detector<double>::Kind::axis: kv("detector", "axis:" + format_number(c.detector.angle)); break;
    }
    kv("photons", std::to_string(c.photons));
    kv("seed", std::to_string(c.seed));
    kv("bins", std::to_string(c.bins));
    kv("p_basis", format_number(c.p_basis.angle()));
    kv("p_outcome", c.p_outcome == Outcome::plus ? "+" : "-");
    kv("s_analyzer", c.s_analyzer == SAnalyzer::L ? "L" : c.s_analyzer == SAnalyzer::R ? "R" : "none");
    kv("sweep_points", std::to_string(c.sweep_points));
    return out.str();
}

}  // namespace polarslit
