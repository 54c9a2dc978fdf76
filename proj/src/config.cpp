#include "shipctl/config.hpp"

#include <charconv>
#include <cmath>
#include <vector>

#include "shipctl/numfmt.hpp"

namespace shipctl {

namespace {

struct Entry {
    std::string key;
    std::string value;
    int line;
};

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(std::string_view v, int line, const std::string& key) {
    const std::string_view tv = trim(v);
    double out = 0;
    const char* first = tv.data();
    const char* last = tv.data() + tv.size();
    if (!tv.empty() && tv.front() == '+') ++first;  // from_chars rejects a leading '+'
    const auto res = std::from_chars(first, last, out);
    if (res.ec != std::errc{} || res.ptr != last || tv.empty())
        throw ConfigError(line, "value of '" + key + "' is not a number: '" +
                                    std::string(tv) + "'");
    if (!std::isfinite(out))
        throw ConfigError(line, "value of '" + key + "' must be finite");
    return out;
}

ShipState parse_state(std::string_view v, int line, const std::string& key) {
    std::vector<double> vals;
    std::string_view rest = trim(v);
    while (!rest.empty()) {
        const auto sp = rest.find_first_of(" \t");
        const std::string_view tok =
            sp == std::string_view::npos ? rest : rest.substr(0, sp);
        vals.push_back(parse_number(tok, line, key));
        rest = sp == std::string_view::npos ? std::string_view{}
                                            : trim(rest.substr(sp));
    }
    if (vals.size() != 6)
        throw ConfigError(line, "'" + key + "' needs six numbers (x y psi u v r), got " +
                                    std::to_string(vals.size()));
    return {vals[0], vals[1], vals[2], vals[3], vals[4], vals[5]};
}

Mode parse_mode(std::string_view v, int line) {
    const std::string_view tv = trim(v);
    if (tv == "stabilize") return Mode::stabilize;
    if (tv == "track") return Mode::track;
    if (tv == "reference") return Mode::reference;
    throw ConfigError(line, "mode must be stabilize, track or reference, got '" +
                                std::string(tv) + "'");
}

bool known_key(const std::string& k) {
    static const char* keys[] = {
        "mode", "m11",  "m22",     "m23",     "m33",        "d11",
        "d22",  "d23",  "d32",     "d33",     "k1",         "k2",
        "k3",   "k4",   "dither_amp", "dither_sharp", "init", "ref_init",
        "tau1d", "tau2d", "step",  "duration", "pe_window", "pe_threshold"};
    for (const char* q : keys)
        if (k == q) return true;
    return false;
}

}  // namespace

Scenario parse_config(std::string_view text, std::optional<Mode> mode_override) {
    std::vector<Entry> entries;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(
            pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        ++line_no;
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;

        const auto hash = line.find('#');
        if (hash != std::string_view::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError(line_no, "expected 'key = value'");
        const std::string key{trim(line.substr(0, eq))};
        const std::string value{trim(line.substr(eq + 1))};
        if (key.empty()) throw ConfigError(line_no, "empty key");
        if (!known_key(key)) throw ConfigError(line_no, "unknown key '" + key + "'");
        entries.push_back({key, value, line_no});
    }

    // Mode first: it decides which gains the k1..k4 keys refer to.
    std::optional<Mode> mode = mode_override;
    for (const Entry& e : entries) {
        if (e.key != "mode") continue;
        const Mode m = parse_mode(e.value, e.line);
        if (mode_override && m != *mode_override)
            throw ConfigError(e.line, std::string("mode '") + to_string(m) +
                                          "' conflicts with the requested '" +
                                          to_string(*mode_override) + "'");
        mode = m;
    }
    if (!mode) throw ConfigError(0, "missing mode");

    Scenario sc;
    sc.mode = *mode;
    bool have_init = false, have_ref_init = false;

    auto set_gain = [&](int idx, double v, int line) {
        if (sc.mode == Mode::reference)
            throw ConfigError(line, "k" + std::to_string(idx) +
                                        " is not applicable in reference mode");
        if (!(v > 0))
            throw ConfigError(line, "k" + std::to_string(idx) + " must be > 0");
        if (sc.mode == Mode::stabilize) {
            switch (idx) {
                case 1: sc.stab_gains.k1 = v; break;
                case 2: sc.stab_gains.k2 = v; break;
                case 3: sc.stab_gains.k3 = v; break;
                case 4: sc.stab_gains.k4 = v; break;
            }
        } else {
            switch (idx) {
                case 1: sc.track_gains.k1 = v; break;
                case 2: sc.track_gains.k2 = v; break;
                case 3: sc.track_gains.k3 = v; break;
                case 4: sc.track_gains.k4 = v; break;
            }
        }
    };

    for (const Entry& e : entries) {
        const auto num = [&] { return parse_number(e.value, e.line, e.key); };
        if (e.key == "mode") continue;
        else if (e.key == "m11") sc.params.m11 = num();
        else if (e.key == "m22") sc.params.m22 = num();
        else if (e.key == "m23") sc.params.m23 = num();
        else if (e.key == "m33") sc.params.m33 = num();
        else if (e.key == "d11") sc.params.d11 = num();
        else if (e.key == "d22") sc.params.d22 = num();
        else if (e.key == "d23") sc.params.d23 = num();
        else if (e.key == "d32") sc.params.d32 = num();
        else if (e.key == "d33") sc.params.d33 = num();
        else if (e.key == "k1") set_gain(1, num(), e.line);
        else if (e.key == "k2") set_gain(2, num(), e.line);
        else if (e.key == "k3") set_gain(3, num(), e.line);
        else if (e.key == "k4") set_gain(4, num(), e.line);
        else if (e.key == "dither_amp" || e.key == "dither_sharp") {
            if (sc.mode != Mode::stabilize)
                throw ConfigError(e.line,
                                  "'" + e.key + "' only applies to stabilize mode");
            const double v = num();
            if (!(v > 0)) throw ConfigError(e.line, "'" + e.key + "' must be > 0");
            (e.key == "dither_amp" ? sc.stab_gains.dither_amp
                                   : sc.stab_gains.dither_sharp) = v;
        } else if (e.key == "init") {
            sc.init = parse_state(e.value, e.line, e.key);
            have_init = true;
        } else if (e.key == "ref_init") {
            sc.ref_init = parse_state(e.value, e.line, e.key);
            have_ref_init = true;
        }
        else if (e.key == "tau1d") sc.tau1d = num();
        else if (e.key == "tau2d") sc.tau2d = num();
        else if (e.key == "step") {
            sc.step = num();
            if (!(sc.step > 0)) throw ConfigError(e.line, "step must be > 0");
        } else if (e.key == "duration") {
            sc.duration = num();
            if (!(sc.duration > 0)) throw ConfigError(e.line, "duration must be > 0");
        } else if (e.key == "pe_window") {
            sc.pe_window = num();
            if (!(sc.pe_window > 0)) throw ConfigError(e.line, "pe_window must be > 0");
        } else if (e.key == "pe_threshold") {
            sc.pe_threshold = num();
            if (!(sc.pe_threshold > 0))
                throw ConfigError(e.line, "pe_threshold must be > 0");
        }
    }

    if ((sc.mode == Mode::stabilize || sc.mode == Mode::track) && !have_init)
        throw ConfigError(0, "missing init (ship initial state)");
    if ((sc.mode == Mode::track || sc.mode == Mode::reference) && !have_ref_init)
        throw ConfigError(0, "missing ref_init (reference initial state)");

    try {
        sc.validate();
    } catch (const std::invalid_argument& ex) {
        throw ConfigError(0, ex.what());
    }
    return sc;
}

std::string dump_config(const Scenario& sc) {
    std::string out;
    auto kv = [&out](const char* key, double v) {
        out += key;
        out += " = ";
        append_double(out, v);
        out += '\n';
    };
    auto state = [&out](const char* key, const ShipState& s) {
        out += key;
        out += " = ";
        for (double q : {s.x, s.y, s.psi, s.u, s.v, s.r}) {
            append_double(out, q);
            out += ' ';
        }
        out.back() = '\n';
    };

    out += std::string("mode = ") + to_string(sc.mode) + "\n";
    kv("m11", sc.params.m11);
    kv("m22", sc.params.m22);
    kv("m23", sc.params.m23);
    kv("m33", sc.params.m33);
    kv("d11", sc.params.d11);
    kv("d22", sc.params.d22);
    kv("d23", sc.params.d23);
    kv("d32", sc.params.d32);
    kv("d33", sc.params.d33);
    if (sc.mode == Mode::stabilize) {
        kv("k1", sc.stab_gains.k1);
        kv("k2", sc.stab_gains.k2);
        kv("k3", sc.stab_gains.k3);
        kv("k4", sc.stab_gains.k4);
        kv("dither_amp", sc.stab_gains.dither_amp);
        kv("dither_sharp", sc.stab_gains.dither_sharp);
    } else if (sc.mode == Mode::track) {
        kv("k1", sc.track_gains.k1);
        kv("k2", sc.track_gains.k2);
        kv("k3", sc.track_gains.k3);
        kv("k4", sc.track_gains.k4);
    }
    if (sc.mode != Mode::reference) state("init", sc.init);
    if (sc.mode != Mode::stabilize) state("ref_init", sc.ref_init);
    kv("tau1d", sc.tau1d);
    kv("tau2d", sc.tau2d);
    kv("step", sc.step);
    kv("duration", sc.horizon());
    kv("pe_window", sc.pe_window);
    kv("pe_threshold", sc.pe_threshold);
    return out;
}

}  // namespace shipctl
