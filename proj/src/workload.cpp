#include "hansim/workload.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hansim::workload {

namespace {

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

[[noreturn]] void syntax_error(int line, const std::string& msg) {
    throw ScenarioError(ScenarioError::Kind::Syntax, line,
                        "line " + std::to_string(line) + ": " + msg);
}

double parse_number(const std::string& token, int line, std::string* unit_out) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double value = std::strtod(begin, &end);
    if (end == begin) syntax_error(line, "expected a number in '" + token + "'");
    if (unit_out) *unit_out = trim(std::string(end));
    return value;
}

Seconds parse_duration(const std::string& token, int line) {
    std::string unit;
    const double value = parse_number(token, line, &unit);
    double mult = 1.0;
    if (unit.empty() || unit == "s") {
        mult = 1.0;
    } else if (unit == "min") {
        mult = 60.0;
    } else if (unit == "h") {
        mult = 3600.0;
    } else {
        syntax_error(line, "unknown duration unit '" + unit + "' (use s, min or h)");
    }
    return static_cast<Seconds>(std::llround(value * mult));
}

double parse_power(const std::string& token, int line) {
    std::string unit;
    const double value = parse_number(token, line, &unit);
    if (!unit.empty() && unit != "kW") {
        syntax_error(line, "unknown power unit '" + unit + "' (use kW)");
    }
    return value;
}

double parse_rate_per_h(const std::string& token, int line) {
    std::string unit;
    const double value = parse_number(token, line, &unit);
    if (unit != "/h") syntax_error(line, "rates must be written as <n>/h");
    if (value <= 0) syntax_error(line, "rate must be positive");
    return value;
}

struct RawArrival {
    int line = 0;
    std::vector<std::string> tokens;
};

std::vector<std::string> resolve_targets(const std::string& token,
                                         const std::vector<domain::ApplianceSpec>& devices,
                                         int line) {
    std::set<std::string> out;
    for (const std::string& part : split(token, '|')) {
        bool matched = false;
        if (part == "*") {
            for (const auto& d : devices) out.insert(d.id);
            matched = !devices.empty();
        } else if (!part.empty() && part.back() == '*') {
            const std::string prefix = part.substr(0, part.size() - 1);
            for (const auto& d : devices) {
                if (d.id.rfind(prefix, 0) == 0) {
                    out.insert(d.id);
                    matched = true;
                }
            }
        } else {
            for (const auto& d : devices) {
                if (d.id == part) {
                    out.insert(d.id);
                    matched = true;
                    break;
                }
            }
        }
        if (!matched) {
            throw ScenarioError(ScenarioError::Kind::UnknownDevice, line,
                                "line " + std::to_string(line) + ": target '" + part +
                                    "' matches no device");
        }
    }
    return {out.begin(), out.end()};
}

ArrivalProcess parse_arrival(const RawArrival& raw,
                             const std::vector<domain::ApplianceSpec>& devices) {
    const auto& t = raw.tokens;
    const int line = raw.line;
    if (t.size() < 2) syntax_error(line, "arrival needs at least a kind and a target");

    ArrivalProcess proc;
    proc.targets = resolve_targets(t[1], devices, line);
    const std::string& kind = t[0];

    if (kind == "poisson") {
        if (t.size() < 3 || t.size() > 5) {
            syntax_error(line, "poisson arrival: <target>, <rate>/h [, <start> [, <end>]]");
        }
        Poisson p;
        p.rate_per_h = parse_rate_per_h(t[2], line);
        if (t.size() >= 4) p.start_s = parse_duration(t[3], line);
        if (t.size() == 5) p.end_s = parse_duration(t[4], line);
        proc.kind = p;
    } else if (kind == "periodic") {
        if (t.size() < 3 || t.size() > 4) {
            syntax_error(line, "periodic arrival: <target>, <interval> [, <phase>]");
        }
        Periodic p;
        p.interval_s = parse_duration(t[2], line);
        if (t.size() == 4) p.phase_s = parse_duration(t[3], line);
        if (p.interval_s <= 0) syntax_error(line, "periodic interval must be positive");
        if (p.phase_s < 0) syntax_error(line, "periodic phase must be >= 0");
        proc.kind = p;
    } else if (kind == "explicit") {
        if (t.size() < 3) syntax_error(line, "explicit arrival: <target>, on@<t> [, off@<t> ...]");
        Explicit e;
        for (std::size_t i = 2; i < t.size(); ++i) {
            const std::string& tok = t[i];
            Action action;
            std::string rest;
            if (tok.rfind("on@", 0) == 0) {
                action = Action::On;
                rest = tok.substr(3);
            } else if (tok.rfind("off@", 0) == 0) {
                action = Action::Off;
                rest = tok.substr(4);
            } else {
                syntax_error(line, "explicit events must look like on@<time> or off@<time>");
            }
            const Seconds at = parse_duration(rest, line);
            if (at < 0) syntax_error(line, "event times must be >= 0");
            e.events.emplace_back(at, action);
        }
        proc.kind = e;
    } else if (kind == "toggle") {
        if (t.size() != 4) syntax_error(line, "toggle arrival: <target>, <mean_on>, <mean_off>");
        RandomToggle r;
        r.mean_on_s = parse_duration(t[2], line);
        r.mean_off_s = parse_duration(t[3], line);
        if (r.mean_on_s <= 0 || r.mean_off_s <= 0) {
            syntax_error(line, "toggle holding times must be positive");
        }
        proc.kind = r;
    } else {
        syntax_error(line, "unknown arrival kind '" + kind +
                               "' (poisson, periodic, explicit, toggle)");
    }
    return proc;
}

stnet::DeliveryModel parse_delivery(const std::string& value, int line) {
    if (value == "perfect") return stnet::Perfect{};
    if (value.rfind("iid(", 0) == 0 && value.back() == ')') {
        const std::string inner = value.substr(4, value.size() - 5);
        std::string unit;
        const double p = parse_number(inner, line, &unit);
        if (!unit.empty() || p < 0.0 || p > 1.0) {
            syntax_error(line, "iid delivery probability must be in [0, 1]");
        }
        return stnet::IidLoss{p};
    }
    if (value.rfind("blackout(", 0) == 0 && value.back() == ')') {
        const std::string inner = value.substr(9, value.size() - 10);
        stnet::Blackout b;
        for (const std::string& range : split(inner, ',')) {
            const auto dash = range.find('-');
            if (dash == std::string::npos) syntax_error(line, "blackout ranges look like <a>-<b>");
            char* end = nullptr;
            const long long lo = std::strtoll(range.substr(0, dash).c_str(), &end, 10);
            const long long hi = std::strtoll(range.substr(dash + 1).c_str(), &end, 10);
            if (lo < 0 || hi < lo) syntax_error(line, "bad blackout range '" + range + "'");
            b.rounds.emplace_back(lo, hi);
        }
        return b;
    }
    syntax_error(line, "delivery must be perfect, iid(<p>) or blackout(<a>-<b>, ...)");
}

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    // trim to the shortest representation that round-trips
    for (int prec = 1; prec < 17; ++prec) {
        char probe[64];
        std::snprintf(probe, sizeof probe, "%.*g", prec, v);
        if (std::strtod(probe, nullptr) == v) return probe;
    }
    return buf;
}

}  // namespace

Seconds parse_duration_token(const std::string& token) { return parse_duration(token, 0); }

std::vector<domain::RequestEvent> gen_events(const ArrivalProcess& proc, Seconds horizon_s,
                                             rng::Stream& rng) {
    std::vector<domain::RequestEvent> out;

    if (const auto* poisson = std::get_if<Poisson>(&proc.kind)) {
        const Seconds end = poisson->end_s < 0 ? horizon_s : std::min(poisson->end_s, horizon_s);
        const double mean_gap = 3600.0 / poisson->rate_per_h;
        double t = static_cast<double>(poisson->start_s);
        while (true) {
            t += rng.next_exponential(mean_gap);
            if (t >= static_cast<double>(end)) break;
            const auto& dev = proc.targets[rng.next_below(proc.targets.size())];
            out.push_back({static_cast<Seconds>(std::floor(t)), dev, Action::On});
        }
    } else if (const auto* periodic = std::get_if<Periodic>(&proc.kind)) {
        for (const std::string& dev : proc.targets) {
            for (Seconds t = periodic->phase_s; t < horizon_s; t += periodic->interval_s) {
                out.push_back({t, dev, Action::On});
            }
        }
    } else if (const auto* expl = std::get_if<Explicit>(&proc.kind)) {
        for (const std::string& dev : proc.targets) {
            for (const auto& [at, action] : expl->events) {
                if (at < horizon_s) out.push_back({at, dev, action});
            }
        }
    } else if (const auto* toggle = std::get_if<RandomToggle>(&proc.kind)) {
        for (const std::string& dev : proc.targets) {
            double t = 0.0;
            Action next = Action::On;
            while (true) {
                const double hold = next == Action::On
                                        ? rng.next_exponential(static_cast<double>(toggle->mean_off_s))
                                        : rng.next_exponential(static_cast<double>(toggle->mean_on_s));
                t += hold;
                if (t >= static_cast<double>(horizon_s)) break;
                out.push_back({static_cast<Seconds>(std::floor(t)), dev, next});
                next = next == Action::On ? Action::Off : Action::On;
            }
        }
    }

    std::sort(out.begin(), out.end());
    return out;
}

std::vector<domain::RequestEvent> all_events(const Scenario& scenario) {
    std::vector<domain::RequestEvent> out;
    for (std::size_t i = 0; i < scenario.arrivals.size(); ++i) {
        rng::Stream stream(scenario.seed, rng::kPurposeArrivalBase + i);
        auto events = gen_events(scenario.arrivals[i], scenario.duration_s, stream);
        out.insert(out.end(), events.begin(), events.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Scenario parse_scenario(const std::string& text) {
    Scenario sc;
    sc.name = "scenario";

    enum class Section { None, Scenario, Devices, Arrivals, Network };
    Section section = Section::None;
    std::vector<RawArrival> raw_arrivals;
    bool duration_seen = false;
    bool initiator_seen = false;

    std::istringstream in(text);
    std::string raw_line;
    int line_no = 0;
    while (std::getline(in, raw_line)) {
        ++line_no;
        const auto hash = raw_line.find('#');
        if (hash != std::string::npos) raw_line.erase(hash);
        const std::string line = trim(raw_line);
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.back() != ']') syntax_error(line_no, "unterminated section header");
            const std::string name = trim(line.substr(1, line.size() - 2));
            if (name == "scenario") section = Section::Scenario;
            else if (name == "devices") section = Section::Devices;
            else if (name == "arrivals") section = Section::Arrivals;
            else if (name == "network") section = Section::Network;
            else syntax_error(line_no, "unknown section [" + name + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) syntax_error(line_no, "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        switch (section) {
            case Section::None:
                syntax_error(line_no, "key outside any section");
            case Section::Scenario: {
                if (key == "name") {
                    sc.name = value;
                } else if (key == "duration") {
                    sc.duration_s = parse_duration(value, line_no);
                    duration_seen = true;
                } else if (key == "seed") {
                    sc.seed = std::strtoull(value.c_str(), nullptr, 10);
                } else if (key == "mode") {
                    if (value == "coordinated") sc.mode = RunMode::Coordinated;
                    else if (value == "baseline") sc.mode = RunMode::Baseline;
                    else if (value == "both") sc.mode = RunMode::Both;
                    else syntax_error(line_no, "mode must be coordinated, baseline or both");
                } else {
                    syntax_error(line_no, "unknown [scenario] key '" + key + "'");
                }
                break;
            }
            case Section::Devices: {
                const auto tokens = split(value, ',');
                auto build = [&](const std::string& id, std::size_t first) {
                    domain::ApplianceSpec spec;
                    spec.id = id;
                    if (tokens.size() < first + 2) {
                        syntax_error(line_no, "device needs a kind and a power rating");
                    }
                    const std::string& kind = tokens[first];
                    if (kind == "type1") spec.kind = ApplianceKind::Type1;
                    else if (kind == "type2") spec.kind = ApplianceKind::Type2;
                    else syntax_error(line_no, "device kind must be type1 or type2");
                    spec.power_kw = parse_power(tokens[first + 1], line_no);
                    if (spec.kind == ApplianceKind::Type2) {
                        if (tokens.size() != first + 4) {
                            syntax_error(line_no, "type2 device needs min_dcd and max_dcp");
                        }
                        spec.min_dcd_s = parse_duration(tokens[first + 2], line_no);
                        spec.max_dcp_s = parse_duration(tokens[first + 3], line_no);
                    } else if (tokens.size() != first + 2) {
                        syntax_error(line_no, "type1 device takes no duty-cycle parameters");
                    }
                    if (auto issue = domain::validate_appliance(spec)) {
                        const auto kind_of = issue->code == domain::ValidationError::MinExceedsMax
                                                 ? ScenarioError::Kind::InvalidDutyCycle
                                                 : ScenarioError::Kind::Validation;
                        throw ScenarioError(kind_of, line_no,
                                            "line " + std::to_string(line_no) + ": " +
                                                issue->reason);
                    }
                    sc.devices.push_back(std::move(spec));
                };
                if (key == "device") {
                    if (tokens.empty() || tokens[0].empty()) {
                        syntax_error(line_no, "device needs an id");
                    }
                    build(tokens[0], 1);
                } else if (key == "group") {
                    if (tokens.size() < 2) syntax_error(line_no, "group needs a prefix and count");
                    const long long count = std::strtoll(tokens[1].c_str(), nullptr, 10);
                    if (count <= 0 || count > 100000) {
                        syntax_error(line_no, "group count must be in [1, 100000]");
                    }
                    int width = 2;
                    for (long long v = count; v >= 100 && width < 6; v /= 10) ++width;
                    for (long long i = 1; i <= count; ++i) {
                        char buf[16];
                        std::snprintf(buf, sizeof buf, "%0*d", std::min(width, 6),
                                      static_cast<int>(i));
                        build(tokens[0] + buf, 2);
                    }
                } else {
                    syntax_error(line_no, "unknown [devices] key '" + key + "'");
                }
                break;
            }
            case Section::Arrivals: {
                if (key != "arrival") syntax_error(line_no, "unknown [arrivals] key '" + key + "'");
                raw_arrivals.push_back({line_no, split(value, ',')});
                break;
            }
            case Section::Network: {
                if (key == "period") {
                    sc.round.period_s = parse_duration(value, line_no);
                    if (sc.round.period_s < 1) syntax_error(line_no, "period must be >= 1 s");
                } else if (key == "initiator") {
                    sc.round.initiator = value;
                    initiator_seen = true;
                } else if (key == "delivery") {
                    sc.round.delivery = parse_delivery(value, line_no);
                } else {
                    syntax_error(line_no, "unknown [network] key '" + key + "'");
                }
                break;
            }
        }
    }

    if (!duration_seen || sc.duration_s <= 0) {
        throw ScenarioError(ScenarioError::Kind::Validation, 0,
                            "scenario needs a positive duration");
    }
    std::set<std::string> ids;
    for (const auto& d : sc.devices) {
        if (!ids.insert(d.id).second) {
            throw ScenarioError(ScenarioError::Kind::Validation, 0,
                                "duplicate device id '" + d.id + "'");
        }
    }
    if (!initiator_seen && !sc.devices.empty()) sc.round.initiator = sc.devices.front().id;
    if (initiator_seen && !ids.count(sc.round.initiator)) {
        throw ScenarioError(ScenarioError::Kind::UnknownDevice, 0,
                            "initiator '" + sc.round.initiator + "' is not a device");
    }
    for (const RawArrival& raw : raw_arrivals) {
        sc.arrivals.push_back(parse_arrival(raw, sc.devices));
    }
    return sc;
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ScenarioError(ScenarioError::Kind::Validation, 0,
                            "no such scenario file: " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    Scenario sc = parse_scenario(buf.str());
    if (sc.name == "scenario") {
        // default the name to the file stem
        auto stem = path;
        if (const auto slash = stem.find_last_of('/'); slash != std::string::npos) {
            stem.erase(0, slash + 1);
        }
        if (const auto dot = stem.find_last_of('.'); dot != std::string::npos) stem.erase(dot);
        sc.name = stem;
    }
    return sc;
}

std::string render_scenario(const Scenario& sc) {
    std::ostringstream out;
    out << "[scenario]\n";
    out << "name = " << sc.name << "\n";
    out << "duration = " << sc.duration_s << " s\n";
    out << "seed = " << sc.seed << "\n";
    out << "mode = "
        << (sc.mode == RunMode::Coordinated ? "coordinated"
            : sc.mode == RunMode::Baseline  ? "baseline"
                                            : "both")
        << "\n";

    out << "\n[devices]\n";
    for (const auto& d : sc.devices) {
        out << "device = " << d.id << ", "
            << (d.kind == ApplianceKind::Type1 ? "type1" : "type2") << ", "
            << format_double(d.power_kw) << " kW";
        if (d.kind == ApplianceKind::Type2) {
            out << ", " << *d.min_dcd_s << " s, " << *d.max_dcp_s << " s";
        }
        out << "\n";
    }

    out << "\n[arrivals]\n";
    for (const auto& a : sc.arrivals) {
        out << "arrival = ";
        std::string targets;
        for (const auto& t : a.targets) {
            if (!targets.empty()) targets += '|';
            targets += t;
        }
        if (const auto* p = std::get_if<Poisson>(&a.kind)) {
            out << "poisson, " << targets << ", " << format_double(p->rate_per_h) << "/h";
            if (p->end_s >= 0) out << ", " << p->start_s << " s, " << p->end_s << " s";
            else if (p->start_s != 0) out << ", " << p->start_s << " s";
        } else if (const auto* p = std::get_if<Periodic>(&a.kind)) {
            out << "periodic, " << targets << ", " << p->interval_s << " s, " << p->phase_s
                << " s";
        } else if (const auto* p = std::get_if<Explicit>(&a.kind)) {
            out << "explicit, " << targets;
            for (const auto& [at, action] : p->events) {
                out << ", " << (action == Action::On ? "on@" : "off@") << at << " s";
            }
        } else if (const auto* p = std::get_if<RandomToggle>(&a.kind)) {
            out << "toggle, " << targets << ", " << p->mean_on_s << " s, " << p->mean_off_s
                << " s";
        }
        out << "\n";
    }

    out << "\n[network]\n";
    out << "period = " << sc.round.period_s << " s\n";
    if (!sc.round.initiator.empty()) out << "initiator = " << sc.round.initiator << "\n";
    out << "delivery = ";
    if (std::holds_alternative<stnet::Perfect>(sc.round.delivery)) {
        out << "perfect";
    } else if (const auto* loss = std::get_if<stnet::IidLoss>(&sc.round.delivery)) {
        out << "iid(" << format_double(loss->p) << ")";
    } else {
        const auto& b = std::get<stnet::Blackout>(sc.round.delivery);
        out << "blackout(";
        for (std::size_t i = 0; i < b.rounds.size(); ++i) {
            if (i) out << ", ";
            out << b.rounds[i].first << "-" << b.rounds[i].second;
        }
        out << ")";
    }
    out << "\n";
    return out.str();
}

}  // namespace hansim::workload
