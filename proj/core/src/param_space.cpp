#include "confl/param_space.hpp"

#include <algorithm>
#include <sstream>

namespace confl {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_commas(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!trim(cur).empty()) out.push_back(trim(cur));
    return out;
}

// definition names present in the template, for category inference
std::set<std::string> template_defs(const std::string& text) {
    std::set<std::string> names;
    std::istringstream in(text);
    std::string line;
    bool continued = false;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        bool this_continues = !t.empty() && t.back() == '\\';
        if (continued) {
            continued = this_continues;
            continue;
        }
        continued = this_continues;
        if (t.empty() || t[0] == '#') continue;
        std::size_t eq = t.find('=');
        std::size_t sp = t.find_first_of(" \t=");
        if (eq != std::string::npos && sp > 0) names.insert(trim(t.substr(0, sp)));
    }
    return names;
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

}  // namespace

ParamSpace parse_param_space(const std::string& space_text, const std::string& template_text) {
    ParamSpace space;
    space.template_text = template_text;
    std::set<std::string> defs = template_defs(template_text);

    std::istringstream in(space_text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::size_t open = t.find('{');
        std::size_t close = t.find('}', open);
        if (open == std::string::npos || close == std::string::npos)
            throw ParamError("line " + std::to_string(lineno) + ": expected '{...}'");
        std::string head = trim(t.substr(0, open));
        std::vector<std::string> items = split_commas(t.substr(open + 1, close - open - 1));
        if (head == "FORBID") {
            std::map<std::string, std::string> pattern;
            for (const std::string& item : items) {
                std::size_t eq = item.find('=');
                if (eq == std::string::npos)
                    throw ParamError("line " + std::to_string(lineno) + ": FORBID needs p=v pairs");
                pattern[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
            }
            if (pattern.empty())
                throw ParamError("line " + std::to_string(lineno) + ": empty FORBID block");
            space.forbidden.push_back(std::move(pattern));
            continue;
        }
        ParamDef def;
        def.name = head;
        def.domain = items;
        if (def.name.empty() || def.domain.empty())
            throw ParamError("line " + std::to_string(lineno) + ": bad parameter definition");
        std::size_t dopen = t.find('[', close);
        std::size_t dclose = t.find(']', dopen);
        if (dopen == std::string::npos || dclose == std::string::npos)
            throw ParamError("line " + std::to_string(lineno) + ": expected '[default]'");
        def.default_value = trim(t.substr(dopen + 1, dclose - dopen - 1));
        if (std::find(def.domain.begin(), def.domain.end(), def.default_value) == def.domain.end())
            throw ParamError("parameter " + def.name + ": default not in domain");
        std::set<std::string> distinct(def.domain.begin(), def.domain.end());
        if (distinct.size() != def.domain.size())
            throw ParamError("parameter " + def.name + ": domain values must be disjoint");
        if (defs.count(def.name))
            def.category = ParamCategory::BoolExec;
        else if (ends_with(def.name, "_time") || ends_with(def.name, "_loop"))
            def.category = ParamCategory::Iteration;
        else
            def.category = ParamCategory::Flag;
        if (def.category == ParamCategory::BoolExec)
            for (const std::string& v : def.domain)
                if (v != "yes" && v != "no")
                    throw ParamError("parameter " + def.name +
                                     ": execution-controlling domain must be {yes,no}");
        if (space.find(def.name)) throw ParamError("duplicate parameter " + def.name);
        space.params.push_back(std::move(def));
    }
    return space;
}

std::string content_hash(const std::string& text) {
    // FNV-1a, printed as hex; identity for strategy dedup
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    std::ostringstream out;
    out << std::hex << h;
    return out.str();
}

bool matches_forbidden(const ParamSpace& space, const std::map<std::string, std::string>& values) {
    for (const auto& pattern : space.forbidden) {
        bool all = true;
        for (const auto& [k, v] : pattern) {
            auto it = values.find(k);
            if (it == values.end() || it->second != v) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

ParamAssignment instantiate_assignment(const ParamSpace& space,
                                       const std::map<std::string, std::string>& values) {
    for (const auto& [k, v] : values) {
        const ParamDef* def = space.find(k);
        if (!def) throw ParamError("unknown parameter " + k);
        if (std::find(def->domain.begin(), def->domain.end(), v) == def->domain.end())
            throw ParamError("parameter " + k + ": value '" + v + "' not in domain");
    }
    for (const ParamDef& def : space.params)
        if (!values.count(def.name)) throw ParamError("missing parameter " + def.name);
    if (matches_forbidden(space, values)) throw ParamError("assignment matches a forbidden pattern");

    // substitute ${name} placeholders
    std::string text = space.template_text;
    for (const ParamDef& def : space.params) {
        const std::string placeholder = "${" + def.name + "}";
        const std::string& value = values.at(def.name);
        std::string replacement;
        if (def.category == ParamCategory::Iteration) {
            replacement = value;
        } else if (def.category == ParamCategory::Flag) {
            std::size_t us = def.name.rfind('_');
            std::string flag = us == std::string::npos ? def.name : def.name.substr(us + 1);
            if (value == "yes")
                replacement = "-" + flag;
            else if (value == "no" || value == "off")
                replacement = "";
            else
                replacement = "-" + flag + " " + value;
        }
        for (std::size_t at = text.find(placeholder); at != std::string::npos;
             at = text.find(placeholder, at + 1))
            text = text.substr(0, at) + replacement + text.substr(at + placeholder.size());
    }
    for (std::size_t at = text.find("${"); at != std::string::npos; at = text.find("${", at + 1)) {
        std::size_t close = text.find('}', at);
        if (close == std::string::npos) continue;
        std::string name = text.substr(at + 2, close - at - 2);
        if (!name.empty() &&
            name.find_first_not_of("ABCDEFGHIJKLMNOPQRSTUVWXYZ"
                                   "abcdefghijklmnopqrstuvwxyz0123456789_'") == std::string::npos)
            throw ParamError("template placeholder ${" + name + "} has no matching parameter");
    }

    // rewrite disabled definitions to `fail`
    std::ostringstream rewritten;
    std::istringstream in(text);
    std::string line;
    bool skipping = false;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        bool continues = !t.empty() && t.back() == '\\';
        if (skipping) {
            skipping = continues;
            continue;
        }
        std::size_t eq = t.find('=');
        std::size_t sp = t.find_first_of(" \t=");
        if (!t.empty() && t[0] != '#' && eq != std::string::npos && sp > 0) {
            std::string name = trim(t.substr(0, sp));
            const ParamDef* def = space.find(name);
            if (def && def->category == ParamCategory::BoolExec && values.at(name) == "no") {
                rewritten << name << " = fail\n";
                skipping = continues;
                continue;
            }
        }
        rewritten << line << "\n";
    }

    ParamAssignment out;
    out.values = values;
    out.text = rewritten.str();
    out.hash = content_hash(out.text);

    // emitted strategies must parse and validate against the registry
    StrategyDefs defs = parse_strategy(out.text);
    validate_defs(defs);
    return out;
}

StrategyDefs instantiate(const ParamSpace& space, const ParamAssignment& assignment) {
    (void)space;
    return parse_strategy(assignment.text);
}

ParamAssignment default_assignment(const ParamSpace& space) {
    std::map<std::string, std::string> values;
    for (const ParamDef& def : space.params) values[def.name] = def.default_value;
    return instantiate_assignment(space, values);
}

}  // namespace confl
