#include "hopfavg/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hopfavg/errors.hpp"

namespace hopfavg {
namespace {

// A slice of the current line with its 1-based starting column.
struct Token {
    std::string text;
    int column = 1;
};

Token trim(const std::string& s, int column) {
    std::size_t b = 0;
    while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    std::size_t e = s.size();
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return {s.substr(b, e - b), column + static_cast<int>(b)};
}

std::vector<Token> split(const Token& t, char sep) {
    std::vector<Token> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= t.text.size(); ++i) {
        if (i == t.text.size() || t.text[i] == sep) {
            out.push_back(trim(t.text.substr(start, i - start), t.column + static_cast<int>(start)));
            start = i + 1;
        }
    }
    return out;
}

std::optional<double> to_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    const char* first = s.data();
    if (*first == '+') ++first;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

bool is_delay_name(const std::string& s) {
    return s.size() > 3 && s.compare(0, 3, "tau") == 0 &&
           std::all_of(s.begin() + 3, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

class Parser {
public:
    Parser(std::istream& in, std::string source) : in_(in) { cfg_.source = std::move(source); }

    ExperimentConfig run() {
        std::string raw;
        while (std::getline(in_, raw)) {
            ++line_;
            if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
            if (!raw.empty() && raw.back() == '\r') raw.pop_back();
            const Token t = trim(raw, 1);
            if (t.text.empty()) continue;
            if (t.text.front() == '[') {
                section_header(t);
            } else {
                assignment(t);
            }
        }
        finish();
        return std::move(cfg_);
    }

private:
    [[noreturn]] void fail(const std::string& msg, int column) const { throw ConfigError(msg, line_, column); }
    [[noreturn]] void fail_at(const std::string& msg, std::pair<int, int> where) const {
        throw ConfigError(msg, where.first, where.second);
    }

    void section_header(const Token& t) {
        if (t.text.back() != ']') fail("expected ']' to close the section header", t.column + static_cast<int>(t.text.size()));
        const Token name = trim(t.text.substr(1, t.text.size() - 2), t.column + 1);
        static const std::set<std::string> known{"linear", "nonlinear", "hopf", "simulation"};
        if (!known.count(name.text)) {
            fail("unknown section '" + name.text + "' (expected linear, nonlinear, hopf or simulation)", name.column);
        }
        section_ = name.text;
        section_line_[section_] = line_;
    }

    double number(const Token& v) const {
        auto d = to_double(v.text);
        if (!d) fail("expected a number, got '" + v.text + "'", v.column);
        return *d;
    }

    double positive(const Token& v) const {
        const double d = number(v);
        if (!(d > 0.0)) fail("expected a positive number, got '" + v.text + "'", v.column);
        return d;
    }

    std::optional<double> auto_or_positive(const Token& v) const {
        if (v.text == "auto") return std::nullopt;
        return positive(v);
    }

    DelayRef delay_ref(const Token& v) {
        if (is_delay_name(v.text)) {
            pending_refs_.push_back({v.text, {line_, v.column}});
            return {v.text, 0.0};
        }
        auto d = to_double(v.text);
        if (!d || *d < 0.0) fail("expected a delay name (tau<k>) or a nonnegative number, got '" + v.text + "'", v.column);
        return {"", *d};
    }

    TermSpec term(const Token& v) {
        TermSpec spec;
        spec.coefficient = 1.0;
        const auto parts = split(v, '*');
        std::size_t first_factor = 0;
        if (auto c = to_double(parts.front().text)) {
            spec.coefficient = *c;
            first_factor = 1;
        }
        if (first_factor == parts.size()) fail("a term needs at least one factor x(<delay>)", v.column);
        for (std::size_t i = first_factor; i < parts.size(); ++i) {
            const Token& f = parts[i];
            const auto open = f.text.find('(');
            const auto close = f.text.find(')');
            if (f.text.compare(0, 2, "x(") != 0 || close == std::string::npos || close < open) {
                fail("expected a factor of the form x(<delay>) or x(<delay>)^<power>, got '" + f.text + "'", f.column);
            }
            const Token inner = trim(f.text.substr(2, close - 2), f.column + 2);
            int power = 1;
            const std::string rest = f.text.substr(close + 1);
            if (!rest.empty()) {
                const Token p = trim(rest, f.column + static_cast<int>(close) + 1);
                int parsed = 0;
                const char* begin = p.text.data() + 1;
                const char* end = p.text.data() + p.text.size();
                auto [ptr, ec] = std::from_chars(begin, end, parsed);
                if (p.text.empty() || p.text.front() != '^' || ec != std::errc() || ptr != end || parsed < 1) {
                    fail("expected ^<positive integer> after the factor, got '" + p.text + "'", p.column);
                }
                power = parsed;
            }
            spec.factors.push_back({delay_ref(inner), power});
        }
        return spec;
    }

    void assignment(const Token& t) {
        if (section_.empty()) fail("key outside of any section", t.column);
        const auto eq = t.text.find('=');
        if (eq == std::string::npos) fail("expected 'key = value'", t.column);
        const Token key = trim(t.text.substr(0, eq), t.column);
        const Token value = trim(t.text.substr(eq + 1), t.column + static_cast<int>(eq) + 1);
        if (key.text.empty()) fail("missing key before '='", t.column);
        if (value.text.empty()) fail("missing value after '='", value.column);
        if (key.text != "term" && !seen_.insert(section_ + "." + key.text).second) {
            fail("duplicate key '" + key.text + "' in [" + section_ + "]", key.column);
        }

        if (section_ == "linear") {
            if (key.text == "a1") cfg_.a1 = number(value);
            else if (key.text == "a2") cfg_.a2 = number(value);
            else if (key.text == "tau1") cfg_.tau1 = number(value);
            else unknown(key);
        } else if (section_ == "hopf") {
            if (key.text == "tau2") cfg_.tau2 = auto_or_positive(value);
            else if (key.text == "rho_max") cfg_.rho_max = auto_or_positive(value);
            else unknown(key);
        } else if (section_ == "nonlinear") {
            if (key.text == "a3") a3_ = number(value);
            else if (key.text == "a4") a4_ = number(value);
            else if (key.text == "term") cfg_.terms.push_back(term(value));
            else if (key.text == "embedding") cfg_.embedding = delay_ref(value);
            else if (is_delay_name(key.text)) {
                if (key.text == "tau1" || key.text == "tau2") {
                    fail(key.text + " belongs to the linear part; set it in [linear] or [hopf]", key.column);
                }
                const double d = number(value);
                if (d < 0.0) fail("delays must be nonnegative", value.column);
                cfg_.named_delays[key.text] = d;
            } else {
                unknown(key);
            }
            if (key.text == "a3" || key.text == "a4") shortcut_where_ = {line_, key.column};
        } else {
            if (key.text == "epsilon") {
                cfg_.epsilons.clear();
                for (const auto& item : split(value, ',')) {
                    const double e = number(item);
                    if (e < 0.0) fail("epsilon must be nonnegative", item.column);
                    cfg_.epsilons.push_back(e);
                }
            } else if (key.text == "history") {
                for (const auto& item : split(value, ',')) {
                    try {
                        cfg_.histories.push_back(parse_history(item.text));
                    } catch (const InvalidArgument& e) {
                        fail(e.what(), item.column);
                    }
                }
            } else if (key.text == "t_end") {
                cfg_.t_end = auto_or_positive(value);
            } else if (key.text == "step") {
                cfg_.step = positive(value);
            } else if (key.text == "window") {
                cfg_.window = positive(value);
                if (cfg_.window > 1.0) fail("window is a fraction of the run and must lie in (0, 1]", value.column);
            } else {
                unknown(key);
            }
        }
    }

    [[noreturn]] void unknown(const Token& key) const {
        fail("unknown key '" + key.text + "' in [" + section_ + "]", key.column);
    }

    void finish() {
        if (!section_line_.count("linear")) throw ConfigError("missing [linear] section", 0, 0);
        for (const char* k : {"a1", "a2", "tau1"}) {
            if (!seen_.count(std::string("linear.") + k)) {
                throw ConfigError(std::string("[linear] is missing '") + k + "'", section_line_["linear"], 1);
            }
        }
        try {
            (void)cfg_.linear();
        } catch (const InvalidArgument& e) {
            throw ConfigError(e.what(), section_line_["linear"], 1);
        }
        if (a3_ || a4_) {
            if (!cfg_.named_delays.count("tau3")) fail_at("a3/a4 need tau3 in [nonlinear]", shortcut_where_);
            // a4 x^3(t - tau3) - a3 x(t - tau3)
            std::vector<TermSpec> shortcuts;
            if (a4_) shortcuts.push_back({*a4_, {{DelayRef{"tau3", 0.0}, 3}}});
            if (a3_) shortcuts.push_back({-*a3_, {{DelayRef{"tau3", 0.0}, 1}}});
            cfg_.terms.insert(cfg_.terms.begin(), shortcuts.begin(), shortcuts.end());
        }
        for (const auto& [name, where] : pending_refs_) {
            if (name != "tau1" && name != "tau2" && !cfg_.named_delays.count(name)) {
                fail_at("undefined delay '" + name + "'", where);
            }
        }
    }

    std::istream& in_;
    ExperimentConfig cfg_;
    int line_ = 0;
    std::string section_;
    std::map<std::string, int> section_line_;
    std::set<std::string> seen_;
    std::optional<double> a3_, a4_;
    std::pair<int, int> shortcut_where_{0, 0};
    std::vector<std::pair<std::string, std::pair<int, int>>> pending_refs_;
};

}  // namespace

double ExperimentConfig::resolve(const DelayRef& ref, double tau2) const {
    if (ref.name.empty()) return ref.value;
    if (ref.name == "tau1") return tau1;
    if (ref.name == "tau2") return tau2;
    auto it = named_delays.find(ref.name);
    if (it == named_delays.end()) throw InvalidArgument("undefined delay '" + ref.name + "'");
    return it->second;
}

PolynomialDDE ExperimentConfig::build_model(double tau2, double epsilon) const {
    std::vector<double> delays{tau1, tau2};
    auto index_of = [&](double d) {
        for (std::size_t i = 0; i < delays.size(); ++i) {
            if (delays[i] == d) return i;
        }
        delays.push_back(d);
        return delays.size() - 1;
    };
    std::vector<DelayedMonomial> nonlinear;
    for (const auto& t : terms) {
        DelayedMonomial m;
        m.coefficient = t.coefficient;
        for (const auto& [ref, power] : t.factors) m.factors.push_back({index_of(resolve(ref, tau2)), power});
        nonlinear.push_back(std::move(m));
    }
    return PolynomialDDE(std::move(delays), {{-a1, 0}, {-a2, 1}}, epsilon, std::move(nonlinear));
}

double ExperimentConfig::embedding_delay(double tau2) const {
    if (embedding) return resolve(*embedding, tau2);
    if (auto it = named_delays.find("tau3"); it != named_delays.end()) return it->second;
    if (!terms.empty() && !terms.front().factors.empty()) return resolve(terms.front().factors.front().first, tau2);
    return tau2;
}

HistoryFunction parse_history(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw InvalidArgument("history '" + text + "' should look like exp:<c>, cos1:<c>, sin1:<c> or const:<c>");
    }
    const std::string kind = text.substr(0, colon);
    const auto c = to_double(text.substr(colon + 1));
    if (!c || !(*c > 0.0)) throw InvalidArgument("history scale must be a positive number in '" + text + "'");
    if (kind == "exp") return HistoryFunction::exponential(*c);
    if (kind == "cos1") return HistoryFunction::shifted_cosine(*c);
    if (kind == "sin1") return HistoryFunction::shifted_sine(*c);
    if (kind == "const") return HistoryFunction::constant(*c);
    throw InvalidArgument("unknown history kind '" + kind + "' (expected exp, cos1, sin1 or const)");
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) { return Parser(in, source).run(); }

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'", 0, 0);
    return parse_config(in, path);
}

}  // namespace hopfavg
