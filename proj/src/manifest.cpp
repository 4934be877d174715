#include "adiclab/manifest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "adiclab/errors.hpp"

namespace adiclab {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

[[noreturn]] void fail(std::size_t line, const std::string& what)
{
    throw ConfigError("line " + std::to_string(line) + ": " + what);
}

bool is_name(std::string_view s)
{
    if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
    return std::all_of(s.begin(), s.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

template <class T, class Fn>
T at_line(std::size_t line, Fn fn)
{
    try {
        return fn();
    } catch (const ExprError& ex) {
        fail(line, ex.what());
    }
}

std::vector<ManifestVar> parse_vars(std::string_view text, std::size_t line)
{
    std::vector<ManifestVar> vars;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t comma = text.find(',', start);
        const std::string_view item = trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start));
        const std::size_t eq = item.find('=');
        const std::size_t dots = item.find("..");
        if (eq == std::string_view::npos || dots == std::string_view::npos || dots < eq)
            fail(line, "expected v=lo..hi in forall, got '" + std::string(item) + "'");
        ManifestVar v;
        v.name = std::string(trim(item.substr(0, eq)));
        if (!is_name(v.name)) fail(line, "bad variable name '" + v.name + "'");
        if (v.name == "s" || v.name == "N") fail(line, "'" + v.name + "' is reserved");
        for (const auto& other : vars)
            if (other.name == v.name) fail(line, "variable '" + v.name + "' bound twice");
        v.lo = at_line<PExpr>(line, [&] { return parse_param(trim(item.substr(eq + 1, dots - eq - 1))); });
        v.hi = at_line<PExpr>(line, [&] { return parse_param(trim(item.substr(dots + 2))); });
        vars.push_back(std::move(v));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return vars;
}

void parse_relation(std::string_view body, std::string_view comment, std::size_t line, Manifest& m)
{
    ManifestLine out;
    out.line = line;
    out.text = std::string(body);
    if (body.substr(0, 7) == "forall ") {
        const std::size_t colon = body.find(':');
        if (colon == std::string_view::npos) fail(line, "forall without ':'");
        out.vars = parse_vars(body.substr(7, colon - 7), line);
        body = trim(body.substr(colon + 1));
    }
    const std::size_t eq = body.find("==");
    const std::size_t ne = body.find("!=");
    if ((eq == std::string_view::npos) == (ne == std::string_view::npos))
        fail(line, "expected exactly one of '==' or '!='");
    const std::size_t op = eq != std::string_view::npos ? eq : ne;
    if (body.find("==", op + 2) != std::string_view::npos || body.find("!=", op + 2) != std::string_view::npos)
        fail(line, "more than one relation operator");
    out.expect_equal = eq != std::string_view::npos;
    out.lhs = at_line<OpExpr>(line, [&] { return parse(trim(body.substr(0, op))); });
    out.rhs = at_line<OpExpr>(line, [&] { return parse(trim(body.substr(op + 2))); });

    comment = trim(comment);
    if (comment.empty() || comment.front() != '[') fail(line, "relation lines need a '# [family.id]' comment");
    const std::size_t close = comment.find(']');
    if (close == std::string_view::npos) fail(line, "unterminated family id");
    out.family = std::string(trim(comment.substr(1, close - 1)));
    if (out.family.empty()) fail(line, "empty family id");
    out.description = std::string(trim(comment.substr(close + 1)));
    m.lines.push_back(std::move(out));
}

void parse_let(std::string_view body, std::size_t line, Manifest& m)
{
    body = trim(body.substr(4));
    const std::size_t eq = body.find('=');
    if (eq == std::string_view::npos || body.empty() || body.front() != '$') fail(line, "expected 'let $name = expr'");
    const std::string name(trim(body.substr(1, eq - 1)));
    if (!is_name(name)) fail(line, "bad definition name '$" + name + "'");
    if (m.lets.count(name) != 0) fail(line, "'$" + name + "' defined twice");
    m.lets.emplace(name, at_line<OpExpr>(line, [&] { return parse(trim(body.substr(eq + 1))); }));
}

std::string binding_text(const EvalContext& ctx, const std::vector<ManifestVar>& vars, bool random)
{
    std::string out;
    if (random) out = "r=" + std::to_string(ctx.r);
    for (const auto& v : vars) {
        if (!out.empty()) out += ',';
        out += v.name + "=" + std::to_string(ctx.vars.at(v.name));
    }
    return out.empty() ? "-" : out;
}

class LineRun {
public:
    LineRun(const ManifestLine& line, const Manifest& m, const CatalogConfig& cfg, const RandomData& data)
        : line_(line)
    {
        ctx_.s = cfg.s;
        ctx_.N = cfg.depth;
        ctx_.lets = m.lets;
        ctx_.lc = data.lc;
        ctx_.trees = data.trees;
        std::vector<std::string> rv;
        collect_random_vars(line.lhs, rv, &m.lets);
        collect_random_vars(line.rhs, rv, &m.lets);
        random_ = !rv.empty();
        samples_ = random_ ? cfg.samples : 1;

        res_.id = line.family;
        res_.description = line.description;
        res_.line = line.line;
        res_.expect_equal = line.expect_equal;
        res_.passed = line.expect_equal;
    }

    RelationResult run()
    {
        try {
            for (std::size_t r = 0; r < samples_ && open(); ++r) {
                ctx_.r = r;
                bind(0);
            }
        } catch (const std::exception& ex) {
            res_.passed = false;
            res_.error = ex.what();
        }
        return res_;
    }

private:
    bool open() const { return res_.expect_equal ? res_.passed : !res_.passed; }

    void bind(std::size_t k)
    {
        if (!open()) return;
        if (k == line_.vars.size()) {
            check_once();
            return;
        }
        const ManifestVar& v = line_.vars[k];
        const std::int64_t lo = eval_param(v.lo, ctx_);
        const std::int64_t hi = eval_param(v.hi, ctx_);
        for (std::int64_t i = lo; i <= hi && open(); ++i) {
            ctx_.vars[v.name] = i;
            bind(k + 1);
        }
        ctx_.vars.erase(v.name);
    }

    void check_once()
    {
        ++res_.bindings;
        const CheckReport rep = check(line_.lhs, line_.rhs, ctx_);
        res_.window = res_.window < 0 ? rep.window : std::min(res_.window, rep.window);
        if (rep.equal) return;
        const auto& d = *rep.first_discrepancy;
        res_.witness = Witness{d.row.str(), d.col.str(), d.lhs.str(), d.rhs.str(), binding_text(ctx_, line_.vars, random_)};
        res_.passed = !line_.expect_equal;
    }

    const ManifestLine& line_;
    EvalContext ctx_;
    bool random_ = false;
    std::size_t samples_ = 1;
    RelationResult res_;
};

}  // namespace

Manifest parse_manifest(std::string_view text)
{
    Manifest m;
    std::size_t line = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string_view::npos) end = text.size();
        ++line;
        std::string_view raw = text.substr(start, end - start);
        start = end + 1;
        const std::size_t hash = raw.find('#');
        const std::string_view body = trim(raw.substr(0, hash));
        const std::string_view comment = hash == std::string_view::npos ? std::string_view{} : raw.substr(hash + 1);
        if (body.empty()) continue;
        if (body.substr(0, 4) == "let ")
            parse_let(body, line, m);
        else
            parse_relation(body, comment, line, m);
    }
    return m;
}

Manifest load_manifest(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open manifest '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_manifest(ss.str());
}

std::vector<RelationResult> run_manifest(const Manifest& m, const CatalogConfig& cfg)
{
    if (cfg.s < 2) throw ConfigError("s must be >= 2");
    if (cfg.depth < 2) throw ConfigError("depth must be >= 2");
    const RandomData data = make_random_data(cfg.s, cfg.depth, cfg.seed, cfg.samples);
    std::vector<RelationResult> out(m.lines.size());
    const auto n = static_cast<std::int64_t>(m.lines.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < n; ++i) out[i] = LineRun(m.lines[i], m, cfg, data).run();
    return out;
}

std::map<std::string, bool> family_verdicts(const std::vector<RelationResult>& results)
{
    std::map<std::string, bool> out;
    for (const auto& r : results) {
        auto [it, fresh] = out.emplace(r.id, r.passed);
        if (!fresh) it->second = it->second && r.passed;
    }
    return out;
}

}  // namespace adiclab
