#include "gl2/registry.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "gl2/errors.hpp"

namespace gl2 {

namespace {

std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string::npos) return {};
    return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::string> tokens(const std::string& s) {
    std::istringstream is(s);
    std::vector<std::string> out;
    for (std::string t; is >> t;) out.push_back(t);
    return out;
}

// Calls f(line_number, content) for every non-blank line with comments removed.
template <class F>
void for_each_line(std::istream& in, F f) {
    std::string raw;
    std::size_t no = 0;
    while (std::getline(in, raw)) {
        ++no;
        auto hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::string s = trim(raw);
        if (!s.empty()) f(no, s);
    }
}

template <class T>
T parse_uint(const std::string& s, const char* what, std::size_t line) {
    T v{};
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
        throw ParseError(std::string("bad ") + what + " '" + s + "'", line);
    return v;
}

long parse_long(const std::string& s, std::size_t line) {
    long v{};
    const char* b = s.data();
    if (!s.empty() && s[0] == '+') ++b;
    auto [p, ec] = std::from_chars(b, s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || p != s.data() + s.size())
        throw ParseError("bad integer '" + s + "'", line);
    return v;
}

// Rethrows an argument-free ParseError with the line attached.
template <class F>
auto at_line(std::size_t line, F f) -> decltype(f()) {
    try {
        return f();
    } catch (const ParseError& e) {
        if (e.line()) throw;
        throw ParseError(e.what(), line);
    }
}

Point parse_point(const std::string& s, std::size_t line) {
    if (s.size() < 5 || s.front() != '(' || s.back() != ')') throw ParseError("bad point '" + s + "'", line);
    auto xy = split(s.substr(1, s.size() - 2), ',');
    if (xy.size() != 2) throw ParseError("bad point '" + s + "'", line);
    return at_line(line, [&] { return Point::affine(parse_rational(trim(xy[0])), parse_rational(trim(xy[1]))); });
}

// key=value tail tokens.
std::map<std::string, std::string> key_values(const std::vector<std::string>& toks, std::size_t from,
                                              std::size_t line) {
    std::map<std::string, std::string> kv;
    for (std::size_t i = from; i < toks.size(); ++i) {
        auto eq = toks[i].find('=');
        if (eq == std::string::npos || eq == 0) throw ParseError("expected key=value, got '" + toks[i] + "'", line);
        if (!kv.emplace(toks[i].substr(0, eq), toks[i].substr(eq + 1)).second)
            throw ParseError("repeated key '" + toks[i].substr(0, eq) + "'", line);
    }
    return kv;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open " + path);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

}  // namespace

// ------------------------------------------------------------------ groups

Subgroup GroupEntry::group() const {
    Subgroup h(modulus, generators);
    h.set_label(label);
    return h;
}

std::vector<GroupEntry> parse_group_file(std::istream& in) {
    std::vector<GroupEntry> out;
    std::set<std::string> seen;
    for_each_line(in, [&](std::size_t no, const std::string& s) {
        auto t = tokens(s);
        if (t.size() < 3) throw ParseError("expected '<label> <modulus> <generators>'", no);
        GroupEntry g;
        g.line = no;
        g.label = t[0];
        if (!seen.insert(g.label).second) throw ParseError("duplicate label " + g.label, no);
        if (!parse_group_label(g.label)) throw ParseError("malformed label " + g.label, no);
        g.modulus = parse_uint<std::uint32_t>(t[1], "modulus", no);
        if (g.modulus < 1 || g.modulus > kMaxModulus) throw ParseError("modulus out of range", no);
        for (const std::string& m : split(t[2], ';')) {
            if (m.empty()) throw ParseError("empty generator", no);
            g.generators.push_back(at_line(no, [&] { return parse_mat2(m, g.modulus); }));
        }
        auto kv = key_values(t, 3, no);
        for (auto& [k, v] : kv) {
            if (k != "source") throw ParseError("unknown key '" + k + "'", no);
            if (v != "published" && v != "transcribed") throw ParseError("unknown source '" + v + "'", no);
            g.source = v;
        }
        out.push_back(std::move(g));
    });
    return out;
}

// ------------------------------------------------------------------ curves

std::vector<Point> CurveEntry::free_generators() const {
    return {generators.begin(), generators.begin() + std::min<std::size_t>(rank, generators.size())};
}

std::vector<Point> CurveEntry::torsion_generators() const {
    if (generators.size() <= rank) return {};
    return {generators.begin() + rank, generators.end()};
}

std::vector<CurveEntry> parse_curve_file(std::istream& in) {
    std::vector<CurveEntry> out;
    std::set<std::string> seen;
    for_each_line(in, [&](std::size_t no, const std::string& s) {
        // The coefficient list may contain spaces; cut it out first.
        auto open = s.find('['), close = s.find(']');
        if (open == std::string::npos || close == std::string::npos || close < open)
            throw ParseError("expected '<label> [a1,a2,a3,a4,a6] ...'", no);
        std::string label = trim(s.substr(0, open));
        if (label.empty() || label.find_first_of(" \t") != std::string::npos)
            throw ParseError("bad curve label '" + label + "'", no);
        if (!seen.insert(label).second) throw ParseError("duplicate label " + label, no);
        auto coeffs = split(s.substr(open + 1, close - open - 1), ',');
        if (coeffs.size() != 5) throw ParseError("expected five coefficients", no);
        std::vector<Rational> a;
        for (auto& c : coeffs) a.push_back(at_line(no, [&] { return parse_rational(trim(c)); }));

        CurveEntry c;
        c.line = no;
        try {
            c.curve = EllipticCurve(a[0], a[1], a[2], a[3], a[4], label);
        } catch (const SingularCurve& e) {
            throw ParseError(e.what(), no);
        }
        auto kv = key_values(tokens(s.substr(close + 1)), 0, no);
        for (auto& [k, v] : kv) {
            if (k == "rank") {
                c.rank = parse_uint<unsigned>(v, "rank", no);
            } else if (k == "torsion") {
                if (v != "1")
                    for (auto& f : split(v, ',')) c.torsion.push_back(parse_uint<unsigned>(f, "torsion", no));
            } else if (k == "gens") {
                if (v == "-") continue;
                for (auto& p : split(v, ';')) c.generators.push_back(parse_point(p, no));
            } else {
                throw ParseError("unknown key '" + k + "'", no);
            }
        }
        if (!kv.count("rank") || !kv.count("torsion")) throw ParseError("rank= and torsion= are required", no);
        out.push_back(std::move(c));
    });
    return out;
}

// ------------------------------------------------------------------- facts

Facts parse_facts_file(std::istream& in) {
    Facts f;
    for_each_line(in, [&](std::size_t no, const std::string& s) {
        auto t = tokens(s);
        const std::string& kind = t[0];
        auto need = [&](std::size_t n) {
            if (t.size() < n) throw ParseError(kind + ": too few fields", no);
        };
        if (kind == "witness") {
            need(4);
            if (t.size() > 4) throw ParseError("witness: too many fields", no);
            f.witnesses.push_back({t[1], parse_uint<std::uint32_t>(t[2], "modulus", no), t[3], no});
        } else if (kind == "xh") {
            need(3);
            XhFact x{t[1], t[2], std::nullopt, no};
            auto kv = key_values(t, 3, no);
            for (auto& [k, v] : kv) {
                if (k != "rank") throw ParseError("unknown key '" + k + "'", no);
                x.rank = parse_uint<unsigned>(v, "rank", no);
            }
            f.xh.push_back(x);
        } else if (kind == "curious") {
            need(2);
            std::string note;
            for (std::size_t i = 2; i < t.size(); ++i) note += (i > 2 ? " " : "") + t[i];
            f.curious.push_back({t[1], note, no});
        } else if (kind == "equiv") {
            need(3);
            if (t.size() > 3) throw ParseError("equiv: too many fields", no);
            f.equiv.push_back({t[1], t[2], no});
        } else if (kind == "isogeny") {
            need(6);
            IsogenyFact g;
            g.line = no;
            g.domain = t[1];
            g.codomain = t[2];
            auto kv = key_values(t, 3, no);
            for (const char* k : {"kernel", "point", "expect"})
                if (!kv.count(k)) throw ParseError(std::string("isogeny: missing ") + k + "=", no);
            if (kv.size() != 3) throw ParseError("isogeny: unexpected keys", no);
            g.kernel = parse_point(kv["kernel"], no);
            g.point = parse_point(kv["point"], no);
            for (auto& c : split(kv["expect"], ',')) g.expect.push_back(parse_long(c, no));
            f.isogenies.push_back(g);
        } else {
            throw ParseError("unknown fact kind '" + kind + "'", no);
        }
    });
    return f;
}

// -------------------------------------------------------------- registries

RegistryPaths RegistryPaths::defaults() {
    std::string d = GL2_DATA_DIR;
    return {d + "/groups.txt", d + "/curves.txt", d + "/witnesses.txt"};
}

void Registries::index() {
    group_index_.clear();
    curve_index_.clear();
    for (std::size_t i = 0; i < groups.size(); ++i) group_index_[groups[i].label] = i;
    for (std::size_t i = 0; i < curves.size(); ++i) curve_index_[curves[i].label()] = i;
}

const GroupEntry* Registries::find_group(const std::string& label) const {
    auto it = group_index_.find(label);
    return it == group_index_.end() ? nullptr : &groups[it->second];
}

const CurveEntry* Registries::find_curve(const std::string& label) const {
    auto it = curve_index_.find(label);
    return it == curve_index_.end() ? nullptr : &curves[it->second];
}

const GroupEntry& Registries::group(const std::string& label) const {
    if (auto g = find_group(label)) return *g;
    throw ValidationError("unknown group label " + label);
}

const CurveEntry& Registries::curve(const std::string& label) const {
    if (auto c = find_curve(label)) return *c;
    throw ValidationError("unknown curve label " + label);
}

std::vector<std::string> Registries::split_ref(const std::string& ref) { return split(ref, '*'); }

Subgroup Registries::resolve(const std::string& ref) const {
    auto parts = split_ref(ref);
    Subgroup h = group(parts[0]).group();
    for (std::size_t i = 1; i < parts.size(); ++i) h = product_group(h, group(parts[i]).group());
    return h;
}

namespace {

void validate_curve(const CurveEntry& c) {
    auto fail = [&](const std::string& why) {
        throw ValidationError("curve " + c.label() + " (line " + std::to_string(c.line) + "): " + why);
    };
    if (!mazur_validate(c.torsion)) fail("torsion structure violates Mazur's bound");
    if (c.generators.size() != c.rank + c.torsion.size())
        fail("expected " + std::to_string(c.rank + c.torsion.size()) + " generators");
    for (const Point& p : c.generators)
        if (!on_curve(c.curve, p)) fail(p.str() + " is not on the curve");
    for (const Point& p : c.free_generators())
        if (torsion_order(c.curve, p) != 0) fail(p.str() + " is torsion but listed as a free generator");
    TorsionInfo t = torsion_subgroup(c.curve);
    if (t.structure != c.torsion) fail("torsion is " + t.str() + ", registry says otherwise");
    auto tg = c.torsion_generators();
    for (std::size_t i = 0; i < tg.size(); ++i)
        if (torsion_order(c.curve, tg[i]) != c.torsion[i])
            fail(tg[i].str() + " does not have order " + std::to_string(c.torsion[i]));
    if (tg.size() == 2) {
        // Independence: the two generators must span the whole group.
        std::set<std::string> span;
        for (unsigned a = 0; a < c.torsion[0]; ++a)
            for (unsigned b = 0; b < c.torsion[1]; ++b)
                span.insert(add(c.curve, scalar_mul(c.curve, a, tg[0]), scalar_mul(c.curve, b, tg[1])).str());
        if (span.size() != std::size_t(c.torsion[0]) * c.torsion[1]) fail("torsion generators are dependent");
    }
}

void validate_ref(const Registries& r, const std::string& ref, std::size_t line) {
    for (const std::string& part : Registries::split_ref(ref))
        if (!r.find_group(part))
            throw ValidationError("facts line " + std::to_string(line) + ": unknown group " + part);
}

void validate(Registries& r, Validation v) {
    for (const GroupEntry& g : r.groups)
        for (const Mat2& m : g.generators)
            if (!is_invertible(m))
                throw ValidationError("group " + g.label + " (line " + std::to_string(g.line) +
                                      "): generator " + m.str() + " is not invertible");
    for (const CurveEntry& c : r.curves) validate_curve(c);
    const Facts& f = r.facts;
    for (auto& w : f.witnesses) validate_ref(r, w.group, w.line);
    for (auto& x : f.xh) validate_ref(r, x.group, x.line);
    for (auto& c : f.curious) validate_ref(r, c.group, c.line);
    for (auto& e : f.equiv) {
        validate_ref(r, e.group, e.line);
        validate_ref(r, e.target, e.line);
    }
    for (auto& i : f.isogenies)
        for (const std::string& c : {i.domain, i.codomain})
            if (!r.find_curve(c))
                throw ValidationError("facts line " + std::to_string(i.line) + ": unknown curve " + c);
    if (v == Validation::Full) {
        std::string bad;
        for (const LabelReport& rep : check_labels(r))
            if (!rep.pass) bad += "\n  " + rep.line();
        if (!bad.empty()) throw ValidationError("label check failed:" + bad);
    }
}

}  // namespace

Registries load_registries_from_text(const std::string& groups, const std::string& curves,
                                     const std::string& facts, Validation v) {
    Registries r;
    std::istringstream g(groups), c(curves), f(facts);
    r.groups = parse_group_file(g);
    r.curves = parse_curve_file(c);
    r.facts = parse_facts_file(f);
    r.index();
    validate(r, v);
    return r;
}

Registries load_registries(const RegistryPaths& paths, Validation v) {
    auto with_name = [](const std::string& path, auto parse) {
        try {
            return parse();
        } catch (const ParseError& e) {
            throw ParseError(path + ": " + e.what(), 0);
        }
    };
    std::string gt = read_file(paths.groups), ct = read_file(paths.curves), ft = read_file(paths.facts);
    Registries r;
    std::istringstream g(gt), c(ct), f(ft);
    r.groups = with_name(paths.groups, [&] { return parse_group_file(g); });
    r.curves = with_name(paths.curves, [&] { return parse_curve_file(c); });
    r.facts = with_name(paths.facts, [&] { return parse_facts_file(f); });
    r.index();
    validate(r, v);
    return r;
}

std::vector<LabelReport> check_labels(const Registries& r) {
    std::vector<LabelReport> out;
    for (const GroupEntry& g : r.groups) {
        LabelReport rep;
        try {
            rep = label_check(g.label, g.group());
        } catch (const Error& e) {
            rep.label = g.label;
            rep.note = e.what();
        }
        out.push_back(rep);
    }
    return out;
}

// ---------------------------------------------------------------- isogenies

std::string IsogenyCheck::line() const {
    std::ostringstream os;
    os << domain << " -> " << codomain << " status=" << (pass ? "PASS" : "FAIL");
    if (!found.empty()) {
        os << " image=" << (negated ? "-(" : "(");
        for (std::size_t i = 0; i < found.size(); ++i) os << (i ? "," : "") << found[i];
        os << ')';
    }
    if (!note.empty()) os << " (" << note << ")";
    return os.str();
}

std::vector<IsogenyCheck> verify_isogeny_facts(const Registries& r) {
    std::vector<IsogenyCheck> out;
    for (const IsogenyFact& f : r.facts.isogenies) {
        IsogenyCheck chk;
        chk.domain = f.domain;
        chk.codomain = f.codomain;
        try {
            const CurveEntry& dom = r.curve(f.domain);
            const CurveEntry& cod = r.curve(f.codomain);
            if (cod.rank > 1) throw BasisMismatch("codomain rank above 1");
            ShortModel ds = short_model(dom.curve);
            ShortModel cs = short_model(cod.curve);
            Isogeny2 phi = two_isogeny(ds.curve, ds.to_short(f.kernel));
            auto match = minimal_scaling_match(phi.codomain, cs.curve);
            if (!match) throw ValidationError("isogenous curve is not isomorphic to " + f.codomain);
            Point image = match->apply(phi(ds.to_short(f.point)));
            Point g = cod.rank ? cs.to_short(cod.generators[0]) : Point::at_infinity();
            std::vector<Point> tors;
            for (const Point& t : cod.torsion_generators()) tors.push_back(cs.to_short(t));
            const long bound = 64;
            auto d = mw_decompose(cs.curve, image, g, tors, bound);
            if (!d) throw BoundExceeded("image not in the span of the registered basis up to |A| <= 64");
            if (!cod.rank) d->front() = 0;
            chk.found = *d;
            chk.pass = *d == f.expect;
            if (!chk.pass) {
                auto dn = mw_decompose(cs.curve, neg(cs.curve, image), g, tors, bound);
                if (dn && !cod.rank) dn->front() = 0;
                if (dn && *dn == f.expect) {
                    chk.pass = chk.negated = true;
                    chk.found = *dn;
                }
            }
            if (match->u != 1) chk.note = "rescaled by u=" + match->u.get_str();
        } catch (const Error& e) {
            chk.note = e.what();
        }
        out.push_back(chk);
    }
    return out;
}

}  // namespace gl2
