#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "gpe/arith.hpp"
#include "gpe/geometry.hpp"
#include "gpe/holomap.hpp"

namespace gpe {

// Signature files:
//   blocks = [2, 2]
//   exponents = [4]          # alpha_N = 1 implied
// Map files carry both signatures (source_/target_ prefixes) plus one line
// per monomial:
//   term F 1 0 1 1 0 0 0
//   term G1.2 1 0 2 0 1 1 0
// i.e. term <component> <re> <im> <radicand> <z_deg> <w exponents...>,
// rationals written as n or n/d.

namespace detail {

inline std::string strip(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline std::string drop_comment(const std::string& s) {
    const auto h = s.find('#');
    return h == std::string::npos ? s : s.substr(0, h);
}

inline Rational parse_rational(const std::string& tok, int line) {
    try {
        const auto slash = tok.find('/');
        if (slash == std::string::npos) return Rational(BigInt(tok));
        return make_rational(BigInt(tok.substr(0, slash)), BigInt(tok.substr(slash + 1)));
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception&) {
        throw ParseError(line, "malformed rational '" + tok + "'");
    }
}

inline std::vector<int> parse_int_list(const std::string& value, int line) {
    std::string body = strip(value);
    if (body.size() < 2 || body.front() != '[' || body.back() != ']')
        throw ParseError(line, "expected a [a, b, ...] list");
    body = body.substr(1, body.size() - 2);
    std::vector<int> out;
    std::string item;
    std::istringstream is(body);
    while (std::getline(is, item, ',')) {
        item = strip(item);
        if (item.empty()) throw ParseError(line, "empty list entry");
        try {
            out.push_back(std::stoi(item));
        } catch (const std::exception&) {
            throw ParseError(line, "malformed integer '" + item + "'");
        }
    }
    return out;
}

struct KeyValues {
    std::vector<std::pair<std::string, std::string>> pairs;
    std::vector<std::pair<int, std::string>> terms; // line, remainder

    [[nodiscard]] const std::string* find(const std::string& key) const {
        for (const auto& [k, v] : pairs)
            if (k == key) return &v;
        return nullptr;
    }
    std::vector<std::pair<std::string, int>> key_lines;
    [[nodiscard]] int line_of(const std::string& key) const {
        for (const auto& [k, l] : key_lines)
            if (k == key) return l;
        return 0;
    }
};

inline KeyValues scan_lines(const std::string& text) {
    KeyValues kv;
    std::istringstream is(text);
    std::string raw;
    int line = 0;
    while (std::getline(is, raw)) {
        ++line;
        const std::string s = strip(drop_comment(raw));
        if (s.empty()) continue;
        if (s.rfind("term", 0) == 0 && (s.size() == 4 || s[4] == ' ' || s[4] == '\t')) {
            kv.terms.emplace_back(line, strip(s.substr(4)));
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos)
            throw ParseError(line, "expected 'key = value' or 'term ...'");
        kv.pairs.emplace_back(strip(s.substr(0, eq)), strip(s.substr(eq + 1)));
        kv.key_lines.emplace_back(strip(s.substr(0, eq)), line);
    }
    return kv;
}

inline BlockSignature signature_from(const KeyValues& kv, const std::string& prefix) {
    const std::string bkey = prefix + "blocks", ekey = prefix + "exponents";
    const std::string* blocks = kv.find(bkey);
    if (!blocks) throw ParseError(0, "missing field '" + bkey + "'");
    const std::string* exps = kv.find(ekey);
    if (!exps) throw ParseError(0, "missing field '" + ekey + "'");
    try {
        return {parse_int_list(*blocks, kv.line_of(bkey)),
                parse_int_list(*exps, kv.line_of(ekey))};
    } catch (const ParseError&) {
        throw;
    } catch (const std::exception& e) {
        throw ParseError(kv.line_of(bkey), std::string("invalid signature: ") + e.what());
    }
}

} // namespace detail

inline BlockSignature parse_signature(const std::string& text) {
    return detail::signature_from(detail::scan_lines(text), "");
}

inline std::string serialize_signature(const BlockSignature& sig) {
    std::ostringstream os;
    os << "blocks = [";
    for (int j = 0; j < sig.blocks(); ++j) os << (j ? ", " : "") << sig.block_dim(j);
    os << "]\nexponents = [";
    for (int j = 0; j + 1 < sig.blocks(); ++j) os << (j ? ", " : "") << sig.exponent(j);
    os << "]\n";
    return os.str();
}

inline std::string rational_token(const Rational& q) {
    return to_string(q);
}

inline std::string serialize_map(const PolyMap& m) {
    std::ostringstream os;
    auto sig_block = [&](const BlockSignature& sig, const std::string& prefix) {
        os << prefix << "blocks = [";
        for (int j = 0; j < sig.blocks(); ++j) os << (j ? ", " : "") << sig.block_dim(j);
        os << "]\n" << prefix << "exponents = [";
        for (int j = 0; j + 1 < sig.blocks(); ++j) os << (j ? ", " : "") << sig.exponent(j);
        os << "]\n";
    };
    sig_block(m.source, "source_");
    sig_block(m.target, "target_");
    auto emit_poly = [&](const std::string& target, const Poly& p) {
        for (const auto& mono : p) {
            if (!mono.coeff.is_exact)
                throw std::invalid_argument("serialize_map: non-exact coefficient");
            os << "term " << target << " " << rational_token(mono.coeff.exact.q.re) << " "
               << rational_token(mono.coeff.exact.q.im) << " "
               << rational_token(mono.coeff.exact.radicand) << " " << mono.z_deg;
            for (unsigned e : mono.w_exp) os << " " << e;
            os << "\n";
        }
    };
    emit_poly("F", m.F);
    for (std::size_t j = 0; j < m.G.size(); ++j)
        for (std::size_t mu = 0; mu < m.G[j].size(); ++mu)
            emit_poly("G" + std::to_string(j + 1) + "." + std::to_string(mu + 1), m.G[j][mu]);
    return os.str();
}

inline PolyMap parse_map(const std::string& text) {
    const auto kv = detail::scan_lines(text);
    PolyMap m{detail::signature_from(kv, "source_"), detail::signature_from(kv, "target_"),
              {}, {}};
    m.G.resize(static_cast<std::size_t>(m.target.blocks()));
    for (int j = 0; j < m.target.blocks(); ++j)
        m.G[static_cast<std::size_t>(j)].resize(
            static_cast<std::size_t>(m.target.block_dim(j)));
    const auto nvars = static_cast<std::size_t>(m.source.total_dim());
    for (const auto& [line, rest] : kv.terms) {
        std::istringstream is(rest);
        std::string target, re, im, rad;
        if (!(is >> target >> re >> im >> rad))
            throw ParseError(line, "term needs <component> <re> <im> <radicand> ...");
        PolyMonomial mono;
        const Rational radicand = detail::parse_rational(rad, line);
        if (radicand < 0) throw ParseError(line, "negative radicand");
        mono.coeff = PolyCoeff(SurdScalar(
            GaussianRational(detail::parse_rational(re, line), detail::parse_rational(im, line)),
            radicand));
        long long zd = -1;
        if (!(is >> zd) || zd < 0) throw ParseError(line, "missing or negative z degree");
        mono.z_deg = static_cast<unsigned>(zd);
        mono.w_exp.reserve(nvars);
        long long e = 0;
        while (is >> e) {
            if (e < 0) throw ParseError(line, "negative exponent");
            mono.w_exp.push_back(static_cast<unsigned>(e));
        }
        if (mono.w_exp.size() != nvars)
            throw ParseError(line, "expected " + std::to_string(nvars) + " w exponents, got " +
                                       std::to_string(mono.w_exp.size()));
        if (target == "F") {
            m.F.push_back(std::move(mono));
            continue;
        }
        if (target.size() < 4 || target[0] != 'G')
            throw ParseError(line, "component must be F or G<j>.<mu>");
        const auto dot = target.find('.');
        if (dot == std::string::npos) throw ParseError(line, "component must be G<j>.<mu>");
        int j = 0, mu = 0;
        try {
            j = std::stoi(target.substr(1, dot - 1));
            mu = std::stoi(target.substr(dot + 1));
        } catch (const std::exception&) {
            throw ParseError(line, "malformed component '" + target + "'");
        }
        if (j < 1 || j > m.target.blocks() || mu < 1 || mu > m.target.block_dim(j - 1))
            throw ParseError(line, "component index out of range '" + target + "'");
        m.G[static_cast<std::size_t>(j - 1)][static_cast<std::size_t>(mu - 1)].push_back(
            std::move(mono));
    }
    return m;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write '" + path + "'");
    out << content;
}

inline BlockSignature load_signature_file(const std::string& path) {
    return parse_signature(read_file(path));
}

inline PolyMap load_map_file(const std::string& path) { return parse_map(read_file(path)); }

} // namespace gpe
