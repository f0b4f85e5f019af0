#include "axt/netlist_io.hpp"

#include "axt/errors.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <vector>

namespace axt {

namespace {

std::vector<std::string_view> split_ws(std::string_view line)
{
    std::vector<std::string_view> toks;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        if (j > i) toks.push_back(line.substr(i, j - i));
        i = j;
    }
    return toks;
}

int parse_int(std::string_view tok, std::size_t line)
{
    int v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size())
        throw SyntaxError(line, "expected integer, got '" + std::string(tok) + "'");
    return v;
}

}  // namespace

Netlist parse_netlist(std::string_view text)
{
    NetlistBuilder b;
    struct PendingTag {
        std::size_t line;
        std::string gate;
        std::string tag;
    };
    std::vector<PendingTag> tags;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
        auto t = split_ws(line);
        if (t.empty()) continue;

        const auto& kw = t[0];
        if (kw == "input" || kw == "output") {
            if (t.size() != 2) throw SyntaxError(line_no, std::string(kw) + " takes exactly one net name");
            if (kw == "input")
                b.add_input(t[1]);
            else
                b.add_output(b.net(t[1]));
        } else if (kw == "word") {
            if (t.size() < 3) throw SyntaxError(line_no, "word needs a name and at least one bit");
            std::vector<NetId> bits;
            for (std::size_t i = 2; i < t.size(); ++i) bits.push_back(b.net(t[i]));
            b.add_word(std::string(t[1]), std::move(bits));
        } else if (kw == "gate") {
            if (t.size() < 4) throw SyntaxError(line_no, "gate needs an id, a kind and an output net");
            auto kind = parse_gate_kind(t[2]);
            if (!kind) throw SyntaxError(line_no, "unknown gate kind '" + std::string(t[2]) + "'");
            if (!arity_ok(*kind, t.size() - 4))
                throw SyntaxError(line_no, "wrong number of inputs for " + std::string(t[2]));
            if (b.find_gate(t[1])) throw SyntaxError(line_no, "duplicate gate id '" + std::string(t[1]) + "'");
            NetId out = b.net(t[3]);
            std::vector<NetId> ins;
            for (std::size_t i = 4; i < t.size(); ++i) ins.push_back(b.net(t[i]));
            b.add_gate(*kind, std::move(ins), out, {}, std::string(t[1]));
        } else if (kw == "tag") {
            if (t.size() != 3) throw SyntaxError(line_no, "tag takes a gate id and an instance tag");
            tags.push_back({line_no, std::string(t[1]), std::string(t[2])});
        } else if (kw == "inst") {
            if (t.size() != 5) throw SyntaxError(line_no, "inst takes a tag, a kind, an op type and an arch id");
            InstanceInfo info;
            if (t[2] == "approximate")
                info.kind = InstanceKind::Approximate;
            else if (t[2] == "deterministic")
                info.kind = InstanceKind::Deterministic;
            else
                throw SyntaxError(line_no, "instance kind must be approximate or deterministic");
            info.op_type = parse_int(t[3], line_no);
            info.arch_id = parse_int(t[4], line_no);
            b.add_instance(std::string(t[1]), info);
        } else {
            throw SyntaxError(line_no, "unknown statement '" + std::string(kw) + "'");
        }
    }
    for (const auto& pt : tags) {
        auto g = b.find_gate(pt.gate);
        if (!g) throw SyntaxError(pt.line, "tag refers to unknown gate '" + pt.gate + "'");
        b.set_tag(*g, pt.tag);
    }
    return b.build();
}

std::string serialize_netlist(const Netlist& n)
{
    std::ostringstream os;
    for (NetId i : n.primary_inputs()) os << "input " << n.net_name(i) << '\n';
    for (NetId o : n.primary_outputs()) os << "output " << n.net_name(o) << '\n';
    for (const auto& w : n.words()) {
        os << "word " << w.name;
        for (NetId bit : w.bits) os << ' ' << n.net_name(bit);
        os << '\n';
    }
    for (const auto& g : n.gates()) {
        os << "gate " << g.name << ' ' << to_string(g.kind) << ' ' << n.net_name(g.output);
        for (NetId in : g.inputs) os << ' ' << n.net_name(in);
        os << '\n';
    }
    for (const auto& g : n.gates())
        if (!g.tag.empty()) os << "tag " << g.name << ' ' << g.tag << '\n';
    for (const auto& [tag, info] : n.instances())
        os << "inst " << tag << ' ' << to_string(info.kind) << ' ' << info.op_type << ' ' << info.arch_id << '\n';
    return os.str();
}

Netlist read_netlist_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error("cannot open netlist '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_netlist(ss.str());
}

void write_netlist_file(const std::string& path, const Netlist& netlist)
{
    std::ofstream out(path);
    if (!out) throw Error("cannot write netlist '" + path + "'");
    out << serialize_netlist(netlist);
}

}  // namespace axt
