#include "hppsim/treespec.hpp"

#include <cctype>
#include <stdexcept>

namespace hppsim {

namespace {

struct Parser {
    const std::string& text;
    size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    }

    bool consume(char c) {
        skip_ws();
        if (pos < text.size() && text[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }

    bool consume_word(const std::string& w) {
        skip_ws();
        if (text.compare(pos, w.size(), w) != 0) return false;
        const size_t end = pos + w.size();
        if (end < text.size() && std::isalpha(static_cast<unsigned char>(text[end]))) {
            return false;
        }
        pos = end;
        return true;
    }

    int parse_int() {
        skip_ws();
        size_t start = pos;
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
        if (pos == start) fail("expected an integer");
        return std::stoi(text.substr(start, pos - start));
    }

    [[noreturn]] void fail(const std::string& why) const {
        throw std::invalid_argument("tree spec: " + why + " at offset " + std::to_string(pos));
    }

    TreePtr parse_tree() {
        if (consume_word("twoperm")) {
            if (!consume('(')) fail("expected '(' after twoperm");
            const int n = parse_int();
            if (!consume(')')) fail("expected ')'");
            return make_two_perm_node(n);
        }
        NodeKind kind;
        if (consume_word("pair")) {
            kind = NodeKind::Pair;
        } else if (consume_word("triple")) {
            kind = NodeKind::Triple;
        } else {
            fail("expected 'pair', 'triple' or 'twoperm'");
        }
        const int slots = kind == NodeKind::Pair ? 2 : 3;
        std::vector<TreePtr> children(static_cast<size_t>(slots));
        if (consume('(')) {
            while (true) {
                if (!consume_word("slot")) fail("expected 'slot'");
                const int slot = parse_int();
                if (slot < 0 || slot >= slots) fail("slot index out of range");
                if (children[static_cast<size_t>(slot)]) fail("slot listed twice");
                if (!consume(':')) fail("expected ':' after slot index");
                children[static_cast<size_t>(slot)] = parse_tree();
                if (consume(')')) break;
                if (!consume(',')) fail("expected ',' or ')'");
            }
        }
        return kind == NodeKind::Pair ? make_pair_node(std::move(children))
                                      : make_triple_node(std::move(children));
    }
};

void format_node(const CompositionTree& node, std::string& out) {
    switch (node.kind) {
        case NodeKind::Pair: out += "pair"; break;
        case NodeKind::Triple: out += "triple"; break;
        case NodeKind::TwoPerm:
            out += "twoperm(" + std::to_string(node.two_perm_n) + ")";
            return;
    }
    bool any = false;
    for (int slot = 0; slot < node.slot_count(); ++slot) {
        const auto& child = node.children[static_cast<size_t>(slot)];
        if (!child) continue;
        out += any ? "," : "(";
        any = true;
        out += "slot" + std::to_string(slot) + ":";
        format_node(*child, out);
    }
    if (any) out += ")";
}

}  // namespace

TreePtr parse_tree_spec(const std::string& spec) {
    Parser p{spec};
    TreePtr tree = p.parse_tree();
    p.skip_ws();
    if (p.pos != spec.size()) p.fail("trailing characters");
    tree->validate();
    return tree;
}

std::string format_tree_spec(const CompositionTree& tree) {
    std::string out;
    format_node(tree, out);
    return out;
}

TreePtr balanced_pair_tree(int n) {
    if (n < 2) throw std::invalid_argument("balanced_pair_tree: need at least 2 leaves");
    if (n == 2) return make_pair_node();
    const int low = n / 2, high = n - low;
    std::vector<TreePtr> children(2);
    if (low > 1) children[0] = balanced_pair_tree(low);
    children[1] = balanced_pair_tree(high);
    return make_pair_node(std::move(children));
}

}  // namespace hppsim
