// Copyright 2026 The qstream Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// OpenQASM subset reader and writer.
//
// Accepted statements:
//   OPENQASM <version>;  include "...";  qubit[n] name;  qreg name[n];
//   bit[n] c; creg c[n];  (ignored)
//   <gate> q[i], q[j], ...;  rz(<expr>) q[i];  measure q[i];  c[i] = measure q[i];
// Expressions are numbers, pi, + - * / and parentheses.

#include <cctype>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>

#include "qstream/circuit.h"
#include "qstream/decomp_table.h"
#include "qstream/errors.h"

namespace qstream {

namespace {

struct Lexer {
    std::string_view text;
    size_t pos = 0;
    size_t line = 1;
    size_t col = 1;

    void advance() {
        if (text[pos] == '\n') {
            line++;
            col = 1;
        } else {
            col++;
        }
        pos++;
    }

    void skip_space() {
        while (pos < text.size()) {
            char c = text[pos];
            if (std::isspace((unsigned char)c)) {
                advance();
            } else if (c == '/' && pos + 1 < text.size() && text[pos + 1] == '/') {
                while (pos < text.size() && text[pos] != '\n') {
                    advance();
                }
            } else if (c == '/' && pos + 1 < text.size() && text[pos + 1] == '*') {
                advance();
                advance();
                while (pos + 1 < text.size() && !(text[pos] == '*' && text[pos + 1] == '/')) {
                    advance();
                }
                if (pos + 1 >= text.size()) {
                    throw ParseError("unterminated comment", line, col);
                }
                advance();
                advance();
            } else {
                break;
            }
        }
    }

    bool at_end() {
        skip_space();
        return pos >= text.size();
    }

    [[noreturn]] void fail(const std::string &msg) {
        throw ParseError(msg, line, col);
    }

    char peek() {
        skip_space();
        return pos < text.size() ? text[pos] : '\0';
    }

    bool accept(char c) {
        if (peek() == c) {
            advance();
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) {
            char got = peek();
            fail(std::string("expected '") + c + "' but found " + (got ? std::string("'") + got + "'" : "end of input"));
        }
    }

    std::string ident() {
        skip_space();
        size_t start = pos;
        if (pos >= text.size() || !(std::isalpha((unsigned char)text[pos]) || text[pos] == '_')) {
            fail("expected identifier");
        }
        while (pos < text.size() && (std::isalnum((unsigned char)text[pos]) || text[pos] == '_')) {
            advance();
        }
        return std::string(text.substr(start, pos - start));
    }

    uint64_t integer() {
        skip_space();
        size_t start = pos;
        while (pos < text.size() && std::isdigit((unsigned char)text[pos])) {
            advance();
        }
        if (start == pos) {
            fail("expected integer");
        }
        std::string digits(text.substr(start, pos - start));
        if (digits.size() > 9) {
            fail("integer too large");
        }
        return std::stoull(digits);
    }

    double number() {
        skip_space();
        size_t start = pos;
        while (pos < text.size() &&
               (std::isdigit((unsigned char)text[pos]) || text[pos] == '.' || text[pos] == 'e' || text[pos] == 'E' ||
                ((text[pos] == '+' || text[pos] == '-') && pos > start &&
                 (text[pos - 1] == 'e' || text[pos - 1] == 'E')))) {
            advance();
        }
        std::string s(text.substr(start, pos - start));
        try {
            size_t used = 0;
            double v = std::stod(s, &used);
            if (used != s.size()) {
                throw std::invalid_argument(s);
            }
            return v;
        } catch (const std::exception &) {
            fail("bad number '" + s + "'");
        }
    }

    void skip_until_semicolon() {
        while (pos < text.size() && text[pos] != ';') {
            advance();
        }
        expect(';');
    }

    // expr := term (('+'|'-') term)*
    double expr() {
        double v = term();
        while (true) {
            if (accept('+')) {
                v += term();
            } else if (accept('-')) {
                v -= term();
            } else {
                return v;
            }
        }
    }
    double term() {
        double v = unary();
        while (true) {
            if (accept('*')) {
                v *= unary();
            } else if (peek() == '/' ) {
                advance();
                v /= unary();
            } else {
                return v;
            }
        }
    }
    double unary() {
        if (accept('-')) {
            return -unary();
        }
        if (accept('+')) {
            return unary();
        }
        if (accept('(')) {
            double v = expr();
            expect(')');
            return v;
        }
        char c = peek();
        if (std::isalpha((unsigned char)c)) {
            std::string id = ident();
            if (id == "pi" || id == "PI") {
                return std::numbers::pi;
            }
            fail("unknown identifier '" + id + "' in expression");
        }
        return number();
    }
};

}  // namespace

CircuitDag parse_qasm(std::string_view text, DecompositionTable *table) {
    DecompositionTable &tab = table ? *table : DecompositionTable::global();
    Lexer lx{text};
    std::optional<CircuitDag> dag;
    std::string reg;
    std::vector<std::string> classical;

    auto qubit_ref = [&]() -> uint32_t {
        size_t line = lx.line, col = lx.col;
        std::string name = lx.ident();
        if (!dag) {
            throw ParseError("gate before qubit declaration", line, col);
        }
        if (name != reg) {
            throw ParseError("unknown register '" + name + "'", line, col);
        }
        lx.expect('[');
        size_t iline = lx.line, icol = lx.col;
        uint64_t idx = lx.integer();
        lx.expect(']');
        if (idx >= dag->num_qubits()) {
            throw ParseError(
                "qubit index " + std::to_string(idx) + " out of range for " + reg + "[" +
                    std::to_string(dag->num_qubits()) + "]",
                iline, icol);
        }
        return (uint32_t)idx;
    };

    while (!lx.at_end()) {
        size_t line = lx.line, col = lx.col;
        std::string word = lx.ident();
        if (word == "OPENQASM") {
            lx.skip_until_semicolon();
            continue;
        }
        if (word == "include") {
            lx.skip_until_semicolon();
            continue;
        }
        if (word == "qubit" || word == "qreg") {
            if (dag) {
                throw ParseError("only one qubit register is supported", line, col);
            }
            uint64_t n;
            if (word == "qubit") {
                lx.expect('[');
                n = lx.integer();
                lx.expect(']');
                reg = lx.ident();
            } else {
                reg = lx.ident();
                lx.expect('[');
                n = lx.integer();
                lx.expect(']');
            }
            lx.expect(';');
            if (n == 0) {
                throw ParseError("register must have at least one qubit", line, col);
            }
            dag.emplace((uint32_t)n);
            continue;
        }
        if (word == "bit" || word == "creg") {
            if (word == "bit") {
                if (lx.accept('[')) {
                    lx.integer();
                    lx.expect(']');
                }
                classical.push_back(lx.ident());
            } else {
                classical.push_back(lx.ident());
                if (lx.accept('[')) {
                    lx.integer();
                    lx.expect(']');
                }
            }
            lx.expect(';');
            continue;
        }
        bool is_classical = false;
        for (const auto &c : classical) {
            is_classical |= c == word;
        }
        if (is_classical) {
            // c[i] = measure q[j];
            if (lx.accept('[')) {
                lx.integer();
                lx.expect(']');
            }
            lx.expect('=');
            std::string m = lx.ident();
            if (m != "measure") {
                throw ParseError("expected 'measure' after assignment", line, col);
            }
            uint32_t q = qubit_ref();
            lx.expect(';');
            dag->append(Gate(GateTag::Measure, {q}));
            continue;
        }
        auto tag = tag_from_qasm_name(word);
        if (!tag) {
            throw ParseError("unsupported gate '" + word + "'", line, col);
        }
        if (!dag) {
            throw ParseError("gate before qubit declaration", line, col);
        }
        GateKind kind(*tag);
        if (*tag == GateTag::Rz) {
            lx.expect('(');
            double theta = lx.expr();
            lx.expect(')');
            kind = GateKind::rz(tab.intern_angle(theta));
        } else if (lx.peek() == '(') {
            throw ParseError("gate '" + word + "' takes no parameters", lx.line, lx.col);
        }
        std::vector<uint32_t> qs;
        qs.push_back(qubit_ref());
        while (lx.accept(',')) {
            qs.push_back(qubit_ref());
        }
        lx.expect(';');
        if (qs.size() != arity(*tag)) {
            throw ParseError(
                "gate '" + word + "' expects " + std::to_string(arity(*tag)) + " qubit(s), got " +
                    std::to_string(qs.size()),
                line, col);
        }
        for (size_t a = 0; a < qs.size(); a++) {
            for (size_t b = 0; b < a; b++) {
                if (qs[a] == qs[b]) {
                    throw ParseError("gate '" + word + "' repeats a qubit", line, col);
                }
            }
        }
        dag->append(Gate(kind, std::span<const uint32_t>(qs)));
    }
    if (!dag) {
        throw ParseError("missing qubit declaration", lx.line, lx.col);
    }
    return std::move(*dag);
}

std::string emit_qasm(const CircuitDag &dag, const DecompositionTable *table) {
    const DecompositionTable &tab = table ? *table : DecompositionTable::global();
    std::string out = "OPENQASM 3.0;\ninclude \"stdgates.inc\";\n";
    out += "qubit[" + std::to_string(dag.num_qubits()) + "] q;\n";
    bool has_measure = dag.count(GateTag::Measure) > 0;
    if (has_measure) {
        out += "bit[" + std::to_string(dag.num_qubits()) + "] c;\n";
    }
    char buf[64];
    for (const auto &node : dag.nodes()) {
        const Gate &g = node.gate;
        if (g.kind.tag == GateTag::Measure) {
            out += "c[" + std::to_string(g.qubits[0]) + "] = measure q[" + std::to_string(g.qubits[0]) + "];\n";
            continue;
        }
        out += qasm_name(g.kind.tag);
        if (g.kind.tag == GateTag::Rz) {
            std::snprintf(buf, sizeof(buf), "(%.17g)", tab.theta(*g.kind.rz_key));
            out += buf;
        }
        for (size_t k = 0; k < g.num_qubits; k++) {
            out += k ? ", q[" : " q[";
            out += std::to_string(g.qubits[k]);
            out += "]";
        }
        out += ";\n";
    }
    return out;
}

}  // namespace qstream
